"""From a geometric progression to a pair of degree-d polynomials.

The pipeline: build the Hankel matrices of the progression, take a basis of
the rank-2 integer kernel of the (d-1) x (d+1) sub-Hankel matrix, reduce
that basis in the skewed inner product, and read off two polynomials with a
common root modulo N.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import ArgumentError, DegenerateGP, DegeneratePair, FactorFound, InvariantViolation
from .gp import GeometricProgression, hankel, validate_gp
from .linalg import delta, det, integer_kernel
from .poly import IntPoly, delta_s, eval_mod, resultant, sin2_theta, skewed_norm_sq


@dataclass(frozen=True)
class HankelStack:
    """The d x d Hankel matrix ``C`` of a length 2d-1 progression and its relatives."""

    c: tuple
    d: int

    @property
    def C(self):
        return hankel(self.c, self.d, self.d)

    def partial(self, k=1):
        """``(d-k) x (d+k)`` sub-Hankel matrix; ``partial(1)`` is the one whose kernel we use."""
        if not 0 <= k < self.d:
            raise ArgumentError(f"k must lie in [0, {self.d - 1}]")
        return hankel(self.c, self.d - k, self.d + k)

    @property
    def hat(self):
        """``partial(1)`` without its first column, i.e. ``C`` without its first row."""
        return [row[1:] for row in self.partial(1)]


def hankel_stack(gp):
    c = tuple(gp.c if isinstance(gp, GeometricProgression) else gp)
    n = len(c)
    if n < 3 or n % 2 == 0:
        raise ArgumentError(f"progression length must be odd and >= 3, got {n}")
    return HankelStack(c, (n + 1) // 2)


@dataclass(frozen=True)
class PolyPair:
    """Two polynomials with a common root ``r`` modulo ``N`` plus exact metadata."""

    f1: IntPoly
    f2: IntPoly
    N: int
    r: int
    s: Fraction
    c: tuple = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def d(self):
        return max(self.f1.deg, self.f2.deg)


def kernel_pair(stack):
    """Two (d+1)-vectors, highest power first, spanning the integer kernel of ``partial(1)``."""
    if det(stack.C) == 0:
        raise DegenerateGP("Hankel matrix C is singular")
    basis = integer_kernel(stack.partial(1))
    if len(basis) != 2:
        raise InvariantViolation(f"kernel has dimension {len(basis)}, expected 2")
    return basis[0], basis[1]


def _skew_weights(n, s):
    # Coordinate j of a descending (n+1)-vector multiplies x^(n-j).
    s2 = Fraction(s) ** 2
    return [s2 ** (n - j) for j in range(n + 1)]


def _dot(u, v, w):
    return sum(a * b * x for a, b, x in zip(u, v, w))


def lagrange_reduce_skewed(v1, v2, s):
    """Lagrange-reduce ``{v1, v2}`` after scaling coordinate ``x^i`` by ``s^i``.

    Vectors are listed highest power first. The output satisfies
    ``|w1|_s <= |w2|_s`` and ``|<w1, w2>_s| <= |w1|_s^2 / 2`` with
    ``<w1, w2>_s <= 0``; only unimodular operations are applied.
    """
    s = Fraction(s)
    if s <= 0:
        raise ArgumentError("skew must be positive")
    if len(v1) != len(v2):
        raise ArgumentError("vectors differ in length")
    w = _skew_weights(len(v1) - 1, s)
    b1, b2 = list(v1), list(v2)
    n1, n2 = _dot(b1, b1, w), _dot(b2, b2, w)
    g12 = _dot(b1, b2, w)
    if n1 * n2 == g12 * g12:
        raise ArgumentError("vectors are linearly dependent")
    if n2 < n1:
        b1, b2, n1, n2 = b2, b1, n2, n1
    while True:
        g12 = _dot(b1, b2, w)
        mu = math.floor(g12 / n1 + Fraction(1, 2))
        if mu:
            b2 = [y - mu * x for x, y in zip(b1, b2)]
            n2 = _dot(b2, b2, w)
        if n2 >= n1:
            break
        b1, b2, n1, n2 = b2, b1, n2, n1
    if _dot(b1, b2, w) > 0:
        b2 = [-y for y in b2]
    return b1, b2


def _poly(vec):
    return IntPoly.from_desc(vec)


def order_pair(p, q, s):
    """Higher degree first; on a tie, smaller squared skewed norm first."""
    if p.deg != q.deg:
        return (p, q) if p.deg > q.deg else (q, p)
    return (q, p) if skewed_norm_sq(q, s) < skewed_norm_sq(p, s) else (p, q)


def _common_gcd_check(gp):
    d = gp.d
    g = reduce(gcd, (gp.coeff(i) for i in range(d - 1)), gp.N)
    if 1 < g < gp.N:
        raise FactorFound(g, gp.N, "gcd(c_0, ..., c_{d-2}, N)")
    if g == gp.N:
        raise DegenerateGP("c_0, ..., c_{d-2} all vanish modulo N")


def polys_from_gp(gp, s=1):
    """Run the full pipeline on a progression at skew ``s``.

    Raises :class:`FactorFound` when a gcd check exposes a factor of ``N``,
    :class:`DegenerateGP` when ``C`` is singular, and :class:`DegeneratePair`
    (with the pair attached) when the reduced basis has ``deg f2 < 2``.
    """
    if not isinstance(gp, GeometricProgression) or gp.ratio is None:
        gp = validate_gp(gp.c, gp.N, getattr(gp, "ratio", None),
                         params=getattr(gp, "params", None), family=getattr(gp, "family", None))
    s = Fraction(s)
    stack = hankel_stack(gp)
    d = stack.d
    _common_gcd_check(gp)
    v1, v2 = kernel_pair(stack)
    w1, w2 = lagrange_reduce_skewed(v1, v2, s)
    f1, f2 = order_pair(_poly(w1), _poly(w2), s)
    if f1.lc < 0:
        f1 = -f1
    if f1.deg != d:
        raise InvariantViolation(f"max degree {f1.deg} != d = {d}")
    for f in (f1, f2):
        if eval_mod(f, gp.ratio, gp.N):
            raise InvariantViolation("ratio is not a root of the selected pair")
    pair = PolyPair(f1, f2, gp.N, gp.ratio, s, gp.c)
    if f2.deg < 2:
        raise DegeneratePair(f"deg f2 = {f2.deg} < 2", pair)
    return PolyPair(f1, f2, gp.N, gp.ratio, s, gp.c, pair_metadata(f1, f2, s, stack))


def pair_metadata(f1, f2, s, stack=None):
    meta = {
        "resultant": resultant(f1, f2),
        "norm2_f1": skewed_norm_sq(f1, s),
        "norm2_f2": skewed_norm_sq(f2, s),
        "sin2_theta": sin2_theta(f1, f2, s),
    }
    if stack is not None:
        meta["delta_partial"] = delta(stack.partial(1))
        meta["delta_hat"] = delta(stack.hat)
        meta["delta_c"] = delta([list(stack.c)])
        meta["det_C"] = det(stack.C)
    return meta


def _exact_quotient(num, den, what):
    q, rem = divmod(num, den)
    if rem:
        raise InvariantViolation(f"{what}: {den} does not divide {num}")
    return q


def resultant_formula(pair, stack):
    """Check both closed forms for ``|res(f1, f2)|`` and ``Delta(S_d(f1, f2))``."""
    f1, f2, d = pair.f1, pair.f2, stack.d
    d2 = f2.deg
    if d2 < 2:
        raise ArgumentError("formula needs deg f2 >= 2")
    detC = abs(det(stack.C))
    dp = delta(stack.partial(1))
    dh = delta(stack.hat)
    dc = delta([list(stack.c)])
    res = _exact_quotient(detC ** (d - 1), dp ** d2 * dh ** (d - d2), "resultant formula")
    ds = _exact_quotient(dc * detC ** (d - 2), dp ** (d - 1), "Delta(S_d) formula")
    return abs(resultant(f1, f2)) == res and delta_s(f1, f2, d) == ds


def leading_coeff_identity(pair, stack):
    """``|lc f1| Delta(partial C) == Delta(hat C)`` if degrees differ, else divisibility."""
    dp = delta(stack.partial(1))
    dh = delta(stack.hat)
    lc = abs(pair.f1.lc)
    if pair.f2.deg < pair.f1.deg:
        return lc * dp == dh
    if dh % dp:
        return False
    return lc % (dh // dp) == 0


def skew_objective(pair):
    """``s^(deg f1 + deg f2 - 2d) ||f1||^2 ||f2||^2`` at the pair's own skew."""
    f1, f2, s = pair.f1, pair.f2, pair.s
    return (s ** (f1.deg + f2.deg - 2 * pair.d)
            * skewed_norm_sq(f1, s) * skewed_norm_sq(f2, s))


def skew_search(gp, grid):
    """Run the pipeline at every grid skew and keep the best objective.

    Ties go to the smaller skew. Grid points giving a degenerate pair are
    skipped; if all are degenerate the last :class:`DegeneratePair` is raised.
    """
    grid = sorted({Fraction(s) for s in grid})
    if not grid:
        raise ArgumentError("empty skew grid")
    best = None
    last_err = None
    for s in grid:
        try:
            pair = polys_from_gp(gp, s)
        except DegeneratePair as err:
            last_err = err
            continue
        obj = skew_objective(pair)
        if best is None or obj < best[0]:
            best = (obj, s, pair)
    if best is None:
        raise last_err
    return best[1], best[2]


def natural_skew(c):
    """A rational skew balancing the outer terms of ``||c||_{2,1/s}``.

    Approximates ``|c_top / c_0|^(1/(len-1))`` by an integer root; falls back
    to 1 when either end vanishes.
    """
    top, bottom = abs(c[0]), abs(c[-1])
    n = len(c) - 1
    if top == 0 or bottom == 0:
        return Fraction(1)
    if top >= bottom:
        return Fraction(max(1, _iroot(top // bottom, n)))
    return Fraction(1, max(1, _iroot(bottom // top, n)))


def _iroot(x, n):
    if x <= 0:
        return 0
    lo, hi = 0, 1 << (x.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** n <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo
