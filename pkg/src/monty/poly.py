"""Integer polynomials and the matrices built from their coefficient rows.

Coefficients are stored in ascending order (``coeffs[i]`` multiplies
``x**i``), but every matrix built here lays a polynomial out by descending
powers: row ``(f)_n`` is ``[a_n, a_{n-1}, ..., a_0]``. :func:`coeff_rows` is
the single place that performs the reversal.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ArgumentError
from .linalg import delta, det, submatrix


@dataclass(frozen=True)
class IntPoly:
    """Dense polynomial with arbitrary-precision integer coefficients."""

    coeffs: tuple

    def __init__(self, coeffs=()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_desc(cls, coeffs):
        return cls(reversed(list(coeffs)))

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def deg(self):
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lc(self):
        if self.is_zero:
            raise ArgumentError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(other * a for a in self.coeffs)
        if self.is_zero or other.is_zero:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``x**k``."""
        if self.is_zero:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def content(self):
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(a) == 1:
                body = mono
            else:
                body = f"{abs(a)}*{mono}" if mono else str(abs(a))
            terms.append(("-" if a < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def as_poly(f):
    return f if isinstance(f, IntPoly) else IntPoly(f)


def coeff_rows(polys, n):
    """The matrix ``(f_1, ..., f_m)_n``: row i is f_i by descending powers.

    Column ``j`` (1-based) holds the coefficient of ``x^(n+1-j)``. The empty
    list gives the empty matrix ``[]``.
    """
    polys = [as_poly(f) for f in polys]
    for f in polys:
        if not f.is_zero and f.deg > n:
            raise ArgumentError(f"formal degree {n} < deg {f.deg}")
    return [[f[n - j] for j in range(n + 1)] for f in polys]


def _nonconstant(*polys):
    for f in polys:
        if f.is_zero or f.deg < 1:
            raise ArgumentError("polynomial must be non-constant")


def sylvester(f1, f2):
    f1, f2 = as_poly(f1), as_poly(f2)
    _nonconstant(f1, f2)
    d1, d2 = f1.deg, f2.deg
    rows = [f1.shift(k) for k in range(d2 - 1, -1, -1)]
    rows += [f2.shift(k) for k in range(d1 - 1, -1, -1)]
    return coeff_rows(rows, d1 + d2 - 1)


def resultant(f1, f2):
    return det(sylvester(f1, f2))


def bezout_polys(f1, f2):
    """The polynomials ``p_1, ..., p_d`` whose rows make up the Bezout matrix."""
    f1, f2 = as_poly(f1), as_poly(f2)
    _nonconstant(f1, f2)
    d = max(f1.deg, f2.deg)
    out = []
    for i in range(d):
        u = IntPoly(f2[d - i + j] for j in range(i + 1))
        v = IntPoly(f1[d - i + j] for j in range(i + 1))
        out.append(u * f1 - v * f2)
    return out


def bezout(f1, f2):
    """Bezout matrix ``(p_1, ..., p_d)_{d-1}``; symmetric, d = max degree."""
    f1, f2 = as_poly(f1), as_poly(f2)
    ps = bezout_polys(f1, f2)
    return coeff_rows(ps, max(f1.deg, f2.deg) - 1)


def det_bezout_rhs(f1, f2):
    f1, f2 = as_poly(f1), as_poly(f2)
    d1, d2 = f1.deg, f2.deg
    d = max(d1, d2)
    return ((-1) ** (d * (d + 1) // 2) * f1.lc ** (d - d2)
            * ((-1) ** d * f2.lc) ** (d - d1) * resultant(f1, f2))


def det_bezout_identity(f1, f2):
    """Check ``det Bez = (-1)^(d(d+1)/2) lc1^(d-d2) ((-1)^d lc2)^(d-d1) res``."""
    return det(bezout(f1, f2)) == det_bezout_rhs(f1, f2)


def _check_st_degrees(f1, f2, t=None):
    _nonconstant(f1, f2)
    if not 2 <= f2.deg <= f1.deg:
        raise ArgumentError(f"need 2 <= deg f2 <= deg f1, got {f2.deg}, {f1.deg}")
    if t is not None and not f2.deg <= t <= f1.deg:
        raise ArgumentError(f"t={t} outside [{f2.deg}, {f1.deg}]")


def s_t_matrix(f1, f2, t):
    """``S_t = (x^(t-2) f1, ..., f1, x^(d-2) f2, ..., f2)``, (d+t-2) x (d+t-1)."""
    f1, f2 = as_poly(f1), as_poly(f2)
    _check_st_degrees(f1, f2, t)
    d = f1.deg
    rows = [f1.shift(k) for k in range(t - 2, -1, -1)]
    rows += [f2.shift(k) for k in range(d - 2, -1, -1)]
    return coeff_rows(rows, d + t - 2)


def signed_minors(S):
    """``M_i = (-1)^(1+i) det(S without column i)``, i 1-based."""
    m = len(S)
    n = m + 1
    rows = range(m)
    return [(-1) ** i * det(submatrix(S, rows, [j for j in range(n) if j != i]))
            for i in range(n)]


def ct_vector(f1, f2, t):
    """Signed maximal minors of ``S_t``; listed as ``[c_{d+t-2}, ..., c_0]``."""
    return signed_minors(s_t_matrix(f1, f2, t))


def first_subresultant(f1, f2):
    """``(-1)^(d1+d2-1) (M_{d2,d1+d2-2} x - M_{d2,d1+d2-1})``.

    This is the coefficient reversal of the determinantal subresultant: a
    common linear factor ``x - alpha`` shows up as the root ``1/alpha``.
    Its vanishing and its divisibility by ``Delta(S_deg f2)`` are unaffected.
    """
    f1, f2 = as_poly(f1), as_poly(f2)
    _check_st_degrees(f1, f2)
    d1, d2 = f1.deg, f2.deg
    M = ct_vector(f1, f2, d2)
    # M[i-1] is M_{d2,i}
    sign = (-1) ** (d1 + d2 - 1)
    return IntPoly([-sign * M[d1 + d2 - 2], sign * M[d1 + d2 - 3]])


def delta_s(f1, f2, t=None):
    """``Delta(S_t(f1, f2))``, defaulting to ``t = deg f2``."""
    f2 = as_poly(f2)
    return delta(s_t_matrix(f1, f2, f2.deg if t is None else t))


def skewed_norm_sq(f, s):
    """``||f||_{2,s}^2 = sum a_i^2 s^(2i - deg f)`` as an exact rational."""
    f = as_poly(f)
    if f.is_zero:
        raise ArgumentError("skewed norm of the zero polynomial")
    s = Fraction(s)
    if s <= 0:
        raise ArgumentError("skew must be positive")
    d = f.deg
    return sum(Fraction(a * a) * s ** (2 * i - d) for i, a in enumerate(f.coeffs))


def vector_norm_sq(v, s):
    """``||v||_{2,s}^2`` for ``v = (v_n, ..., v_0)`` given in that order."""
    s = Fraction(s)
    if s <= 0:
        raise ArgumentError("skew must be positive")
    n = len(v) - 1
    return sum(Fraction(a * a) * s ** (2 * (n - j) - n) for j, a in enumerate(v))


def scaled_rows(polys, s, n=None):
    """Rows of ``(f_1(sx), ..., f_m(sx))_n`` with rational entries."""
    polys = [as_poly(f) for f in polys]
    s = Fraction(s)
    if n is None:
        n = max(f.deg for f in polys if not f.is_zero)
    return [[Fraction(f[n - j]) * s ** (n - j) for j in range(n + 1)] for f in polys]


def sin2_theta(f1, f2, s):
    """Squared sine of the angle between the rows of ``(f1(sx), f2(sx))``."""
    u, v = scaled_rows([f1, f2], s)
    uu = sum(a * a for a in u)
    vv = sum(b * b for b in v)
    if uu == 0 or vv == 0:
        raise ArgumentError("angle with a zero row")
    uv = sum(a * b for a, b in zip(u, v))
    return 1 - uv * uv / (uu * vv)


def eval_mod(f, r, N):
    if N < 2:
        raise ArgumentError("modulus must be at least 2")
    acc = 0
    for a in reversed(as_poly(f).coeffs):
        acc = (acc * r + a) % N
    return acc
