"""Geometric progressions modulo N and the constructions that produce them."""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from sympy import primerange
from sympy.ntheory import nthroot_mod, sqrt_mod

from .errors import ArgumentError, FactorFound, NotAGP
from .linalg import delta, det
from .poly import as_poly, ct_vector, delta_s, resultant, vector_norm_sq

DEFAULT_SEARCH_SKEWS = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))


@dataclass(frozen=True)
class GeometricProgression:
    """Integer vector ``[c_{l-1}, ..., c_0]`` with ``c_i = c_0 r^i (mod N)``.

    ``c`` is stored highest index first, exactly as written above, so
    ``c[-1]`` is ``c_0``.
    """

    c: tuple
    N: int
    ratio: int = None
    params: dict = field(default=None, compare=False)
    family: str = None

    @property
    def length(self):
        return len(self.c)

    @property
    def d(self):
        """Degree of the polynomials this progression feeds (length 2d-1)."""
        return (len(self.c) + 1) // 2

    def coeff(self, i):
        """``c_i`` by its mathematical index."""
        return self.c[len(self.c) - 1 - i]


@dataclass(frozen=True)
class GPParamsD2:
    a: int
    k: int
    p: int
    m: int

    def as_dict(self):
        return {"a": self.a, "k": self.k, "p": self.p, "m": self.m}


@dataclass(frozen=True)
class GPParamsD3:
    a: int
    k: int
    p: int
    m: int

    def as_dict(self):
        return {"a": self.a, "k": self.k, "p": self.p, "m": self.m}


def _raise_if_factor(x, N, where):
    g = gcd(x, N)
    if 1 < g < N:
        raise FactorFound(g, N, where)
    return g


def validate_gp(c, N, r=None, *, params=None, family=None):
    """Check the progression congruences and return a validated progression.

    Without ``r`` the ratio is recovered as ``c_1 / c_0 mod N``. A nontrivial
    ``gcd(c_0, N)`` surfaces as :class:`FactorFound`.
    """
    c = tuple(int(x) for x in c)
    N = int(N)
    if N < 2:
        raise ArgumentError("modulus must be at least 2")
    if len(c) < 2:
        raise ArgumentError("progression needs length >= 2")
    if not any(c):
        raise NotAGP("zero vector")
    c0 = c[-1]
    g = _raise_if_factor(c0, N, "gcd(c_0, N)")
    if g == N:
        # c_0 = 0 mod N forces every entry to vanish mod N.
        for x in reversed(c):
            _raise_if_factor(x, N, "gcd(c_i, N)")
        raise NotAGP("c_0 = 0 mod N but the progression is not identically 0 mod N"
                     if any(x % N for x in c) else "progression is 0 mod N")
    if r is None:
        r = c[-2] * pow(c0, -1, N) % N
    else:
        r = int(r) % N
    term = c0 % N
    for i in range(len(c)):
        if (c[-1 - i] - term) % N:
            raise NotAGP(f"c_{i} != c_0 * r^{i} (mod N)")
        term = term * r % N
    return GeometricProgression(c, N, r, params, family)


def gp_from_polys(f1, f2, t, N, r=None):
    """Progression ``c_t(f1, f2)`` of signed maximal minors of ``S_t``.

    Enforces the hypotheses: ``2 <= deg f2 <= deg f1``, coprimality, and
    ``gcd(lc(f1) * Delta(S_{deg f2}), N) == 1``.
    """
    f1, f2 = as_poly(f1), as_poly(f2)
    if f1.is_zero or f2.is_zero or not 2 <= f2.deg <= f1.deg:
        raise ArgumentError("need 2 <= deg f2 <= deg f1")
    if resultant(f1, f2) == 0:
        raise ArgumentError("f1 and f2 are not coprime")
    g = _raise_if_factor(f1.lc * delta_s(f1, f2), N, "gcd(lc(f1) Delta(S), N)")
    if g != 1:
        raise ArgumentError("lc(f1) * Delta(S_{deg f2}) is divisible by N")
    return validate_gp(ct_vector(f1, f2, t), N, r, family="from-polys")


def hankel(c, rows, cols):
    """``(c_{rows+cols-1-i-j})`` for 1-based i, j; c listed highest index first."""
    n = len(c)
    if rows + cols - 1 != n:
        raise ArgumentError(f"length {n} does not fill a {rows}x{cols} Hankel matrix")
    return [[c[i + j] for j in range(cols)] for i in range(rows)]


def _check_params(a, k, p, m, N):
    if 0 in (a, k, p, m):
        raise ArgumentError("a, k, p, m must be nonzero")
    if gcd(m, p) != 1:
        raise ArgumentError("gcd(m, p) must be 1")
    g = _raise_if_factor(a, N, "gcd(a, N)")
    if g != 1:
        raise ArgumentError("gcd(a, N) must be 1")


def _ratio(m, p, N):
    _raise_if_factor(p, N, "gcd(p, N)")
    return m * pow(p, -1, N) % N


def build_gp_d2(params, N):
    """Length-3 progression ``[(a m^2 - k N)/p, a m, a p]``."""
    a, k, p, m = params.a, params.k, params.p, params.m
    _check_params(a, k, p, m, N)
    num = a * m * m - k * N
    if num % p:
        raise ArgumentError("p must divide a m^2 - k N")
    c = (num // p, a * m, a * p)
    return validate_gp(c, N, _ratio(m, p, N), params=params.as_dict(), family="d2")


def build_gp_d3(params, N):
    """Length-5 progression ``[m(a m^3 - kN)/p^2, (a m^3 - kN)/p, a m^2, a m p, a p^2]``."""
    a, k, p, m = params.a, params.k, params.p, params.m
    _check_params(a, k, p, m, N)
    num = a * m ** 3 - k * N
    if num % (p * p):
        raise ArgumentError("p^2 must divide a m^3 - k N")
    c = (m * num // (p * p), num // p, a * m * m, a * m * p, a * p * p)
    return validate_gp(c, N, _ratio(m, p, N), params=params.as_dict(), family="d3")


def gp_score(c, N, skews=DEFAULT_SEARCH_SKEWS):
    """Smallest ``||c||^2_{2,1/s}`` over the skew grid, divided by ``N`` when
    ``c`` has length 3 (the optimal size for d = 2 is ``N^(1/2)``)."""
    best = min(vector_norm_sq(c, 1 / Fraction(s)) for s in skews)
    return best / N if len(c) == 3 else best


def _m_candidates(root, modulus, target):
    # Integers m = root (mod modulus) on either side of target.
    base = target - (target - root) % modulus
    return (base, base + modulus)


def search_gp_d2(N, count, size_target=None, seed=0, *, a_max=8, k_max=8,
                 p_max=60, max_candidates=4000, skews=DEFAULT_SEARCH_SKEWS):
    """Search the d = 2 family for small progressions.

    Candidates ``(a, k, p)`` range over ``1 <= a <= a_max``, ``1 <= k <= k_max``
    and ``p`` in ``{1} + primes < p_max``; when there are more than
    ``max_candidates`` a seeded sample is taken. For each, ``m`` is a square
    root of ``kN/a`` modulo ``p`` lifted next to ``sqrt(kN/a)``. Results are
    ranked by :func:`gp_score` (ties by parameter tuple) and optionally
    filtered to ``score <= size_target``.
    """
    if N < 2:
        raise ArgumentError("modulus must be at least 2")
    rng = random.Random(seed)
    ps = [1] + list(primerange(2, p_max))
    triples = [(a, k, p) for a in range(1, a_max + 1) for k in range(1, k_max + 1) for p in ps]
    if len(triples) > max_candidates:
        triples = sorted(rng.sample(triples, max_candidates))
    seen = {}
    for a, k, p in triples:
        if gcd(a, N) != 1 or gcd(p, N) != 1 or (p > 1 and a % p == 0):
            continue
        target = isqrt(k * N // a)
        if p == 1:
            roots = [0]
        else:
            rhs = k * N * pow(a, -1, p) % p
            roots = sqrt_mod(rhs, p, all_roots=True) or []
        for root in roots:
            for m in _m_candidates(root, p, target):
                if m == 0 or gcd(m, p) != 1:
                    continue
                params = GPParamsD2(a, k, p, m)
                try:
                    gp = build_gp_d2(params, N)
                except (ArgumentError, NotAGP, FactorFound):
                    continue
                if gp.c in seen or det(hankel(gp.c, 2, 2)) == 0:
                    continue
                seen[gp.c] = (gp_score(gp.c, N, skews), (a, k, p, m), params)
    ranked = sorted(seen.values(), key=lambda item: (item[0], item[1]))
    if size_target is not None:
        ranked = [item for item in ranked if item[0] <= size_target]
    return [params for _, _, params in ranked[:count]]


def search_gp_d3(N, count, seed=0, *, a_max=4, k_max=4, p_max=30,
                 max_candidates=2000, skews=DEFAULT_SEARCH_SKEWS):
    """Search the d = 3 family using cube roots of ``kN/a`` modulo ``p^2``.

    Returns valid tuples only; the quality is not competitive with
    dedicated searches. Ranking is by the raw ``min_s ||c||^2_{2,1/s}``.
    """
    if N < 2:
        raise ArgumentError("modulus must be at least 2")
    rng = random.Random(seed)
    ps = [1] + list(primerange(2, p_max))
    triples = [(a, k, p) for a in range(1, a_max + 1) for k in range(1, k_max + 1) for p in ps]
    if len(triples) > max_candidates:
        triples = sorted(rng.sample(triples, max_candidates))
    seen = {}
    for a, k, p in triples:
        if gcd(a, N) != 1 or gcd(p, N) != 1 or (p > 1 and a % p == 0):
            continue
        q = p * p
        target = _icbrt(k * N // a)
        if p == 1:
            roots = [0]
        else:
            rhs = k * N * pow(a, -1, q) % q
            roots = nthroot_mod(rhs, 3, q, all_roots=True) or []
        for root in roots:
            for m in _m_candidates(root, q, target):
                if m == 0 or gcd(m, p) != 1:
                    continue
                params = GPParamsD3(a, k, p, m)
                try:
                    gp = build_gp_d3(params, N)
                except (ArgumentError, NotAGP, FactorFound):
                    continue
                if gp.c in seen:
                    continue
                seen[gp.c] = (gp_score(gp.c, N, skews), (a, k, p, m), params)
    ranked = sorted(seen.values(), key=lambda item: (item[0], item[1]))
    return [params for _, _, params in ranked[:count]]


def _icbrt(n):
    if n < 0:
        return -_icbrt(-n)
    lo, hi = 0, 1 << (n.bit_length() // 3 + 2)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** 3 <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def gp_delta(c):
    """``Delta(c)``: gcd of the entries."""
    return delta([list(c)])
