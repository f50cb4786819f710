"""Exact check batteries for the identities and bounds behind the method.

Every comparison is between integers or ``Fraction`` values. Bounds that
involve square roots are compared after raising both sides to a power that
clears every fractional exponent; the witnesses record those powered forms.

A bound check records ``lhs``, ``rhs`` and ``slack = rhs / lhs``, where
``lhs`` is always the bounded quantity. A passing upper bound therefore has
slack >= 1 and a passing lower bound slack <= 1.
"""

import random
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from sympy import Poly, symbols

from .core import (PolyPair, hankel_stack, leading_coeff_identity, natural_skew,
                   skew_search)
from .errors import DegenerateGP, DegeneratePair, FactorFound, MontyError, NotAGP
from .gp import (GeometricProgression, GPParamsD2, GPParamsD3, build_gp_d2, build_gp_d3,
                 gp_from_polys, hankel, validate_gp)
from .linalg import adjugate, delta, det, matvec, transpose, vol2
from .poly import (IntPoly, bezout, coeff_rows, ct_vector, delta_s, det_bezout_rhs,
                   eval_mod, first_subresultant, resultant, s_t_matrix, sin2_theta,
                   skewed_norm_sq, vector_norm_sq)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
DEFAULT_SKEWS = (Fraction(1), Fraction(2), Fraction(7, 5), Fraction(1, 3))
GAMMA2_SQ = Fraction(4, 3)
BATTERIES = ("theorem1", "theorem2", "resultant", "gpvol", "reduction", "structural")


def fmt(x):
    """Serialize an exact value: ints as decimal, rationals as ``num/den``."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, IntPoly):
        return [str(a) for a in x.coeffs]
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    witnesses: dict = field(default_factory=dict)

    @property
    def family(self):
        """Check name without its bracketed parameters."""
        return self.name.split("[", 1)[0]


@dataclass
class VerifyReport:
    instance: str
    checks: list = field(default_factory=list)
    hypothesis_failed: bool = False

    @property
    def failed(self):
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self):
        return not self.failed

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def add(self, check):
        self.checks.append(check)
        return check

    def extend(self, other):
        self.checks.extend(other.checks)
        self.hypothesis_failed |= other.hypothesis_failed


def _w(**kw):
    return {k: fmt(v) for k, v in kw.items()}


def check_eq(name, lhs, rhs, **extra):
    return Check(name, PASS if lhs == rhs else FAIL, _w(lhs=lhs, rhs=rhs, **extra))


def check_true(name, cond, **witnesses):
    return Check(name, PASS if cond else FAIL, _w(**witnesses))


def _slack(lhs, rhs):
    return "inf" if lhs == 0 else fmt(Fraction(rhs) / Fraction(lhs))


def check_upper(name, lhs, rhs):
    """Passes iff ``lhs <= rhs``."""
    w = _w(lhs=lhs, rhs=rhs)
    w["slack"] = _slack(lhs, rhs)
    return Check(name, PASS if lhs <= rhs else FAIL, w)


def check_lower(name, lhs, rhs):
    """Passes iff ``lhs >= rhs``."""
    w = _w(lhs=lhs, rhs=rhs)
    w["slack"] = _slack(lhs, rhs)
    return Check(name, PASS if lhs >= rhs else FAIL, w)


def check_divides(name, a, b):
    ok = b == 0 if a == 0 else b % a == 0
    return Check(name, PASS if ok else FAIL, _w(divisor=a, dividend=b))


def skipped(name, reason):
    return Check(name, SKIPPED, {"reason": reason})


def _tag(name, **params):
    inner = ",".join(f"{k}={fmt(v)}" for k, v in params.items())
    return f"{name}[{inner}]"


def shifted_scaled_rows(blocks, n, s=1):
    """Rows of ``(x^j f(sx) ...)_n`` for ``blocks = [(f, [j, ...]), ...]``."""
    s = Fraction(s)
    rows = []
    for f, shifts in blocks:
        for j in shifts:
            rows.append([Fraction(f[n - col - j]) * s ** (n - col - j) if n - col - j >= 0 else 0
                         for col in range(n + 1)])
    return rows


def _desc(f, n):
    return coeff_rows([f], n)[0]


# -- From a pair of polynomials to progressions ------------------------------

THEOREM1_CHECKS = ("thm1.hypotheses", "thm1.p1.gp", "thm1.p2.gcd_c0", "thm1.gcd_c0_refined",
                   "thm1.p3.full_rank", "thm1.p4.kernel", "thm1.ct_in_kernel",
                   "thm1.St_recursion", "thm1.Mti_recursion", "thm1.p5.upper",
                   "thm1.p5.lower", "thm1.minor_gcd_lower", "thm1.volStS",
                   "thm1.lower_general", "thm1.full_t_lower")


def theorem1_hypotheses(f1, f2, N, r):
    """Return ``None`` if the hypotheses hold, else a reason string."""
    if f1.is_zero or f2.is_zero or not 2 <= f2.deg <= f1.deg:
        return "need 2 <= deg f2 <= deg f1"
    if resultant(f1, f2) == 0:
        return "f1 and f2 are not coprime"
    if eval_mod(f1, r, N) or eval_mod(f2, r, N):
        return "r is not a common root modulo N"
    g = gcd(f1.lc * delta_s(f1, f2), N)
    if g != 1:
        return f"gcd(lc(f1) Delta(S_deg f2), N) = {g}"
    return None


def check_theorem1(f1, f2, N, r, t=None, skews=DEFAULT_SKEWS, instance="theorem1"):
    """Verify every property of the polynomials-to-progression theorem.

    ``t=None`` sweeps ``t = deg f2, ..., deg f1``; check names carry ``[t=..]``.
    """
    report = VerifyReport(instance)
    reason = theorem1_hypotheses(f1, f2, N, r)
    if reason is not None:
        report.hypothesis_failed = True
        report.add(Check("thm1.hypotheses", SKIPPED, {"reason": reason}))
        for name in THEOREM1_CHECKS[1:]:
            report.add(skipped(name, "hypotheses failed: " + reason))
        return report
    report.add(Check("thm1.hypotheses", PASS, {}))
    d, d2 = f1.deg, f2.deg
    res = resultant(f1, f2)
    ts = range(d2, d + 1) if t is None else [t]
    prev = None
    for tt in ts:
        c_t = ct_vector(f1, f2, tt)
        S_t = s_t_matrix(f1, f2, tt)
        tag = lambda name, **kw: _tag(name, t=tt, **kw)  # noqa: E731
        try:
            validate_gp(c_t, N, r)
            report.add(Check(tag("thm1.p1.gp"), PASS, _w(c=c_t, ratio=r)))
        except (NotAGP, FactorFound) as err:
            report.add(Check(tag("thm1.p1.gp"), FAIL, _w(c=c_t, error=str(err))))
        c0 = c_t[-1]
        report.add(check_eq(tag("thm1.p2.gcd_c0"), gcd(c0, N), 1))
        report.add(check_eq(tag("thm1.gcd_c0_refined"), gcd(c0, N), gcd(f1.lc ** (tt - d2), N)))
        C_t = hankel(c_t, tt, d)
        report.add(check_true(tag("thm1.p3.full_rank"), delta(C_t) != 0, delta=delta(C_t)))
        dC = hankel(c_t, tt - 1, d + 1)
        k1, k2 = matvec(dC, _desc(f1, d)), matvec(dC, _desc(f2, d))
        report.add(check_true(tag("thm1.p4.kernel"), not any(k1) and not any(k2)))
        report.add(check_true(tag("thm1.ct_in_kernel"), not any(matvec(S_t, c_t))))
        if prev is None:
            report.add(skipped(tag("thm1.St_recursion"), "base case t = deg f2"))
            report.add(skipped(tag("thm1.Mti_recursion"), "base case t = deg f2"))
        else:
            S_prev, c_prev = prev
            top_ok = S_t[0] == _desc(f1.shift(tt - 2), d + tt - 2)
            block_ok = all(row[0] == 0 and row[1:] == prow for row, prow in zip(S_t[1:], S_prev))
            report.add(check_true(tag("thm1.St_recursion"), top_ok and block_ok))
            a = [f1[d - i] for i in range(d + 1)]  # a[i] = a_{1,d-i}
            first = sum(a[i] * c_prev[i - 1] for i in range(1, d + 1))
            rest = [-f1.lc * c_prev[i - 2] for i in range(2, d + tt)]
            report.add(check_true(tag("thm1.Mti_recursion"), c_t == [first] + rest))
        prev = (S_t, c_t)
        ds_t = delta(S_t)
        for s in skews:
            s = Fraction(s)
            norm_c = vector_norm_sq(c_t, 1 / s)
            n1, n2 = skewed_norm_sq(f1, s), skewed_norm_sq(f2, s)
            sin2 = sin2_theta(f1, f2, s)
            report.add(check_upper(tag("thm1.p5.upper", s=s), norm_c,
                                   (sin2 * n1) ** (tt - 1) * (s ** (d2 - tt) * n2) ** (d - 1)))
            report.add(check_lower(tag("thm1.p5.lower", s=s), norm_c ** tt,
                                   s ** (tt * (tt - d)) * (s ** d2 * f2.lc) ** (2 * (d - tt))
                                   * (f1.lc ** (tt - d2) * res) ** (2 * (tt - 1))))
            span = sum(s ** (d + tt - 2 - 2 * j) for j in range(d + tt - 1))
            report.add(check_lower(tag("thm1.minor_gcd_lower", s=s), norm_c, ds_t ** 2 * span))
            n = d + tt - 2
            weights = [s ** (2 * (n - j) - n) for j in range(n + 1)]
            report.add(check_eq(tag("thm1.volStS", s=s), vol2(S_t, weights), norm_c))
            for k in range(tt):
                rows = shifted_scaled_rows(
                    [(f1, range(k - 1, -1, -1)), (f2, range(d - tt + k - 1, -1, -1))], d + k - 1, s)
                rhs = (s ** (-(tt * (d - tt + k) + d * k))
                       * (f1.lc ** (tt - d2) * res) ** (2 * (tt - k - 1))
                       * (vol2(rows) if rows else 1))
                report.add(check_lower(tag("thm1.lower_general", k=k, s=s), norm_c ** (tt - k), rhs))
            if tt == d:
                rhs = (s ** (d2 - d) * (f1.lc ** (d - d2) * res) ** (2 * (d - 2))
                       * sin2 * n1 * n2)
                report.add(check_lower(_tag("thm1.full_t_lower", s=s), norm_c ** (d - 1), rhs))
    return report


# -- From a progression to a pair of polynomials -----------------------------

THEOREM2_CHECKS = ("thm2.hypotheses", "thm2.kernel_basis", "thm2.p1.deg_f1",
                   "thm2.p2.common_root", "thm2.p3.coprime", "thm2.p3.res_formula",
                   "thm2.p3.delta_s_formula", "thm2.res_lc_formula", "thm2.adjC",
                   "thm2.lc_identity", "thm2.gp_kernel", "thm2.divisibility",
                   "thm2.p4.left", "thm2.p4.right", "thm2.size.a1", "thm2.size.a2",
                   "thm2.size.b1", "thm2.size.b2")


def _gp_hypotheses(gp):
    stack = hankel_stack(gp)
    if det(stack.C) == 0:
        return "C is singular"
    g = reduce(gcd, (gp.coeff(i) for i in range(gp.d - 1)), gp.N)
    if g != 1:
        return f"gcd(c_0, ..., c_(d-2), N) = {g}"
    return None


def check_theorem2(gp, pair, skews=DEFAULT_SKEWS, instance="theorem2"):
    """Verify the progression-to-polynomials theorem for ``pair`` built from ``gp``."""
    report = VerifyReport(instance)
    reason = _gp_hypotheses(gp)
    f1, f2 = pair.f1, pair.f2
    if reason is None and (f2.is_zero or f2.deg < 2):
        reason = "deg f2 < 2"
    if reason is not None:
        report.hypothesis_failed = True
        report.add(Check("thm2.hypotheses", SKIPPED, {"reason": reason}))
        for name in THEOREM2_CHECKS[1:]:
            report.add(skipped(name, "hypotheses failed: " + reason))
        return report
    report.add(Check("thm2.hypotheses", PASS, {}))
    stack = hankel_stack(gp)
    d, d2, N, c = stack.d, f2.deg, gp.N, list(gp.c)
    dC = stack.partial(1)
    fm = [_desc(f1, d), _desc(f2, d)] if f1.deg <= d else None
    in_kernel = fm is not None and not any(matvec(dC, fm[0])) and not any(matvec(dC, fm[1]))
    dB = delta(fm) if fm is not None else 0
    report.add(check_true("thm2.kernel_basis", in_kernel and dB == 1, delta_basis=dB))
    report.add(check_eq("thm2.p1.deg_f1", f1.deg, d))
    r = gp.ratio if gp.ratio is not None else pair.r
    report.add(check_true("thm2.p2.common_root",
                          eval_mod(f1, r, N) == 0 and eval_mod(f2, r, N) == 0, r=r))
    res = resultant(f1, f2)
    report.add(check_true("thm2.p3.coprime", res != 0, resultant=res))
    detC = det(stack.C)
    dp, dh = delta(dC), delta(stack.hat)
    dc = delta([c])
    report.add(check_eq("thm2.p3.res_formula", abs(res) * dp ** d2 * dh ** (d - d2),
                        abs(detC) ** (d - 1), resultant=res, det_C=detC,
                        delta_partial=dp, delta_hat=dh))
    report.add(check_eq("thm2.p3.delta_s_formula", delta_s(f1, f2, d) * dp ** (d - 1),
                        dc * abs(detC) ** (d - 2), delta_c=dc))
    report.add(check_eq("thm2.res_lc_formula", abs(f1.lc ** (d - d2) * res) * dp ** d,
                        abs(detC) ** (d - 1)))
    adjC = adjugate(stack.C)
    bez = bezout(f1, f2)
    plus = [[dp * x for x in row] for row in bez]
    minus = [[-x for x in row] for row in plus]
    report.add(check_true("thm2.adjC", adjC in (plus, minus), delta_partial=dp))
    report.add(check_true("thm2.lc_identity", leading_coeff_identity(pair, stack),
                          lc=f1.lc, delta_partial=dp, delta_hat=dh))
    c_d = ct_vector(f1, f2, d)
    dcd = delta([c_d])
    scaled = [x * dcd for x in c]
    report.add(check_true("thm2.gp_kernel",
                          scaled in ([dc * x for x in c_d], [-dc * x for x in c_d])))
    if gcd(dc, N) == 1:
        report.add(check_divides("thm2.divisibility", dc ** (d - 1) * N ** (d - 2), dp))
    else:
        report.add(skipped("thm2.divisibility", "gcd(Delta(c), N) != 1"))
    for s in skews:
        s = Fraction(s)
        nc = vector_norm_sq(c, 1 / s)
        ncd = nc / dc ** 2
        mid = s ** (d2 - d) * sin2_theta(f1, f2, s) * skewed_norm_sq(f1, s) * skewed_norm_sq(f2, s)
        Nfac = Fraction(N) ** (2 * (d - 2))
        report.add(check_upper(_tag("thm2.p4.left", s=s), ncd, mid ** (d - 1)))
        report.add(check_upper(_tag("thm2.p4.right", s=s), mid, ncd ** (d - 1) / Nfac))
        factor = Fraction(abs(detC) ** (d - 2), dp ** (d - 1)) ** 2
        report.add(check_upper(_tag("thm2.size.a1", s=s), ncd, factor * nc))
        report.add(check_upper(_tag("thm2.size.a2", s=s), factor * nc, mid ** (d - 1)))
        report.add(check_upper(_tag("thm2.size.b1", s=s), mid, nc ** (d - 1) / dp ** 2))
        if gcd(dc, N) == 1:
            report.add(check_upper(_tag("thm2.size.b2", s=s), nc ** (d - 1) / dp ** 2,
                                   ncd ** (d - 1) / Nfac))
        else:
            report.add(skipped(_tag("thm2.size.b2", s=s), "gcd(Delta(c), N) != 1"))
    return report


# -- Reduction quality --------------------------------------------------------

def check_reduction(pair, instance="reduction"):
    """Lagrange-reducedness, ``sin^2 >= 3/4`` and the size bound at the pair's skew."""
    report = VerifyReport(instance)
    f1, f2, s = pair.f1, pair.f2, Fraction(pair.s)
    u, v = shifted_scaled_rows([(f1, [0]), (f2, [0])], pair.d, s)
    uu = sum(a * a for a in u)
    vv = sum(b * b for b in v)
    uv = sum(a * b for a, b in zip(u, v))
    report.add(check_upper(_tag("reduction.gram", s=s), 2 * abs(uv), min(uu, vv)))
    report.add(check_lower(_tag("reduction.sin2", s=s), sin2_theta(f1, f2, s), Fraction(3, 4)))
    if pair.c is None:
        report.add(skipped(_tag("reduction.poly_gp_bound", s=s), "no progression attached"))
        return report
    d = (len(pair.c) + 1) // 2
    lhs = s ** (f1.deg + f2.deg - 2 * d) * skewed_norm_sq(f1, s) * skewed_norm_sq(f2, s)
    rhs = GAMMA2_SQ * vector_norm_sq(pair.c, 1 / s) ** (d - 1) / Fraction(pair.N) ** (2 * (d - 2))
    report.add(check_upper(_tag("reduction.poly_gp_bound", s=s), lhs, rhs))
    return report


# -- Resultant bounds ---------------------------------------------------------

def check_resultant_bounds(pair, skews=DEFAULT_SKEWS, instance="resultant"):
    """``N <= |res| <= |sin|^min ||f1||^deg f2 ||f2||^deg f1``, squared."""
    report = VerifyReport(instance)
    f1, f2, N, r = pair.f1, pair.f2, pair.N, pair.r
    common = eval_mod(f1, r, N) == 0 and eval_mod(f2, r, N) == 0
    res = resultant(f1, f2)
    report.add(check_true("resbound.common_root", common, r=r))
    report.add(check_true("resbound.coprime", res != 0, resultant=res))
    if not common or res == 0:
        report.add(skipped("resbound.lower", "hypotheses failed"))
        for s in skews:
            report.add(skipped(_tag("resbound.upper", s=Fraction(s)), "hypotheses failed"))
        return report
    report.add(check_lower("resbound.lower", abs(res), N))
    d1, d2 = f1.deg, f2.deg
    for s in skews:
        s = Fraction(s)
        rhs = (sin2_theta(f1, f2, s) ** min(d1, d2) * skewed_norm_sq(f1, s) ** d2
               * skewed_norm_sq(f2, s) ** d1)
        report.add(check_upper(_tag("resbound.upper", s=s), res * res, rhs))
    return report


# -- Volume identity ----------------------------------------------------------

def check_gp_vol_identity(f1, f2, t, k, s=1, instance="gpvol"):
    """``vol^2((d^k C_t) S) = det(S)^2 (lc^(t-d2) res)^(2(t-k-1)) vol^2(rows S^-T)``.

    ``S = diag(1, s, ..., s^(d+k-1))``; ``s = 1`` is the identity case.
    """
    report = VerifyReport(instance)
    d, d2 = f1.deg, f2.deg
    s = Fraction(s)
    c_t = ct_vector(f1, f2, t)
    dkC = hankel(c_t, t - k, d + k)
    n = d + k
    w = [s ** (2 * j) for j in range(n)]
    det_s2 = reduce(lambda x, y: x * y, w, Fraction(1))
    lhs = vol2(dkC, w)
    rows = coeff_rows([f1.shift(j) for j in range(k - 1, -1, -1)]
                      + [f2.shift(j) for j in range(d - t + k - 1, -1, -1)], d + k - 1)
    inv_w = [1 / x for x in w]
    vol_rows = vol2(rows, inv_w) if rows else 1
    rhs = det_s2 * (f1.lc ** (t - d2) * resultant(f1, f2)) ** (2 * (t - k - 1)) * vol_rows
    report.add(check_eq(_tag("gpvol", t=t, k=k, s=s), lhs, rhs))
    return report


def check_gp_vol_all(f1, f2, skews=(1,), instance="gpvol"):
    report = VerifyReport(instance)
    for t in range(f2.deg, f1.deg + 1):
        for k in range(t):
            for s in skews:
                report.extend(check_gp_vol_identity(f1, f2, t, k, s, instance))
    return report


# -- Structural identities and divisibility ----------------------------------

def check_structural(f1, f2, skews=DEFAULT_SKEWS, instance="structural"):
    """Bezout/adjugate/Sylvester identities and subresultant divisibility."""
    report = VerifyReport(instance)
    bez = bezout(f1, f2)
    report.add(check_true("struct.bezout_symmetric", bez == transpose(bez)))
    report.add(check_eq("struct.det_bezout", det(bez), det_bezout_rhs(f1, f2)))
    if f2.is_zero or not 2 <= f2.deg <= f1.deg:
        report.add(skipped("struct.adjBez", "need 2 <= deg f2 <= deg f1"))
        report.add(skipped("struct.sres_divisibility", "need 2 <= deg f2 <= deg f1"))
        return report
    d = f1.deg
    C_d = hankel(ct_vector(f1, f2, d), d, d)
    sign = (-1) ** (d * (d - 1) // 2)
    report.add(check_eq("struct.adjBez", adjugate(bez), [[sign * x for x in row] for row in C_d]))
    ds = delta_s(f1, f2)
    sres = first_subresultant(f1, f2)
    res = resultant(f1, f2)
    ok = ((res % ds == 0 and all(a % ds == 0 for a in sres.coeffs)) if ds
          else res == 0)
    report.add(check_true("struct.sres_divisibility", ok, delta_s=ds, resultant=res, sres1=sres))
    for t in range(f2.deg, d + 1):
        S_t = s_t_matrix(f1, f2, t)
        c_t = ct_vector(f1, f2, t)
        n = d + t - 2
        for s in skews:
            s = Fraction(s)
            weights = [s ** (2 * (n - j) - n) for j in range(n + 1)]
            report.add(check_eq(_tag("struct.volStS", t=t, s=s), vol2(S_t, weights),
                                vector_norm_sq(c_t, 1 / s)))
    return report


def gcd_degree_mod_p(f1, f2, p):
    x = symbols("x")
    a = Poly(list(reversed(f1.coeffs)), x, modulus=p)
    b = Poly(list(reversed(f2.coeffs)), x, modulus=p)
    return a.gcd(b).degree()


def check_common_factor_criterion(f1, f2, p, instance="common-factor"):
    """For prime ``p`` not dividing ``lc1 lc2``: ``p | Delta(S_deg f2)`` iff the
    reductions mod ``p`` share a factor of degree > 1."""
    report = VerifyReport(instance)
    if (f1.lc * f2.lc) % p == 0:
        report.add(skipped("common_factor", "p divides lc(f1) lc(f2)"))
        return report
    gdeg = gcd_degree_mod_p(f1, f2, p)
    ds = delta_s(f1, f2)
    report.add(check_eq("common_factor", ds % p == 0, gdeg >= 2, gcd_degree=gdeg, delta_s=ds, p=p))
    return report


# -- Instances and batch driver ----------------------------------------------

@dataclass
class Instance:
    """One verification target.

    ``kind`` is ``"polys"`` (f1, f2, N, r), ``"gp"`` (a progression to push
    through the pipeline) or ``"pair"`` (a selected pair, optionally with its
    progression).
    """

    id: str
    kind: str
    f1: IntPoly = None
    f2: IntPoly = None
    N: int = None
    r: int = None
    gp: GeometricProgression = None
    pair: PolyPair = None
    skews: tuple = None


def _pipeline(inst):
    gp = inst.gp
    grid = inst.skews or (Fraction(1), natural_skew(gp.c))
    return skew_search(gp, grid)[1]


def verify_instance(inst, batteries=BATTERIES, skews=DEFAULT_SKEWS):
    report = VerifyReport(inst.id)
    batteries = set(batteries)
    pair = inst.pair
    gp = inst.gp
    if inst.kind == "gp":
        try:
            pair = _pipeline(inst)
            report.add(Check("pipeline", PASS, _w(f1=pair.f1, f2=pair.f2, s=pair.s)))
        except FactorFound as err:
            report.add(Check("pipeline", SKIPPED, _w(reason="factor found", factor=err.factor)))
            return report
        except DegeneratePair as err:
            report.add(Check("pipeline", SKIPPED, _w(reason=str(err))))
            return report
        except (MontyError, AssertionError) as err:
            report.add(Check("pipeline", FAIL, _w(error=f"{type(err).__name__}: {err}")))
            return report
    if inst.kind == "polys":
        f1, f2, N, r = inst.f1, inst.f2, inst.N, inst.r
    else:
        f1, f2, N, r = pair.f1, pair.f2, pair.N, pair.r
        if gp is None and pair.c is not None:
            try:
                gp = validate_gp(pair.c, N, pair.r)
            except (NotAGP, FactorFound) as err:
                report.add(Check("gp_valid", FAIL, _w(error=str(err))))
                gp = GeometricProgression(tuple(pair.c), N, pair.r)
    if pair is None:
        pair = PolyPair(f1, f2, N, r, Fraction(1))
    if "theorem1" in batteries:
        report.extend(check_theorem1(f1, f2, N, r, skews=skews, instance=inst.id))
    if "theorem2" in batteries:
        if gp is None:
            report.add(skipped("thm2.hypotheses", "no progression attached"))
        else:
            try:
                report.extend(check_theorem2(gp, pair, skews, instance=inst.id))
            except (DegenerateGP, MontyError) as err:
                report.add(Check("thm2.hypotheses", FAIL, _w(error=str(err))))
    if "resultant" in batteries:
        report.extend(check_resultant_bounds(pair, skews, instance=inst.id))
    if "gpvol" in batteries:
        if f2.is_zero or not 2 <= f2.deg <= f1.deg:
            report.add(skipped("gpvol", "need 2 <= deg f2 <= deg f1"))
        else:
            report.extend(check_gp_vol_all(f1, f2, instance=inst.id))
    if "reduction" in batteries and inst.kind != "polys":
        report.extend(check_reduction(pair, instance=inst.id))
    if "structural" in batteries:
        report.extend(check_structural(f1, f2, skews, instance=inst.id))
    return report


def summarize(reports):
    counts = defaultdict(Counter)
    for rep in reports:
        for c in rep.checks:
            counts[c.family][c.status] += 1
    totals = Counter()
    for cnt in counts.values():
        totals.update(cnt)
    return {
        "instances": len(reports),
        "checks": {name: {st: cnt[st] for st in (PASS, FAIL, SKIPPED)}
                   for name, cnt in sorted(counts.items())},
        "pass": totals[PASS],
        "fail": totals[FAIL],
        "skipped": totals[SKIPPED],
        "ok": totals[FAIL] == 0,
    }


def batch_verify(instances, batteries=BATTERIES, skews=DEFAULT_SKEWS):
    """Verify every instance; reports sorted by instance id, checks by name."""
    reports = []
    for inst in instances:
        rep = verify_instance(inst, batteries, skews)
        rep.checks.sort(key=lambda c: _natural_key(c.name))
        reports.append(rep)
    reports.sort(key=lambda rep: _natural_key(rep.instance))
    return reports, summarize(reports)


def _natural_key(s):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", s)]


# -- Random instance generators ----------------------------------------------

def random_odd_modulus(rng, lo_bits=40, hi_bits=64):
    bits = rng.randint(lo_bits, hi_bits)
    return rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1


def _centered(x, N):
    x %= N
    return x - N if x > N // 2 else x


def planted_poly(rng, deg, bound, N, r):
    """Random degree-``deg`` polynomial with ``f(r) = 0 mod N``.

    Non-constant coefficients are uniform in ``[-bound, bound]`` with a
    nonzero leading term; the constant term is chosen to plant the root.
    """
    coeffs = [0] + [rng.randint(-bound, bound) for _ in range(deg)]
    while coeffs[-1] == 0:
        coeffs[-1] = rng.randint(-bound, bound)
    partial = IntPoly(coeffs)(r)
    coeffs[0] = _centered(-partial, N)
    return IntPoly(coeffs)


def random_theorem1_instance(rng, d=None, d2=None, bound=30, lo_bits=40, hi_bits=64):
    """Coprime ``(f1, f2)`` with ``deg f1 = d``, a planted common root and valid hypotheses."""
    while True:
        dd = d or rng.choice((2, 3, 4))
        ee = d2 or rng.randint(2, dd)
        N = random_odd_modulus(rng, lo_bits, hi_bits)
        r = rng.randrange(1, N)
        f1 = planted_poly(rng, dd, bound, N, r)
        f2 = planted_poly(rng, ee, bound, N, r)
        if theorem1_hypotheses(f1, f2, N, r) is None:
            return f1, f2, N, r


def theorem1_instances(count, seed, **kw):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        f1, f2, N, r = random_theorem1_instance(rng, **kw)
        out.append(Instance(f"thm1-{i:03d}", "polys", f1=f1, f2=f2, N=N, r=r))
    return out


def random_d2_params(rng, N, bound=50, p_max=200):
    """Valid ``(a, k, p, m)`` for the d = 2 family with ``m`` near ``sqrt(kN/a)``."""
    from sympy import primerange
    from sympy.ntheory import sqrt_mod

    primes = [1] + list(primerange(2, p_max))
    while True:
        a, k, p = rng.randint(1, bound), rng.randint(1, bound), rng.choice(primes)
        if gcd(a, N) != 1 or gcd(p, N) != 1 or (p > 1 and a % p == 0):
            continue
        roots = [0] if p == 1 else sqrt_mod(k * N * pow(a, -1, p) % p, p, all_roots=True)
        if not roots:
            continue
        root = rng.choice(roots)
        target = _isqrt(k * N // a) + rng.randint(-2, 2) * p
        m = target - (target - root) % p
        if m != 0 and gcd(m, p) == 1:
            return GPParamsD2(a, k, p, m)


def random_d3_params(rng, N, bound=20, p_max=60):
    """Valid ``(a, k, p, m)`` for the d = 3 family with ``m`` near ``(kN/a)^(1/3)``."""
    from sympy import primerange
    from sympy.ntheory import nthroot_mod

    from .gp import _icbrt

    primes = [1] + list(primerange(2, p_max))
    while True:
        a, k, p = rng.randint(1, bound), rng.randint(1, bound), rng.choice(primes)
        if gcd(a, N) != 1 or gcd(p, N) != 1 or (p > 1 and a % p == 0):
            continue
        q = p * p
        roots = [0] if p == 1 else nthroot_mod(k * N * pow(a, -1, q) % q, 3, q, all_roots=True)
        if not roots:
            continue
        root = rng.choice(roots)
        target = _icbrt(k * N // a) + rng.randint(-2, 2) * q
        m = target - (target - root) % q
        if m != 0 and gcd(m, p) == 1:
            return GPParamsD3(a, k, p, m)


def _isqrt(n):
    from math import isqrt
    return isqrt(max(n, 0))


def theorem2_instances(n_d2, n_d3, n_polys, seed, lo_bits=40, hi_bits=64, max_tries=500):
    """Progressions from both parametric families and from polynomial pairs.

    Instances whose reduced pair is degenerate (``deg f2 < 2``) are drawn
    again, so every returned instance satisfies the theorem hypotheses. The
    number of redraws is returned alongside.
    """
    rng = random.Random(seed)
    out, redraws = [], 0

    def draw(make, label, count):
        nonlocal redraws
        made = 0
        while made < count:
            for _ in range(max_tries):
                N = random_odd_modulus(rng, lo_bits, hi_bits)
                try:
                    gp = make(N)
                    inst = Instance(f"{label}-{made:03d}", "gp", gp=gp)
                    _pipeline(inst)
                except (DegeneratePair, FactorFound):
                    redraws += 1
                    continue
                out.append(inst)
                made += 1
                break
            else:
                raise RuntimeError(f"could not draw a {label} instance")

    draw(lambda N: build_gp_d2(random_d2_params(rng, N), N), "d2", n_d2)
    draw(lambda N: build_gp_d3(random_d3_params(rng, N), N), "d3", n_d3)

    def from_polys(N):
        d = rng.choice((2, 3))
        r = rng.randrange(1, N)
        f1 = planted_poly(rng, d, 30, N, r)
        f2 = planted_poly(rng, d, 30, N, r)
        if theorem1_hypotheses(f1, f2, N, r) is not None:
            raise FactorFound(1, N, "redraw")
        return gp_from_polys(f1, f2, d, N, r)

    draw(from_polys, "polys", n_polys)
    return out, redraws


def random_coprime_pair(rng, d, d2, bound=30):
    while True:
        f1 = IntPoly([rng.randint(-bound, bound) for _ in range(d)] + [rng.choice([-1, 1]) * rng.randint(1, bound)])
        f2 = IntPoly([rng.randint(-bound, bound) for _ in range(d2)] + [rng.choice([-1, 1]) * rng.randint(1, bound)])
        if resultant(f1, f2) != 0:
            return f1, f2


def planted_common_factor_pair(rng, p, share_degree, d=None, d2=None, bound=30):
    """Coprime integer pair whose reductions mod ``p`` share a factor of degree
    ``share_degree`` (the gcd may be larger by accident; callers check)."""
    while True:
        dd = d or rng.choice((3, 4))
        ee = d2 or rng.randint(max(2, share_degree), dd)
        g = IntPoly([rng.randrange(p) for _ in range(share_degree)] + [1])
        u1 = IntPoly([rng.randrange(p) for _ in range(dd - share_degree)] + [rng.randrange(1, p)])
        u2 = IntPoly([rng.randrange(p) for _ in range(ee - share_degree)] + [rng.randrange(1, p)])
        lift1 = IntPoly([rng.randint(-bound, bound) for _ in range(dd)])
        lift2 = IntPoly([rng.randint(-bound, bound) for _ in range(ee)])
        f1 = g * u1 + lift1 * p
        f2 = g * u2 + lift2 * p
        if f1.deg != dd or f2.deg != ee or (f1.lc * f2.lc) % p == 0:
            continue
        if resultant(f1, f2) != 0:
            return f1, f2
