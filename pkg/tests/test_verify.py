import random
from dataclasses import replace
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly, isprime, nextprime, symbols

from monty.core import PolyPair, polys_from_gp
from monty.gp import GeometricProgression, build_gp_d2, validate_gp
from monty.poly import IntPoly, delta_s, resultant
from monty.verify import (FAIL, PASS, SKIPPED, Instance, batch_verify,
                          check_common_factor_criterion, check_gp_vol_all,
                          check_gp_vol_identity, check_reduction, check_resultant_bounds,
                          check_structural, check_theorem1, check_theorem2,
                          planted_common_factor_pair, random_d2_params, random_odd_modulus,
                          random_theorem1_instance, theorem1_instances, theorem2_instances)

X = symbols("x")
F1 = IntPoly([-1, 1, -1])
F2 = IntPoly([-6, -3, 4])
GOLDEN = validate_gp([9, 10, 1], 91, 10)


def statuses(report):
    return {c.status for c in report.checks}


def test_polys_to_gp_golden():
    rep = check_theorem1(F1, F2, 91, 10, t=2, skews=[1])
    assert statuses(rep) == {PASS, SKIPPED}
    w = rep.get("thm1.p5.lower[t=2,s=1/1]").witnesses
    # (||c_2||^2)^2 = 182^2 against |res|^2 = 91^2
    assert Fraction(w["lhs"]) == 182 ** 2
    assert Fraction(w["rhs"]) == 91 ** 2
    assert w["slack"] == "1/4"


def test_polys_to_gp_t_sweep_names():
    rng = random.Random(2)
    f1, f2, N, r = random_theorem1_instance(rng, d=4, d2=2)
    rep = check_theorem1(f1, f2, N, r, skews=[1])
    assert rep.ok
    for t in (2, 3, 4):
        assert rep.get(f"thm1.p1.gp[t={t}]").status == PASS
    assert rep.get("thm1.St_recursion[t=3]").status == PASS
    assert rep.get("thm1.Mti_recursion[t=4]").status == PASS


def _hypothesis_violating_instance():
    # Reductions modulo p share a quadratic factor, and r is a common root modulo N = p q.
    p, q = 101, nextprime(10 ** 15)
    rng = random.Random(0)
    g = IntPoly([6, -5, 1])  # (x - 2)(x - 3)
    f1 = g * IntPoly([1, 0, 1]) + IntPoly([rng.randint(-9, 9) for _ in range(3)]) * p
    f2 = g * IntPoly([4, 1]) + IntPoly([rng.randint(-9, 9) for _ in range(2)]) * p
    r_q = 12345
    fixed = []
    for f in (f1, f2):
        shift = -f(r_q) * pow(p, -1, q) % q
        fixed.append(f + IntPoly([shift * p]))
    r = (2 * q * pow(q, -1, p) + r_q * p * pow(p, -1, q)) % (p * q)
    return fixed[0], fixed[1], p * q, r


def test_polys_to_gp_hypothesis_failure_skips_everything():
    f1, f2, N, r = _hypothesis_violating_instance()
    assert f1(r) % N == 0 and f2(r) % N == 0
    assert delta_s(f1, f2) % 101 == 0
    rep = check_theorem1(f1, f2, N, r)
    assert rep.hypothesis_failed
    assert statuses(rep) == {SKIPPED}
    assert "101" in rep.get("thm1.hypotheses").witnesses["reason"]


def test_gp_to_polys_golden_slack_one():
    pair = polys_from_gp(GOLDEN)
    rep = check_theorem2(GOLDEN, pair, skews=[1, Fraction(7, 5)])
    assert rep.ok
    left = rep.get("thm2.p4.left[s=1/1]")
    assert left.witnesses["lhs"] == "182/1" and left.witnesses["slack"] == "1/1"
    assert rep.get("thm2.p4.left[s=7/5]").witnesses["slack"] == "1/1"


def test_gp_to_polys_scaled_gp():
    pair = polys_from_gp(GOLDEN)
    scaled = validate_gp([3 * x for x in GOLDEN.c], 91, 10)
    base = check_theorem2(GOLDEN, pair, skews=[1])
    rep = check_theorem2(scaled, polys_from_gp(scaled), skews=[1])
    assert rep.ok
    for name in ("thm2.p4.left[s=1/1]", "thm2.p4.right[s=1/1]"):
        assert rep.get(name).witnesses == base.get(name).witnesses


def test_gp_to_polys_detects_wrong_pair():
    pair = polys_from_gp(GOLDEN)
    bad = replace(pair, f2=pair.f2 + IntPoly([1]))
    rep = check_theorem2(GOLDEN, bad)
    assert rep.get("thm2.p2.common_root").status == FAIL
    assert rep.get("thm2.kernel_basis").status == FAIL


def test_reduction_checks_golden():
    rep = check_reduction(polys_from_gp(GOLDEN))
    assert rep.ok and len(rep.checks) == 3


def test_resultant_bounds_golden():
    rep = check_resultant_bounds(polys_from_gp(GOLDEN), skews=[1])
    lower = rep.get("resbound.lower")
    assert lower.status == PASS and lower.witnesses["slack"] == "1/1"
    upper = rep.get("resbound.upper[s=1/1]")
    assert upper.status == PASS
    assert Fraction(upper.witnesses["lhs"]) == 8281
    assert Fraction(upper.witnesses["rhs"]) == 33124


def test_resultant_lower_bound_strict():
    # |res| = 898 = 2 * 449 with 449 prime; take N = 449.
    f1, f2 = IntPoly([2, 1, 1]), IntPoly([-26, -6, 3])
    res = abs(resultant(f1, f2))
    N = res // 2
    assert res == 898 and isprime(N)
    g = Poly(list(reversed(f1.coeffs)), X, modulus=N).gcd(Poly(list(reversed(f2.coeffs)), X, modulus=N))
    r = -g.monic().all_coeffs()[1] % N
    rep = check_resultant_bounds(PolyPair(f1, f2, N, r, Fraction(1)), skews=[1])
    lower = rep.get("resbound.lower")
    assert lower.status == PASS and lower.witnesses["slack"] == "1/2"
    assert rep.get("resbound.upper[s=1/1]").status == PASS


def test_gp_vol_golden():
    rep = check_gp_vol_identity(F1, F2, 2, 1)
    assert rep.ok
    assert Fraction(rep.checks[0].witnesses["lhs"]) == 182
    rep0 = check_gp_vol_identity(F1, F2, 2, 0)
    assert rep0.ok and Fraction(rep0.checks[0].witnesses["lhs"]) == 91 ** 2


def test_gp_vol_random_cubic_all_tk():
    rng = random.Random(6)
    f1, f2, _, _ = random_theorem1_instance(rng, d=3, d2=2)
    rep = check_gp_vol_all(f1, f2, skews=(1, Fraction(7, 5)))
    assert rep.ok
    assert len(rep.checks) == (2 + 3) * 2


def test_structural_golden():
    rep = check_structural(F1, F2, skews=[1, 2])
    assert rep.ok
    assert rep.get("struct.adjBez").status == PASS


def test_common_factor_criterion_both_ways():
    rng = random.Random(3)
    for p in (101, 103, 107):
        f1, f2 = planted_common_factor_pair(rng, p, 2)
        rep = check_common_factor_criterion(f1, f2, p)
        assert rep.ok
        assert delta_s(f1, f2) % p == 0
    f1, f2 = planted_common_factor_pair(rng, 101, 1)
    rep = check_common_factor_criterion(f1, f2, 101)
    assert rep.ok


def test_batch_empty():
    reports, summary = batch_verify([])
    assert reports == [] and summary["ok"] and summary["instances"] == 0


def test_batch_fault_injection():
    rng = random.Random(12)
    good = []
    for i in range(3):
        N = random_odd_modulus(rng)
        good.append(Instance(f"gp-{i}", "gp", gp=build_gp_d2(random_d2_params(rng, N), N)))
    bad_gp = good[1].gp
    corrupted = GeometricProgression((bad_gp.c[0] + 1,) + bad_gp.c[1:], bad_gp.N, bad_gp.ratio)
    instances = good + [Instance("gp-bad", "gp", gp=corrupted)]
    reports, summary = batch_verify(instances)
    failing = {r.instance for r in reports if not r.ok}
    assert failing == {"gp-bad"}
    assert not summary["ok"]
    clean, _ = batch_verify(good)
    for a, b in zip(clean, reports):
        assert a.checks == b.checks


def test_batch_is_sorted_and_deterministic():
    insts = theorem1_instances(6, seed=4)
    a, sa = batch_verify(list(reversed(insts)))
    b, sb = batch_verify(insts)
    assert [r.instance for r in a] == sorted(r.instance for r in a)
    assert a == b and sa == sb


def test_corrupted_pair_fails_common_root():
    pair = polys_from_gp(GOLDEN)
    bumped = replace(pair, f1=pair.f1 + IntPoly([0, 1]))
    reports, summary = batch_verify([Instance("bumped", "pair", pair=bumped)])
    assert reports[0].get("thm2.p2.common_root").status == FAIL
    assert not summary["ok"]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_polys_to_gp_random_property(seed):
    reports, summary = batch_verify(theorem1_instances(3, seed), ("theorem1",))
    assert summary["ok"], [c for r in reports for c in r.failed]


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_gp_to_polys_random_property(seed):
    instances, _ = theorem2_instances(2, 1, 1, seed)
    reports, summary = batch_verify(instances)
    assert summary["ok"], [c for r in reports for c in r.failed]
