import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from monty.core import (PolyPair, hankel_stack, kernel_pair, lagrange_reduce_skewed,
                        leading_coeff_identity, natural_skew, polys_from_gp, resultant_formula,
                        skew_objective, skew_search)
from monty.errors import ArgumentError, DegenerateGP, DegeneratePair, FactorFound
from monty.gp import GeometricProgression, build_gp_d2, build_gp_d3, gp_from_polys, validate_gp
from monty.linalg import delta, det, hnf_with_transform, matvec, transpose
from monty.poly import IntPoly, coeff_rows, delta_s, resultant, sin2_theta
from monty.verify import (planted_poly, random_d2_params, random_d3_params, random_odd_modulus,
                          random_theorem1_instance)

GOLDEN = validate_gp([9, 10, 1], 91, 10)


def same_lattice(rows_a, rows_b):
    """Row lattices agree iff the Hermite forms of the transposes agree."""
    return hnf_with_transform(transpose(rows_a))[0] == hnf_with_transform(transpose(rows_b))[0]


def test_hankel_stack_golden():
    stack = hankel_stack(GOLDEN)
    assert stack.C == [[9, 10], [10, 1]]
    assert stack.partial(1) == [[9, 10, 1]]
    assert stack.hat == [[10, 1]]


def test_hankel_stack_powers():
    r = 2
    stack = hankel_stack([r ** 4, r ** 3, r ** 2, r, 1])
    assert stack.C == [[r ** (4 - i - j) for j in range(3)] for i in range(3)]
    assert stack.hat == stack.C[1:]
    assert stack.partial(2) == [[16, 8, 4, 2, 1]]
    with pytest.raises(ArgumentError):
        hankel_stack([1, 2])


def test_kernel_pair_golden():
    v1, v2 = kernel_pair(hankel_stack(GOLDEN))
    for v in (v1, v2):
        assert 9 * v[0] + 10 * v[1] + v[2] == 0
    assert delta([v1, v2]) == 1


def test_kernel_contains_generating_pair():
    rng = random.Random(4)
    f1, f2, N, r = random_theorem1_instance(rng, d=3, d2=3)
    gp = gp_from_polys(f1, f2, 3, N, r)
    dC = hankel_stack(gp).partial(1)
    for f in (f1, f2):
        assert not any(matvec(dC, coeff_rows([f], 3)[0]))


def test_singular_hankel_is_degenerate():
    with pytest.raises(DegenerateGP):
        polys_from_gp(validate_gp([1, 1, 1], 10 ** 9 + 7))


def test_lagrange_example():
    w1, w2 = lagrange_reduce_skewed([1, 0, -9], [0, 1, -10], 1)
    assert {tuple(w1), tuple(w2)} <= {(-1, 1, -1), (1, -1, 1), (4, -3, -6), (-4, 3, 6)}
    assert sum(a * a for a in w1) == 3 and sum(b * b for b in w2) == 61
    assert sum(a * b for a, b in zip(w1, w2)) == -1


def test_lagrange_fixed_point():
    w1, w2 = [-1, 1, -1], [4, -3, -6]
    assert lagrange_reduce_skewed(w1, w2, 1) == (w1, w2)


def test_lagrange_rejects_dependent():
    with pytest.raises(ArgumentError):
        lagrange_reduce_skewed([1, 2, 3], [2, 4, 6], 1)


vec3 = st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=4, max_size=4)


@given(vec3, vec3, st.fractions(Fraction(1, 50), 50))
def test_lagrange_properties(v1, v2, s):
    assume(s > 0)
    n = len(v1) - 1
    w = [s ** (2 * (n - j)) for j in range(n + 1)]
    dot = lambda a, b: sum(x * y * z for x, y, z in zip(a, b, w))  # noqa: E731
    assume(dot(v1, v1) * dot(v2, v2) != dot(v1, v2) ** 2)
    b1, b2 = lagrange_reduce_skewed(v1, v2, s)
    assert dot(b1, b1) <= dot(b2, b2)
    assert 2 * abs(dot(b1, b2)) <= dot(b1, b1)
    assert dot(b1, b2) <= 0
    assert same_lattice([v1, v2], [b1, b2])
    # reducedness forces sin^2 >= 3/4
    assert 4 * (dot(b1, b1) * dot(b2, b2) - dot(b1, b2) ** 2) >= 3 * dot(b1, b1) * dot(b2, b2)


def test_pipeline_golden():
    pair = polys_from_gp(GOLDEN, 1)
    assert {pair.f1, pair.f2} == {IntPoly([1, -1, 1]), IntPoly([6, 3, -4])}
    assert pair.f1.lc > 0
    assert pair.meta["resultant"] in (91, -91)
    assert pair.meta["det_C"] == -91
    assert delta_s(pair.f1, pair.f2) == 1
    assert sin2_theta(pair.f1, pair.f2, 1) == Fraction(182, 183)


def test_pipeline_recovers_kernel_lattice():
    rng = random.Random(9)
    for _ in range(5):
        f1, f2, N, r = random_theorem1_instance(rng, d=3, d2=3)
        gp = gp_from_polys(f1, f2, 3, N, r)
        g = delta([list(gp.c)])
        gp = validate_gp([x // g for x in gp.c], N, r)
        pair = polys_from_gp(gp, natural_skew(gp.c))
        ours = coeff_rows([pair.f1, pair.f2], 3)
        theirs = coeff_rows([f1, f2], 3)
        assert same_lattice(ours, theirs)


def test_planted_gcd_factor():
    gp = GeometricProgression((7 * 100, 7 * 10, 7), 91)
    with pytest.raises(FactorFound) as exc:
        polys_from_gp(gp)
    assert exc.value.factor == 7


def test_common_gcd_factor_in_middle_entries():
    # c_0 coprime to N, but gcd(c_0, ..., c_{d-2}, N) can only see c_0 for d = 2;
    # for d = 3 it sees c_0 and c_1, which share the factor only if c_0 does.
    N = 7 * 13
    with pytest.raises(FactorFound):
        polys_from_gp(GeometricProgression((7 * 10 ** 4, 7 * 1000, 7 * 100, 7 * 10, 7), N))


def test_degenerate_pair_carries_pair():
    N = 10 ** 15 + 37
    gp = build_gp_d3(random_d3_params(random.Random(0), N), N)
    try:
        polys_from_gp(gp)
    except DegeneratePair as err:
        assert err.pair.f2.deg < 2
        assert err.pair.f2(gp.ratio) % N == 0


def test_resultant_formula_and_lc_identity_golden():
    pair = polys_from_gp(GOLDEN)
    stack = hankel_stack(GOLDEN)
    assert resultant_formula(pair, stack)
    assert leading_coeff_identity(pair, stack)


def test_d2_family_closed_forms():
    rng = random.Random(21)
    for _ in range(25):
        N = random_odd_modulus(rng)
        P = random_d2_params(rng, N)
        gp = build_gp_d2(P, N)
        pair = polys_from_gp(gp)
        g = gcd(P.a, gp.c[0])
        assert abs(resultant(pair.f1, pair.f2)) == (P.a // g) * (P.k // g) * N
        assert delta_s(pair.f1, pair.f2) == 1


def _cubic_basis(v1, v2):
    # Unimodular change so both kernel vectors have degree 3.
    if v1[0] == 0:
        v1, v2 = v2, v1
    if v2[0] == 0:
        v2 = [a + b for a, b in zip(v1, v2)]
    return IntPoly.from_desc(v1), IntPoly.from_desc(v2)


def test_d3_family_closed_forms():
    rng = random.Random(22)
    for _ in range(25):
        N = random_odd_modulus(rng)
        P = random_d3_params(rng, N)
        gp = build_gp_d3(P, N)
        f1, f2 = _cubic_basis(*kernel_pair(hankel_stack(gp)))
        assert f1.deg == f2.deg == 3
        g = gcd(P.a, gp.c[1] // P.p)
        at, kt = P.a // g, P.k // g
        assert abs(resultant(f1, f2)) == at * at * kt * N
        assert delta_s(f1, f2) == at


def test_scaled_gp_identities():
    rng = random.Random(5)
    for _ in range(10):
        N = random_odd_modulus(rng)
        P = random_d2_params(rng, N)
        gp = build_gp_d2(P, N)
        assume_coprime = gcd(3, N) == 1
        if not assume_coprime:
            continue
        scaled = validate_gp([3 * x for x in gp.c], N, gp.ratio)
        pair, spair = polys_from_gp(gp), polys_from_gp(scaled)
        assert (pair.f1, pair.f2) == (spair.f1, spair.f2)
        stack = hankel_stack(scaled)
        assert delta(stack.partial(1)) == 3 * delta(hankel_stack(gp).partial(1))
        assert resultant_formula(spair, stack)
        assert leading_coeff_identity(spair, stack)


def test_skew_search_matches_brute_force():
    rng = random.Random(8)
    grid = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 5)]
    for _ in range(10):
        N = random_odd_modulus(rng)
        gp = build_gp_d2(random_d2_params(rng, N), N)
        s_best, pair = skew_search(gp, grid)
        objs = {s: skew_objective(polys_from_gp(gp, s)) for s in grid}
        best = min(objs.values())
        assert objs[s_best] == best
        assert s_best == min(s for s in grid if objs[s] == best)
        assert pair.s == s_best


def test_skew_search_symmetric_pair_prefers_one():
    # Palindromic f1, f2 have the same skewed norm at s and 1/s.
    f1, f2 = IntPoly([1, 3, 1]), IntPoly([2, -5, 2])
    N, r = 1000003, 5
    objs = {s: skew_objective(PolyPair(f1, f2, N, r, Fraction(s)))
            for s in (Fraction(1, 2), Fraction(1), Fraction(2))}
    assert min(objs, key=lambda s: (objs[s], s)) == 1


def _skew_heavy_gp(S):
    # Coefficients grow like S^(2-i): both polynomials look like g(x/S) S^2.
    from sympy import Poly, factorint, symbols
    x = symbols("x")
    f1 = IntPoly([5 * S * S + 1, 3 * S, 1])
    f2 = IntPoly([7 * S * S, -S, 2])
    N = max(factorint(abs(resultant(f1, f2))))
    assert N > S * S
    g = Poly([1, 3 * S, 5 * S * S + 1], x, modulus=N).gcd(Poly([2, -S, 7 * S * S], x, modulus=N))
    r = -g.monic().all_coeffs()[1] % N
    return gp_from_polys(f1, f2, 2, N, r)


def test_skew_search_singleton_and_skew_heavy():
    assert skew_search(GOLDEN, [Fraction(1)])[0] == 1
    S = 1000
    gp = _skew_heavy_gp(S)
    grid = [Fraction(1), Fraction(10), Fraction(100)]
    objs = [skew_objective(polys_from_gp(gp, s)) for s in grid]
    assert objs == sorted(objs, reverse=True)
    assert skew_search(gp, grid)[0] == 100


def test_natural_skew():
    assert natural_skew([9, 10, 1]) == 3
    assert natural_skew([1, 10, 100]) == Fraction(1, 10)
    assert natural_skew([0, 1, 1]) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pipeline_invariants_random_d2(seed):
    rng = random.Random(seed)
    N = random_odd_modulus(rng)
    gp = build_gp_d2(random_d2_params(rng, N), N)
    _, pair = skew_search(gp, [Fraction(1), natural_skew(gp.c)])
    assert pair.f1(gp.ratio) % N == 0 and pair.f2(gp.ratio) % N == 0
    assert abs(resultant(pair.f1, pair.f2)) >= N
    assert 4 * sin2_theta(pair.f1, pair.f2, pair.s) >= 3
