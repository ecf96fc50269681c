import random

import pytest

from semilocal.field import FieldSpec, UniPoly
from semilocal.multipoly import Monomial, Polynomial, PolySystem
from semilocal import groebner, linalg
from semilocal.closure import (
    compute_closure,
    reduce_mod,
    linear_subspace,
    last_fall_degree,
    restrict_to_variables,
    ClosureCapacityError,
    coded_field,
)

GF2 = FieldSpec(2)
GF4 = FieldSpec(2, 2)
GF5 = FieldSpec(5)
GF7 = FieldSpec(7)


def P(field, nvars, *terms):
    return Polynomial(field, nvars, {Monomial(e): field.element(c) for c, e in terms})


def uni_to_poly(f, var, nvars):
    """UniPoly in variable `var` as a multivariate Polynomial."""
    t = {}
    for e, c in enumerate(f.coeffs):
        if c:
            exps = [0] * nvars
            exps[var] = e
            t[Monomial(exps)] = c
    return Polynomial(f.field, nvars, t)


def test_closure_single_linear():
    F = PolySystem([P(GF7, 1, (1, (1,)), (-1, (0,)))])  # x1 - 1
    V = compute_closure(F, 1)
    assert len(V) == 1
    assert V.rows[0] == F[0].monic()
    assert reduce_mod(F[0], V).is_zero()


def test_closure_gf5_example():
    # V_{F,2} contains x2^2 - 1 since (x2-x1)(x2+x1) + (x1^2-1) = x2^2 - 1
    F = PolySystem(
        [P(GF5, 2, (1, (2, 0)), (-1, (0, 0))), P(GF5, 2, (1, (0, 1)), (-1, (1, 0)))]
    )
    V = compute_closure(F, 2)
    target = P(GF5, 2, (1, (0, 2)), (-1, (0, 0)))
    assert reduce_mod(target, V).is_zero()


def test_closure_power_block():
    F = PolySystem([P(GF7, 1, (1, (2,)))])  # {x1^2}
    V = compute_closure(F, 3)
    assert len(V) == 2  # x1^2 and x1^3
    leads = {f.lead_monomial().exps for f in V.rows}
    assert leads == {(2,), (3,)}


def test_reduce_mod_nonmember():
    F = PolySystem([P(GF7, 1, (1, (1,)))])  # {x1}
    V = compute_closure(F, 2)
    one = P(GF7, 1, (1, (0,)))
    assert reduce_mod(one, V) == one
    with pytest.raises(ValueError):
        reduce_mod(P(GF7, 1, (1, (3,))), V)


def test_last_fall_degree_examples():
    # {x^2, x^2 + x}: x appears first in V_2
    F = PolySystem([P(GF7, 1, (1, (2,))), P(GF7, 1, (1, (2,)), (1, (1,)))])
    rep = last_fall_degree(F, cap=4)
    assert rep.d_f == 2
    assert rep.certified
    assert rep.fall_degrees == (2,)

    # {x1 - 1}: no fall at any degree
    F2 = PolySystem([P(GF7, 2, (1, (1, 0)), (-1, (0, 0)))])
    rep2 = last_fall_degree(F2, cap=4)
    assert rep2.d_f == 0
    assert rep2.certified

    # {x1 x2 - 1, x1^2}: 1 = x1*(x1 x2) - x2*(x1^2) needs degree 3
    F3 = PolySystem([P(GF7, 2, (1, (1, 1)), (-1, (0, 0))), P(GF7, 2, (1, (2, 0)))])
    rep3 = last_fall_degree(F3, cap=5)
    assert rep3.certified
    assert rep3.d_f >= 3
    assert rep3.d_f == 3


def test_uncertified_when_cap_too_low():
    F = PolySystem([P(GF7, 2, (1, (1, 1)), (-1, (0, 0))), P(GF7, 2, (1, (2, 0)))])
    rep = last_fall_degree(F, cap=2)
    assert not rep.certified  # 1 is in the ideal but not in V_2


def test_linear_subspace_examples():
    F = PolySystem(
        [P(GF7, 2, (1, (1, 0)), (-1, (0, 0))), P(GF7, 2, (1, (0, 1)), (-1, (0, 0)))]
    )
    V = compute_closure(F, 1)
    lins = linear_subspace(V)
    assert len(lins) == 2

    V2 = compute_closure(PolySystem([P(GF7, 2, (1, (2, 0)))]), 2)
    assert linear_subspace(V2) == []

    F3 = PolySystem([P(GF7, 1, (1, (2,))), P(GF7, 1, (1, (2,)), (1, (1,)))])
    V3 = compute_closure(F3, 2)
    lins3 = linear_subspace(V3)
    assert len(lins3) == 1 and lins3[0] == P(GF7, 1, (1, (1,)))


def rand_system(field, nvars, npolys, deg, rng):
    polys = []
    for _ in range(npolys):
        t = {}
        for _ in range(rng.randrange(2, 6)):
            exps = [0] * nvars
            for _ in range(rng.randrange(deg + 1)):
                exps[rng.randrange(nvars)] += 1
            t[Monomial(exps)] = field.random_element(rng)
        f = Polynomial(field, nvars, t)
        if f:
            polys.append(f)
    if not polys:
        polys = [Polynomial.constant(field, nvars, 1)]
    return PolySystem(polys)


def test_soundness_sample():
    # every closure row lies in the ideal (checked against Buchberger)
    rng = random.Random(31)
    for _ in range(15):
        F = rand_system(GF5, 3, 3, 2, rng)
        V = compute_closure(F, 3)
        gb = groebner.buchberger(F)
        for row in V.rows:
            assert groebner.in_ideal(row, gb)


def test_monotonicity():
    rng = random.Random(37)
    for _ in range(10):
        F = rand_system(GF7, 2, 2, 3, rng)
        Vs = [compute_closure(F, d) for d in range(5)]
        for d in range(1, 5):
            for row in Vs[d - 1].rows:
                assert reduce_mod(row, Vs[d]).is_zero()


def test_d_f_invariant_under_variable_permutation():
    rng = random.Random(41)
    for _ in range(8):
        F = rand_system(GF5, 3, 3, 2, rng)
        rep = last_fall_degree(F, cap=4)
        perm = [1, 2, 0]
        permuted = []
        for f in F:
            t = {}
            for m, c in f.terms.items():
                t[Monomial(tuple(m.exps[perm[i]] for i in range(3)))] = c
            permuted.append(Polynomial(GF5, 3, t))
        rep2 = last_fall_degree(PolySystem(permuted), cap=4)
        assert rep.d_f == rep2.d_f
        assert rep.certified == rep2.certified


def test_gcd_chain_reduction_bound():
    # univariate f with the p-power chain: gcd(f, x0^q - x0) falls inside
    # V at degree bound deg(f) * p
    rng = random.Random(43)
    for _ in range(6):
        coeffs = [GF4.random_element(rng) for _ in range(4)]
        f = UniPoly(GF4, coeffs)
        if f.degree < 2:
            continue
        d = f.degree
        q, p = 4, 2
        g = f.gcd(f.powmod_x(q) - (UniPoly.x(GF4) % f))
        chain = PolySystem(
            [
                uni_to_poly(f, 0, 2),
                P(GF4, 2, (1, (2, 0)), (-1, (0, 1))),  # x0^2 - x1
                P(GF4, 2, (1, (0, 2)), (-1, (1, 0))),  # x1^2 - x0
            ]
        )
        V = compute_closure(chain, d * p)
        assert reduce_mod(uni_to_poly(g, 0, 2), V).is_zero()


def test_monomial_reduction_to_univariate_shape():
    # for a shape system {f(x1), x2 - h(x1)}, every monomial reduces at
    # degree max(deg m, 2d) to a univariate polynomial in x1 of degree < deg f
    rng = random.Random(47)
    for _ in range(6):
        f = UniPoly.from_roots(
            GF7, [GF7.element(rng.randrange(7)) for _ in range(3)]
        ).squarefree_part()
        if f.degree < 2:
            continue
        h = UniPoly(GF7, [GF7.random_element(rng) for _ in range(f.degree)])
        F = PolySystem(
            [
                uni_to_poly(f, 0, 2),
                P(GF7, 2, (1, (0, 1))) - uni_to_poly(h, 0, 2),
            ]
        )
        d = max(f.degree, h.degree + 1)
        for exps in [(2, 1), (1, 2), (0, 3), (2, 2)]:
            m = P(GF7, 2, (1, exps))
            D = max(m.degree, 2 * d)
            V = compute_closure(F, D)
            nf = reduce_mod(m, V)
            # nf must equal the normal form of some univariate of degree < deg f
            basis_nfs = [
                reduce_mod(P(GF7, 2, (1, (j, 0))), V) for j in range(f.degree)
            ]
            cols = sorted(
                {mm for g in basis_nfs + [nf] for mm in g.terms}, reverse=True
            )
            col_of = {mm: i for i, mm in enumerate(cols)}
            rows = []
            for g in basis_nfs:
                row = [GF7.zero()] * len(cols)
                for mm, c in g.terms.items():
                    row[col_of[mm]] = c
                rows.append(row)
            target = [GF7.zero()] * len(cols)
            for mm, c in nf.terms.items():
                target[col_of[mm]] = c
            # solvable iff nf is in the span of the reduced powers of x1
            mat = [[rows[j][i] for j in range(len(rows))] for i in range(len(cols))]
            assert linalg.solve(mat, target, GF7) is not None


def test_restrict_to_variables():
    # span{x1 + x3, x2 - x3} meets k[x1,x2] exactly in span{x1 + x2}
    f = P(GF7, 3, (1, (1, 0, 0)), (1, (0, 0, 1)))
    g = P(GF7, 3, (1, (0, 1, 0)), (-1, (0, 0, 1)))
    out = restrict_to_variables([f, g], {0, 1}, GF7)
    assert len(out) == 1
    assert out[0].monic() == P(GF7, 3, (1, (1, 0, 0)), (1, (0, 1, 0)))


def test_capacity_error():
    with pytest.raises(ClosureCapacityError):
        coded_field(FieldSpec(4099))


def test_closure_deterministic():
    rng = random.Random(53)
    F = rand_system(GF5, 3, 3, 2, rng)
    a = compute_closure(F, 3)
    b = compute_closure(F, 3)
    assert a.rows == b.rows
