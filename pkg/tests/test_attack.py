import random

import pytest

from semilocal.field import FieldSpec
from semilocal.multipoly import (
    LinearMap,
    Monomial,
    Polynomial,
    PolySystem,
    compose_eqs,
    compose_vars,
    random_invertible,
)
from semilocal.attack import (
    AttackFailure,
    AttackNotApplicable,
    attack_square_1local,
    det_jacobian,
    linear_factors,
    partial_attack_clocal,
    poly_div_exact,
)
from semilocal.cryptosystem import keygen, encrypt, decrypt, KeyPair

GF5 = FieldSpec(5)
GF7 = FieldSpec(7)
GF11 = FieldSpec(11)


def P(field, nvars, *terms):
    return Polynomial(field, nvars, {Monomial(e): field.element(c) for c, e in terms})


def cubes(field, n):
    return PolySystem([Polynomial.variable(field, n, i) ** 3 for i in range(n)])


def test_det_jacobian_diagonal():
    det = det_jacobian(cubes(GF11, 2))
    assert det == P(GF11, 2, (9, (2, 2)))


def test_det_jacobian_composed():
    lam = LinearMap.invertible(GF11, [[1, 1], [0, 1]])
    G = compose_vars(cubes(GF11, 2), lam)
    det = det_jacobian(G)
    x1px2 = P(GF11, 2, (1, (1, 0)), (1, (0, 1)))
    x2 = P(GF11, 2, (1, (0, 1)))
    assert det == x1px2 * x1px2 * x2 * x2 * GF11.element(9)


def test_det_jacobian_not_applicable_nonsquare():
    kp = keygen("nonsquare2", GF11, 2, seed=1)
    with pytest.raises(AttackNotApplicable):
        det_jacobian(kp.public)


def test_det_methods_agree():
    rng = random.Random(91)
    for _ in range(5):
        n = 3
        polys = []
        for _ in range(n):
            t = {}
            for _ in range(4):
                exps = [rng.randrange(3) for _ in range(n)]
                t[Monomial(exps)] = GF7.random_element(rng)
            f = Polynomial(GF7, n, t)
            polys.append(f if f else Polynomial.constant(GF7, n, 1))
        F = PolySystem(polys)
        assert det_jacobian(F, "minor") == det_jacobian(F, "bareiss")


def test_poly_div_exact():
    f = P(GF5, 2, (1, (1, 0)), (2, (0, 1)))  # x1 + 2 x2
    g = P(GF5, 2, (1, (1, 0)))
    prod = f * f * g * g
    q = poly_div_exact(prod, f)
    assert q == f * g * g
    assert poly_div_exact(f, g) is None


def test_linear_factors_example():
    f = P(GF5, 2, (1, (1, 0)), (2, (0, 1)))  # x1 + 2 x2
    g = P(GF5, 2, (1, (1, 0)))  # x1
    fact = linear_factors(f * f * g * g)
    assert fact.constant == GF5.one()
    assert fact.cofactor.degree == 0 or fact.cofactor == Polynomial.constant(GF5, 2, 1)
    got = {(repr(form), mult) for form, mult in fact.factors}
    assert got == {("1*x1 + 2*x2", 2), ("1*x1", 2)}


def test_linear_factors_constant_and_irreducible():
    const = Polynomial.constant(GF7, 1, 4)
    fact = linear_factors(const)
    assert fact.factors == () and fact.constant == GF7.element(4)

    f = P(GF7, 1, (1, (2,)), (1, (0,)))  # x^2 + 1, irreducible over GF(7)
    fact2 = linear_factors(f)
    assert fact2.factors == ()
    assert fact2.cofactor == f.monic()


def test_linear_factors_reassembles_random():
    rng = random.Random(93)
    for _ in range(10):
        forms = []
        for _ in range(rng.randrange(1, 4)):
            t = {
                Monomial.var(i, 2): GF5.random_element(rng) for i in range(2)
            }
            t = {m: c for m, c in t.items() if c}
            if t:
                forms.append(Polynomial(GF5, 2, t))
        f = Polynomial.constant(GF5, 2, 1 + rng.randrange(4))
        for g in forms:
            f = f * g
        fact = linear_factors(f)
        assert fact.reassemble() == f


def test_attack_known_key():
    lam = LinearMap.invertible(GF11, [[1, 1], [0, 1]])
    G = compose_vars(cubes(GF11, 2), lam)
    rec = attack_square_1local(G, exponent=3)
    assert rec.certificate
    row_sets = {
        tuple(c.code for c in row) for row in rec.lam_candidate.matrix
    }
    assert row_sets == {(1, 1), (0, 1)}


def test_attack_identity_key():
    G = cubes(GF11, 3)
    rec = attack_square_1local(G, exponent=3)
    assert rec.certificate
    # rows are the variables up to scalar (normalization makes them exact)
    rows = sorted(tuple(c.code for c in row) for row in rec.lam_candidate.matrix)
    assert rows == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_attack_random_instances_certified():
    rng = random.Random(97)
    for n in (2, 3):
        for _ in range(4):
            kp = keygen("square1", GF11, n, seed=rng.randrange(10**6))
            rec = attack_square_1local(kp.public, exponent=3)
            assert rec.certificate


def test_attack_decrypt_equivalence():
    kp = keygen("square1", GF11, 2, seed=1234)
    rec = attack_square_1local(kp.public, exponent=3)
    assert rec.certificate
    pirate = KeyPair(
        scheme="square1",
        field=GF11,
        n=2,
        exponent=3,
        lam=rec.lam_candidate,
        mu=rec.mu_candidate,
        public=kp.public,
        seed=None,
    )
    rng = random.Random(5)
    for _ in range(20):
        x = tuple(GF11.random_element(rng) for _ in range(2))
        ct = encrypt(kp.public, list(x))
        assert decrypt(pirate, ct) == x


def test_attack_rejects_wrong_family():
    # a generic quadratic square system is not mu o (x^3) o lam
    G = PolySystem(
        [P(GF11, 2, (1, (2, 0)), (1, (1, 1))), P(GF11, 2, (1, (0, 2)), (3, (0, 0)))]
    )
    with pytest.raises(AttackFailure):
        attack_square_1local(G, exponent=3)


def test_attack_not_applicable_on_nonsquare_key():
    kp = keygen("nonsquare2", GF11, 2, seed=3)
    with pytest.raises(AttackNotApplicable):
        attack_square_1local(kp.public, exponent=3)


def test_partial_attack_recovers_univariate_row():
    # block family ((x1^3, x2^3 + x1 x2)): first polynomial univariate
    def block(i, n):
        x1 = Polynomial.variable(GF11, n, 2 * i)
        x2 = Polynomial.variable(GF11, n, 2 * i + 1)
        return [x1**3, x2**3 + x1 * x2]

    n = 4
    F = PolySystem(block(0, n) + block(1, n))
    rng = random.Random(101)
    lam = random_invertible(GF11, n, 11)
    mu = random_invertible(GF11, n, 12)
    G = compose_eqs(mu, compose_vars(F, lam))
    report = partial_attack_clocal(G, c=2, hints={"exponent": 3})
    # the lam rows feeding x1 of each block appear with multiplicity 2
    recovered = {
        tuple(f.terms.get(Monomial.var(j, n), GF11.zero()).code for j in range(n))
        for f, mult, conf in report.candidates
        if conf
    }
    expected = set()
    for i in (0, 2):  # rows feeding block-local x1
        row = lam.matrix[i]
        inv = next(c for c in row if c).inverse()
        expected.add(tuple((c * inv).code for c in row))
    assert expected <= recovered


def test_partial_attack_empty_on_generic():
    # fully generic 2-local blocks: no univariate first polynomial, empty
    # report is acceptable
    n = 2
    F = PolySystem(
        [
            P(GF11, 2, (1, (2, 1)), (1, (1, 0))),
            P(GF11, 2, (1, (1, 2)), (1, (0, 1))),
        ]
    )
    lam = random_invertible(GF11, n, 21)
    mu = random_invertible(GF11, n, 22)
    G = compose_eqs(mu, compose_vars(F, lam))
    report = partial_attack_clocal(G, c=2, hints={"exponent": 3})
    assert isinstance(report.candidates, tuple)

    kp = keygen("nonsquare2", GF11, 2, seed=5)
    with pytest.raises(AttackNotApplicable):
        partial_attack_clocal(kp.public, c=2)
