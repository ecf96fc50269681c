"""Determinant-of-Jacobian key recovery for square 1-semi-local systems.

For G = mu o F o lam, the chain law gives det J(G) = alpha * (det J(F)) o lam
with alpha constant.  When F = (x_1^d, ..., x_n^d), det J(F) is a monomial
times prod x_i^(d-1), so det J(G) splits into linear forms: the rows of lam
up to scalars and permutation.  Scalars and the permutation are absorbed by
re-solving for mu, and the result is certified by symbolic equality.

Black-box (Kaltofen-style) factorization is out of scope; linear factors are
found by exhaustive trial division over all normalized linear forms, which is
honest about its budget.  det J(G) itself is computed fully symbolically
(minor expansion up to 6x6, fraction-free elimination above); the
circuit-evaluation alternative scales further but is not implemented.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .field import FieldElement, FieldSpec
from .multipoly import (
    LinearMap,
    Monomial,
    Polynomial,
    PolySystem,
    compose_eqs,
    compose_vars,
    jacobian,
)
from .solver import BudgetError

LINEAR_FORM_BUDGET = 10**6


class AttackNotApplicable(Exception):
    """The method does not apply to this input shape (e.g. non-square)."""


class AttackFailure(Exception):
    """The input is square but does not match the assumed block family."""


# -- symbolic determinants -------------------------------------------------------


def det_jacobian(system: PolySystem, method: str | None = None) -> Polynomial:
    """Symbolic determinant of the Jacobian matrix of a square system."""
    n = system.nvars
    if len(system) != n:
        raise AttackNotApplicable(
            f"system is {len(system)}x{n}, determinant-of-Jacobian needs square"
        )
    J = jacobian(system)
    if method is None:
        method = "minor" if n <= 6 else "bareiss"
    if method == "minor":
        return _det_minor(J, system.field, n)
    if method == "bareiss":
        return _det_bareiss(J, system.field, n)
    raise ValueError(f"unknown method {method!r}")


def _det_minor(M, field, n):
    cache = {}

    def rec(row, cols):
        if not cols:
            return Polynomial.constant(field, n, 1)
        key = (row, cols)
        got = cache.get(key)
        if got is not None:
            return got
        acc = Polynomial.zero(field, n)
        sign = field.one()
        for k, col in enumerate(cols):
            entry = M[row][col]
            if entry:
                sub = rec(row + 1, cols[:k] + cols[k + 1 :])
                acc = acc + sub * entry * sign
            sign = -sign
        cache[key] = acc
        return acc

    return rec(0, tuple(range(n)))


def _det_bareiss(M, field, n):
    """Fraction-free elimination; every division is exact in the ring."""
    a = [[M[i][j] for j in range(n)] for i in range(n)]
    sign = field.one()
    prev = Polynomial.constant(field, n, 1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Polynomial.zero(field, n)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                q = poly_div_exact(num, prev)
                if q is None:
                    raise AttackFailure("fraction-free elimination lost exactness")
                a[i][j] = q
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def poly_div_exact(f: Polynomial, g: Polynomial) -> Polynomial | None:
    """f / g when the division is exact, else None."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    q = Polynomial.zero(f.field, f.nvars)
    rem = f
    gl = g.lead_monomial()
    gc = g.lead_coeff()
    while rem:
        lm = rem.lead_monomial()
        if not gl.divides(lm):
            return None
        piece = Polynomial(f.field, f.nvars, {lm / gl: rem.terms[lm] / gc})
        q = q + piece
        rem = rem - g * piece
    return q


# -- exhaustive linear factorization ----------------------------------------------


@dataclass(frozen=True)
class LinearFactorization:
    constant: FieldElement
    factors: tuple[tuple[Polynomial, int], ...]  # (normalized form, multiplicity)
    cofactor: Polynomial  # monic non-linear remainder, unfactored

    def reassemble(self) -> Polynomial:
        nvars = self.cofactor.nvars
        acc = Polynomial.constant(self.cofactor.field, nvars, self.constant)
        for form, mult in self.factors:
            acc = acc * form**mult
        return acc * self.cofactor


def _normalized_linear_forms(field: FieldSpec, nvars: int, homogeneous_only: bool):
    """Affine forms with nonzero homogeneous part, first nonzero variable
    coefficient normalized to 1, in deterministic code order."""
    consts = [field.zero()] if homogeneous_only else list(field.elements())
    for pivot in range(nvars):
        frees = nvars - pivot - 1
        for tail ,const in itertools.product(
            itertools.product(range(field.q), repeat=frees), consts
        ):
            coeffs = [field.zero()] * nvars
            coeffs[pivot] = field.one()
            for k, code in enumerate(tail):
                coeffs[pivot + 1 + k] = field.from_code(code)
            t = {
                Monomial.var(i, nvars): c for i, c in enumerate(coeffs) if c
            }
            if const:
                t[Monomial.one(nvars)] = const
            yield Polynomial(field, nvars, t)


def linear_factors(
    f: Polynomial, budget: int = LINEAR_FORM_BUDGET
) -> LinearFactorization:
    """All linear factors of f by trial division over every normalized form.

    A two-point probe on each form's hyperplane filters non-divisors before
    the exact division; survivors are divided to full multiplicity.  The
    reassembled product is checked against f exactly.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field, nvars = f.field, f.nvars
    nforms = (field.q**nvars - 1) // (field.q - 1)
    if nforms > budget:
        raise BudgetError(
            f"{nforms} normalized forms exceed the trial-division budget {budget}"
        )
    if f.degree == 0:
        return LinearFactorization(
            f.constant_term(), (), Polynomial.constant(field, nvars, 1)
        )
    rem = f
    factors = []
    if f.degree >= 1:
        homog = f.is_homogeneous()
        for form in _normalized_linear_forms(field, nvars, homog):
            if rem.degree < 1:
                break
            if not _probe_divides(rem, form):
                continue
            mult = 0
            while True:
                q = poly_div_exact(rem, form)
                if q is None:
                    break
                rem = q
                mult += 1
            if mult:
                factors.append((form, mult))
    if rem.degree == 0:
        constant = rem.constant_term()
        cofactor = Polynomial.constant(field, nvars, 1)
    else:
        constant = rem.lead_coeff()
        cofactor = rem.monic()
    out = LinearFactorization(constant, tuple(factors), cofactor)
    if out.reassemble() != f:
        raise AssertionError("linear factorization failed to reassemble")
    return out


def _probe_divides(f: Polynomial, form: Polynomial, samples: int = 2) -> bool:
    """Necessary test: f vanishes at sample points of the form's hyperplane."""
    field, nvars = f.field, f.nvars
    lm = form.lead_monomial()
    pivot = next(i for i, e in enumerate(lm.exps) if e)
    inv = form.terms[lm].inverse()
    rng_codes = range(min(field.q, samples + 1))
    count = 0
    for codes in itertools.product(rng_codes, repeat=nvars - 1):
        point = [None] * nvars
        free = [i for i in range(nvars) if i != pivot]
        for i, c in zip(free, codes):
            point[i] = field.from_code(c)
        # solve form(point) = 0 for the pivot coordinate
        acc = form.constant_term()
        for m, c in form.terms.items():
            if m.deg == 1:
                v = next(i for i, e in enumerate(m.exps) if e)
                if v != pivot:
                    acc = acc + c * point[v]
        point[pivot] = -acc * inv
        if not f.eval(point).is_zero():
            return False
        count += 1
        if count >= samples:
            break
    return True


# -- the attacks -------------------------------------------------------------------


@dataclass(frozen=True)
class RecoveredKey:
    lam_candidate: LinearMap
    mu_candidate: LinearMap
    certificate: bool  # mu o F o lam == G, symbolically


@dataclass(frozen=True)
class PartialAttackReport:
    candidates: tuple[tuple[Polynomial, int, bool], ...]  # (form, mult, confident)


def attack_square_1local(
    system: PolySystem, exponent: int = 3, budget: int = LINEAR_FORM_BUDGET
) -> RecoveredKey:
    """Recover an equivalent (lam, mu) for G believed to be
    mu o (x_i^exponent)_i o lam.

    det J(G) = alpha * prod lam_i^(exponent-1): its distinct linear factors
    are the lam rows up to scalars.  Scalars and the row permutation fold
    into mu, which is recovered by coefficient comparison and certified by
    symbolic equality.
    """
    field = system.field
    n = system.nvars
    d = exponent
    if len(system) != n:
        raise AttackNotApplicable("attack needs a square system")
    if d % field.p == 0:
        raise AttackFailure(
            "block derivative vanishes in this characteristic; "
            "the Jacobian determinant is zero"
        )
    det = det_jacobian(system)
    if det.is_zero():
        raise AttackFailure("Jacobian determinant is zero")
    fact = linear_factors(det, budget)
    if (
        len(fact.factors) != n
        or any(mult != d - 1 for _, mult in fact.factors)
        or fact.cofactor.degree != 0
    ):
        raise AttackFailure(
            "determinant multiplicity profile does not match the power family "
            f"(got {[(repr(g), m) for g, m in fact.factors]}, "
            f"cofactor degree {fact.cofactor.degree})"
        )
    forms = sorted(
        (g for g, _ in fact.factors),
        key=lambda g: tuple(
            g.terms.get(Monomial.var(i, n), field.zero()).code for i in range(n)
        ),
    )
    rows = [
        [g.terms.get(Monomial.var(j, n), field.zero()) for j in range(n)]
        for g in forms
    ]
    inv = linalg.inverse(rows, field)
    if inv is None:
        raise AttackFailure("candidate rows are not independent")
    lam_cand = LinearMap(field, rows, inv=tuple(tuple(r) for r in inv))

    powers = [g**d for g in forms]
    monos = sorted({m for g in powers for m in g.terms} | {
        m for f in system for m in f.terms
    })
    A = [[g.terms.get(m, field.zero()) for g in powers] for m in monos]
    mu_rows = []
    for f in system:
        rhs = [f.terms.get(m, field.zero()) for m in monos]
        sol = linalg.solve(A, rhs, field)
        if sol is None:
            raise AttackFailure(
                "coefficient solve for the equation mixer is inconsistent; "
                "input is not in the assumed family"
            )
        mu_rows.append(sol)
    mu_inv = linalg.inverse(mu_rows, field)
    if mu_inv is None:
        raise AttackFailure("recovered equation mixer is singular")
    mu_cand = LinearMap(field, mu_rows, inv=tuple(tuple(r) for r in mu_inv))

    F = PolySystem([Polynomial.variable(field, n, i) ** d for i in range(n)])
    recomposed = compose_eqs(mu_cand, compose_vars(F, lam_cand))
    certificate = tuple(recomposed) == tuple(system)
    return RecoveredKey(lam_cand, mu_cand, certificate)


def partial_attack_clocal(
    system: PolySystem,
    c: int,
    hints: dict | None = None,
    budget: int = LINEAR_FORM_BUDGET,
) -> PartialAttackReport:
    """Partial information for square c-local targets, c > 1.

    When some block's first polynomial is univariate of degree d, its
    derivative contributes a pure power of one lam row to det J(G), so that
    row surfaces as a linear factor of multiplicity d-1.  Candidates are
    reported with a confidence flag; no full recovery is claimed, and an
    empty report is legitimate output for generic blocks.
    """
    if len(system) != system.nvars:
        raise AttackNotApplicable("attack needs a square system")
    d = (hints or {}).get("exponent", 3)
    det = det_jacobian(system)
    if det.is_zero():
        return PartialAttackReport(())
    fact = linear_factors(det, budget)
    out = []
    for form, mult in fact.factors:
        if mult >= d - 1:
            out.append((form, mult, mult == d - 1))
    return PartialAttackReport(tuple(out))
