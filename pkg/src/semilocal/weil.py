"""Weil descent: re-express polynomials over K = GF(q^n) as systems over
k = GF(q), with the exact semi-locality witness.

For a basis theta of K over k, substituting x_j -> <x_hat_j, theta> and
splitting every K-coefficient into theta-coordinates turns one polynomial
in c variables into n polynomials in c*n variables.  Stacking the Frobenius
conjugates gives the identity

    mu_tilde o hat_F = (F^(sigma^i))_i o lambda

over K, which exhibits the descent system as c-semi-local.  The identity is
checked symbolically whenever a descent is constructed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .field import FieldSpec, FieldElement, embed
from .multipoly import (
    LinearMap,
    Monomial,
    Polynomial,
    PolySystem,
    compose_eqs,
    compose_vars,
)
from .solver import ext_spec, embed_poly, embed_system


class DescentError(RuntimeError):
    """The semi-locality identity failed; indicates a descent bug."""


@dataclass(frozen=True)
class WeilBasis:
    base: FieldSpec
    ext: FieldSpec
    theta: tuple[FieldElement, ...]
    frobenius_matrix: LinearMap  # row i = theta^(sigma^i), over ext
    _decompose_inv: tuple  # inverse of the Moore matrix
    _from_ext: dict  # code of embedded base element -> base element

    @property
    def n(self) -> int:
        return len(self.theta)

    def sigma(self, a: FieldElement, i: int = 1) -> FieldElement:
        """Frobenius of the extension over the base: a^(q^i)."""
        return a.frobenius(self.base.m * i)

    def decompose(self, gamma: FieldElement) -> tuple[FieldElement, ...]:
        """theta-coordinates of gamma, as base-field elements.

        Solves the n x n system against the Frobenius matrix: applying
        sigma^i to sum c_j theta_j = gamma gives one row per conjugate,
        and the unique solution is sigma-fixed, hence lies in k.  Works
        for an arbitrary basis theta.
        """
        rhs = [self.sigma(gamma, i) for i in range(self.n)]
        coords = linalg.mat_vec([list(r) for r in self._decompose_inv], rhs)
        out = []
        for c in coords:
            a = self._from_ext.get(c.code)
            if a is None:
                raise DescentError("theta-coordinate landed outside the base field")
            out.append(a)
        return tuple(out)


def weil_basis(base: FieldSpec, n: int, theta=None) -> WeilBasis:
    """Basis of GF(q^n) over GF(q); defaults to powers of the canonical
    generator, which are independent over every intermediate field."""
    ext = ext_spec(base, n)
    if theta is None:
        if n == 1:
            theta = (ext.one(),)
        else:
            beta = ext.generator()
            theta = tuple(beta**i for i in range(n))
    else:
        theta = tuple(ext.element(t) for t in theta)
        if len(theta) != n:
            raise ValueError(f"need {n} basis elements, got {len(theta)}")
    rows = [
        [t.frobenius(base.m * i) for t in theta] for i in range(n)
    ]
    inv = linalg.inverse(rows, ext)
    if inv is None:
        raise ValueError("theta is not k-linearly independent")
    moore = LinearMap(ext, rows, inv=tuple(tuple(r) for r in inv))
    from_ext = {embed(a, ext).code: a for a in base.elements()}
    return WeilBasis(base, ext, theta, moore, tuple(tuple(r) for r in inv), from_ext)


@dataclass(frozen=True)
class DescentResult:
    basis: WeilBasis
    source: PolySystem  # c polynomials over K
    hat: PolySystem  # c*n polynomials over k in c*n variables
    conjugates: tuple[PolySystem, ...]  # conjugate systems, c-local over K
    lam: LinearMap  # cn x cn over K
    mu_tilde: LinearMap  # cn x cn over K

    @property
    def c(self):
        return self.source.nvars


def _theta_expansion_forms(basis: WeilBasis, c: int, conj: int):
    """Linear forms <theta^(sigma^conj), x_hat_j> in the cn descent
    variables, one per source variable j."""
    ext, n = basis.ext, basis.n
    total = c * n
    forms = []
    for j in range(c):
        t = {}
        for l, th in enumerate(basis.theta):
            coeff = basis.sigma(th, conj)
            if coeff:
                t[Monomial.var(j * n + l, total)] = coeff
        f = Polynomial(ext, total)
        f.terms = t
        forms.append(f)
    return forms


def weil_descent(system: PolySystem, basis: WeilBasis) -> DescentResult:
    """Descend each polynomial (over K, in c variables) to its n components
    over k; the components of f_j occupy positions j*n .. j*n + n - 1."""
    if system.field is not basis.ext:
        raise ValueError("system is not defined over the extension field")
    ext, base, n = basis.ext, basis.base, basis.n
    c = system.nvars
    total = c * n
    forms0 = _theta_expansion_forms(basis, c, 0)
    hat_polys = []
    for f in system:
        expanded = f.substitute(forms0)  # over K in cn variables
        components = [dict() for _ in range(n)]
        for m, gamma in expanded.terms.items():
            for i, coord in enumerate(basis.decompose(gamma)):
                if coord:
                    components[i][m] = coord
        for comp in components:
            g = Polynomial(base, total)
            g.terms = comp
            hat_polys.append(g)
    hat = PolySystem(hat_polys)

    conjugates = tuple(
        PolySystem(
            [f.map_coeffs(lambda cc: basis.sigma(cc, i), ext) for f in system]
        )
        for i in range(n)
    )
    # mu_tilde: row (i, j) selects sum_l theta_l^(sigma^i) * hat_{j,l};
    # it is square of size n * len(system)
    npolys = len(system)
    zero, mt = ext.zero(), []
    for i in range(n):
        for j in range(npolys):
            row = [zero] * (npolys * n)
            for l in range(n):
                row[j * n + l] = basis.sigma(basis.theta[l], i)
            mt.append(row)
    mu_tilde = LinearMap(ext, mt)
    # lam: row (i*c + j) carries <theta^(sigma^i), x_hat_j>
    lm = []
    for i in range(n):
        forms = _theta_expansion_forms(basis, c, i)
        for j in range(c):
            row = [zero] * (c * n)
            for mono, coeff in forms[j].terms.items():
                col = next(ix for ix, e in enumerate(mono.exps) if e)
                row[col] = coeff
            lm.append(row)
    lam = LinearMap(ext, lm)
    result = DescentResult(basis, system, hat, conjugates, lam, mu_tilde)
    ok, _witness = verify_semilocal(result)
    if not ok:
        raise DescentError("mu o hat != (f^sigma^i) o lambda")
    return result


def verify_semilocal(res: DescentResult):
    """Symbolically check mu_tilde o hat == (conjugate blocks) o lambda and
    return the witness maps.  The right side places conjugate i's
    polynomials on variable window i, so it is c-local by construction."""
    basis = res.basis
    ext, n, c = basis.ext, basis.n, res.c
    total = c * n
    hat_ext = embed_system(res.hat, ext)
    lhs = compose_eqs(res.mu_tilde, hat_ext)
    # c-local stack: conjugate i in variables i*c .. i*c + c - 1
    local = []
    for i in range(n):
        for f in res.conjugates[i]:
            t = {}
            for m, cc in f.terms.items():
                exps = [0] * total
                exps[i * c : i * c + c] = m.exps
                t[Monomial(exps)] = cc
            g = Polynomial(ext, total)
            g.terms = t
            local.append(g)
    rhs = compose_vars(PolySystem(local), res.lam)
    if tuple(lhs) != tuple(rhs):
        return False, None
    return True, (res.mu_tilde, res.lam)


def reduce_variable_field_equations(f: Polynomial, q: int) -> Polynomial:
    """Canonical representative of f as a function on k^n, |k| = q: every
    variable exponent e >= 1 is folded to ((e-1) mod (q-1)) + 1 via x^q = x.

    Descent components of a Dembowski-Ostrom polynomial become quadratic
    under this reduction (q-powers act k-linearly); the unreduced descent
    keeps the exact semi-locality identity instead.
    """
    t = {}
    for m, c in f.terms.items():
        folded = Monomial(
            tuple(((e - 1) % (q - 1)) + 1 if e else 0 for e in m.exps)
        )
        acc = t.get(folded)
        s = acc + c if acc is not None else c
        if s:
            t[folded] = s
        elif folded in t:
            del t[folded]
    out = Polynomial(f.field, f.nvars)
    out.terms = t
    return out


def dembowski_ostrom(
    ext: FieldSpec, r: int, seed, base_q: int | None = None
) -> Polynomial:
    """Random extended Dembowski-Ostrom polynomial over the extension:
    sum a_ij x^(q^i + q^j) + sum b_i x^(q^i) + c, exponents over the base
    size q (defaults to the characteristic)."""
    if r < 1:
        raise ValueError("power bound r must be >= 1")
    q = base_q if base_q is not None else ext.p
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    terms = {}
    for i in range(r):
        for j in range(i, r):
            a = ext.random_element(rng)
            if a:
                e = q**i + q**j
                m = Monomial((e,))
                terms[m] = terms.get(m, ext.zero()) + a
    for i in range(r):
        b = ext.random_element(rng)
        if b:
            m = Monomial((q**i,))
            terms[m] = terms.get(m, ext.zero()) + b
    const = ext.random_element(rng)
    if const:
        terms[Monomial((0,))] = terms.get(Monomial((0,)), ext.zero()) + const
    terms = {m: cc for m, cc in terms.items() if cc}
    f = Polynomial(ext, 1)
    f.terms = terms
    return f
