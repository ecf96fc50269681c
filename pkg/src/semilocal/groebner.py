"""Textbook Buchberger engine, used as an independent oracle.

The closure module never derives anything from this code; it only checks
closure bases against the Groebner bases computed here (and vice versa in
the test suite).  Normal selection strategy, first (coprime-lead)
criterion, no sugar.  Desk scale only.
"""

from __future__ import annotations

import itertools

from .multipoly import Monomial, Polynomial, PolySystem


def normal_form(f: Polynomial, basis) -> Polynomial:
    """Remainder of f under multivariate division by basis (every term
    reduced)."""
    basis = [g for g in basis if g]
    lead = [(g.lead_monomial(), g.lead_coeff(), g) for g in basis]
    rem = Polynomial(f.field, f.nvars)
    work = f
    while work:
        lm = work.lead_monomial()
        lc = work.terms[lm]
        for gm, gc, g in lead:
            if gm.divides(lm):
                work = work - g.mul_term(lm / gm, lc / gc)
                break
        else:
            t = Polynomial(f.field, f.nvars, {lm: lc})
            rem = rem + t
            work = work - t
    return rem


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.lead_monomial(), g.lead_monomial()
    l = lf.lcm(lg)
    return f.mul_term(l / lf, f.lead_coeff().inverse()) - g.mul_term(
        l / lg, g.lead_coeff().inverse()
    )


def buchberger(system) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by the system (grevlex).

    Returns [] for the zero ideal and [1] for the unit ideal.
    """
    gens = [f for f in system if f]
    if not gens:
        return []
    basis = []
    for f in gens:
        nf = normal_form(f, basis)
        if nf:
            basis.append(nf.monic())
    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        # normal strategy: smallest lcm of the leading monomials
        i, j = min(
            pairs, key=lambda ij: (basis[ij[0]].lead_monomial().lcm(
                basis[ij[1]].lead_monomial()), ij)
        )
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        li, lj = fi.lead_monomial(), fj.lead_monomial()
        if li.lcm(lj) == li * lj:  # coprime leads: s-poly reduces to zero
            continue
        nf = normal_form(s_polynomial(fi, fj), basis)
        if nf:
            basis.append(nf.monic())
            k = len(basis) - 1
            pairs.update((i2, k) for i2 in range(k))
    return _reduce_basis(basis)


def _reduce_basis(basis) -> list[Polynomial]:
    # minimalize: drop members whose lead is divisible by another lead
    basis = sorted(basis, key=lambda g: g.lead_monomial())
    minimal = []
    for i, g in enumerate(basis):
        lm = g.lead_monomial()
        if any(
            h.lead_monomial().divides(lm) for j, h in enumerate(basis) if j != i
            and (h.lead_monomial() != lm or j < i)
        ):
            continue
        minimal.append(g)
    # inter-reduce tails
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        out.append(normal_form(g, others).monic() if others else g.monic())
    out.sort(key=lambda g: g.lead_monomial(), reverse=True)
    return out


def in_ideal(f: Polynomial, gb) -> bool:
    if not f:
        return True
    if not gb:
        return False
    return normal_form(f, gb).is_zero()


def is_zero_dimensional(gb) -> bool:
    """Every variable must appear as a pure power among the leads."""
    if not gb:
        return False
    nvars = gb[0].nvars
    if any(g.degree == 0 for g in gb):
        return True  # unit ideal, empty variety
    covered = set()
    for g in gb:
        lm = g.lead_monomial()
        nz = [i for i, e in enumerate(lm.exps) if e]
        if len(nz) == 1:
            covered.add(nz[0])
    return len(covered) == nvars


def standard_monomials(gb) -> list[Monomial]:
    """Monomials outside the lead ideal; the quotient dimension for a
    zero-dimensional ideal."""
    if not gb:
        raise ValueError("zero ideal has no finite staircase")
    if any(g.degree == 0 for g in gb):
        return []
    if not is_zero_dimensional(gb):
        raise ValueError("ideal is not zero-dimensional")
    nvars = gb[0].nvars
    leads = [g.lead_monomial() for g in gb]
    # per-variable degree caps from the pure-power leads
    caps = [None] * nvars
    for lm in leads:
        nz = [i for i, e in enumerate(lm.exps) if e]
        if len(nz) == 1:
            i = nz[0]
            caps[i] = lm.exps[i] if caps[i] is None else min(caps[i], lm.exps[i])
    out = []
    for exps in itertools.product(*(range(c) for c in caps)):
        m = Monomial(exps)
        if not any(lm.divides(m) for lm in leads):
            out.append(m)
    return sorted(out)


def quotient_dimension(gb) -> int:
    return len(standard_monomials(gb))


def triangular_normal_form(f: Polynomial, univariate_gens) -> Polynomial:
    """Normal form modulo an ideal generated by one univariate monic
    polynomial per variable (given as coefficient lists over the ambient
    field, index i for variable x_i).

    Reduces deg_{x_i} below deg(gen_i) for every i; the result is zero
    exactly when f lies in the ideal.
    """
    field, nvars = f.field, f.nvars
    gens = []
    for i, coeffs in enumerate(univariate_gens):
        t = {}
        for e, c in enumerate(coeffs):
            if c:
                t[Monomial.var(i, nvars) if e == 1 else Monomial(
                    tuple(e if j == i else 0 for j in range(nvars)))] = c
        gens.append((i, len(coeffs) - 1, Polynomial(field, nvars, t)))
    work = f
    changed = True
    while changed:
        changed = False
        for i, d, g in gens:
            for m in list(work.terms):
                if m.exps[i] >= d:
                    c = work.terms.get(m)
                    if not c:
                        continue
                    shift = Monomial(
                        tuple(e - d if j == i else e for j, e in enumerate(m.exps))
                    )
                    work = work - g.mul_term(shift, c / g.lead_coeff())
                    changed = True
    return work
