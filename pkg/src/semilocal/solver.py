"""Semi-local instances, brute-force oracles, shape bases, and the two
headline solvers: closed points over the algebraic closure and rational
points over the base field.

A c-local system splits into blocks, block i touching only variables
x_{c(i-1)+1} .. x_{ci}; a c-semi-local system is mu o F o lam for invertible
mu (mixing equations) and lam (mixing variables).  Both solvers work from
the degree-bounded closure of the public system: extract the linear
relations it contains, eliminate, and finish the few remaining variables by
enumeration, exactly as cheap as the last-fall-degree bounds promise.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field as dfield

from . import groebner, linalg
from .closure import (
    ClosureBasis,
    compute_closure,
    last_fall_degree,
    LastFallReport,
    restrict_to_variables,
)
from .field import FieldSpec, FieldElement, UniPoly, embed
from .multipoly import (
    LinearMap,
    Monomial,
    Polynomial,
    PolySystem,
    compose_eqs,
    compose_vars,
    random_invertible,
)

DEFAULT_BUDGET = 1 << 16
EXT_DEGREE_LIMIT = 12


class PreconditionError(ValueError):
    """A solver precondition (radicality, zero-dimensionality) failed or
    could not be verified."""


class BudgetError(RuntimeError):
    """Enumeration or extension-degree budget exceeded."""


class SolverError(RuntimeError):
    """Internal identity violated; indicates a bug, not bad input."""


def ext_spec(base: FieldSpec, n: int) -> FieldSpec:
    """GF(q^n) for q = |base|, deterministic modulus."""
    if n == 1:
        return base
    if n > EXT_DEGREE_LIMIT:
        raise BudgetError(f"extension degree {n} exceeds limit {EXT_DEGREE_LIMIT}")
    try:
        return FieldSpec(base.p, base.m * n)
    except Exception as e:  # q beyond the field-layer cap
        raise BudgetError(f"extension field too large: {e}") from e


def embed_poly(f: Polynomial, sup: FieldSpec) -> Polynomial:
    if f.field is sup:
        return f
    return f.map_coeffs(lambda c: embed(c, sup), sup)


def embed_system(system: PolySystem, sup: FieldSpec) -> PolySystem:
    return PolySystem([embed_poly(f, sup) for f in system])


# -- instances -----------------------------------------------------------------


@dataclass(frozen=True)
class SemiLocalInstance:
    blocks: tuple[PolySystem, ...]
    c: int
    lam: LinearMap
    mu: LinearMap
    G: PolySystem
    lam_seed: int | None = None
    mu_seed: int | None = None

    @property
    def field(self):
        return self.G.field

    @property
    def nvars(self):
        return self.G.nvars


def concat_blocks(blocks, c: int) -> PolySystem:
    """Embed block i (in its own c variables) into window i of n = c*len."""
    n = c * len(blocks)
    out = []
    for i, blk in enumerate(blocks):
        shift = c * i
        for f in blk:
            t = {}
            for m, coeff in f.terms.items():
                exps = [0] * n
                exps[shift : shift + c] = m.exps
                t[Monomial(exps)] = coeff
            g = Polynomial(f.field, n)
            g.terms = t
            out.append(g)
    return PolySystem(out)


def make_instance(
    blocks,
    lam_seed=None,
    mu_seed=None,
    lam: LinearMap | None = None,
    mu: LinearMap | None = None,
) -> SemiLocalInstance:
    """Build mu o F o lam from local blocks; maps are sampled from the seeds
    unless given explicitly."""
    blocks = tuple(blocks)
    if not blocks:
        raise ValueError("no blocks")
    c = blocks[0].nvars
    r = len(blocks[0])
    fld = blocks[0].field
    for blk in blocks:
        if blk.nvars != c or len(blk) != r or blk.field is not fld:
            raise ValueError("inconsistent block shapes")
    n = c * len(blocks)
    m = r * len(blocks)
    if lam is None:
        lam = random_invertible(fld, n, lam_seed if lam_seed is not None else 0)
    if mu is None:
        mu = random_invertible(fld, m, mu_seed if mu_seed is not None else 1)
    if lam.rows != n or lam.cols != n or not lam.is_invertible():
        raise ValueError(f"lam must be invertible {n}x{n}")
    if mu.rows != m or mu.cols != m or not mu.is_invertible():
        raise ValueError(f"mu must be invertible {m}x{m}")
    F = concat_blocks(blocks, c)
    G = compose_eqs(mu, compose_vars(F, lam))
    return SemiLocalInstance(
        blocks=blocks, c=c, lam=lam, mu=mu, G=G, lam_seed=lam_seed, mu_seed=mu_seed
    )


# -- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class SolveReport:
    points: tuple[tuple[FieldElement, ...], ...]
    point_field: FieldSpec
    s: int
    caps: dict
    eliminated: int = 0
    timings: dict = dfield(default_factory=dict)
    flags: tuple[str, ...] = ()
    bound_check: dict | None = None

    def point_codes(self):
        """Hashable canonical form of the zero set."""
        return {tuple(x.code for x in pt) for pt in self.points}


# -- brute-force oracle --------------------------------------------------------


def brute_zero_set(
    system: PolySystem, ext_degree: int = 1, budget: int = DEFAULT_BUDGET
) -> SolveReport:
    """All common zeros with coordinates in GF(q^ext_degree), by exhaustive
    enumeration (univariate systems use root finding instead)."""
    t0 = time.perf_counter()
    K = ext_spec(system.field, ext_degree)
    n = system.nvars
    pts: list[tuple] = []
    if n == 1:
        g = None
        for f in system:
            uf = UniPoly(K, _univariate_coeffs(embed_poly(f, K), 0))
            g = uf if g is None else g.gcd(uf)
        if g is not None and g.is_zero():
            raise PreconditionError("univariate system generates the zero ideal")
        pts = [(r,) for r in g.roots()]
    else:
        if K.q**n > budget:
            raise BudgetError(
                f"enumeration needs {K.q}^{n} evaluations, budget is {budget}"
            )
        emb = embed_system(system, K)
        for codes in itertools.product(range(K.q), repeat=n):
            x = tuple(K.from_code(c) for c in codes)
            if all(f.eval(x).is_zero() for f in emb):
                pts.append(x)
    pts.sort(key=lambda p: tuple(x.code for x in p))
    return SolveReport(
        points=tuple(pts),
        point_field=K,
        s=len(pts),
        caps={"ext_degree": ext_degree},
        timings={"total": time.perf_counter() - t0},
    )


def _univariate_coeffs(f: Polynomial, var: int):
    coeffs = [f.field.zero()] * (max(f.degree, 0) + 1)
    for m, c in f.terms.items():
        if any(e and i != var for i, e in enumerate(m.exps)):
            raise ValueError(f"polynomial is not univariate in x{var + 1}")
        coeffs[m.exps[var]] = c
    return coeffs


# -- block analysis ------------------------------------------------------------


@dataclass(frozen=True)
class BlockInfo:
    points: tuple  # zero set, coordinates in GF(q^ext_degree)
    ext_degree: int
    s: int  # |Z(block)|
    d_f: int  # exact last fall degree of the block
    radical: bool
    rational_count: int  # |Z_k(block)|


def exact_last_fall(
    system: PolySystem, max_cap: int = 40, gb=None
) -> LastFallReport:
    """Raise the cap until the Buchberger oracle certifies the report."""
    if gb is None:
        gb = groebner.buchberger(system)
    cap = max(system.degree, 1, max((g.degree for g in gb), default=0))
    while cap <= max_cap:
        rep = last_fall_degree(system, cap, gb=gb)
        if rep.certified:
            return rep
        cap += max(1, cap // 2)
    return last_fall_degree(system, max_cap, gb=gb)


def analyze_block(
    block: PolySystem, budget: int = DEFAULT_BUDGET
) -> BlockInfo:
    """Zero set, minimal containing extension, exact last fall degree, and
    the radicality verdict for one local block.

    Univariate blocks reduce to the gcd generator: radical iff squarefree.
    Wider blocks are checked through the Groebner oracle: the zero set must
    be as large as the quotient dimension, and the shape system built from
    the points must generate the same ideal.
    """
    fld = block.field
    c = block.nvars
    if c == 1:
        g = None
        for f in block:
            uf = UniPoly(fld, _univariate_coeffs(f, 0))
            g = uf if g is None else g.gcd(uf)
        if g.is_zero():
            raise PreconditionError("block ideal is zero (not zero-dimensional)")
        g = g.monic()
        if g.degree == 0:
            return BlockInfo((), 1, 0, 0, True, 0)
        radical = g.squarefree_part() == g
        degs = g.factor_degrees()
        N = math.lcm(*degs) if degs else 1
        K = ext_spec(fld, N)
        gk = UniPoly(K, [embed(cf, K) for cf in g.coeffs])
        pts = tuple((r,) for r in gk.roots())
        rational = sum(1 for (r,) in pts if _in_base(r, fld))
        dfr = exact_last_fall(block)
        if not dfr.certified:
            raise PreconditionError("block last fall degree not certifiable")
        return BlockInfo(pts, N, len(pts), dfr.d_f, radical, rational)

    gb = groebner.buchberger(block)
    if not groebner.is_zero_dimensional(gb):
        raise PreconditionError("block ideal is not zero-dimensional")
    dim = groebner.quotient_dimension(gb)
    if dim == 0:
        return BlockInfo((), 1, 0, 0, True, 0)
    pts = None
    N = 0
    for cand_N in range(1, EXT_DEGREE_LIMIT + 1):
        try:
            K = ext_spec(fld, cand_N)
        except BudgetError:
            break
        if K.q**c > budget:
            break
        found = brute_zero_set(block, cand_N, budget).points
        if len(found) == dim:
            pts, N = found, cand_N
            break
    if pts is None:
        raise PreconditionError(
            "block radicality unverifiable within budget "
            "(zero set smaller than the quotient dimension)"
        )
    # spec'd oracle check: the shape system from the points generates the
    # same ideal (it always generates the radical)
    K = ext_spec(fld, N)
    shape = shape_basis_from_points(block, pts, K, seed=0)
    gbK = groebner.buchberger(embed_system(block, K))
    for gen in shape.system_polys(c):
        if not groebner.in_ideal(gen, gbK):
            raise PreconditionError("block ideal is not radical")
    dfr = exact_last_fall(block, gb=gb)
    if not dfr.certified:
        raise PreconditionError("block last fall degree not certifiable")
    rational = sum(1 for pt in pts if all(_in_base(x, fld) for x in pt))
    return BlockInfo(tuple(pts), N, len(pts), dfr.d_f, True, rational)


def _in_base(x: FieldElement, base: FieldSpec) -> bool:
    """Is x (living in an extension) fixed by the base-field Frobenius?"""
    if x.field is base:
        return True
    return x.frobenius(base.m) == x


# -- shape bases ---------------------------------------------------------------


@dataclass(frozen=True)
class ShapeBasis:
    t_coeffs: tuple[FieldElement, ...]  # separating linear form over K
    g_n: UniPoly  # degree s, vanishing on the t-values
    g_vars: tuple[UniPoly, ...]  # per-variable interpolants, degree < s
    point_field: FieldSpec

    @property
    def s(self):
        return self.g_n.degree

    def system_polys(self, nvars) -> list[Polynomial]:
        """{g_n(t)} + {x_i - g_i(t)} as multivariate polynomials."""
        K = self.point_field
        t_poly = Polynomial(K, nvars, {
            Monomial.var(i, nvars): a for i, a in enumerate(self.t_coeffs) if a
        })
        out = [_compose_uni(self.g_n, t_poly)]
        for i, gi in enumerate(self.g_vars):
            xi = Polynomial.variable(K, nvars, i)
            out.append(xi - _compose_uni(gi, t_poly))
        return out


def _compose_uni(f: UniPoly, arg: Polynomial) -> Polynomial:
    acc = Polynomial(arg.field, arg.nvars)
    for c in reversed(f.coeffs):
        acc = acc * arg + Polynomial.constant(arg.field, arg.nvars, c)
    return acc


def shape_basis_from_points(
    system: PolySystem, points, K: FieldSpec, seed=0
) -> ShapeBasis:
    """Separating form + interpolants for a known finite zero set.

    Tries plain coordinates first (deterministic), then seeded random forms
    over an extension large enough for Lemma-style separation.
    """
    n = system.nvars
    pts = [tuple(embed(x, K) for x in pt) for pt in points]
    s = len(pts)
    shape_field = K
    if s >= 2 and math.comb(s, 2) >= K.q:
        extra = 2
        while ext_spec(K, extra).q <= math.comb(s, 2):
            extra += 1
        shape_field = ext_spec(K, extra)
        pts = [tuple(embed(x, shape_field) for x in pt) for pt in pts]
    rng = random.Random(seed)
    candidates = []
    for i in range(n):
        coeffs = [shape_field.zero()] * n
        coeffs[i] = shape_field.one()
        candidates.append(tuple(coeffs))
    t_coeffs = None
    tvals = None
    for attempt in range(200):
        if attempt < len(candidates):
            cand = candidates[attempt]
        else:
            cand = tuple(shape_field.random_element(rng) for _ in range(n))
        vals = [sum((a * x for a, x in zip(cand, pt)), shape_field.zero())
                for pt in pts]
        if len({v.code for v in vals}) == s:
            t_coeffs, tvals = cand, vals
            break
    if t_coeffs is None:
        raise PreconditionError("no separating linear form found within budget")
    g_n = UniPoly.from_roots(shape_field, tvals)
    g_vars = tuple(
        _lagrange(shape_field, tvals, [pt[i] for pt in pts]) for i in range(n)
    )
    return ShapeBasis(t_coeffs, g_n, g_vars, shape_field)


def shape_basis(system: PolySystem, seed=0, budget: int = DEFAULT_BUDGET) -> ShapeBasis:
    """Shape basis of a zero-dimensional system: brute-force the zero set,
    pick a separating form, interpolate."""
    info = analyze_block(system, budget)
    if info.s == 0:
        raise PreconditionError("empty zero set has no shape basis")
    K = ext_spec(system.field, info.ext_degree)
    return shape_basis_from_points(system, info.points, K, seed)


def _lagrange(K, xs, ys) -> UniPoly:
    acc = UniPoly.zero(K)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = UniPoly(K, [1])
        denom = K.one()
        for j, xj in enumerate(xs):
            if j != i:
                num = num * UniPoly(K, [-xj, K.one()])
                denom = denom * (xi - xj)
        acc = acc + num * (yi / denom)
    return acc


# -- field equation chains -----------------------------------------------------


def field_equation_chain(nvars: int, spec: FieldSpec) -> PolySystem:
    """The p-power chain replacing the field equations: for each original
    variable, m polynomials in m-1 fresh variables (m = extension degree).

    Variable layout: originals keep indices 0..nvars-1; the chain variables
    for original i sit at nvars + i*(m-1) .. nvars + (i+1)*(m-1) - 1.
    Z(chain) projects bijectively onto k^nvars.
    """
    p, m = spec.p, spec.m
    total = nvars * m
    one = spec.one()
    polys = []
    for i in range(nvars):
        idxs = [i] + [nvars + i * (m - 1) + j for j in range(m - 1)]
        for j in range(m):
            src, dst = idxs[j], idxs[(j + 1) % m]
            t = {}
            e_src = [0] * total
            e_src[src] = p
            t[Monomial(e_src)] = one
            e_dst = Monomial.var(dst, total)
            prev = t.get(e_dst)
            t[e_dst] = (prev - one) if prev is not None else -one
            polys.append(Polynomial(spec, total, t))
    return PolySystem(polys)


# -- elimination helpers ---------------------------------------------------------


def _split_linear_rows(rows, nvars, field):
    """RREF affine rows -> (pivot substitutions, has_unit).

    Each degree-1 row with lead x_v yields x_v = -(tail); a nonzero
    constant row makes the system unsolvable."""
    subs = {}
    has_unit = False
    for row in rows:
        if row.degree == 0:
            has_unit = True
            continue
        lm = row.lead_monomial()
        v = next(i for i, e in enumerate(lm.exps) if e)
        lc = row.terms[lm]
        tail = row - Polynomial(field, nvars, {lm: lc})
        subs[v] = tail * (-lc.inverse())
    return subs, has_unit


def _resolve_substitutions(subs, nvars, field):
    """Back-substitute so every pivot is expressed in free variables only."""
    free = [i for i in range(nvars) if i not in subs]
    images = [None] * nvars
    for i in free:
        images[i] = Polynomial.variable(field, nvars, i)
    remaining = dict(subs)
    guard = 0
    while remaining:
        guard += 1
        if guard > nvars + 2:
            raise SolverError("substitution resolution did not terminate")
        progressed = {}
        for v, expr in remaining.items():
            if all(
                images[i] is not None or i == v
                for m in expr.terms
                for i, e in enumerate(m.exps)
                if e
            ):
                img = expr.substitute(
                    [images[i] if images[i] is not None else
                     Polynomial.variable(field, nvars, i) for i in range(nvars)]
                )
                progressed[v] = img
        if not progressed:
            raise SolverError("cyclic linear substitutions")
        for v, img in progressed.items():
            images[v] = img
            del remaining[v]
    return images, free


# -- the closed-point solver ------------------------------------------------------


def solve_closed(
    inst: SemiLocalInstance,
    c_prime: int | None = None,
    budget: int = DEFAULT_BUDGET,
    check_bound: bool = False,
) -> SolveReport:
    """All points of Z(G) over the algebraic closure.

    Builds the closure of G at the block last-fall cap, eliminates through
    its linear part, re-closes the reduced system, and reads the remaining
    few variables by enumeration over the block compositum field.
    """
    t0 = time.perf_counter()
    infos = [analyze_block(b, budget) for b in inst.blocks]
    for i, info in enumerate(infos):
        if not info.radical:
            raise PreconditionError(f"block {i + 1} ideal is not radical")
    s = math.prod(info.s for info in infos)
    d_max = max(info.d_f for info in infos)
    if c_prime is None:
        c_prime = d_max
    elif c_prime < d_max:
        raise PreconditionError(
            f"c_prime={c_prime} is below a block last fall degree {d_max}"
        )
    fld = inst.field
    n = inst.nvars
    caps = {"c_prime": c_prime, "s": s}
    if s == 0:
        return SolveReport((), fld, 0, caps, timings={"total": time.perf_counter() - t0})

    cap_e = max(c_prime, inst.G.degree, 1)
    caps["closure_cap"] = cap_e
    E = compute_closure(inst.G, cap_e)
    e1 = E.rows_leq_degree(1)
    subs, has_unit = _split_linear_rows(e1, n, fld)
    if has_unit:
        return SolveReport((), fld, 0, caps, timings={"total": time.perf_counter() - t0})
    images, free = _resolve_substitutions(subs, n, fld)
    caps["free_vars"] = len(free)

    N = math.lcm(*(info.ext_degree for info in infos))
    K = ext_spec(fld, N)
    caps["ext_degree"] = N

    if not free:
        # all coordinates pinned by linear relations
        x = [images[i].constant_term() for i in range(n)]
        pts = [tuple(embed(v, K) for v in x)]
    else:
        if K.q ** len(free) > budget:
            raise BudgetError(
                f"reduced system needs {K.q}^{len(free)} evaluations"
            )
        # reduced system in the free variables
        pos = {v: j for j, v in enumerate(free)}
        proj = []
        for i in range(n):
            t = {}
            for m, cc in images[i].terms.items():
                nz = [ix for ix, e in enumerate(m.exps) if e]
                exps = [0] * len(free)
                for ix in nz:
                    exps[pos[ix]] = m.exps[ix]
                t[Monomial(exps)] = cc
            g = Polynomial(fld, len(free))
            g.terms = t
            proj.append(g)
        reduced = [f.substitute(proj) for f in inst.G]
        reduced = [f for f in reduced if f]
        pts = []
        if not reduced:
            raise SolverError("reduced system vanished but free variables remain")
        red_sys = PolySystem(reduced)
        recap = max(red_sys.degree, min(s, 10))
        caps["reclosure_cap"] = recap
        B = compute_closure(red_sys, recap)
        # B spans the reduced system within the cap, so the zero sets agree;
        # evaluate whichever description is smaller
        test_rows = list(B.rows) if 0 < len(B.rows) <= len(red_sys) else list(red_sys)
        test_rows = [embed_poly(f, K) for f in test_rows]
        projK = [embed_poly(proj[i], K) for i in range(n)]
        for codes in itertools.product(range(K.q), repeat=len(free)):
            y = tuple(K.from_code(cd) for cd in codes)
            if all(f.eval(y).is_zero() for f in test_rows):
                full = [projK[i].eval(y) for i in range(n)]
                pts.append(tuple(full))

    embG = embed_system(inst.G, K)
    for pt in pts:
        if not all(f.eval(pt).is_zero() for f in embG):
            raise SolverError("recovered point does not satisfy the system")
    pts = sorted(set(pts), key=lambda p: tuple(x.code for x in p))
    if len(pts) != s:
        raise SolverError(
            f"expected {s} closed points from the block structure, found {len(pts)}"
        )
    bound_check = None
    if check_bound:
        bound = s + c_prime * math.ceil(math.log2(s)) if s > 1 else s
        rep = exact_last_fall(inst.G, max_cap=max(bound, inst.G.degree))
        bound_check = {
            "d_G": rep.d_f,
            "bound": bound,
            "certified": rep.certified,
            "holds": rep.certified and rep.d_f <= bound,
        }
    return SolveReport(
        points=tuple(pts),
        point_field=K,
        s=len(pts),
        caps=caps,
        eliminated=n - len(free),
        timings={"total": time.perf_counter() - t0},
        bound_check=bound_check,
    )


# -- the rational-point solver -----------------------------------------------------


def rational_points(
    system: PolySystem,
    cap: int,
    degree_threshold: int | None = None,
    budget: int = DEFAULT_BUDGET,
    flags: tuple[str, ...] = (),
) -> SolveReport:
    """k-rational zeros of the system via the p-power chain closure.

    Adjoins the chain E', closes to the cap, intersects with the original
    variables, eliminates with the linear part, and enumerates the free
    variables over k.  Sound and complete regardless of the cap: candidate
    points are filtered against the system itself.
    """
    t0 = time.perf_counter()
    fld = system.field
    n = system.nvars
    chain = field_equation_chain(n, fld)
    total = chain.nvars
    extended = PolySystem(list(system.extend(total)) + list(chain))
    cap = max(cap, extended.degree)
    V = compute_closure(extended, cap)
    threshold = cap if degree_threshold is None else min(degree_threshold, cap)
    low = V.rows_leq_degree(threshold)
    U = restrict_to_variables(low, set(range(n)), fld)
    U = [f for f in U if f]
    b1 = [f for f in U if f.degree <= 1]
    caps = {"cap": cap, "chain_vars": total, "b1": len(b1), "b2": len(U)}
    subs, has_unit = _split_linear_rows(
        [_shrink(f, n) for f in b1], n, fld
    )
    if has_unit:
        return SolveReport((), fld, 0, caps, n,
                           {"total": time.perf_counter() - t0}, flags)
    images, free = _resolve_substitutions(subs, n, fld)
    if fld.q ** len(free) > budget:
        raise BudgetError(
            f"rational search needs {fld.q}^{len(free)} evaluations, "
            f"budget is {budget}"
        )
    pts = []
    zero = fld.zero()
    for codes in itertools.product(range(fld.q), repeat=len(free)):
        assign = {v: fld.from_code(cd) for v, cd in zip(free, codes)}
        vals = [assign.get(j, zero) for j in range(n)]
        x = tuple(
            vals[i] if i in assign else images[i].eval(vals) for i in range(n)
        )
        if all(f.eval(x).is_zero() for f in system):
            pts.append(x)
    pts = sorted(set(pts), key=lambda p: tuple(v.code for v in p))
    return SolveReport(
        points=tuple(pts),
        point_field=fld,
        s=len(pts),
        caps=caps,
        eliminated=n - len(free),
        timings={"total": time.perf_counter() - t0},
        flags=flags,
    )


def _shrink(f: Polynomial, nvars: int) -> Polynomial:
    """Drop trailing variables known to carry zero exponents."""
    t = {}
    for m, c in f.terms.items():
        if any(m.exps[nvars:]):
            raise ValueError("polynomial uses variables beyond the target ring")
        t[Monomial(m.exps[:nvars])] = c
    out = Polynomial(f.field, nvars)
    out.terms = t
    return out


# -- instance files --------------------------------------------------------------


def instance_to_dict(inst: SemiLocalInstance) -> dict:
    from . import textio

    return {
        "field": textio.format_field(inst.field),
        "c": inst.c,
        "blocks": [[textio.format_poly(f) for f in blk] for blk in inst.blocks],
        "lam_seed": inst.lam_seed,
        "mu_seed": inst.mu_seed,
        "lam": [[textio.format_element(x) for x in row] for row in inst.lam.matrix],
        "mu": [[textio.format_element(x) for x in row] for row in inst.mu.matrix],
    }


def instance_from_dict(data: dict) -> SemiLocalInstance:
    """Rebuild an instance; explicit matrices are revalidated against their
    seeds when both are present."""
    from . import textio

    fld = textio.parse_field(data["field"])
    c = int(data["c"])
    blocks = [
        PolySystem([textio.parse_poly(s, fld, c) for s in blk])
        for blk in data["blocks"]
    ]
    lam = mu = None
    if "lam" in data:
        lam = LinearMap.invertible(
            fld, [[textio.parse_element(s, fld) for s in row] for row in data["lam"]]
        )
    if "mu" in data:
        mu = LinearMap.invertible(
            fld, [[textio.parse_element(s, fld) for s in row] for row in data["mu"]]
        )
    lam_seed = data.get("lam_seed")
    mu_seed = data.get("mu_seed")
    if lam is not None and lam_seed is not None:
        if random_invertible(fld, lam.rows, lam_seed) != lam:
            raise ValueError("stored lam does not match its seed")
    if mu is not None and mu_seed is not None:
        if random_invertible(fld, mu.rows, mu_seed) != mu:
            raise ValueError("stored mu does not match its seed")
    inst = make_instance(blocks, lam_seed, mu_seed, lam=lam, mu=mu)
    return SemiLocalInstance(
        blocks=tuple(blocks), c=c, lam=inst.lam, mu=inst.mu, G=inst.G,
        lam_seed=lam_seed, mu_seed=mu_seed,
    )


def solve_rational(
    inst: SemiLocalInstance,
    cap: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SolveReport:
    """The k-rational points of Z(G), at the Delta*p chain-closure cap."""
    infos = [analyze_block(b, budget) for b in inst.blocks]
    for i, info in enumerate(infos):
        if not info.radical:
            raise PreconditionError(f"block {i + 1} ideal is not radical")
    fld = inst.field
    delta = max(max(info.s, info.d_f) for info in infos)
    s_max = max(info.s for info in infos)
    s0_bound = math.prod(max(info.rational_count, 1) for info in infos)
    flags = ()
    if s_max >= 2 and math.comb(s_max, 2) >= fld.q:
        flags = ("separating-form-hypothesis-fails",)
    if cap is None:
        cap = delta * fld.p
    rep = rational_points(
        inst.G, cap, degree_threshold=max(s0_bound, 1), budget=budget, flags=flags
    )
    rep.caps.update({"delta": delta, "delta_p": delta * fld.p})
    return rep
