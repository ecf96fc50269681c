"""Degree-bounded ideal closure: V_{F,d}, congruence tests, last fall degree.

V_{F,d} is the smallest vector space containing the degree-<=d members of F
and closed under multiplication by polynomials while the product degree stays
<= d.  Because the internal order (grevlex) is graded, closing under single
variables suffices, and an echelon basis processed level by level reaches the
fixed point with each basis row multiplied out exactly once:

  * any element of the span of an echelon basis only involves rows of degree
    no greater than its own, so products of basis rows cover products of all
    span members within the degree bound;
  * a row inserted at level d with lead degree below d is precisely a fall:
    its lead is not pivoted, so it cannot lie in the span reached by level
    d-1.

Rows are dense coded coefficient vectors indexed by all monomials of degree
<= cap (grevlex-ascending, so lower levels are prefixes); elimination runs on
integer codes through per-field lookup tables and numpy gathers.  Rows are
generated and reduced one at a time; the full Macaulay matrix never exists.

Certification of a last-fall report is delegated to the independent
Buchberger oracle: if every reduced-basis element lies in V_{F,cap}, then any
ideal member of degree e reduces to zero within degree max(e, cap), so no
fall can occur beyond cap.  Closures are never derived from the oracle.

The coded tables limit this engine to q <= 2048 (plenty for desk scale; the
field layer itself goes to 2^20).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import groebner
from .field import FieldSpec
from .multipoly import Monomial, Polynomial, PolySystem
from . import linalg

CODED_Q_LIMIT = 2048


class ClosureCapacityError(ValueError):
    """Field or degree range beyond what the coded engine supports."""


# -- coded field tables --------------------------------------------------------

_CODED_CACHE: dict[int, "CodedField"] = {}


class CodedField:
    """Lookup-table arithmetic on canonical element codes 0..q-1."""

    def __init__(self, field: FieldSpec):
        if field.q > CODED_Q_LIMIT:
            raise ClosureCapacityError(
                f"closure engine supports q <= {CODED_Q_LIMIT}, got {field.q}"
            )
        self.field = field
        q, p, m = field.q, field.p, field.m
        self.dtype = np.uint8 if q <= 256 else np.uint16
        if m == 1:
            base = np.arange(q, dtype=np.int64)
            add = (base[:, None] + base[None, :]) % p
            mul = (base[:, None] * base[None, :]) % p
            neg = (-base) % p
        else:
            # coefficient matrix: row i = base-p digits of code i
            digits = np.zeros((q, m), dtype=np.int64)
            tmp = np.arange(q, dtype=np.int64)
            for j in range(m):
                digits[:, j] = tmp % p
                tmp //= p
            weights = p ** np.arange(m, dtype=np.int64)
            add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
            neg = ((-digits) % p) @ weights
            # reduction table: x^k mod modulus as a coefficient vector
            red = np.zeros((2 * m - 1, m), dtype=np.int64)
            for j in range(m):
                red[j, j] = 1
            modlow = np.array(field.modulus[:m], dtype=np.int64)
            for k in range(m, 2 * m - 1):
                shifted = np.zeros(m, dtype=np.int64)
                prev = red[k - 1]
                shifted[1:] = prev[: m - 1]
                shifted = (shifted - prev[m - 1] * modlow) % p
                red[k] = shifted
            conv = np.zeros((q, q, m), dtype=np.int64)
            for a in range(m):
                for b in range(m):
                    conv += (
                        digits[:, None, a, None]
                        * digits[None, :, b, None]
                        * red[a + b][None, None, :]
                    )
            mul = (conv % p) @ weights
        self.add = add.astype(self.dtype)
        self.mul = mul.astype(self.dtype)
        self.neg = neg.astype(self.dtype)
        inv = np.zeros(q, dtype=self.dtype)
        for c in range(1, q):
            inv[c] = field.from_code(c).inverse().code
        self.inv = inv

    def encode(self, elem) -> int:
        return elem.code

    def decode(self, code: int):
        return self.field.from_code(int(code))


def coded_field(field: FieldSpec) -> CodedField:
    cf = _CODED_CACHE.get(id(field))
    if cf is None:
        cf = CodedField(field)
        _CODED_CACHE[id(field)] = cf
    return cf


# -- monomial indexing ---------------------------------------------------------


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _monomials_leq(nvars, cap):
    def gen(k, remaining):
        if k == 0:
            yield ()
            return
        for e in range(remaining + 1):
            for rest in gen(k - 1, remaining - e):
                yield (e,) + rest

    return sorted(gen(nvars, cap), key=_grevlex_key)


_INDEX_CACHE: dict[tuple[int, int], "MonomialIndex"] = {}


class MonomialIndex:
    """Grevlex-ascending index of the monomials of degree <= cap."""

    def __init__(self, nvars: int, cap: int):
        self.nvars = nvars
        self.cap = cap
        self.exps = _monomials_leq(nvars, cap)
        self.index = {e: i for i, e in enumerate(self.exps)}
        self.degree = np.array([sum(e) for e in self.exps], dtype=np.int32)
        self.size = len(self.exps)
        self._mult = {}

    def count_leq(self, d: int) -> int:
        """Monomials of degree <= d occupy the index prefix [0, count)."""
        return int(np.searchsorted(self.degree, d + 1))

    def mult_table(self, var: int) -> np.ndarray:
        """Column map for multiplication by x_var (valid below the cap)."""
        t = self._mult.get(var)
        if t is None:
            t = np.full(self.size, -1, dtype=np.int64)
            for i, e in enumerate(self.exps):
                if sum(e) < self.cap:
                    bumped = e[:var] + (e[var] + 1,) + e[var + 1 :]
                    t[i] = self.index[bumped]
            self._mult[var] = t
        return t


def monomial_index(nvars: int, cap: int) -> MonomialIndex:
    key = (nvars, cap)
    idx = _INDEX_CACHE.get(key)
    if idx is None:
        if cap < 0:
            raise ValueError("negative degree cap")
        idx = MonomialIndex(nvars, cap)
        _INDEX_CACHE[key] = idx
    return idx


# -- the engine ------------------------------------------------------------------


class ClosureEngine:
    def __init__(self, system: PolySystem, cap: int):
        self.system = system
        self.cap = cap
        self.cf = coded_field(system.field)
        self.idx = monomial_index(system.nvars, cap)
        self.rows: list[np.ndarray] = []
        self.row_deg: list[int] = []
        self.pivots: dict[int, int] = {}
        self.level = -1
        self.falls: list[int] = []
        self._pending: dict[int, list[int]] = {}
        self._seeds: dict[int, list[np.ndarray]] = {}
        for f in system:
            if f.is_zero() or f.degree > cap:
                continue
            self._seeds.setdefault(f.degree, []).append(self._encode(f))

    def _encode(self, f: Polynomial) -> np.ndarray:
        vec = np.zeros(self.idx.size, dtype=self.cf.dtype)
        for m, c in f.terms.items():
            vec[self.idx.index[m.exps]] = c.code
        return vec

    def _decode(self, vec: np.ndarray) -> Polynomial:
        t = {}
        for col in np.nonzero(vec)[0]:
            t[Monomial(self.idx.exps[col])] = self.cf.decode(vec[col])
        out = Polynomial(self.system.field, self.system.nvars)
        out.terms = t
        return out

    def _reduce_lead(self, vec: np.ndarray):
        """Cancel pivoted leads; returns (vec, lead) or None when zero."""
        cf = self.cf
        while True:
            nz = np.nonzero(vec)[0]
            if nz.size == 0:
                return None
            lead = int(nz[-1])
            at = self.pivots.get(lead)
            if at is None:
                return vec, lead
            factor = cf.neg[vec[lead]]
            vec = cf.add[vec, cf.mul[factor][self.rows[at]]]

    def _insert(self, vec: np.ndarray, level: int):
        reduced = self._reduce_lead(vec)
        if reduced is None:
            return None
        vec, lead = reduced
        vec = self.cf.mul[self.cf.inv[vec[lead]]][vec]
        pos = len(self.rows)
        self.rows.append(vec)
        deg = int(self.idx.degree[lead])
        self.row_deg.append(deg)
        self.pivots[lead] = pos
        if deg < level and (not self.falls or self.falls[-1] != level):
            self.falls.append(level)
        return pos

    def _route(self, pos: int, lvl: int, work):
        """Queue a new row for multiplication at the level allowing it."""
        ndeg = self.row_deg[pos]
        if ndeg >= self.cap:
            return  # products would exceed the cap; never multiplied
        if ndeg + 1 <= lvl:
            work.append(pos)
        else:
            self._pending.setdefault(ndeg + 1, []).append(pos)

    def advance_to(self, d: int):
        if d > self.cap:
            raise ValueError("cannot advance beyond the construction cap")
        cf, idx = self.cf, self.idx
        while self.level < d:
            self.level += 1
            lvl = self.level
            work = deque(self._pending.pop(lvl, []))
            for vec in self._seeds.pop(lvl, ()):  # seeds of this degree
                pos = self._insert(vec.copy(), lvl)
                if pos is not None:
                    self._route(pos, lvl, work)
            while work:
                pos = work.popleft()
                row = self.rows[pos]
                support = np.nonzero(row)[0]
                for var in range(idx.nvars):
                    cand = np.zeros(idx.size, dtype=cf.dtype)
                    cand[idx.mult_table(var)[support]] = row[support]
                    new = self._insert(cand, lvl)
                    if new is not None:
                        self._route(new, lvl, work)
        return self

    def rank(self) -> int:
        return len(self.rows)

    def membership_reduce(self, vec: np.ndarray):
        """Full normal form against the current rows: eliminates every
        pivoted monomial, leaving support only on non-pivot columns."""
        cf = self.cf
        for col in sorted(self.pivots, reverse=True):
            c = vec[col]
            if c:
                vec = cf.add[vec, cf.mul[cf.neg[c]][self.rows[self.pivots[col]]]]
        return vec


# -- public types and operations -------------------------------------------------


@dataclass(frozen=True)
class ClosureBasis:
    """Row-reduced basis of V_{F,d} (rows descending by leading monomial)."""

    system: PolySystem
    degree_bound: int
    rows: tuple[Polynomial, ...]
    falls_observed: tuple[int, ...]
    _engine: ClosureEngine

    def __len__(self):
        return len(self.rows)

    def rows_leq_degree(self, t: int) -> list[Polynomial]:
        """Basis of V_{F,d} intersected with the polynomials of degree <= t
        (valid because the basis is echelon for a graded order)."""
        return [f for f in self.rows if f.degree <= t]


@dataclass(frozen=True)
class LastFallReport:
    d_f: int
    fall_degrees: tuple[int, ...]
    cap: int
    certified: bool

    def summary(self) -> str:
        return f"d_F={self.d_f} certified={str(self.certified).lower()}"


def compute_closure(system: PolySystem, d: int) -> ClosureBasis:
    """Fixed point of seeding with the degree-<=d members of F and adjoining
    x_j * g while the degree stays within d, row-reducing throughout."""
    if d < 0:
        raise ValueError("degree bound must be >= 0")
    eng = ClosureEngine(system, d)
    eng.advance_to(d)
    # normalize to reduced row echelon: fully reduce each row's tail
    order = sorted(eng.pivots, reverse=True)
    for col in order:
        at = eng.pivots[col]
        tail = eng.rows[at].copy()
        tail[col] = 0
        tail = eng.membership_reduce(tail)
        tail[col] = 1
        eng.rows[at] = tail
    polys = [eng._decode(eng.rows[eng.pivots[c]]) for c in order]
    return ClosureBasis(system, d, tuple(polys), tuple(eng.falls), eng)


def reduce_mod(f: Polynomial, basis: ClosureBasis) -> Polynomial:
    """Unique normal form of f modulo the row space; zero iff f lies in
    V_{F,d}.  Errors when deg f exceeds the basis bound."""
    if f.degree > basis.degree_bound:
        raise ValueError(
            f"degree {f.degree} exceeds closure bound {basis.degree_bound}"
        )
    eng = basis._engine
    vec = eng._encode(f)
    return eng._decode(eng.membership_reduce(vec))


def linear_subspace(basis: ClosureBasis) -> list[Polynomial]:
    """Basis of the polynomials of degree <= 1 inside the closure."""
    return basis.rows_leq_degree(1)


def last_fall_degree(
    system: PolySystem, cap: int, certify: bool = True, gb=None
) -> LastFallReport:
    """Falls for d = 0..cap; certified when the independent Buchberger basis
    lies inside V_{F,cap}, which rules out falls beyond the cap.

    A precomputed Groebner basis may be passed to avoid recomputation when
    probing several caps."""
    if cap < system.degree:
        raise ValueError("cap must be at least deg F")
    eng = ClosureEngine(system, cap)
    eng.advance_to(cap)
    certified = False
    if certify:
        if gb is None:
            gb = groebner.buchberger(system)
        certified = all(
            g.degree <= cap
            and not np.any(eng.membership_reduce(eng._encode(g)))
            for g in gb
        )
    falls = tuple(eng.falls)
    return LastFallReport(
        d_f=max(falls, default=0),
        fall_degrees=falls,
        cap=cap,
        certified=certified,
    )


def restrict_to_variables(
    polys: list[Polynomial], allowed: set[int], field: FieldSpec
):
    """Basis of span(polys) intersected with the subring on the allowed
    variables: eliminate with pivot priority on the excluded monomials,
    then keep the rows supported entirely inside the subring."""
    if not polys:
        return []
    nvars = polys[0].nvars
    universe = set()
    for f in polys:
        universe.update(f.terms)
    pure = [m for m in universe if all(
        e == 0 for i, e in enumerate(m.exps) if i not in allowed)]
    pure_set = set(pure)
    mixed = [m for m in universe if m not in pure_set]
    cols = sorted(mixed, reverse=True) + sorted(pure, reverse=True)
    col_of = {m: i for i, m in enumerate(cols)}
    matrix = []
    for f in polys:
        row = [field.zero()] * len(cols)
        for m, c in f.terms.items():
            row[col_of[m]] = c
        matrix.append(row)
    red, _pivots = linalg.rref(matrix, field)
    cut = len(mixed)
    out = []
    for row in red:
        if any(row[:cut]):
            continue
        t = {cols[i]: c for i, c in enumerate(row) if c}
        g = Polynomial(field, nvars)
        g.terms = t
        out.append(g)
    return out
