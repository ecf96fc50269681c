"""Sparse multivariate polynomials over a FieldSpec.

Monomials carry one exponent per ambient variable; the single internal
monomial order is graded reverse lexicographic with x1 > x2 > ... > xn.
Polynomials are immutable dicts from Monomial to nonzero coefficient.
"""

from __future__ import annotations

import functools
import random

from . import linalg
from .field import FieldSpec, FieldElement, FieldError


@functools.total_ordering
class Monomial:
    __slots__ = ("exps", "deg", "_hash")

    def __init__(self, exps):
        self.exps = tuple(exps)
        self.deg = sum(self.exps)
        self._hash = hash(self.exps)

    @classmethod
    def one(cls, nvars):
        return cls((0,) * nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls(e)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self.exps == other.exps

    def __lt__(self, other):
        # grevlex: by total degree, then smaller exponent on the last
        # differing variable wins
        if self.deg != other.deg:
            return self.deg < other.deg
        for a, b in zip(reversed(self.exps), reversed(other.exps)):
            if a != b:
                return a > b
        return False

    def __mul__(self, other):
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def divides(self, other):
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __truediv__(self, other):
        return Monomial(tuple(a - b for a, b in zip(self.exps, other.exps)))

    def lcm(self, other):
        return Monomial(tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    def __repr__(self):
        if self.deg == 0:
            return "1"
        return "*".join(
            f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
            for i, e in enumerate(self.exps)
            if e
        )


class Polynomial:
    __slots__ = ("field", "nvars", "terms", "_lead")

    def __init__(self, field: FieldSpec, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        t = {}
        if terms:
            for mono, coeff in terms.items() if isinstance(terms, dict) else terms:
                if len(mono.exps) != nvars:
                    raise ValueError("monomial arity mismatch")
                if coeff:
                    acc = t.get(mono)
                    coeff = acc + coeff if acc is not None else coeff
                    if coeff:
                        t[mono] = coeff
                    elif mono in t:
                        del t[mono]
        self.terms = t
        self._lead = None

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars)

    @classmethod
    def constant(cls, field, nvars, value):
        c = field.element(value)
        if not c:
            return cls(field, nvars)
        return cls(field, nvars, {Monomial.one(nvars): c})

    @classmethod
    def variable(cls, field, nvars, i):
        return cls(field, nvars, {Monomial.var(i, nvars): field.one()})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field is other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.field), frozenset(self.terms.items())))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.deg for m in self.terms)

    def lead_monomial(self) -> Monomial:
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lead = max(self.terms)
        return self._lead

    def lead_coeff(self) -> FieldElement:
        return self.terms[self.lead_monomial()]

    def constant_term(self) -> FieldElement:
        return self.terms.get(Monomial.one(self.nvars), self.field.zero())

    def _require_compatible(self, other):
        if self.field is not other.field or self.nvars != other.nvars:
            raise FieldError("polynomials from different rings")

    def __add__(self, other):
        self._require_compatible(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            acc = t.get(m)
            s = acc + c if acc is not None else c
            if s:
                t[m] = s
            elif m in t:
                del t[m]
        out = Polynomial(self.field, self.nvars)
        out.terms = t
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = Polynomial(self.field, self.nvars)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            if not other:
                return Polynomial(self.field, self.nvars)
            out = Polynomial(self.field, self.nvars)
            out.terms = {m: c * other for m, c in self.terms.items()}
            return out
        self._require_compatible(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                c = c1 * c2
                acc = t.get(m)
                s = acc + c if acc is not None else c
                if s:
                    t[m] = s
                elif m in t:
                    del t[m]
        out = Polynomial(self.field, self.nvars)
        out.terms = t
        return out

    def __pow__(self, e: int):
        out = Polynomial.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mul_term(self, mono: Monomial, coeff: FieldElement) -> "Polynomial":
        out = Polynomial(self.field, self.nvars)
        if coeff:
            out.terms = {m * mono: c * coeff for m, c in self.terms.items()}
        return out

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * self.lead_coeff().inverse()

    def eval(self, point) -> FieldElement:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        acc = self.field.zero()
        # cache per-variable powers across terms
        powers = [{0: self.field.one()} for _ in range(self.nvars)]
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m.exps):
                if e:
                    pw = powers[i].get(e)
                    if pw is None:
                        pw = point[i] ** e
                        powers[i][e] = pw
                    term = term * pw
            acc = acc + term
        return acc

    def substitute(self, images: list["Polynomial"]) -> "Polynomial":
        """Replace variable i by images[i]; images live in a common target
        ring over the same coefficient field."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        tgt_nvars = images[0].nvars if images else self.nvars
        for img in images:
            if img.field is not self.field:
                raise FieldError("substitution images over a different field")
        acc = Polynomial(self.field, tgt_nvars)
        powers = [{} for _ in range(self.nvars)]
        for m, c in self.terms.items():
            term = Polynomial(self.field, tgt_nvars, {Monomial.one(tgt_nvars): c})
            for i, e in enumerate(m.exps):
                if e:
                    pw = powers[i].get(e)
                    if pw is None:
                        pw = images[i] ** e
                        powers[i][e] = pw
                    term = term * pw
            acc = acc + term
        return acc

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative; x^p differentiates to 0 in char p."""
        t = {}
        for m, c in self.terms.items():
            e = m.exps[i]
            if e:
                factor = c * self.field.element(e)
                if factor:
                    t[Monomial(m.exps[:i] + (e - 1,) + m.exps[i + 1 :])] = factor
        out = Polynomial(self.field, self.nvars)
        out.terms = t
        return out

    def is_homogeneous(self) -> bool:
        degs = {m.deg for m in self.terms}
        return len(degs) <= 1

    def extend(self, nvars: int) -> "Polynomial":
        """Same polynomial viewed in a larger ring (new variables appended)."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink ambient ring")
        if nvars == self.nvars:
            return self
        pad = (0,) * (nvars - self.nvars)
        out = Polynomial(self.field, nvars)
        out.terms = {Monomial(m.exps + pad): c for m, c in self.terms.items()}
        return out

    def map_coeffs(self, fn, field: FieldSpec) -> "Polynomial":
        t = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v:
                t[m] = v
        out = Polynomial(field, self.nvars)
        out.terms = t
        return out

    def sorted_terms(self):
        """Terms in descending grevlex order."""
        return sorted(self.terms.items(), key=lambda mc: mc[0], reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if m.deg == 0:
                parts.append(repr(c))
            else:
                parts.append(f"{c!r}*{m!r}")
        return " + ".join(parts)


class PolySystem:
    """Ordered, nonempty tuple of polynomials in one ring."""

    __slots__ = ("field", "nvars", "polys")

    def __init__(self, polys):
        polys = tuple(polys)
        if not polys:
            raise ValueError("empty polynomial system")
        f0 = polys[0]
        for f in polys:
            if f.field is not f0.field or f.nvars != f0.nvars:
                raise FieldError("system members from different rings")
        self.field = f0.field
        self.nvars = f0.nvars
        self.polys = polys

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        return isinstance(other, PolySystem) and self.polys == other.polys

    @property
    def degree(self):
        return max(f.degree for f in self.polys)

    def eval(self, point):
        return [f.eval(point) for f in self.polys]

    def extend(self, nvars):
        return PolySystem([f.extend(nvars) for f in self.polys])

    def __repr__(self):
        return "\n".join(repr(f) for f in self.polys)


class LinearMap:
    """Matrix of field elements acting on variables or equations.

    When constructed via `invertible`, the inverse is computed once and
    kept as the invertibility certificate.
    """

    __slots__ = ("field", "matrix", "inv")

    def __init__(self, field: FieldSpec, matrix, inv=None):
        self.field = field
        self.matrix = tuple(tuple(field.element(c) for c in row) for row in matrix)
        widths = {len(r) for r in self.matrix}
        if len(widths) != 1:
            raise ValueError("ragged matrix")
        self.inv = inv

    @classmethod
    def identity(cls, field, n):
        m = cls(field, linalg.identity(field, n))
        m.inv = m.matrix
        return m

    @classmethod
    def invertible(cls, field, matrix):
        m = cls(field, matrix)
        inv = linalg.inverse([list(r) for r in m.matrix], field)
        if inv is None:
            raise ValueError("matrix is singular")
        m.inv = tuple(tuple(r) for r in inv)
        return m

    @property
    def rows(self):
        return len(self.matrix)

    @property
    def cols(self):
        return len(self.matrix[0])

    def is_invertible(self) -> bool:
        if self.inv is not None:
            return True
        if self.rows != self.cols:
            return False
        inv = linalg.inverse([list(r) for r in self.matrix], self.field)
        if inv is None:
            return False
        self.inv = tuple(tuple(r) for r in inv)
        return True

    def inverse_map(self) -> "LinearMap":
        if not self.is_invertible():
            raise ValueError("map is not invertible")
        return LinearMap(self.field, self.inv, inv=self.matrix)

    def apply(self, vector):
        return linalg.mat_vec([list(r) for r in self.matrix], list(vector))

    def row_form(self, i: int, nvars: int | None = None) -> Polynomial:
        """Row i as the linear form sum_j matrix[i][j] * x_j."""
        nvars = self.cols if nvars is None else nvars
        t = {}
        for j, c in enumerate(self.matrix[i]):
            if c:
                t[Monomial.var(j, nvars)] = c
        return Polynomial(self.field, nvars, t)

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.matrix == other.matrix

    def __matmul__(self, other):
        prod = linalg.mat_mul(
            [list(r) for r in self.matrix], [list(r) for r in other.matrix]
        )
        return LinearMap(self.field, prod)

    def __repr__(self):
        return "[" + "; ".join(
            " ".join(repr(c) for c in row) for row in self.matrix
        ) + "]"


def compose_vars(system: PolySystem, lam: LinearMap) -> PolySystem:
    """F o lambda: substitute x_i by the linear form of lambda's row i."""
    n = system.nvars
    if lam.rows != n or lam.cols != n:
        raise ValueError(f"need a {n}x{n} map, got {lam.rows}x{lam.cols}")
    forms = [lam.row_form(i) for i in range(n)]
    return PolySystem([f.substitute(forms) for f in system])


def compose_eqs(mu: LinearMap, system: PolySystem) -> PolySystem:
    """mu o F: row i of the result is sum_j mu[i][j] * F_j."""
    if mu.cols != len(system):
        raise ValueError(f"need {len(system)} columns, got {mu.cols}")
    out = []
    for i in range(mu.rows):
        acc = Polynomial(system.field, system.nvars)
        for j, f in enumerate(system):
            c = mu.matrix[i][j]
            if c:
                acc = acc + f * c
        out.append(acc)
    return PolySystem(out)


def jacobian(system: PolySystem):
    """m x n matrix of formal partials, entry (i, j) = d F_i / d x_j."""
    return [[f.partial(j) for j in range(system.nvars)] for f in system]


def random_invertible(field: FieldSpec, n: int, seed) -> LinearMap:
    """Uniform-ish invertible matrix by rejection sampling; deterministic
    for a given seed."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    while True:
        rows = [[field.random_element(rng) for _ in range(n)] for _ in range(n)]
        inv = linalg.inverse(rows, field)
        if inv is not None:
            m = LinearMap(field, rows)
            m.inv = tuple(tuple(r) for r in inv)
            return m
