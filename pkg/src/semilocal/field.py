"""Exact arithmetic in GF(p) and GF(p^m), plus univariate polynomial utilities.

Extension fields use a power-basis representation with an explicitly stored
monic irreducible modulus.  When no modulus is given, it is found by
exhaustive search in deterministic order (lexicographically smallest
coefficient vector), so a (p, m) pair always names the same field and
serialized data is reproducible.

Fields beyond q ~ 2^20 are out of scope; construction refuses them.
"""

from __future__ import annotations

import itertools

Q_LIMIT = 1 << 20


class FieldError(ValueError):
    """Invalid field construction or mixed-field operands."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- dense GF(p) coefficient vectors (little-endian), used for modulus search
# and as the backing arithmetic for extension elements


def _gfp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _gfp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _gfp_trim(out)


def _gfp_mod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i in range(df + 1):
                a[shift + i] = (a[shift + i] - lead * f[i]) % p
        a.pop()
    return _gfp_trim(a)


def _gfp_powmod(base, e, f, p):
    result = [1]
    b = _gfp_mod(base, f, p)
    while e:
        if e & 1:
            result = _gfp_mod(_gfp_mul(result, b, p), f, p)
        b = _gfp_mod(_gfp_mul(b, b, p), f, p)
        e >>= 1
    return result


def _gfp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _gfp_polymod(a, b, p)
    return a


def _gfp_polymod(a, b, p):
    # b not necessarily monic
    inv = pow(b[-1], p - 2, p)
    a = list(a)
    db = len(b) - 1
    while a and len(a) - 1 >= db:
        lead = a[-1]
        if lead:
            q = lead * inv % p
            shift = len(a) - 1 - db
            for i in range(db + 1):
                a[shift + i] = (a[shift + i] - q * b[i]) % p
        a.pop()
    return _gfp_trim(a)


def _gfp_irreducible(f, p):
    """Monic f of degree >= 1 irreducible over GF(p)?"""
    m = len(f) - 1
    if m == 1:
        return True
    # x^(p^m) = x mod f, and no factor of degree dividing a maximal proper divisor
    x = [0, 1]
    if _gfp_trim(list(_gfp_powmod(x, p**m, f, p))) != _gfp_mod(x, f, p):
        return False
    for r in {m // d for d in _prime_divisors(m)}:
        h = _gfp_powmod(x, p**r, f, p)
        diff = [(hi - xi) % p for hi, xi in itertools.zip_longest(h, x, fillvalue=0)]
        if len(_gfp_gcd(f, _gfp_trim(diff), p)) != 1:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def find_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over GF(p), by lex order on
    the low-coefficient vector (c0, ..., c_{m-1})."""
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        if f[0] == 0:
            continue  # divisible by x
        if _gfp_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {m} over GF({p})")  # unreachable


_SPEC_CACHE: dict[tuple, "FieldSpec"] = {}


class FieldSpec:
    """A finite field GF(p^m) with a fixed power-basis modulus."""

    __slots__ = ("p", "m", "q", "modulus", "_zero", "_one")

    def __new__(cls, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if p**m > Q_LIMIT:
            raise FieldError(f"field size {p}^{m} exceeds supported limit 2^20")
        if m == 1:
            modulus = None
        elif modulus is None:
            modulus = find_modulus(p, m)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree m")
            if not _gfp_irreducible(list(modulus), p):
                raise FieldError("modulus is reducible")
        key = (p, m, modulus)
        spec = _SPEC_CACHE.get(key)
        if spec is not None:
            return spec
        spec = super().__new__(cls)
        spec.p = p
        spec.m = m
        spec.q = p**m
        spec.modulus = modulus
        spec._zero = None
        spec._one = None
        _SPEC_CACHE[key] = spec
        return spec

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.m, self.modulus))

    # FieldSpec instances are interned, so identity comparison is exact.

    def element(self, value) -> "FieldElement":
        """Coerce an int (prime subfield) or coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element from a different field")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.m - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.m:
            raise FieldError(f"expected {self.m} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def zero(self) -> "FieldElement":
        if self._zero is None:
            self._zero = FieldElement(self, (0,) * self.m)
        return self._zero

    def one(self) -> "FieldElement":
        if self._one is None:
            self._one = self.element(1)
        return self._one

    def generator(self) -> "FieldElement":
        """The power-basis root of the modulus."""
        if self.m == 1:
            raise FieldError("prime field has no power-basis generator")
        return FieldElement(self, (0, 1) + (0,) * (self.m - 2))

    def from_code(self, code: int) -> "FieldElement":
        """Inverse of FieldElement.code: base-p digits are the coefficients."""
        if not 0 <= code < self.q:
            raise FieldError("code out of range")
        coeffs = []
        for _ in range(self.m):
            coeffs.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        for code in range(self.q):
            yield self.from_code(code)

    def random_element(self, rng) -> "FieldElement":
        return self.from_code(rng.randrange(self.q))


class FieldElement:
    """Immutable element of a FieldSpec, power-basis coefficient vector."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    @property
    def code(self) -> int:
        """Canonical integer code: base-p value of the coefficient vector."""
        c = 0
        for digit in reversed(self.coeffs):
            c = c * self.field.p + digit
        return c

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field is not self.field:
            raise FieldError("operands from different fields")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        if f.m == 1:
            return FieldElement(f, (self.coeffs[0] * other.coeffs[0] % f.p,))
        prod = _gfp_mul(list(self.coeffs), list(other.coeffs), f.p)
        red = _gfp_mod(prod, list(f.modulus), f.p)
        return FieldElement(f, tuple(red) + (0,) * (f.m - len(red)))

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by extended Euclid on the representative."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        f = self.field
        if f.m == 1:
            return FieldElement(f, (pow(self.coeffs[0], f.p - 2, f.p),))
        # extended Euclid: r0 = modulus, r1 = self
        p = f.p
        r0, r1 = list(f.modulus), _gfp_trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q, rem = _gfp_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _gfp_sub(s0, _gfp_mul(q, s1, p), p)
        inv_lead = pow(r0[-1], p - 2, p)
        s = [c * inv_lead % p for c in s0]
        s = _gfp_mod(s, list(f.modulus), p)
        return FieldElement(f, tuple(s) + (0,) * (f.m - len(s)))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, i: int = 1) -> "FieldElement":
        """a^(p^i); the identity when i is a multiple of m."""
        i %= self.field.m
        return self ** (self.field.p**i)

    def __repr__(self):
        if self.field.m == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def _gfp_sub(a, b, p):
    out = [
        (x - y) % p for x, y in itertools.zip_longest(a, b, fillvalue=0)
    ]
    return _gfp_trim(out)


def _gfp_divmod(a, b, p):
    inv = pow(b[-1], p - 2, p)
    a = list(a)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        lead = a[-1]
        shift = len(a) - 1 - db
        if lead:
            qc = lead * inv % p
            q[shift] = qc
            for i in range(db + 1):
                a[shift + i] = (a[shift + i] - qc * b[i]) % p
        a.pop()
    return _gfp_trim(q), _gfp_trim(a)


# -- subfield embeddings -----------------------------------------------------

_EMBED_CACHE: dict[tuple, FieldElement] = {}


def embedding_root(sub: FieldSpec, sup: FieldSpec) -> FieldElement:
    """Deterministic root of sub's defining polynomial inside sup.

    Requires sub.p == sup.p and sub.m | sup.m.  The smallest root by
    canonical code is chosen so the embedding is reproducible.
    """
    if sub.p != sup.p or sup.m % sub.m != 0:
        raise FieldError(f"{sub!r} does not embed in {sup!r}")
    key = (id(sub), id(sup))
    root = _EMBED_CACHE.get(key)
    if root is not None:
        return root
    if sub.m == 1:
        root = sup.one()
    else:
        f = UniPoly(sup, [sup.element(c) for c in sub.modulus])
        rs = f.roots()
        if not rs:
            raise FieldError("embedding root not found")  # cannot happen
        root = min(rs, key=lambda r: r.code)
    _EMBED_CACHE[key] = root
    return root


def embed(a: FieldElement, sup: FieldSpec) -> FieldElement:
    """Image of a under the canonical embedding of its field into sup."""
    if a.field is sup:
        return a
    root = embedding_root(a.field, sup)
    acc = sup.zero()
    power = sup.one()
    for c in a.coeffs:
        if c:
            acc = acc + sup.element(c) * power
        power = power * root
    return acc


# -- univariate polynomials --------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over a FieldSpec, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        cs = [field.element(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def from_roots(cls, field, roots):
        out = cls(field, [1])
        for r in roots:
            out = out * cls(field, [-r, field.one()])
        return out

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __getitem__(self, i):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.field, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.field, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return UniPoly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.field)
        out = [self.field.zero()] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        inv = other.coeffs[-1].inverse()
        q = [self.field.zero()] * max(len(rem) - d, 0)
        while len(rem) - 1 >= d and rem:
            lead = rem[-1]
            if lead:
                qc = lead * inv
                shift = len(rem) - 1 - d
                q[shift] = qc
                for i in range(d + 1):
                    rem[shift + i] = rem[shift + i] - qc * other.coeffs[i]
            rem.pop()
        return UniPoly(self.field, q), UniPoly(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.coeffs[-1] == self.field.one():
            return self
        return self * self.coeffs[-1].inverse()

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd; errors when both inputs are zero."""
        a, b = self, other
        if a.is_zero() and b.is_zero():
            raise ValueError("gcd(0, 0) is undefined")
        while b:
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UniPoly":
        f = self.field
        return UniPoly(
            f, [self.coeffs[i] * f.element(i) for i in range(1, len(self.coeffs))]
        )

    def eval(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def pth_root(self) -> "UniPoly":
        """For f with f' == 0, the g with g^p == f (field is perfect)."""
        p, m = self.field.p, self.field.m
        out = []
        for i in range(0, len(self.coeffs), p):
            out.append(self.coeffs[i].frobenius(m - 1))
        return UniPoly(self.field, out)

    def squarefree_part(self) -> "UniPoly":
        """Monic product of the distinct irreducible factors (the radical)."""
        if self.is_zero():
            raise ValueError("squarefree part of zero polynomial")
        if self.degree <= 0:
            return UniPoly(self.field, [1])
        d = self.derivative()
        if d.is_zero():
            return self.pth_root().squarefree_part()
        g = self.gcd(d)
        if g.degree == 0:
            return self.monic()
        a = (self // g).squarefree_part()
        b = g.squarefree_part()
        return (a * b // a.gcd(b)).monic()

    def distinct_root_count(self) -> int:
        """Number of roots in the algebraic closure."""
        return self.squarefree_part().degree

    def powmod_x(self, e: int) -> "UniPoly":
        """x^e mod self (self nonconstant)."""
        result = UniPoly(self.field, [1])
        base = UniPoly.x(self.field) % self
        while e:
            if e & 1:
                result = result * base % self
            base = base * base % self
            e >>= 1
        return result

    def rational_part(self) -> "UniPoly":
        """Monic product of the roots-in-the-base-field linear factors:
        gcd(f, x^q - x), computed without materializing x^q - x."""
        q = self.field.q
        if self.degree < 1:
            return self.monic() if self.degree == 0 else self
        xq = self.powmod_x(q)
        return self.gcd(xq - (UniPoly.x(self.field) % self))

    def roots(self, rng=None) -> list[FieldElement]:
        """All roots in the coefficient field, ascending by code.

        Exhausts small fields; uses equal-degree splitting of the rational
        part for larger ones (rng only affects internal splitting choices,
        never the sorted result).
        """
        if self.is_zero():
            raise ValueError("roots of zero polynomial")
        F = self.field
        if F.q <= 4096:
            return [x for x in F.elements() if self.eval(x).is_zero()]
        lin = self.rational_part().squarefree_part()
        out = [(-lp[0]) for lp in _split_linear(lin, rng)]
        out.sort(key=lambda e: e.code)
        return out

    def factor_degrees(self) -> list[int]:
        """Degrees of the irreducible factors of the squarefree part,
        by distinct-degree factorization."""
        f = self.squarefree_part()
        F = self.field
        out = []
        h = UniPoly.x(F) % f if f.degree > 0 else UniPoly.zero(F)
        d = 0
        while f.degree > 0:
            d += 1
            if d > f.degree // 2:
                out.append(f.degree)
                break
            h = _poly_powmod(h, F.q, f)
            g = f.gcd(h - (UniPoly.x(F) % f))
            if g.degree > 0:
                out.extend([d] * (g.degree // d))
                f = f // g
                h = h % f
        return sorted(out)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            if i == 0:
                parts.append(repr(c))
            elif i == 1:
                parts.append(f"{c!r}*T")
            else:
                parts.append(f"{c!r}*T^{i}")
        return " + ".join(parts)


def _poly_powmod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    result = UniPoly(mod.field, [1])
    b = base % mod
    while e:
        if e & 1:
            result = result * b % mod
        b = b * b % mod
        e >>= 1
    return result


def _split_linear(f: UniPoly, rng) -> list[UniPoly]:
    """Cantor-Zassenhaus equal-degree split of a squarefree product of
    monic linear factors into the individual factors."""
    import random

    if rng is None:
        rng = random.Random(0xC2)
    F = f.field
    work = [f.monic()]
    done = []
    while work:
        g = work.pop()
        if g.degree <= 1:
            if g.degree == 1:
                done.append(g)
            continue
        a = F.random_element(rng)
        b = F.random_element(rng)
        probe = UniPoly(F, [a, b])  # random linear b*x + a
        if F.p == 2:
            # trace map: probe + probe^2 + ... + probe^(2^(m-1))
            t = probe % g
            acc = t
            for _ in range(F.m - 1):
                t = t * t % g
                acc = (acc + t) % g
            h = g.gcd(acc) if acc else UniPoly(F, [1])
        else:
            e = (F.q - 1) // 2
            pe = _poly_powmod(probe, e, g) - UniPoly(F, [1])
            h = g.gcd(pe) if pe else UniPoly(F, [1])
        if 0 < h.degree < g.degree:
            work.append(h)
            work.append(g // h)
        else:
            work.append(g)
    return done
