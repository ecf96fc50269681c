"""Public-key encryption from semi-local systems: the square 1-local
scheme built on univariate power permutations, and the non-square 2-local
countermeasure that adds one redundancy polynomial per block.

Not a production cryptosystem: no padding, no CCA transform, no
constant-time arithmetic.  The point is the algebraic structure.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from . import textio
from .field import FieldSpec, FieldElement
from .multipoly import (
    LinearMap,
    Monomial,
    Polynomial,
    PolySystem,
    compose_eqs,
    compose_vars,
    random_invertible,
)
from .solver import concat_blocks

SCHEMES = ("square1", "nonsquare2")


class SchemeError(ValueError):
    """Invalid scheme parameters (e.g. the power map is not a permutation)."""


class DecryptionError(Exception):
    """Ciphertext rejected.  Constant shape: no partial plaintext leaks."""

    def __init__(self):
        super().__init__("invalid ciphertext")


@dataclass(frozen=True)
class KeyPair:
    scheme: str
    field: FieldSpec
    n: int
    exponent: int
    lam: LinearMap
    mu: LinearMap
    public: PolySystem
    seed: int | None = None

    @property
    def m(self) -> int:
        return len(self.public)

    def fingerprint(self) -> str:
        return public_fingerprint(self.public)


@dataclass(frozen=True)
class Ciphertext:
    values: tuple[FieldElement, ...]
    fingerprint: str


def public_fingerprint(public: PolySystem) -> str:
    return hashlib.sha256(textio.format_system(public).encode()).hexdigest()[:16]


def scheme_blocks(scheme: str, field: FieldSpec, n: int, exponent: int):
    """The local blocks, in their own c variables."""
    e = exponent
    if scheme == "square1":
        x = Polynomial.variable(field, 1, 0)
        return [PolySystem([x**e]) for _ in range(n)]
    if scheme == "nonsquare2":
        x1 = Polynomial.variable(field, 2, 0)
        x2 = Polynomial.variable(field, 2, 1)
        h = x1 * x1 * x2 + x1 * x2 * x2
        return [PolySystem([x1**e, x2**e, h]) for _ in range(n // 2)]
    raise SchemeError(f"unknown scheme {scheme!r}")


def keygen(
    scheme: str, field: FieldSpec, n: int, seed: int, exponent: int = 3
) -> KeyPair:
    """Deterministic keypair from the seed.

    square1: n power blocks x_i^e, maps in Gl_n; the exponent must be
    coprime to q-1 so each block permutes k.  nonsquare2: n even, one
    (x1^e, x2^e, x1^2 x2 + x1 x2^2) block per variable pair, mu in
    Gl_{3n/2}.
    """
    if scheme not in SCHEMES:
        raise SchemeError(f"unknown scheme {scheme!r}")
    if exponent < 2:
        raise SchemeError("exponent must be at least 2")
    if math.gcd(exponent, field.q - 1) != 1:
        raise SchemeError(
            f"exponent {exponent} divides out of |k*| = {field.q - 1}: "
            "the power map is not a permutation"
        )
    if scheme == "nonsquare2":
        if n % 2:
            raise SchemeError("nonsquare2 needs an even number of variables")
        if exponent != 3:
            raise SchemeError("nonsquare2 uses the fixed cubic block")
    if n < 1:
        raise SchemeError("n must be positive")
    blocks = scheme_blocks(scheme, field, n, exponent)
    m = sum(len(b) for b in blocks)
    rng = random.Random(seed)
    lam = random_invertible(field, n, random.Random(rng.randrange(2**63)))
    mu = random_invertible(field, m, random.Random(rng.randrange(2**63)))
    c = 1 if scheme == "square1" else 2
    F = concat_blocks(blocks, c)
    public = compose_eqs(mu, compose_vars(F, lam))
    return KeyPair(scheme, field, n, exponent, lam, mu, public, seed)


def encrypt(public: PolySystem, x) -> Ciphertext:
    """y = G(x) for a plaintext vector over k."""
    if len(x) != public.nvars:
        raise ValueError(f"plaintext length {len(x)} != {public.nvars}")
    x = [public.field.element(v) for v in x]
    return Ciphertext(tuple(public.eval(x)), public_fingerprint(public))


def decrypt(kp: KeyPair, ct: Ciphertext) -> tuple[FieldElement, ...]:
    """Invert block by block; reject when the redundancy check fails."""
    if ct.fingerprint != kp.fingerprint():
        raise ValueError("ciphertext was produced under a different public key")
    if len(ct.values) != kp.m:
        raise ValueError("ciphertext length mismatch")
    w = kp.mu.inverse_map().apply(list(ct.values))
    e_inv = pow(kp.exponent, -1, kp.field.q - 1)
    z = []
    if kp.scheme == "square1":
        z = [wi**e_inv for wi in w]
    else:
        for b in range(kp.n // 2):
            w1, w2, w3 = w[3 * b : 3 * b + 3]
            z1 = w1**e_inv
            z2 = w2**e_inv
            if z1 * z1 * z2 + z1 * z2 * z2 != w3:
                raise DecryptionError()
            z.extend([z1, z2])
    return tuple(kp.lam.inverse_map().apply(z))


# -- serialization ---------------------------------------------------------------


def _matrix_strings(m: LinearMap):
    return [[textio.format_element(c) for c in row] for row in m.matrix]


def _matrix_from_strings(rows, field):
    return LinearMap.invertible(
        field, [[textio.parse_element(s, field) for s in row] for row in rows]
    )


def key_to_dict(kp: KeyPair) -> dict:
    return {
        "scheme": kp.scheme,
        "field": textio.format_field(kp.field),
        "n": kp.n,
        "exponent": kp.exponent,
        "seed": kp.seed,
        "lam": _matrix_strings(kp.lam),
        "mu": _matrix_strings(kp.mu),
        "public": textio.format_system(kp.public),
    }


def key_from_dict(data: dict) -> KeyPair:
    field = textio.parse_field(data["field"])
    lam = _matrix_from_strings(data["lam"], field)
    mu = _matrix_from_strings(data["mu"], field)
    kp = KeyPair(
        scheme=data["scheme"],
        field=field,
        n=int(data["n"]),
        exponent=int(data["exponent"]),
        lam=lam,
        mu=mu,
        public=textio.parse_system(data["public"]),
        seed=data.get("seed"),
    )
    if kp.seed is not None:
        regen = keygen(kp.scheme, field, kp.n, kp.seed, kp.exponent)
        if regen.lam != lam or regen.mu != mu or regen.public != kp.public:
            raise SchemeError("stored key material does not match its seed")
    blocks = scheme_blocks(kp.scheme, field, kp.n, kp.exponent)
    c = 1 if kp.scheme == "square1" else 2
    expected = compose_eqs(mu, compose_vars(concat_blocks(blocks, c), lam))
    if expected != kp.public:
        raise SchemeError("public system does not match the secret maps")
    return kp


def public_to_text(kp_or_system) -> str:
    system = kp_or_system.public if isinstance(kp_or_system, KeyPair) else kp_or_system
    return textio.format_system(system)


def ciphertext_to_dict(ct: Ciphertext, field: FieldSpec) -> dict:
    return {
        "values": textio.format_vector(ct.values),
        "field": textio.format_field(field),
        "fingerprint": ct.fingerprint,
    }


def ciphertext_from_dict(data: dict) -> Ciphertext:
    field = textio.parse_field(data["field"])
    return Ciphertext(
        tuple(textio.parse_vector(data["values"], field)), data["fingerprint"]
    )
