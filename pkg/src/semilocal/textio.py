"""Canonical textual forms with exact round-tripping.

Grammar (whitespace significant only where shown):

    field    := "GF(" p ")" | "GF(" p "^" m "; modulus=[" c0 "," ... "," cm "])"
    element  := INT                      -- prime field, canonical residue
              | "[" INT ("," INT)* "]"   -- extension field, power-basis coeffs
    term     := element ("*" var)*       -- coefficient always present
    var      := "x" INDEX | "x" INDEX "^" EXP     -- INDEX 1-based, EXP >= 2
    poly     := "0" | term (" + " term)*          -- descending grevlex order
    system   := "system " field " vars=" N NEWLINE (poly NEWLINE)+

Printers emit exactly this; parsers accept exactly this.  Printing then
parsing is the identity, bit for bit.
"""

from __future__ import annotations

import re

from .field import FieldSpec, FieldElement
from .multipoly import Monomial, Polynomial, PolySystem


class ParseError(ValueError):
    pass


# -- fields -------------------------------------------------------------------


def format_field(field: FieldSpec) -> str:
    if field.m == 1:
        return f"GF({field.p})"
    mod = ",".join(str(c) for c in field.modulus)
    return f"GF({field.p}^{field.m}; modulus=[{mod}])"


_FIELD_RE = re.compile(
    r"GF\((\d+)(?:\^(\d+); modulus=\[([\d,]+)\])?\)"
)


def parse_field(text: str) -> FieldSpec:
    m = _FIELD_RE.fullmatch(text.strip())
    if not m:
        raise ParseError(f"bad field spec: {text!r}")
    p = int(m.group(1))
    if m.group(2) is None:
        return FieldSpec(p)
    deg = int(m.group(2))
    modulus = tuple(int(c) for c in m.group(3).split(","))
    return FieldSpec(p, deg, modulus)


# -- elements ------------------------------------------------------------------


def format_element(a: FieldElement) -> str:
    if a.field.m == 1:
        return str(a.coeffs[0])
    return "[" + ",".join(str(c) for c in a.coeffs) + "]"


def parse_element(text: str, field: FieldSpec) -> FieldElement:
    text = text.strip()
    if field.m == 1:
        if not text.isdigit():
            raise ParseError(f"bad element: {text!r}")
        v = int(text)
        if v >= field.p:
            raise ParseError(f"element {v} not reduced mod {field.p}")
        return field.element(v)
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"bad element: {text!r}")
    parts = text[1:-1].split(",")
    if len(parts) != field.m or not all(s.isdigit() for s in parts):
        raise ParseError(f"bad element: {text!r}")
    coeffs = [int(s) for s in parts]
    if any(c >= field.p for c in coeffs):
        raise ParseError(f"element {text!r} not reduced mod {field.p}")
    return field.element(coeffs)


# -- polynomials ---------------------------------------------------------------


def format_poly(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for m, c in f.sorted_terms():
        piece = format_element(c)
        for i, e in enumerate(m.exps):
            if e == 1:
                piece += f"*x{i + 1}"
            elif e > 1:
                piece += f"*x{i + 1}^{e}"
        parts.append(piece)
    return " + ".join(parts)


_VAR_RE = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse_poly(text: str, field: FieldSpec, nvars: int) -> Polynomial:
    text = text.strip()
    if text == "0":
        return Polynomial.zero(field, nvars)
    terms = {}
    for term in text.split(" + "):
        factors = term.split("*")
        coeff = parse_element(factors[0], field)
        exps = [0] * nvars
        for v in factors[1:]:
            m = _VAR_RE.fullmatch(v)
            if not m:
                raise ParseError(f"bad variable factor: {v!r}")
            idx = int(m.group(1)) - 1
            if not 0 <= idx < nvars:
                raise ParseError(f"variable x{idx + 1} out of range (vars={nvars})")
            e = int(m.group(2)) if m.group(2) else 1
            if e < 1 or (m.group(2) and e < 2):
                raise ParseError(f"bad exponent in {v!r}")
            if exps[idx]:
                raise ParseError(f"repeated variable in term {term!r}")
            exps[idx] = e
        mono = Monomial(exps)
        if mono in terms:
            raise ParseError(f"repeated monomial in polynomial: {term!r}")
        if not coeff:
            raise ParseError("zero coefficient in canonical form")
        terms[mono] = coeff
    return Polynomial(field, nvars, terms)


# -- systems -------------------------------------------------------------------


def format_system(system: PolySystem) -> str:
    head = f"system {format_field(system.field)} vars={system.nvars}"
    return "\n".join([head] + [format_poly(f) for f in system]) + "\n"


_HEADER_RE = re.compile(r"system (.+) vars=(\d+)")


def parse_system(text: str) -> PolySystem:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty system file")
    m = _HEADER_RE.fullmatch(lines[0].strip())
    if not m:
        raise ParseError(f"bad system header: {lines[0]!r}")
    field = parse_field(m.group(1))
    nvars = int(m.group(2))
    polys = [parse_poly(ln, field, nvars) for ln in lines[1:]]
    if not polys:
        raise ParseError("system has no polynomials")
    return PolySystem(polys)


# -- vectors (plaintext/ciphertext payloads) -----------------------------------


def format_vector(values) -> str:
    return ",".join(format_element(v) for v in values)


def parse_vector(text: str, field: FieldSpec) -> list[FieldElement]:
    if field.m == 1:
        parts = text.strip().split(",")
    else:
        parts = re.findall(r"\[[\d,]*\]", text.strip())
        joined = ",".join(parts)
        if joined != text.strip():
            raise ParseError(f"bad vector: {text!r}")
    return [parse_element(s, field) for s in parts]
