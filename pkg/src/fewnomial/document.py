"""JSON input documents.  Rationals are strings ("19/25", "-2") or JSON
integers; anything with a decimal point is refused so that no float leaks
into the exact pipelines."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .polynomial import SignedPolynomial, signed_polynomial

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(value, field: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{field}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ParseError(f"{field}: zero denominator in {value!r}")
            return Fraction(int(m.group(1)), den)
    raise ParseError(f"{field}: {value!r} is not an exact rational (write e.g. \"19/25\")")


@dataclass(frozen=True)
class ConfigDocument:
    name: str
    exponents: tuple[tuple[Fraction, ...], ...]
    coefficients: tuple[Fraction, ...] | None
    heights: tuple[Fraction, ...] | None
    signs: tuple[int, ...] | None

    def polynomial(self, need_coefficients: bool = False) -> SignedPolynomial:
        if self.coefficients is not None:
            c = self.coefficients
        elif self.signs is not None and not need_coefficients:
            c = tuple(Fraction(s) for s in self.signs)
        else:
            raise ParseError("coefficients: required by this command")
        return signed_polynomial(self.exponents, c, self.heights)


def _vector_list(raw, field: str):
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{field}: expected a nonempty list")
    return raw


def document_from_dict(data: dict) -> ConfigDocument:
    if not isinstance(data, dict):
        raise ParseError("document: expected a JSON object")
    unknown = set(data) - {"name", "exponents", "coefficients", "heights", "signs"}
    if unknown:
        raise ParseError(f"document: unknown field(s) {sorted(unknown)}")
    if "exponents" not in data:
        raise ParseError("exponents: missing")
    exps = []
    for i, p in enumerate(_vector_list(data["exponents"], "exponents")):
        if isinstance(p, list):
            exps.append(tuple(parse_rational(x, f"exponents[{i}][{j}]") for j, x in enumerate(p)))
        else:
            exps.append((parse_rational(p, f"exponents[{i}]"),))
    if len({len(p) for p in exps}) != 1:
        raise ParseError("exponents: vectors of different lengths")
    N = len(exps)

    def column(key):
        if data.get(key) is None:
            return None
        raw = _vector_list(data[key], key)
        if len(raw) != N:
            raise ParseError(f"{key}: {len(raw)} entries for {N} exponents")
        return tuple(parse_rational(x, f"{key}[{i}]") for i, x in enumerate(raw))

    coeffs = column("coefficients")
    if coeffs is not None:
        for i, c in enumerate(coeffs):
            if c == 0:
                raise ParseError(f"coefficients[{i}]: must be nonzero")
    heights = column("heights")
    signs = None
    if data.get("signs") is not None:
        raw = _vector_list(data["signs"], "signs")
        if len(raw) != N:
            raise ParseError(f"signs: {len(raw)} entries for {N} exponents")
        table = {"+": 1, "-": -1, "+1": 1, "-1": -1, 1: 1, -1: -1}
        out = []
        for i, s in enumerate(raw):
            if isinstance(s, bool) or not isinstance(s, (str, int)) or s not in table:
                raise ParseError(f"signs[{i}]: expected '+' or '-', got {s!r}")
            out.append(table[s])
        signs = tuple(out)
        if coeffs is not None and any((c > 0) != (s > 0) for c, s in zip(coeffs, signs)):
            raise ParseError("signs: disagree with the coefficients")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    return ConfigDocument(name, tuple(exps), coeffs, heights, signs)


def parse_document(text: str) -> ConfigDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return document_from_dict(data)


def load_document(path) -> ConfigDocument:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from None
    try:
        return parse_document(text)
    except ParseError as e:
        raise ParseError(f"{path}: {e}") from None
