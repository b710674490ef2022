"""Entities and probability maps as JSON objects keyed by feature name.

Probabilities may be JSON numbers or strings ``"a/b"`` / ``"0.25"``; JSON
floats are read as exact decimals, never through binary floating point.
"""
from __future__ import annotations

import json
from fractions import Fraction

from ..errors import (BadRational, CircuitSyntaxError, DuplicateId, ExtraFeature, InvalidProbability,
                      MissingFeature, ValueOutOfRange)


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _key_position(text, key):
    at = text.find(json.dumps(key))
    return _position(text, at) if at >= 0 else (1, 1)


def _bad_constant(name):
    raise ValueError(f"non-finite number {name}")


def _load(text, features):
    def pairs(items):
        seen = {}
        for k, v in items:
            if k in seen:
                raise DuplicateId(f"key {k!r} repeated", *_key_position(text, k))
            seen[k] = v
        return seen

    try:
        obj = json.loads(text, parse_float=Fraction, parse_constant=_bad_constant,
                         object_pairs_hook=pairs)
    except json.JSONDecodeError as exc:
        raise CircuitSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        if isinstance(exc, DuplicateId):
            raise
        raise BadRational(str(exc), 1, 1) from None
    if not isinstance(obj, dict):
        raise CircuitSyntaxError("expected a JSON object", 1, 1)
    for k in obj:
        if k not in features:
            raise ExtraFeature(f"{k!r} is not a feature of the circuit", *_key_position(text, k))
    for f in features:
        if f not in obj:
            raise MissingFeature(f"no value for feature {f!r}",
                                 *_position(text, max(text.rfind("}"), 0)))
    return obj


def parse_entity(text: str, features) -> dict:
    obj = _load(text, features)
    out = {}
    for f in features:
        v = obj[f]
        if isinstance(v, str) and v.strip() in ("0", "1"):
            v = int(v)
        if isinstance(v, bool) or v not in (0, 1):
            raise ValueOutOfRange(f"entity value for {f!r} must be 0 or 1, got {v!r}",
                                  *_key_position(text, f))
        out[f] = int(v)
    return out


def parse_rational(value) -> Fraction:
    """Exact rational from an int, a Fraction, or a string ``a/b`` / finite decimal."""
    if isinstance(value, bool):
        raise BadRational(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise BadRational(f"not a rational: {value!r}")


def parse_probmap(text: str, features) -> dict:
    obj = _load(text, features)
    out = {}
    for f in features:
        try:
            q = parse_rational(obj[f])
        except BadRational as exc:
            raise BadRational(exc.message, *_key_position(text, f)) from None
        if not 0 <= q <= 1:
            raise InvalidProbability(f"p({f}) = {q} is outside [0, 1]", *_key_position(text, f))
        out[f] = q
    return out
