"""
Text forms of the state parameter z.

Accepted forms:
    a           real number, e.g. "0.2"
    a+bi, a-bi  cartesian, e.g. "-0.2-0.1i" ("j" works in place of "i")
    bi          pure imaginary, e.g. "-i" or "0.5i"
    r@deg       polar with the angle in degrees, e.g. "0.2@45"
    inf         the point at infinity
"""

from __future__ import annotations

import math
import re

from src.dynamics.point import ProjectivePoint

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(rf"^[+-]?(?:{_NUMBER})?[ij]?$")
# split before a sign that is not part of an exponent
_TERM_SPLIT = re.compile(r"(?<![eE])(?=[+-])")

_INFINITY_TOKENS = {"inf", "+inf", "infinity", "∞"}


class ComplexParseError(ValueError):
    """Raised for text that is not a complex number; names the offending token."""

    def __init__(self, text: str, token: str, reason: str = "not a number"):
        self.text = text
        self.token = token
        super().__init__(f"Cannot parse {text!r} as a complex number: {reason} in token {token!r}")


def _parse_real(text: str, token: str) -> float:
    try:
        value = float(token)
    except ValueError as e:
        raise ComplexParseError(text, token) from e
    if not math.isfinite(value):
        raise ComplexParseError(text, token, "non-finite value")
    return value


def _parse_cartesian(text: str, body: str) -> complex:
    terms = [t for t in _TERM_SPLIT.split(body) if t]
    if not terms or len(terms) > 2:
        raise ComplexParseError(text, body, "expected at most a real and an imaginary term")

    real, imag = 0.0, 0.0
    seen_real = seen_imag = False
    for term in terms:
        if not _TERM.match(term) or term in ("+", "-"):
            raise ComplexParseError(text, term)
        if term[-1] in "ij":
            if seen_imag:
                raise ComplexParseError(text, term, "second imaginary term")
            coefficient = term[:-1]
            if coefficient in ("", "+", "-"):
                coefficient += "1"
            imag = _parse_real(text, coefficient)
            seen_imag = True
        else:
            if seen_real or seen_imag:
                raise ComplexParseError(text, term, "real term out of place")
            real = _parse_real(text, term)
            seen_real = True
    return complex(real, imag)


def _parse_polar(text: str, body: str) -> complex:
    radius_token, _, angle_token = body.partition("@")
    radius = _parse_real(text, radius_token)
    if radius < 0:
        raise ComplexParseError(text, radius_token, "negative modulus")
    angle = _parse_real(text, angle_token)
    return radius * complex(math.cos(math.radians(angle)), math.sin(math.radians(angle)))


def parse_complex(text: str) -> ProjectivePoint:
    """
    Parse a state parameter written as text.

    Args:
        text: One of the forms listed in the module docstring

    Returns:
        The ProjectivePoint for z

    Raises:
        ComplexParseError: If the text is malformed
    """
    body = text.strip().lower().replace(" ", "")
    if not body:
        raise ComplexParseError(text, text, "empty input")
    if body in _INFINITY_TOKENS:
        return ProjectivePoint.infinity()

    if "@" in body:
        z = _parse_polar(text, body)
    else:
        z = _parse_cartesian(text, body)
    return ProjectivePoint.from_complex(z)


def format_complex(p: ProjectivePoint) -> str:
    """Inverse of parse_complex for display, with 9 significant digits."""
    if p.is_infinite:
        return "inf"
    z = p.z
    if z.imag == 0:
        return f"{z.real:.9g}"
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.9g}{sign}{abs(z.imag):.9g}i"
