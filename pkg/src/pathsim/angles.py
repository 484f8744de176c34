"""Phase angles: plain floats or exact rational multiples of pi.

Exact multiples are carried as :class:`PiMultiple` so that ``e^{i angle}``
at quarter turns comes out as an exact ``1, i, -1, -i`` instead of picking
up ~1e-16 residue from ``cos(pi)``/``sin(pi)``.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True, order=True)
class PiMultiple:
    """The angle ``coeff * pi`` with a rational coefficient."""

    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    def __float__(self) -> float:
        return float(self.coeff) * math.pi

    def __neg__(self) -> PiMultiple:
        return PiMultiple(-self.coeff)

    def __add__(self, other):
        if isinstance(other, PiMultiple):
            return PiMultiple(self.coeff + other.coeff)
        return float(self) + float(other)

    __radd__ = __add__

    def __str__(self) -> str:
        return format_angle(self)


Angle = Union[float, int, PiMultiple]

_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)

_PI_RE = re.compile(r"^([+-]?)(\d+)?\*?pi(?:/(\d+))?$")
_ZERO_RE = re.compile(r"^[+-]?0$")


def unit_phase(angle: Angle) -> complex:
    """Return ``e^{i angle}``; exact for multiples of pi/2."""
    if isinstance(angle, PiMultiple):
        half_turns = 2 * angle.coeff
        if half_turns.denominator == 1:
            return _QUARTER_TURNS[int(half_turns) % 4]
    return cmath.exp(1j * float(angle))


def parse_angle(text: str) -> Angle:
    """Parse ``pi/2``, ``-3pi/4``, ``2*pi``, ``0`` or a decimal literal.

    Raises ValueError for anything else (including nan/inf).
    """
    s = text.strip()
    m = _PI_RE.match(s)
    if m:
        sign, num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        coeff = Fraction(int(num) if num else 1, int(den) if den else 1)
        return PiMultiple(-coeff if sign == "-" else coeff)
    if _ZERO_RE.match(s):
        return PiMultiple(Fraction(0))
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"malformed angle {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {text!r}")
    return value


def format_angle(angle: Angle) -> str:
    """Inverse of :func:`parse_angle`: symbolic for pi multiples, repr otherwise."""
    if isinstance(angle, PiMultiple):
        c = angle.coeff
        if c == 0:
            return "0"
        sign = "-" if c < 0 else ""
        num, den = abs(c.numerator), c.denominator
        head = "" if num == 1 else str(num)
        tail = "" if den == 1 else f"/{den}"
        return f"{sign}{head}pi{tail}"
    return repr(float(angle))
