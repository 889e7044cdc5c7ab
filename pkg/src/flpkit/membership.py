"""Modified S-curve (logistic) membership functions.

A curve is defined on an interval ``[v_a, v_b]`` of the coefficient's value
range. Inside the interval the degree is::

    mu(v) = B / (1 + C * exp(d * (v - v_a) / (v_b - v_a)))

which decreases from ``B/(1+C)`` at ``v_a`` to ``B/(1+C*e^d)`` at ``v_b``.
Outside the interval the piecewise convention applies: 1 to the left and 0
to the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

Policy = Literal["strict", "clamp"]

DEFAULT_B = 1.0
DEFAULT_C = 0.001
DEFAULT_D = 13.8


class ParameterError(ValueError):
    """Raised for S-curve parameters that violate B, C, d > 0 and v_a < v_b."""


class MembershipRangeError(ValueError):
    """Raised when a degree cannot be inverted under the strict policy."""


@dataclass(frozen=True)
class SCurve:
    B: float
    C: float
    d: float
    v_a: float
    v_b: float

    def __post_init__(self) -> None:
        for name in ("B", "C", "d", "v_a", "v_b"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.B <= 0 or self.C <= 0 or self.d <= 0:
            raise ParameterError(
                f"B, C and d must be positive (got B={self.B}, C={self.C}, d={self.d})"
            )
        if not self.v_a < self.v_b:
            raise ParameterError(
                f"fuzzy interval lower bound must be < upper bound ({self.v_a} >= {self.v_b})"
            )

    @classmethod
    def between(
        cls,
        v_a: float,
        v_b: float,
        B: float = DEFAULT_B,
        C: float = DEFAULT_C,
        d: float = DEFAULT_D,
    ) -> SCurve:
        return cls(B=B, C=C, d=d, v_a=v_a, v_b=v_b)

    @property
    def width(self) -> float:
        return self.v_b - self.v_a

    def mu(self, v: float) -> float:
        return mu(self, v)

    def inverse(self, m: float, policy: Policy = "strict") -> float:
        return inverse(self, m, policy=policy)

    def valid_range(self) -> tuple[float, float]:
        return valid_range(self)


def mu(s: SCurve, v: float) -> float:
    """Membership degree of ``v``; the interior formula holds on the closed interval."""
    if v < s.v_a:
        return 1.0
    if v > s.v_b:
        return 0.0
    t = (v - s.v_a) / (s.v_b - s.v_a)
    return s.B / (1.0 + s.C * math.exp(s.d * t))


def valid_range(s: SCurve) -> tuple[float, float]:
    """Degrees ``(m_lo, m_hi)`` attained at ``v_b`` and ``v_a`` respectively."""
    return s.B / (1.0 + s.C * math.exp(s.d)), s.B / (1.0 + s.C)


def inverse_with_flag(s: SCurve, m: float, policy: Policy = "strict") -> tuple[float, bool]:
    """Return ``(v, clamped)`` with ``mu(s, v) == m``.

    Degrees on the closed range ``[m_lo, m_hi]`` are inverted analytically.
    Outside it, ``policy="strict"`` raises :class:`MembershipRangeError` while
    ``policy="clamp"`` returns the nearer endpoint (``v_a`` for high degrees,
    ``v_b`` for low ones) and sets the flag.
    """
    if policy not in ("strict", "clamp"):
        raise ValueError(f"unknown inverse policy {policy!r}")
    if math.isnan(m):
        raise MembershipRangeError("membership degree is NaN")
    m_lo, m_hi = valid_range(s)
    if m > m_hi:
        if policy == "strict":
            raise MembershipRangeError(
                f"degree {m!r} exceeds the invertible maximum {m_hi!r}"
            )
        return s.v_a, True
    if m < m_lo:
        if policy == "strict":
            raise MembershipRangeError(
                f"degree {m!r} is below the invertible minimum {m_lo!r}"
            )
        return s.v_b, True
    if m == m_hi:
        return s.v_a, False
    if m == m_lo:
        return s.v_b, False
    v = s.v_a + (s.v_b - s.v_a) / s.d * math.log((s.B - m) / (s.C * m))
    # rounding in the log can step a hair outside the interval near the ends
    return min(max(v, s.v_a), s.v_b), False


def inverse(s: SCurve, m: float, policy: Policy = "strict") -> float:
    return inverse_with_flag(s, m, policy)[0]
