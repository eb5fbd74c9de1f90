"""Rotation numbers as continued fractions.

Values live in (0, 1) and are written ``[0; a1, a2, ...]``.  Orbits of the
rigid rotation are computed in 64-bit fixed point so that ``theta + n*alpha``
stays accurate to ~1e-19 per step even for n in the millions.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterator

import numpy as np

_SCALE = 1 << 64


@dataclass(frozen=True)
class RotationNumber:
    """Irrational number in (0, 1) given by its continued-fraction digits.

    ``preperiod`` and ``period`` describe an eventually periodic expansion
    (quadratic irrationals, e.g. the golden mean ``period=(1,)``).  A finite
    list with ``truncated=True`` stands for an unknown irrational whose first
    digits are known; its value error is recorded.  ``rational`` is a test-mode
    escape hatch for rigid rotations with periodic orbits.
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (1,)
    truncated: bool = False
    rational: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(a) for a in self.preperiod))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if self.rational is not None:
            p, q = (int(v) for v in self.rational)
            if not 0 <= p < q:
                raise ValueError(f"rational rotation must satisfy 0 <= p < q, got {p}/{q}")
            g = math.gcd(p, q)
            object.__setattr__(self, "rational", (p // g, q // g))
            return
        digits = self.preperiod + self.period
        if any(a < 1 for a in digits):
            raise ValueError("continued-fraction digits must all be >= 1")
        if self.truncated:
            if not self.preperiod or self.period:
                raise ValueError("a truncated expansion lists its digits in preperiod and has no period")
        elif not self.period:
            raise ValueError(
                "finite continued fraction describes a rational number; "
                "give a periodic tail or mark the expansion as truncated"
            )

    @classmethod
    def golden(cls) -> RotationNumber:
        return cls(period=(1,))

    @classmethod
    def from_rational(cls, p: int, q: int) -> RotationNumber:
        """Rational rotation, for negative controls only."""
        return cls(preperiod=(), period=(), rational=(p, q))

    @classmethod
    def from_digits(cls, digits, truncated: bool = False) -> RotationNumber:
        digits = tuple(digits)
        if not truncated:
            raise ValueError(
                f"finite expansion {list(digits)} is rational; pass truncated=True "
                "if it is the head of an irrational expansion"
            )
        return cls(preperiod=digits, period=(), truncated=True)

    @property
    def is_rational(self) -> bool:
        return self.rational is not None

    @property
    def is_exact(self) -> bool:
        """True when every digit is known (periodic tail or test-mode rational)."""
        return not self.truncated

    def digit(self, k: int) -> int:
        """Digit a_k, 1-based.  Raises IndexError past a truncated expansion."""
        if self.is_rational:
            raise IndexError("rational rotation numbers have no infinite expansion")
        if k < 1:
            raise IndexError(k)
        if k <= len(self.preperiod):
            return self.preperiod[k - 1]
        if not self.period:
            raise IndexError(f"digit {k} lies beyond the truncated expansion")
        j = (k - 1 - len(self.preperiod)) % len(self.period)
        return self.period[j]

    def convergents(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(p_k, q_k, a_{k+1})`` for k = 0, 1, ...

        For a truncated expansion the iteration stops at the last known digit.
        """
        p_prev, q_prev = 1, 0
        p, q = 0, 1
        for k in count(1):
            try:
                a = self.digit(k)
            except IndexError:
                return
            yield p, q, a
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q

    def fraction(self, bits: int = 96) -> tuple[Fraction, Fraction]:
        """Rational approximation and a bound on its error.

        The bound is < 2**-bits unless a truncated expansion runs out of digits
        first, in which case the last convergent p/q is returned with 1/q**2.
        """
        if self.is_rational:
            p, q = self.rational
            return Fraction(p, q), Fraction(0)
        target = Fraction(1, 1 << bits)
        for p, q, _ in self.convergents():
            if q > 1 and Fraction(1, q * q) < target:
                return Fraction(p, q), Fraction(1, q * q)
        p, q = self._last_convergent()
        return Fraction(p, q), Fraction(1, q * q)

    def _last_convergent(self) -> tuple[int, int]:
        p_prev, q_prev, p, q = 1, 0, 0, 1
        for a in self.preperiod:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        return p, q

    @property
    def value(self) -> float:
        return float(self.fraction()[0])

    @property
    def value_error(self) -> float:
        """Bound on |value - alpha| including the float rounding of ``value``."""
        approx, err = self.fraction()
        return float(err) + abs(float(Fraction(self.value) - approx))

    def fixed_point(self) -> int:
        """alpha * 2**64 rounded to the nearest integer."""
        approx, _ = self.fraction(bits=96)
        return round(approx * _SCALE) % _SCALE

    def denominators(self, limit: float) -> list[tuple[int, int]]:
        """Pairs ``(q_k, a_{k+1})`` with q_k <= limit.  Exact expansions only."""
        if not self.is_exact or self.is_rational:
            raise ValueError("denominator tables need a fully known irrational expansion")
        out = []
        for _, q, a in self.convergents():
            if q > limit:
                break
            out.append((q, a))
        return out

    def to_dict(self) -> dict:
        if self.is_rational:
            return {"rational": list(self.rational)}
        if self.truncated:
            return {"digits": list(self.preperiod), "truncated": True}
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_dict(cls, data: dict) -> RotationNumber:
        if "rational" in data:
            return cls.from_rational(*data["rational"])
        if data.get("truncated"):
            return cls.from_digits(data["digits"], truncated=True)
        return cls(preperiod=tuple(data.get("preperiod", ())), period=tuple(data["period"]))

    @classmethod
    def parse(cls, text: str) -> RotationNumber:
        """Parse ``golden``, ``p/q`` (test mode) or ``a1,a2;b1,b2`` (preperiod;period)."""
        text = text.strip()
        if text == "golden":
            return cls.golden()
        if "/" in text:
            p, q = text.split("/")
            return cls.from_rational(int(p), int(q))
        if ";" not in text:
            raise ValueError(
                f"cannot parse rotation number {text!r}: expected 'golden', 'p/q' or 'pre;period'"
            )
        pre, per = text.split(";")
        pre_digits = tuple(int(a) for a in pre.split(",") if a.strip())
        per_digits = tuple(int(a) for a in per.split(",") if a.strip())
        return cls(preperiod=pre_digits, period=per_digits)


def to_fixed(theta) -> np.ndarray:
    """Angles in [0, 1) to uint64 fixed point."""
    theta = np.mod(np.asarray(theta, dtype=np.float64), 1.0)
    # theta * 2**64 is exact in float; values that round up to 2**64 wrap to 0
    scaled = np.floor(theta * float(_SCALE))
    scaled = np.where(scaled >= float(_SCALE), 0.0, scaled)
    return scaled.astype(np.uint64)


def from_fixed(x) -> np.ndarray:
    """uint64 fixed point to floats in [0, 1), truncating to 53 bits."""
    top = np.asarray(x, dtype=np.uint64) >> np.uint64(11)
    return top.astype(np.float64) * 2.0**-53


def rotation_orbit(alpha: RotationNumber, theta, n) -> np.ndarray:
    """Angles {theta + n*alpha} for integer array n (any sign), in fixed point."""
    a = np.uint64(alpha.fixed_point())
    base = to_fixed(theta)
    n = np.asarray(n, dtype=np.int64)
    # two's-complement wrap makes negative n work under uint64 arithmetic
    with np.errstate(over="ignore"):
        return base + n.astype(np.uint64) * a
