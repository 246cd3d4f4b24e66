"""Q16.16 scalar arithmetic on raw 32-bit two's-complement words.

A value v is stored as the integer ``raw = round(v * 2**16)`` in a signed
32-bit word, giving the range [-32768, 32767 + 65535/65536] at a resolution
of 2**-16. All functions here take and return plain ints in raw form;
``from_real``/``to_real`` are the only float crossings and belong at
pipeline boundaries.

Overflow and saturation are reported through an optional :class:`FlagTally`
rather than exceptions, so hot paths stay branch-light and callers can
count events.
"""

from __future__ import annotations

import math

FRAC_BITS = 16
ONE = 1 << FRAC_BITS
RESOLUTION = 2.0 ** -FRAC_BITS
RAW_MIN = -(1 << 31)
RAW_MAX = (1 << 31) - 1
VALUE_MIN = RAW_MIN / ONE
VALUE_MAX = RAW_MAX / ONE

_WRAP_BIAS = 1 << 31
_WRAP_MASK = 0xFFFFFFFF
_HALF = 1 << (FRAC_BITS - 1)


class FlagTally:
    """Sticky counters for range/overflow/clamp events.

    Pass one to any flagged operation and inspect the counts afterwards;
    each instance is caller-owned, so the operations stay pure with
    respect to shared state.
    """

    __slots__ = ("overflow", "clamp", "range")

    def __init__(self) -> None:
        self.overflow = 0
        self.clamp = 0
        self.range = 0

    def any(self) -> bool:
        return bool(self.overflow or self.clamp or self.range)

    def merge(self, other: "FlagTally") -> None:
        self.overflow += other.overflow
        self.clamp += other.clamp
        self.range += other.range

    def as_dict(self) -> dict:
        return {"overflow": self.overflow, "clamp": self.clamp, "range": self.range}

    def __repr__(self) -> str:
        return f"FlagTally(overflow={self.overflow}, clamp={self.clamp}, range={self.range})"


def wrap32(x: int) -> int:
    """Reduce an integer to signed 32-bit two's-complement."""
    return ((x + _WRAP_BIAS) & _WRAP_MASK) - _WRAP_BIAS


def clamp32(x: int) -> int:
    if x > RAW_MAX:
        return RAW_MAX
    if x < RAW_MIN:
        return RAW_MIN
    return x


def from_real(v: float, flags: FlagTally | None = None) -> int:
    """Convert a real number to raw Q16.16, round-to-nearest, ties away from zero.

    Out-of-range inputs saturate to the range endpoints and bump the
    ``range`` flag.
    """
    if math.isnan(v):
        raise ValueError("cannot convert NaN to Q16.16")
    scaled = v * float(ONE)  # exact: multiply by a power of two
    if -8.0e9 < scaled < 8.0e9:
        ip = math.floor(scaled)
        fr = scaled - ip  # exact at this magnitude
        if scaled >= 0.0:
            raw = ip + (1 if fr >= 0.5 else 0)
        else:
            raw = ip + (1 if fr > 0.5 else 0)
    else:
        raw = RAW_MAX + 1 if scaled > 0 else RAW_MIN - 1
    if raw > RAW_MAX or raw < RAW_MIN:
        if flags is not None:
            flags.range += 1
        return clamp32(raw)
    return raw


def to_real(raw: int) -> float:
    """Exact conversion back to a float; every raw value is representable."""
    return raw / float(ONE)


def add(a: int, b: int, flags: FlagTally | None = None) -> int:
    """Wrapping add; exact whenever the true sum is in range."""
    s = a + b
    if s > RAW_MAX or s < RAW_MIN:
        if flags is not None:
            flags.overflow += 1
        return wrap32(s)
    return s


def sub(a: int, b: int, flags: FlagTally | None = None) -> int:
    """Wrapping subtract; exact whenever the true difference is in range."""
    s = a - b
    if s > RAW_MAX or s < RAW_MIN:
        if flags is not None:
            flags.overflow += 1
        return wrap32(s)
    return s


def add_sat(a: int, b: int, flags: FlagTally | None = None) -> int:
    """Saturating add: clamps to the 32-bit endpoints instead of wrapping."""
    s = a + b
    if s > RAW_MAX or s < RAW_MIN:
        if flags is not None:
            flags.clamp += 1
        return clamp32(s)
    return s


def sub_sat(a: int, b: int, flags: FlagTally | None = None) -> int:
    s = a - b
    if s > RAW_MAX or s < RAW_MIN:
        if flags is not None:
            flags.clamp += 1
        return clamp32(s)
    return s


def mul(a: int, b: int) -> int:
    """Floor-variant multiply: wide product, single arithmetic >>16 correction.

    For exact products in range the error versus real arithmetic lies in
    (-2**-16, 0]. Result overflow beyond 32 bits wraps and is not checked;
    use :func:`mul_sat` when inputs are unconstrained.
    """
    return wrap32((a * b) >> FRAC_BITS)


def mul_rounded(a: int, b: int) -> int:
    """Round-to-nearest multiply: |error| <= 2**-17 for in-range products."""
    return wrap32((a * b + _HALF) >> FRAC_BITS)


def mul_sat(a: int, b: int, flags: FlagTally | None = None) -> int:
    """Floor multiply with the shifted wide result clamped to 32 bits."""
    s = (a * b) >> FRAC_BITS
    if s > RAW_MAX or s < RAW_MIN:
        if flags is not None:
            flags.clamp += 1
        return clamp32(s)
    return s
