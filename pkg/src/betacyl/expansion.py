"""Greedy beta-expansion digits of 1 and of rationals in [0, 1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import OutOfRange, PrecisionExhausted
from .numerics import BetaSpec, default_pmax, escalate, floor_grid, refine, strip_zeros


@dataclass(frozen=True)
class EventuallyPeriodicSequence:
    """``preperiod`` followed by ``period`` repeated forever."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def digit(self, i: int) -> int:
        """0-based digit access."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(n))

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, data: dict) -> "EventuallyPeriodicSequence":
        return cls(tuple(data["preperiod"]), tuple(data["period"]))


@dataclass(frozen=True)
class PrefixOnly:
    """A certified prefix whose tail was not determined."""

    digits: tuple[int, ...]

    def prefix(self, n: int) -> tuple[int, ...]:
        if n > len(self.digits):
            raise OutOfRange(f"only {len(self.digits)} digits are known, {n} requested")
        return self.digits[:n]

    def to_json(self) -> dict:
        return {"prefix": list(self.digits), "tail": "undetermined"}

    @classmethod
    def from_json(cls, data: dict) -> "PrefixOnly":
        return cls(tuple(data["prefix"]))


@dataclass(frozen=True)
class Expansion:
    digits: tuple[int, ...]
    certified_precision: int | None
    # 1-based index after which the orbit is provably 0, if it is
    terminates_at: int | None = None

    def to_json(self) -> dict:
        return {"digits": list(self.digits), "certified_precision": self.certified_precision}

    @classmethod
    def from_json(cls, data: dict) -> "Expansion":
        return cls(tuple(data["digits"]), data["certified_precision"])


def _orbit(spec: BetaSpec, x: Fraction, n: int, p_max: int) -> Expansion:
    cap = max(1 << spec_size_bits(spec), 2)
    q0 = min(p_max, 64 + n * cap.bit_length())
    last_failure = [0]

    def attempt(q: int):
        enc = refine(spec, q)
        b_lo = floor_grid(enc.lo, q)
        b_hi = -floor_grid(-enc.hi, q)
        x_lo = floor_grid(x, q)
        x_hi = -floor_grid(-x, q)
        digits = []
        stop = None
        for k in range(1, n + 1):
            if x_hi == 0:
                if stop is None:
                    stop = k - 1
                digits.append(0)
                continue
            lo = (b_lo * x_lo) >> q
            hi = -((-b_hi * x_hi) >> q)
            m = lo >> q
            if hi >= (m + 1) << q:
                last_failure[0] = k
                return None
            digits.append(m)
            x_lo, x_hi = lo - (m << q), hi - (m << q)
        if stop is None and x_hi == 0:
            stop = n
        return Expansion(tuple(digits), q, stop)

    try:
        return escalate(attempt, q0, p_max)
    except PrecisionExhausted:
        raise PrecisionExhausted(last_failure[0], p_max) from None


def spec_size_bits(spec: BetaSpec) -> int:
    """Bit length of ``ceil(beta)``, from a coarse enclosure."""
    enc = refine(spec, 4)
    return (int(enc.hi) + 1).bit_length()


def expand_one(spec: BetaSpec, n: int, p_max: int | None = None) -> Expansion:
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if spec.kind == "root":
        # beta is the left endpoint of the cylinder of its own word, so the
        # orbit of 1 reads the word and then sits at 0.
        w = strip_zeros(spec.word)
        digits = (w + (0,) * n)[:n]
        return Expansion(digits, None, len(w) if len(w) <= n else None)
    return _orbit(spec, Fraction(1), n, p_max or default_pmax())


def digits_of_one(spec: BetaSpec, n: int, p_max: int | None = None) -> tuple[int, ...]:
    """First ``n`` digits of the greedy expansion of 1 in base ``beta``."""
    return expand_one(spec, n, p_max).digits


def expand_x(spec: BetaSpec, x, n: int, p_max: int | None = None) -> Expansion:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise OutOfRange(f"x must lie in [0, 1), got {x}")
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if x == 0:
        return Expansion((0,) * n, None, 0)
    return _orbit(spec, x, n, p_max or default_pmax())


def digits_of_x(spec: BetaSpec, x, n: int, p_max: int | None = None) -> tuple[int, ...]:
    return expand_x(spec, x, n, p_max).digits


def periodic_from_finite(digits: Sequence[int]) -> EventuallyPeriodicSequence:
    """Quasi-greedy form of a finite expansion ``(e1..em, 0^inf)``: the
    periodic sequence ``(e1, ..., e_{m-1}, e_m - 1)^inf``."""
    w = strip_zeros(digits)
    if not w:
        raise ValueError("expansion has no nonzero digit")
    return EventuallyPeriodicSequence((), w[:-1] + (w[-1] - 1,))


def sequence_from_json(data: dict):
    if "period" in data:
        return EventuallyPeriodicSequence.from_json(data)
    return PrefixOnly.from_json(data)


def infinite_expansion_of_one(spec: BetaSpec, horizon: int = 64, p_max: int | None = None):
    """``EventuallyPeriodicSequence`` when ``beta`` is provably a simple Parry
    number, otherwise the certified :class:`PrefixOnly` of length ``horizon``."""
    if horizon < 1:
        raise OutOfRange("horizon must be >= 1")
    if spec.kind == "root":
        return periodic_from_finite(spec.word)
    exp = expand_one(spec, horizon, p_max)
    if exp.terminates_at is not None:
        return periodic_from_finite(exp.digits[: exp.terminates_at])
    return PrefixOnly(exp.digits)
