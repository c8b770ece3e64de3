"""Certified real arithmetic on dyadic intervals.

Every real number the package reports is a :class:`RealEnclosure`, a closed
interval ``[lo, hi]`` with dyadic rational endpoints.  Roots of the Parry
polynomial ``1 = w1/x + ... + wn/x^n`` are located on the binary grid
``k / 2^p`` and certified by exact integer evaluation of the polynomial at the
two grid points, so enclosures at increasing precision are nested.

Transcendental steps (logarithms) go through :mod:`mpmath`'s interval
context, which rounds outward; see :func:`make_iv`.
"""

from __future__ import annotations

import enum
import functools
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from . import kernels
from .errors import (
    EmptyWord,
    NotSelfAdmissible,
    OutOfRange,
    ParseError,
    PrecisionExhausted,
    RootBelowOne,
)

DEFAULT_PMAX = 4096

T = TypeVar("T")


def default_pmax() -> int:
    env = os.environ.get("BETACYL_PMAX")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ParseError(f"BETACYL_PMAX must be an integer, got {env!r}") from exc
        if value < 1:
            raise OutOfRange("BETACYL_PMAX must be positive")
        return value
    return DEFAULT_PMAX


# ---------------------------------------------------------------------------
# dyadic rationals


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def dyadic_to_str(q: Fraction) -> str:
    """Render a dyadic rational as ``"m*2^e"`` with ``m`` odd (or zero)."""
    q = Fraction(q)
    if not is_dyadic(q):
        raise ValueError(f"{q} is not dyadic")
    if q == 0:
        return "0*2^0"
    m, e = q.numerator, -(q.denominator.bit_length() - 1)
    tz = (m & -m).bit_length() - 1
    return f"{m >> tz}*2^{e + tz}"


_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*\*\s*2\s*\^\s*(-?\d+)\s*$")


def dyadic_from_str(text: str) -> Fraction:
    match = _DYADIC_RE.match(text)
    if not match:
        raise ParseError(f"not a dyadic literal: {text!r}")
    m, e = int(match.group(1)), int(match.group(2))
    return Fraction(m * 2**e) if e >= 0 else Fraction(m, 2**-e)


def floor_grid(q: Fraction, p: int) -> int:
    """``floor(q * 2^p)``."""
    return (q.numerator << p) // q.denominator if p >= 0 else q.numerator // (q.denominator << -p)


# ---------------------------------------------------------------------------
# enclosures


class Ordering(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    STRADDLES = "straddles"


@dataclass(frozen=True)
class RealEnclosure:
    """Closed dyadic interval ``[lo, hi]``; ``p`` is the precision it was
    requested at (``hi - lo <= 2^-p``)."""

    lo: Fraction
    hi: Fraction
    p: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        if isinstance(q, RealEnclosure):
            return self.lo <= q.lo and q.hi <= self.hi
        return self.lo <= q <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def to_json(self) -> dict:
        return {"lo": dyadic_to_str(self.lo), "hi": dyadic_to_str(self.hi), "p": self.p}

    @classmethod
    def from_json(cls, data: dict) -> "RealEnclosure":
        return cls(dyadic_from_str(data["lo"]), dyadic_from_str(data["hi"]), int(data["p"]))

    @classmethod
    def grid(cls, k: int, p: int) -> "RealEnclosure":
        return cls(Fraction(k, 1 << p), Fraction(k + 1, 1 << p), p)

    @classmethod
    def point(cls, q: Fraction, p: int) -> "RealEnclosure":
        q = Fraction(q)
        return cls(q, q, p)


def compare(e: RealEnclosure, q) -> Ordering:
    if e.hi < q:
        return Ordering.LESS
    if e.lo > q:
        return Ordering.GREATER
    return Ordering.STRADDLES


def escalate(step: Callable[[int], T | None], p0: int, p_max: int, index: int = 0) -> T:
    """Call ``step(p)`` with ``p`` doubling from ``p0`` until it returns a
    non-``None`` value; raise :class:`PrecisionExhausted` past ``p_max``."""
    p = max(1, p0)
    while True:
        result = step(p)
        if result is not None:
            return result
        if p >= p_max:
            raise PrecisionExhausted(index, p_max)
        p = min(2 * p, p_max)


# ---------------------------------------------------------------------------
# Parry polynomial roots


def _check_digits(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(int(d) for d in word)
    if not w:
        raise EmptyWord("word is empty")
    if any(d < 0 for d in w):
        raise OutOfRange(f"digits must be nonnegative: {w}")
    return w


def strip_zeros(word: Sequence[int]) -> tuple[int, ...]:
    w = tuple(word)
    end = len(w)
    while end and w[end - 1] == 0:
        end -= 1
    return w[:end]


def poly_sign(word: Sequence[int], k: int, p: int) -> int:
    """Exact sign of ``x^n - sum w_i x^(n-i)`` at ``x = k / 2^p``.

    Negative means ``sum w_i x^-i > 1``, i.e. ``x`` lies left of the root.
    """
    acc = 1
    for i, d in enumerate(word, 1):
        acc = acc * k - (d << (p * i))
    return (acc > 0) - (acc < 0)


def _float_root_y(word: tuple[int, ...]) -> float:
    # Newton on F(y) = sum w_i y^i - 1 from y = 1; F is convex increasing on
    # y > 0 with F(1) >= 0, so the iterates decrease monotonically to the root.
    y = 1.0
    for _ in range(200):
        g = 0.0
        h = 0.0
        for i in range(len(word), 0, -1):
            g = word[i - 1] + y * g
            h = i * word[i - 1] + y * h
        f = y * g - 1.0
        if h <= 0.0:
            break
        step = f / h
        y_new = y - step
        if y_new <= 0.0:
            y_new = y / 2
        if abs(y_new - y) <= 1e-17 * y:
            y = y_new
            break
        y = y_new
    return y


def _newton_fixed(word: tuple[int, ...], y: int, bits: int) -> int:
    one = 1 << bits
    g = 0
    h = 0
    for i in range(len(word), 0, -1):
        d = word[i - 1]
        g = d * one + ((y * g) >> bits)
        h = i * d * one + ((y * h) >> bits)
    f = ((y * g) >> bits) - one
    return y - (f * one) // h if h else y


def _approx_root_scaled(word: tuple[int, ...], bits: int) -> int:
    """Approximation of ``root * 2^bits`` (not certified)."""
    y = _float_root_y(word)
    cur = min(50, bits)
    yi = int(y * (1 << cur))
    yi = max(yi, 1)
    while True:
        nxt = min(2 * cur, bits)
        yi <<= nxt - cur
        cur = nxt
        yi = _newton_fixed(word, yi, cur)
        if cur == bits:
            yi = _newton_fixed(word, yi, cur)
            yi = _newton_fixed(word, yi, cur)
            break
    yi = max(yi, 1)
    return (1 << (2 * bits)) // yi


def _bisect_grid(word: tuple[int, ...], p: int) -> RealEnclosure:
    lo = 1 << p  # x = 1: sign <= 0
    hi = (1 + sum(word)) << p  # sign > 0
    if poly_sign(word, lo, p) == 0:
        return RealEnclosure.point(Fraction(1), p)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = poly_sign(word, mid, p)
        if s == 0:
            return RealEnclosure.point(Fraction(mid, 1 << p), p)
        if s < 0:
            lo = mid
        else:
            hi = mid
    return RealEnclosure.grid(lo, p)


@functools.lru_cache(maxsize=1 << 16)
def _root_cached(word: tuple[int, ...], p: int) -> RealEnclosure:
    guard = 2 * (sum(word) + 1).bit_length() + 40
    approx = _approx_root_scaled(word, p + guard)
    k = approx >> guard
    for _ in range(64):
        s_lo = poly_sign(word, k, p)
        if s_lo == 0:
            return RealEnclosure.point(Fraction(k, 1 << p), p)
        if s_lo > 0:
            k -= 1
            continue
        s_hi = poly_sign(word, k + 1, p)
        if s_hi == 0:
            return RealEnclosure.point(Fraction(k + 1, 1 << p), p)
        if s_hi < 0:
            k += 1
            continue
        return RealEnclosure.grid(k, p)
    return _bisect_grid(word, p)


def parry_poly_root(word: Sequence[int], p: int) -> RealEnclosure:
    """Enclosure of the unique ``x >= 1`` with ``sum w_i x^-i = 1``.

    The result is the binary-grid cell ``[k/2^p, (k+1)/2^p]`` containing the
    root, or the point itself when the root lies on the grid.
    """
    w = _check_digits(word)
    if p < 1:
        raise OutOfRange("precision must be >= 1")
    if sum(w) < 1:
        raise RootBelowOne(f"digit sum of {w} is below 1; no root in [1, inf)")
    return _root_cached(strip_zeros(w), int(p))


def certify_root(word: Sequence[int], enc: RealEnclosure) -> bool:
    """Exact check that ``f(lo) >= 0 >= f(hi)`` for ``f(x) = sum w_i x^-i - 1``."""
    w = strip_zeros(word)

    def sign_at(q: Fraction) -> int:
        # sign of x^n - sum w_i x^(n-i) at a rational point, exactly
        num, den = q.numerator, q.denominator
        acc = 1
        for i, d in enumerate(w, 1):
            acc = acc * num - d * den**i
        return (acc > 0) - (acc < 0)

    return sign_at(enc.lo) <= 0 <= sign_at(enc.hi)


# ---------------------------------------------------------------------------
# beta specifications


@dataclass(frozen=True)
class BetaSpec:
    """A base ``beta > 1``: either a decimal/rational literal or the root
    associated with a self-admissible word."""

    kind: str
    value: Fraction | None = None
    word: tuple[int, ...] | None = None
    literal: str | None = None

    @classmethod
    def decimal(cls, text: str) -> "BetaSpec":
        text = str(text).strip()
        if not re.fullmatch(r"[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?", text):
            raise ParseError(f"malformed beta literal: {text!r}")
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed beta literal: {text!r}") from exc
        if value <= 1:
            raise OutOfRange(f"beta must exceed 1, got {text}")
        return cls("decimal", value=value, literal=text)

    @classmethod
    def root(cls, word: Sequence[int]) -> "BetaSpec":
        w = _check_digits(word)
        if w[0] < 1:
            raise OutOfRange(f"first digit must be >= 1: {w}")
        if not kernels.is_self_admissible(w):
            raise NotSelfAdmissible(f"{w} is not self-admissible")
        if strip_zeros(w) == (1,):
            raise OutOfRange(f"the root of {w} is 1; beta must exceed 1")
        return cls("root", word=w)

    @classmethod
    def parse(cls, text: str) -> "BetaSpec":
        text = str(text).strip()
        if text.startswith("root:"):
            return cls.root(parse_word(text[5:]))
        return cls.decimal(text)

    @property
    def exact(self) -> bool:
        """True when the enclosure is a point at every precision."""
        return self.kind == "decimal" and is_dyadic(self.value)

    def enclosure(self, p: int) -> RealEnclosure:
        return refine(self, p)

    def __str__(self) -> str:
        if self.kind == "root":
            return "root:" + ",".join(map(str, self.word))
        return self.literal if self.literal is not None else str(self.value)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise ParseError("empty word")
    try:
        digits = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ParseError(f"malformed word: {text!r}") from exc
    if any(d < 0 for d in digits):
        raise ParseError(f"digits must be nonnegative: {text!r}")
    return digits


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(d) for d in word)


def refine(spec: BetaSpec, p: int) -> RealEnclosure:
    """Enclosure of ``beta`` with width ``<= 2^-p``; deterministic and nested in ``p``."""
    if p < 1:
        raise OutOfRange("precision must be >= 1")
    if spec.kind == "decimal":
        q = spec.value
        k = floor_grid(q, p)
        if Fraction(k, 1 << p) == q:
            return RealEnclosure.point(q, p)
        return RealEnclosure.grid(k, p)
    return parry_poly_root(spec.word, p)


# ---------------------------------------------------------------------------
# interval helpers (outward-rounded, via mpmath)


def make_iv(prec: int) -> MPIntervalContext:
    """A private mpmath interval context (contexts carry mutable precision)."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def iv_from_bounds(ctx, lo: Fraction, hi: Fraction):
    a = libmp.from_rational(lo.numerator, lo.denominator, ctx.prec, libmp.round_floor)
    b = libmp.from_rational(hi.numerator, hi.denominator, ctx.prec, libmp.round_ceiling)
    return ctx.make_mpf((a, b))


def iv_from_enclosure(ctx, enc: RealEnclosure):
    return iv_from_bounds(ctx, enc.lo, enc.hi)


def iv_from_scaled(ctx, lo: int, hi: int, bits: int):
    """Interval ``[lo, hi] * 2^-bits`` for integers ``lo <= hi``."""
    a = libmp.from_man_exp(lo, -bits, ctx.prec, libmp.round_floor)
    b = libmp.from_man_exp(hi, -bits, ctx.prec, libmp.round_ceiling)
    return ctx.make_mpf((a, b))


def iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact dyadic endpoints of an mpmath interval."""
    a, b = x._mpi_
    return _mpf_to_fraction(a), _mpf_to_fraction(b)


def _mpf_to_fraction(v) -> Fraction:
    if v in (libmp.finf, libmp.fninf, libmp.fnan):
        raise OverflowError("unbounded interval endpoint")
    sign, man, exp, _ = v
    q = Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    return -q if sign else q


def iv_float_bounds(x) -> tuple[float, float]:
    return float(x.a), float(x.b)
