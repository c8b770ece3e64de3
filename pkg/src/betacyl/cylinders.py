"""Parameter-space cylinders.

The cylinder of a self-admissible word ``w`` is the set of bases whose
expansion of 1 starts with ``w``.  It is the interval ``[lo(w), hi(w))``
where ``lo(w)`` is the root of ``w`` itself and ``hi(w)`` the root of the
word obtained by cutting ``w`` after its recurrence time ``tau`` and adding
one to the last kept digit.  The interval is open on the left only for
``(1, 0, ..., 0)``, whose root is 1.

Both roots have a terminating greedy expansion of 1 that spells out the
defining word, and the expansion of 1 increases strictly with the base.  So
two such roots compare exactly like the words do, which lets range
membership be decided without any numerics (:func:`compare_root`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import kernels
from .errors import (
    DegenerateLowerEndpoint,
    EmptyWord,
    InvalidRange,
    NotSelfAdmissible,
    OutOfRange,
    PrecisionExhausted,
)
from .expansion import digits_of_one
from .numerics import (
    BetaSpec,
    RealEnclosure,
    dyadic_from_str,
    dyadic_to_str,
    format_word,
    iv_bounds,
    iv_from_enclosure,
    iv_from_scaled,
    make_iv,
    parry_poly_root,
    parse_word,
    strip_zeros,
)
from .words import Word, lex_compare, recurrence_time

# ---------------------------------------------------------------------------
# exact comparisons


def _validated(w: Sequence[int]) -> Word:
    w = tuple(int(d) for d in w)
    if not w:
        raise EmptyWord("word must be nonempty")
    if min(w) < 0:
        raise OutOfRange("digits must be nonnegative")
    if w[0] < 1:
        raise OutOfRange(f"first digit must be >= 1: {format_word(w)}")
    if not kernels.is_self_admissible(w):
        raise NotSelfAdmissible(f"{format_word(w)} is not self-admissible")
    return w


def upper_word(w: Sequence[int]) -> Word:
    """Defining word of the right endpoint: ``(w_1, ..., w_tau + 1)``."""
    w = tuple(w)
    tau = len(w) - kernels.prefix_function(w)[-1]
    return w[: tau - 1] + (w[tau - 1] + 1,)


def _sign_at_rational(w: Word, q: Fraction) -> int:
    # sign of sum w_i q^-i - 1, which equals sign(root(w) - q)
    a, b = q.numerator, q.denominator
    n = len(w)
    acc = 0
    for i, d in enumerate(w, 1):
        acc = acc * a + d * b**i
        # acc = sum_{j<=i} w_j a^(i-j) b^j
    acc -= a**n
    return (acc > 0) - (acc < 0)


def compare_root(w: Sequence[int], spec: BetaSpec) -> int:
    """Exact sign of ``root(w) - beta`` for a self-admissible ``w``."""
    w = strip_zeros(w)
    if w == (1,):
        return -1
    if spec.kind == "root":
        return lex_compare(w, spec.word)
    return _sign_at_rational(w, spec.value)


def compare_specs(a: BetaSpec, b: BetaSpec) -> int:
    if a.kind == "decimal" and b.kind == "decimal":
        return (a.value > b.value) - (a.value < b.value)
    if a.kind == "root":
        return compare_root(a.word, b)
    return -compare_root(b.word, a)


def contains(w: Sequence[int], spec: BetaSpec) -> bool:
    """Exact membership of ``beta`` in the cylinder of ``w``."""
    w = tuple(w)
    # compare_root already reports root 1 as strictly below any beta
    return compare_root(w, spec) <= 0 and compare_root(upper_word(w), spec) > 0


def meets_range(w: Sequence[int], beta1: BetaSpec, beta2: BetaSpec) -> bool:
    """Whether the cylinder of ``w`` meets the half-open range (beta1, beta2]."""
    return compare_root(w, beta2) <= 0 and compare_root(upper_word(w), beta1) > 0


def words_meeting_range(n: int, beta1: BetaSpec, beta2: BetaSpec) -> Iterator[Word]:
    """Self-admissible words of length ``n`` whose cylinders meet (beta1, beta2],
    in increasing order."""
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if compare_specs(beta1, beta2) >= 0:
        raise InvalidRange(f"need beta1 < beta2, got ({beta1}, {beta2}]")
    from .words import _successor

    try:
        # the cylinder containing beta1 is the first one meeting the range
        w = tuple(digits_of_one(beta1, n))
    except PrecisionExhausted:
        w = (1,) + (0,) * (n - 1)
        while compare_root(upper_word(w), beta1) <= 0:
            w = _successor(w)
    while compare_root(w, beta2) <= 0:
        yield w
        w = _successor(w)


# ---------------------------------------------------------------------------
# endpoint enclosures


@dataclass(frozen=True)
class ParameterCylinder:
    word: Word
    lower: RealEnclosure
    upper: RealEnclosure
    lower_closed: bool
    length_lo: Fraction
    length_hi: Fraction
    tau: int = 0
    t: int = 0

    @property
    def n(self) -> int:
        return len(self.word)

    def to_json(self) -> dict:
        return {
            "word": format_word(self.word),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "closed_left": self.lower_closed,
            "len_lo": dyadic_to_str(self.length_lo),
            "len_hi": dyadic_to_str(self.length_hi),
            "tau": self.tau,
            "t": self.t,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ParameterCylinder":
        return cls(
            parse_word(data["word"]),
            RealEnclosure.from_json(data["lower"]),
            RealEnclosure.from_json(data["upper"]),
            bool(data["closed_left"]),
            dyadic_from_str(data["len_lo"]),
            dyadic_from_str(data["len_hi"]),
            int(data.get("tau", 0)),
            int(data.get("t", 0)),
        )


def cylinder_endpoints(w: Sequence[int], p: int) -> ParameterCylinder:
    w = _validated(w)
    info = recurrence_time(w)
    lower = parry_poly_root(w, p)
    upper = parry_poly_root(upper_word(w), p)
    length_lo = max(Fraction(0), upper.lo - lower.hi)
    length_hi = upper.hi - lower.lo
    return ParameterCylinder(
        w, lower, upper, strip_zeros(w) != (1,), length_lo, length_hi, info.tau, info.t
    )


def cylinder_of_beta(
    spec: BetaSpec, n: int, p: int, p_max: int | None = None
) -> ParameterCylinder:
    return cylinder_endpoints(digits_of_one(spec, n, p_max), p)


def endpoint_sequences(
    spec: BetaSpec, n_max: int, p: int, p_max: int | None = None
) -> list[tuple[RealEnclosure, RealEnclosure]]:
    """``(lower_n, upper_n)`` for n = 1..n_max."""
    if n_max < 1:
        raise OutOfRange("n_max must be >= 1")
    digits = digits_of_one(spec, n_max, p_max)
    out = []
    for n in range(1, n_max + 1):
        c = cylinder_endpoints(digits[:n], p)
        out.append((c.lower, c.upper))
    return out


# ---------------------------------------------------------------------------
# length bounds


@dataclass(frozen=True)
class LengthBound:
    """Certified lower bound for a cylinder length; ``degenerate`` marks the
    vacuous case where the lower endpoint is 1."""

    value: Fraction
    degenerate: bool = False


def word_length_lower_bound(w: Sequence[int], p: int) -> LengthBound:
    """``C * hi^-n`` times the tail factor ``sum_{i=1}^{tau-t} e_{t+i} hi^-i``
    (only when ``t != 0``), with ``C = (lo - 1)^2 / lo`` and ``e`` the upper
    word.  Each factor is replaced by a certified lower bound."""
    c = cylinder_endpoints(w, p)
    if not c.lower_closed:
        return LengthBound(Fraction(0), True)
    lo = max(c.lower.lo, Fraction(1))
    const = (lo - 1) ** 2 / lo
    inv = 1 / c.upper.hi
    value = const * inv ** c.n
    if c.t:
        e = upper_word(c.word)
        tail = sum(e[c.t + i - 1] * inv**i for i in range(1, c.tau - c.t + 1))
        value *= tail
    return LengthBound(value, False)


def length_lower_bound(spec: BetaSpec, n: int, p: int, strict: bool = False) -> LengthBound:
    """Lower bound on the length of the n-th cylinder of ``beta``.

    With ``strict=True`` the degenerate case raises
    :class:`DegenerateLowerEndpoint` instead of returning the flagged zero.
    """
    bound = word_length_lower_bound(digits_of_one(spec, n), p)
    if strict and bound.degenerate:
        raise DegenerateLowerEndpoint("lower endpoint is 1; the bound is vacuous")
    return bound


def length_upper_bound(c: ParameterCylinder) -> Fraction:
    """Certified upper bound of ``hi^-(n-1)``."""
    return (1 / c.upper.lo) ** (c.n - 1)


# ---------------------------------------------------------------------------
# partition sweep


@dataclass
class PartitionReport:
    pairs_checked: int = 0
    words: int = 0
    issues: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def to_json(self) -> dict:
        return {"pairs_checked": self.pairs_checked, "words": self.words, "issues": self.issues}

    @classmethod
    def from_json(cls, data: dict) -> "PartitionReport":
        return cls(int(data["pairs_checked"]), int(data["words"]), list(data["issues"]))


def verify_partition(n: int, beta_lo: BetaSpec, beta_hi: BetaSpec, p: int) -> PartitionReport:
    """Walk the cylinders of length ``n`` across (beta_lo, beta_hi] and check
    that consecutive ones share an endpoint to within ``2^(1-p)``, both
    numerically and through their defining words."""
    report = PartitionReport()
    if compare_specs(beta_lo, beta_hi) >= 0:
        return report
    tol = Fraction(2, 1 << p)
    prev = None
    first = last = None
    for w in words_meeting_range(n, beta_lo, beta_hi):
        cyl = cylinder_endpoints(w, p)
        report.words += 1
        if first is None:
            first = w
        last = w
        if prev is not None:
            report.pairs_checked += 1
            gap_hi = max(abs(cyl.lower.hi - prev.upper.lo), abs(cyl.lower.lo - prev.upper.hi))
            shared = strip_zeros(upper_word(prev.word)) == strip_zeros(w)
            if gap_hi > tol or not shared:
                kind = "overlap" if cyl.lower.hi < prev.upper.lo else "gap"
                report.issues.append(
                    {
                        "word": format_word(prev.word),
                        "next": format_word(w),
                        "kind": kind,
                        "max_delta": dyadic_to_str(gap_hi),
                        "shared_defining_word": shared,
                    }
                )
        prev = cyl
    if first is not None and not contains(first, beta_lo):
        report.issues.append({"word": format_word(first), "kind": "uncovered_left"})
    if last is not None and not contains(last, beta_hi):
        report.issues.append({"word": format_word(last), "kind": "uncovered_right"})
    return report


# ---------------------------------------------------------------------------
# logarithmic lengths for long words
#
# In the variable y = 1/x, write F(y) = sum w_i y^i, so that the root of w
# is 1/y_lo with F(y_lo) = 1, and the upper root is 1/y_up with G(y_up) = 1
# for the upper word e.  Periodicity of w with period tau gives
#     1 - F(y_up) = y_up^n * sum_{j=t+1}^{tau} e_j y_up^(j-t),
# and the mean value theorem gives y_lo - y_up = (1 - F(y_up)) / F'(xi) for
# some xi between the two.  The length is (y_lo - y_up) / (y_lo * y_up).  No
# cancellation happens, so a fixed modest working precision is enough even
# when the length is astronomically small.


class LengthEngine:
    """Certified enclosures of ``log |I(w[:n])|`` for prefixes of one word.

    Roots of words longer than the horizon ``L`` are bracketed from their
    first ``L`` digits plus a geometric bound on the rest.  ``digit_max``
    must bound every digit of the word and of its upper words.
    """

    def __init__(self, word: Sequence[int], digit_max: int | None = None, prec: int = 160):
        self.word = tuple(word)
        if not self.word or self.word[0] < 1:
            raise OutOfRange("word must start with a digit >= 1")
        self.prec = prec
        self.iv = make_iv(prec)
        self.dmax = digit_max if digit_max is not None else max(self.word) + 1
        self.bits = prec + 16
        self.taus = kernels.recurrence_times(self.word)
        self.next_nonzero = kernels.first_nonzero_from(self.word)
        beta0 = parry_poly_root(self.word[: min(len(self.word), 64)], 32)
        # horizon where the geometric tail drops below the working precision
        log2_beta = math.log2(float(beta0.lo)) if beta0.lo > 1 else 0.0
        if log2_beta <= 0.0:
            self.horizon = len(self.word)
        else:
            extra = math.log2(self.dmax + 1) + 16 - math.log2(1 - 2 ** (-log2_beta))
            self.horizon = int((self.bits + extra) / log2_beta) + 2
        self._roots: dict = {}
        self._logs: dict = {}
        self._deriv: dict = {}

    # roots in y, as integer bounds scaled by 2^bits plus an mpmath interval
    def _y_root(self, digits: Word, truncated: bool):
        key = (digits, truncated)
        hit = self._roots.get(key)
        if hit is not None:
            return hit
        ctx = self.iv
        x = parry_poly_root(digits, self.bits + 8)
        y = 1 / iv_from_enclosure(ctx, x)
        if truncated:
            y_hi = y.b
            # walk down until the tail-augmented polynomial is certifiably
            # below 1: its root, and so the true root, lies above that point
            step = self._tail(y, digits) / self._poly_deriv_iv(digits, y)
            step = ctx.mpf(step.b)
            for _ in range(200):
                cand = ctx.mpf(y.a) - step
                val = self._poly_iv(digits, cand) + self._tail(cand, digits) - 1
                if val.b <= 0:
                    break
                step = step * 2
            else:  # pragma: no cover - the tail bound is geometric
                raise PrecisionExhausted(len(digits), self.prec)
            y = ctx.mpf([cand.a, y_hi])
        lo, hi = iv_bounds(y)
        scaled = (
            math.floor(lo * (1 << self.bits)),
            -math.floor(-hi * (1 << self.bits)),
        )
        out = (y, scaled, ctx.log(y))
        self._roots[key] = out
        return out

    def _poly_iv(self, digits: Word, y):
        acc = self.iv.mpf(0)
        for d in reversed(digits):
            acc = (acc + d) * y
        return acc

    def _poly_deriv_iv(self, digits: Word, y):
        acc = self.iv.mpf(0)
        n = len(digits)
        for i in range(n, 0, -1):
            acc = acc * y + i * digits[i - 1]
        return acc

    def _tail(self, y, digits: Word):
        # dmax * y^(L+1) / (1 - y) bounds the dropped digits
        return self.dmax * y ** (len(digits) + 1) / (1 - y)

    def _deriv_tail(self, y, L: int):
        # dmax * sum_{i>L} i y^(i-1)
        return self.dmax * y**L * ((L + 1) * (1 - y) + y) / (1 - y) ** 2

    def _root_of_prefix(self, n: int):
        L = self.horizon
        if n <= L:
            return self._y_root(strip_zeros(self.word[:n]), False)
        return self._y_root(self.word[:L], True)

    def _root_of_upper(self, tau: int):
        L = self.horizon
        if tau <= L:
            e = self.word[: tau - 1] + (self.word[tau - 1] + 1,)
            return self._y_root(e, False)
        return self._y_root(self.word[:L], True)

    def _deriv_bounds(self, n: int, y_up, y_lo):
        L = self.horizon
        m = min(n, L)
        key = (self.word[:m], n > L, y_up[1], y_lo[1])
        hit = self._deriv.get(key)
        if hit is not None:
            return hit
        digits = self.word[:m]
        low = self._poly_deriv_iv(digits, self.iv.mpf(y_up[0].a))
        high = self._poly_deriv_iv(digits, self.iv.mpf(y_lo[0].b))
        if n > L:
            high = high + self._deriv_tail(self.iv.mpf(y_lo[0].b), L)
        out = self.iv.log(self.iv.mpf([low.a, high.b]))
        self._deriv[key] = out
        return out

    def _tail_sum(self, start: int, stop: int, y_up):
        """Enclosure of ``sum_{j=start}^{stop-1} e_j y^(j-start)`` (0-based)."""
        (lo_s, hi_s) = y_up[1]
        bits = self.bits
        count = stop - start
        K = min(count, self.horizon)
        top = stop - 1
        acc_lo = acc_hi = 0
        for j in range(start + K - 1, start - 1, -1):
            d = self.word[j] + (1 if j == top else 0)
            acc_lo = (d << bits) + ((acc_lo * lo_s) >> bits)
            acc_hi = (d << bits) - ((-acc_hi * hi_s) >> bits)
        s = iv_from_scaled(self.iv, acc_lo, acc_hi, bits)
        if K < count:
            y = y_up[0]
            s = s + self.iv.mpf([0, (self.dmax * y**K / (1 - y)).b])
        return s

    def log_length(self, n: int):
        """Enclosure of ``log |I(w[:n])|`` as an mpmath interval."""
        if not 1 <= n <= len(self.word):
            raise OutOfRange(f"prefix length {n} outside 1..{len(self.word)}")
        if self.word[0] == 1 and self.next_nonzero[1] >= n:
            raise DegenerateLowerEndpoint("prefix (1,0,...,0) has lower endpoint 1")
        tau = self.taus[n - 1]
        t = n - (n // tau) * tau
        y_lo = self._root_of_prefix(n)
        y_up = self._root_of_upper(tau)
        log_up = y_up[2]
        if t == 0:
            log_d = n * log_up
        else:
            j0 = min(self.next_nonzero[t], tau - 1)
            s = self._tail_sum(j0, tau, y_up)
            log_d = (n + j0 + 1 - t) * log_up + self.iv.log(s)
        return log_d - self._deriv_bounds(n, y_up, y_lo) - log_up - y_lo[2]


def log_length_enclosure(w: Sequence[int], prec: int = 160):
    """Interval enclosure of ``log |I(w)|`` (an mpmath interval)."""
    w = _validated(w)
    eng = LengthEngine(w, prec=prec)
    return eng.log_length(len(w))
