"""Digit-word combinatorics.

Words are tuples of nonnegative ints.  Comparison is lexicographic on the
zero-padded infinite sequences, so ``(1,)`` and ``(1, 0)`` are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import kernels
from .errors import EmptyWord, InvalidRange, NotSelfAdmissible, OutOfRange
from .numerics import RealEnclosure

Word = tuple[int, ...]


def lex_compare(w1: Sequence[int], w2: Sequence[int]) -> int:
    """-1, 0 or 1 as ``w1`` is less than, equal to or greater than ``w2``."""
    n = max(len(w1), len(w2))
    for i in range(n):
        a = w1[i] if i < len(w1) else 0
        b = w2[i] if i < len(w2) else 0
        if a != b:
            return -1 if a < b else 1
    return 0


def is_self_admissible(w: Sequence[int]) -> bool:
    if not w:
        raise EmptyWord("word must be nonempty")
    return kernels.is_self_admissible(w)


def _require_self_admissible(w: Sequence[int]) -> Word:
    w = tuple(w)
    if not w:
        raise EmptyWord("word must be nonempty")
    if min(w) < 0:
        raise OutOfRange("digits must be nonnegative")
    if not kernels.is_self_admissible(w):
        raise NotSelfAdmissible(f"{','.join(map(str, w))} is not self-admissible")
    return w


def is_admissible(w: Sequence[int], eps_star, shift_from: int = 0) -> bool:
    """Parry test: every shift ``w[i:]`` with ``i >= shift_from`` is at most
    the prefix of ``eps_star`` of the same length."""
    n = len(w)
    if n == 0:
        return True
    return kernels.shifts_dominated(w, eps_star.prefix(n), shift_from)


@dataclass(frozen=True)
class RecurrenceInfo:
    tau: int
    t: int
    non_recurrent: bool

    def to_json(self) -> dict:
        return {"tau": self.tau, "t": self.t, "non_recurrent": self.non_recurrent}

    @classmethod
    def from_json(cls, data: dict) -> "RecurrenceInfo":
        return cls(int(data["tau"]), int(data["t"]), bool(data["non_recurrent"]))


def _info(n: int, tau: int) -> RecurrenceInfo:
    return RecurrenceInfo(tau, n - (n // tau) * tau, tau == n)


def recurrence_time(w: Sequence[int]) -> RecurrenceInfo:
    # smallest shift that overlaps w with its own prefix is the smallest
    # period, i.e. n minus the longest proper border
    w = _require_self_admissible(w)
    pi = kernels.prefix_function(w)
    return _info(len(w), len(w) - pi[-1])


def recurrence_profile(w: Sequence[int]) -> list[RecurrenceInfo]:
    """Recurrence info of every prefix ``w[:n]``, n = 1..len(w), in one pass.

    Prefixes of a self-admissible word are self-admissible, so only the
    full word is checked.
    """
    w = _require_self_admissible(w)
    return [_info(n, tau) for n, tau in enumerate(kernels.recurrence_times(w), 1)]


def successor(w: Sequence[int]) -> Word:
    """Next self-admissible word of the same length."""
    w = _require_self_admissible(w)
    return _successor(w)


def _successor(w: Word) -> Word:
    n = len(w)
    tau = n - kernels.prefix_function(w)[-1]
    if tau == n:
        return w[:-1] + (w[-1] + 1,)
    return w[: tau - 1] + (w[tau - 1] + 1,) + (0,) * (n - tau)


def enumerate_self_admissible(
    n: int, max_first_digit: int | None = None, beta_hi=None
) -> Iterator[Word]:
    """Self-admissible words of length ``n`` in increasing order.

    Exactly one bound is required: ``max_first_digit``, or ``beta_hi`` in
    which case the stream stops once a cylinder lies entirely above it.
    """
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if (max_first_digit is None) == (beta_hi is None):
        raise ValueError("give exactly one of max_first_digit, beta_hi")
    w: Word = (1,) + (0,) * (n - 1)
    if max_first_digit is not None:
        while w[0] <= max_first_digit:
            yield w
            w = _successor(w)
        return
    from .cylinders import compare_root

    while compare_root(w, beta_hi) <= 0:
        yield w
        w = _successor(w)


def count_admissible(n: int, eps_star, shift_from: int = 0) -> int:
    """Number of length-``n`` words passing :func:`is_admissible`.

    The alphabet is ``{0, ..., eps_star_1}``.  States track how long the
    current run agrees with the prefix of ``eps_star``; a smaller digit
    resets the run and a larger one rejects the word.
    """
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if shift_from not in (0, 1):
        raise ValueError("shift_from must be 0 or 1")
    ref = eps_star.prefix(n)
    top = ref[0]
    if shift_from == 1:
        # the first digit is unconstrained apart from the alphabet
        return (top + 1) * (count_admissible(n - 1, eps_star) if n > 1 else 1)
    counts = [0] * (n + 1)
    counts[0] = 1
    for _ in range(n):
        nxt = [0] * (n + 1)
        for j, c in enumerate(counts):
            if not c or j >= n:
                continue
            e = ref[j]
            nxt[0] += c * e
            nxt[j + 1] += c
        counts = nxt
    return sum(counts)


def renyi_bounds(beta: RealEnclosure, n: int) -> tuple[Fraction, Fraction]:
    """Certified ``(upper bound of beta^n, lower bound of beta^(n+1)/(beta-1))``.

    A count ``c`` satisfies both sides of the sandwich when
    ``first <= c <= second``.
    """
    return beta.hi**n, beta.lo ** (n + 1) / (beta.hi - 1)


def lambda_n_range(n: int, beta1, beta2) -> list[Word]:
    """Self-admissible words of length ``n`` whose cylinder meets (beta1, beta2]."""
    from .cylinders import words_meeting_range

    return list(words_meeting_range(n, beta1, beta2))


def lambda_nk(n: int, k: int, beta1, beta2) -> list[Word]:
    """Words of the range whose digits ``t+1, ..., t+k`` vanish (1-based),
    ``t`` being the residue of the recurrence time."""
    if not 1 <= k < n:
        raise InvalidRange(f"need 1 <= k < n, got k={k}, n={n}")
    return [w for w in lambda_n_range(n, beta1, beta2) if in_lambda_nk(w, k)]


def in_lambda_nk(w: Sequence[int], k: int) -> bool:
    t = recurrence_time(w).t
    if t + k > len(w):
        return False
    return not any(w[t : t + k])


def lambda_nk_bound(beta2: Fraction, n: int, k: int) -> Fraction:
    """``beta2^(n-k+1) / (beta2 - 1)`` for a rational upper end."""
    beta2 = Fraction(beta2)
    return beta2 ** (n - k + 1) / (beta2 - 1)
