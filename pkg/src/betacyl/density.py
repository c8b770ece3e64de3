"""Shrink rate of the cylinders around a base.

``d_n = -log|I_n| / (n log beta)`` is enclosed for every ``n``; the lower and
upper densities are estimated by the min and max of ``d_n`` over a tail
window of ``[n_max/2, n_max]`` by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cylinders import cylinder_endpoints
from .errors import OutOfRange, PrecisionExhausted
from .expansion import digits_of_one
from .numerics import BetaSpec, default_pmax, iv_bounds, iv_from_bounds, iv_from_enclosure, make_iv, refine
from .words import recurrence_profile

CSV_COLUMNS = ("n", "tau_n", "t_n", "d_n_lo", "d_n_hi")


def float_down(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, -math.inf) if Fraction(f) > q else f


def float_up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


def auto_precision(spec: BetaSpec, n_max: int) -> int:
    hi = refine(spec, 8).hi
    return n_max * math.ceil(math.log2(hi)) + 64


@dataclass
class DensityProfile:
    beta: str
    p: int
    n: list[int] = field(default_factory=list)
    tau: list[int] = field(default_factory=list)
    t: list[int] = field(default_factory=list)
    d: list[tuple[Fraction, Fraction] | None] = field(default_factory=list)
    window: tuple[int, int] = (1, 1)
    liminf_est: tuple[Fraction, Fraction] | None = None
    limsup_est: tuple[Fraction, Fraction] | None = None

    @property
    def degenerate(self) -> list[int]:
        return [n for n, d in zip(self.n, self.d) if d is None]

    def rows(self) -> list[tuple]:
        out = []
        for n, tau, t, d in zip(self.n, self.tau, self.t, self.d):
            lo, hi = ("", "") if d is None else (repr(float_down(d[0])), repr(float_up(d[1])))
            out.append((n, tau, t, lo, hi))
        return out

    def to_json(self) -> dict:
        def pair(x):
            return None if x is None else [float_down(x[0]), float_up(x[1])]

        return {
            "beta": self.beta,
            "p": self.p,
            "window": list(self.window),
            "liminf_est": pair(self.liminf_est),
            "limsup_est": pair(self.limsup_est),
            "degenerate": self.degenerate,
            "rows": [
                {"n": n, "tau_n": tau, "t_n": t, "d_n": pair(d)}
                for n, tau, t, d in zip(self.n, self.tau, self.t, self.d)
            ],
        }


def tail_window(n_max: int, window: tuple[float, float] = (0.5, 1.0)) -> tuple[int, int]:
    lo = max(1, math.ceil(n_max * window[0]))
    hi = min(n_max, math.floor(n_max * window[1]))
    if lo > hi:
        raise OutOfRange(f"tail window {window} is empty for n_max={n_max}")
    return lo, hi


def _d_enclosure(word, n, p, p_max):
    """Cylinder of ``word``, escalating ``p`` until its length is bounded
    away from zero."""
    while True:
        c = cylinder_endpoints(word, p)
        if c.length_lo > 0:
            return c
        if p >= p_max:
            raise PrecisionExhausted(n, p_max)
        p = min(2 * p, p_max)


def density_profile(
    spec: BetaSpec,
    n_max: int,
    p: int | None = None,
    window: tuple[float, float] = (0.5, 1.0),
    p_max: int | None = None,
) -> DensityProfile:
    if n_max < 2:
        raise OutOfRange("n_max must be >= 2")
    p_max = p_max or default_pmax()
    p = p or auto_precision(spec, n_max)
    digits = digits_of_one(spec, n_max, p_max)
    infos = recurrence_profile(digits)
    ctx = make_iv(128)
    log_beta = ctx.log(iv_from_enclosure(ctx, refine(spec, p)))
    prof = DensityProfile(str(spec), p, window=tail_window(n_max, window))
    for n in range(1, n_max + 1):
        info = infos[n - 1]
        prof.n.append(n)
        prof.tau.append(info.tau)
        prof.t.append(info.t)
        if digits[0] == 1 and not any(digits[1:n]):
            # lower endpoint 1: not a closed cylinder, skipped
            prof.d.append(None)
            continue
        c = _d_enclosure(digits[:n], n, p, max(p, p_max))
        length = iv_from_bounds(ctx, c.length_lo, c.length_hi)
        d = -ctx.log(length) / (n * log_beta)
        prof.d.append(iv_bounds(d))
    lo, hi = prof.window
    tail = [d for n, d in zip(prof.n, prof.d) if lo <= n <= hi and d is not None]
    if tail:
        prof.liminf_est = (min(d[0] for d in tail), min(d[1] for d in tail))
        prof.limsup_est = (max(d[0] for d in tail), max(d[1] for d in tail))
    return prof


def tau_beta_estimate(
    spec: BetaSpec, n_max: int, window: tuple[float, float] = (0.5, 1.0), p_max: int | None = None
) -> Fraction:
    """Max of ``(tau_n - t_n) / n`` over the tail window."""
    if n_max < 2:
        raise OutOfRange("n_max must be >= 2")
    digits = digits_of_one(spec, n_max, p_max)
    infos = recurrence_profile(digits)
    lo, hi = tail_window(n_max, window)
    return max(Fraction(infos[n - 1].tau - infos[n - 1].t, n) for n in range(lo, hi + 1))


def full_recurrence_indices(spec: BetaSpec, n_max: int, p_max: int | None = None) -> list[int]:
    """All ``n <= n_max`` whose prefix is non-recurrent (``tau_n = n``)."""
    if n_max < 1:
        return []
    digits = digits_of_one(spec, n_max, p_max)
    return [n for n, info in enumerate(recurrence_profile(digits), 1) if info.tau == n]
