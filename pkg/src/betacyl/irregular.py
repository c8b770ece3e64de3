"""Cantor subset of the bases with a prescribed upper density.

Generation 0 is the word ``(N, N)``.  Generation ``k`` extends ``v``, the
previous word followed by ``a_k`` free digits, to

    (v, 0^(b_k - 1), N, u', v, 0^(b_k - 1))

with ``c_k`` free digits in ``u'``.  Free digits range over ``1..N-1``.  The
resulting word has length ``m_k = 2 n_k + 2 b_k + c_k - 1`` where
``n_k = len(v)``.  Masses are equal on all words of a given length and are
stored as exponents ``e`` of ``(N - 1)^-e``.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cylinders import LengthEngine, cylinder_endpoints
from .errors import OutOfRange, ScheduleTooSmall
from .numerics import iv_bounds, make_iv

FIXED, FREE, COPY = 0, 1, 2


@dataclass(frozen=True)
class GenerationParams:
    k: int
    n: int
    a: int
    b: int
    c: int
    m: int

    @property
    def tau(self) -> int:
        return self.n + self.b + self.c

    @property
    def t(self) -> int:
        return self.n + self.b - 1

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "a": self.a, "b": self.b, "c": self.c, "m": self.m}

    @classmethod
    def from_json(cls, data: dict) -> "GenerationParams":
        return cls(*(int(data[key]) for key in ("k", "n", "a", "b", "c", "m")))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class CantorConfig:
    delta: Fraction
    zeta: Fraction
    N: int
    K: int = 1
    seed: int = 0
    growth: int = 4
    n1: int | None = None
    schedule: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", _frac(self.delta))
        object.__setattr__(self, "zeta", _frac(self.zeta))
        if self.schedule is not None:
            object.__setattr__(self, "schedule", tuple(int(x) for x in self.schedule))
        d, z = self.delta, self.zeta
        if not 1 < d <= 2:
            raise OutOfRange(f"delta must lie in (1, 2], got {d}")
        if not 0 < z < (2 - d) / (2 * d):
            raise OutOfRange(f"zeta must lie in (0, (2-delta)/(2 delta)) = (0, {float((2 - d) / (2 * d)):.6g}), got {z}")
        if self.N < 3:
            raise OutOfRange("N must be >= 3")
        if self.K < 1:
            raise OutOfRange("K must be >= 1")
        if self.growth < 1:
            raise OutOfRange("growth factor must be >= 1")

    def to_json(self) -> dict:
        return {
            "delta": str(self.delta),
            "zeta": str(self.zeta),
            "N": self.N,
            "K": self.K,
            "seed": self.seed,
            "growth": self.growth,
            "n1": self.n1,
            "schedule": list(self.schedule) if self.schedule else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CantorConfig":
        return cls(
            Fraction(data["delta"]),
            Fraction(data["zeta"]),
            int(data["N"]),
            int(data["K"]),
            int(data["seed"]),
            int(data["growth"]),
            data.get("n1"),
            tuple(data["schedule"]) if data.get("schedule") else None,
        )

    def _n_k(self, k: int, m_prev: int) -> int:
        if self.schedule is not None and k <= len(self.schedule):
            return self.schedule[k - 1]
        if k == 1 and self.n1 is not None:
            return self.n1
        return max(self.growth * m_prev, m_prev + 1)

    @cached_property
    def _params(self) -> list[GenerationParams]:
        return []

    def params(self, k: int) -> GenerationParams:
        if k < 1:
            raise OutOfRange("generation index must be >= 1")
        cache = self._params
        while len(cache) < k:
            j = len(cache) + 1
            m_prev = cache[-1].m if cache else 2
            n = self._n_k(j, m_prev)
            if n <= m_prev:
                raise ScheduleTooSmall(f"n_{j} = {n} must exceed m_{j - 1} = {m_prev}")
            d, z = self.delta, self.zeta
            b = math.floor((d - 1) / (z * d) * n) + 1
            c = math.floor(((2 - d) / (z * d) - 2) * n) + 1
            cache.append(GenerationParams(j, n, n - m_prev, b, c, 2 * n + 2 * b + c - 1))
        return cache[k - 1]

    def m(self, k: int) -> int:
        return 2 if k == 0 else self.params(k).m

    def generation_of(self, n: int) -> int:
        """The ``k`` with ``m_{k-1} < n <= m_k`` (0 for ``n <= 2``)."""
        if n <= 2:
            return 0
        k = 1
        while self.params(k).m < n:
            k += 1
        return k


def generation_params(config: CantorConfig, k: int) -> GenerationParams:
    if not 1 <= k <= config.K:
        raise OutOfRange(f"generation must lie in 1..{config.K}")
    return config.params(k)


# ---------------------------------------------------------------------------
# word layout


@dataclass
class Layout:
    """Position map of a generation-``k`` word: each position is a fixed
    digit, a free digit, or a copy of an earlier free position."""

    kind: list[int] = field(default_factory=list)
    value: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.kind)

    def free_positions(self, n: int) -> list[int]:
        return [j for j in range(n) if self.kind[j] == FREE]

    def build(self, free: dict[int, int], n: int) -> tuple[int, ...]:
        out = []
        for j in range(n):
            kd = self.kind[j]
            if kd == FIXED:
                out.append(self.value[j])
            elif kd == FREE:
                out.append(free[j])
            else:
                out.append(free[self.value[j]])
        return tuple(out)


def layout(config: CantorConfig, k: int) -> Layout:
    lay = Layout([FIXED, FIXED], [config.N, config.N])
    for j in range(1, k + 1):
        g = config.params(j)
        lay.kind += [FREE] * g.a
        lay.value += [0] * g.a
        v_kind, v_val = lay.kind[: g.n], lay.value[: g.n]
        lay.kind += [FIXED] * g.b
        lay.value += [0] * (g.b - 1) + [config.N]
        lay.kind += [FREE] * g.c
        lay.value += [0] * g.c
        for pos, (kd, val) in enumerate(zip(v_kind, v_val)):
            if kd == FIXED:
                lay.kind.append(FIXED)
                lay.value.append(val)
            else:
                lay.kind.append(COPY)
                lay.value.append(pos if kd == FREE else val)
        lay.kind += [FIXED] * (g.b - 1)
        lay.value += [0] * (g.b - 1)
        assert len(lay) == g.m
    return lay


def _draw_free(config: CantorConfig, lay: Layout, extra: int = 0) -> dict[int, int]:
    rng = random.Random(config.seed)
    free = {}
    for j in range(len(lay)):
        if lay.kind[j] == FREE:
            free[j] = rng.randint(1, config.N - 1)
    # the first digits of the next generation are free as well
    for i in range(extra):
        free[len(lay) + i] = rng.randint(1, config.N - 1)
    return free


def sample_word(config: CantorConfig, k: int) -> tuple[int, ...]:
    """One seeded path word of generation ``k`` (length ``m_k``)."""
    if not 0 <= k <= config.K:
        raise OutOfRange(f"generation must lie in 0..{config.K}")
    lay = layout(config, k)
    return lay.build(_draw_free(config, lay), len(lay))


def _sample_extended(config: CantorConfig, k: int, extra: int):
    lay = layout(config, k)
    free = _draw_free(config, lay, extra)
    word = lay.build(free, len(lay)) + tuple(free[len(lay) + i] for i in range(extra))
    return lay, free, word


# ---------------------------------------------------------------------------
# mass


def mass_exponent(config: CantorConfig, n: int) -> int:
    """``e`` with ``mu(I_n) = (N - 1)^-e`` for any base in the set."""
    if n < 2:
        raise OutOfRange("n must be >= 2")
    k = config.generation_of(n)
    if k == 0:
        return 0
    g = config.params(k)
    done = sum(config.params(i).a + config.params(i).c for i in range(1, k))
    m_prev = config.m(k - 1)
    if n <= g.n:
        return n - m_prev + done
    if n <= g.n + g.b:
        return g.a + done
    if n <= g.n + g.b + g.c:
        return g.a + (n - g.n - g.b) + done
    return g.a + g.c + done


def mass(config: CantorConfig, n: int) -> Fraction:
    return Fraction(1, (config.N - 1) ** mass_exponent(config, n))


class Role(enum.Enum):
    USE_OWN = "UseOwn"
    SNAP_TO_PREV = "SnapToPrev"


def refined_cylinder_role(config: CantorConfig, n: int) -> tuple[Role, int]:
    """Whether the refined cylinder at level ``n`` is the ``n``-th cylinder
    itself, or an earlier one; the second item is the level actually used."""
    if n < 2:
        raise OutOfRange("n must be >= 2")
    k = config.generation_of(n)
    if k == 0:
        return Role.USE_OWN, n
    g = config.params(k)
    if n <= g.n or g.n + g.b < n <= g.n + g.b + g.c:
        return Role.USE_OWN, n
    if n <= g.n + g.b:
        return Role.SNAP_TO_PREV, g.n
    return Role.SNAP_TO_PREV, g.n + g.b + g.c


def refined_level(config: CantorConfig, n: int) -> int:
    return refined_cylinder_role(config, n)[1]


# ---------------------------------------------------------------------------
# dimension estimates


def dimension_bound(config: CantorConfig, prec: int = 64):
    """``(log(N-1) / log(N+1)) * ((2 - delta)/delta - zeta)`` as an interval."""
    iv = make_iv(prec)
    d, z = config.delta, config.zeta
    factor = iv.mpf(((2 - d) / d - z).numerator) / (((2 - d) / d - z).denominator)
    return iv.log(config.N - 1) / iv.log(config.N + 1) * factor


@dataclass
class LocalDimension:
    n: list[int]
    mass_exponent: list[int]
    ratio: list                   # mpmath intervals
    bound: object                 # mpmath interval

    def ratios_from(self, n_min: int) -> list:
        return [r for n, r in zip(self.n, self.ratio) if n > n_min]

    def to_json(self) -> dict:
        def pair(x):
            lo, hi = iv_bounds(x)
            return [float(lo), float(hi)]

        return {
            "bound": pair(self.bound),
            "n": self.n,
            "ratio_lo": [pair(r)[0] for r in self.ratio],
            "ratio_hi": [pair(r)[1] for r in self.ratio],
        }


def local_dimension_sequence(config: CantorConfig, k_max: int, prec: int = 160) -> LocalDimension:
    """``log mu(I_n) / log |I_{n+1}|`` along the seeded path, for
    ``2 <= n <= m_{k_max}``."""
    if k_max < 1:
        raise OutOfRange("k_max must be >= 1")
    if k_max > config.K:
        raise OutOfRange(f"k_max must not exceed K = {config.K}")
    _, _, word = _sample_extended(config, k_max, 1)
    engine = LengthEngine(word, digit_max=config.N + 1, prec=prec)
    iv = engine.iv
    log_mass_unit = -iv.log(config.N - 1)
    ns, es, rs = [], [], []
    for n in range(2, len(word)):
        e = mass_exponent(config, n)
        ratio = (e * log_mass_unit) / engine.log_length(n + 1)
        ns.append(n)
        es.append(e)
        rs.append(ratio)
    return LocalDimension(ns, es, rs, dimension_bound(config, prec))


def box_dimension_estimate(config: CantorConfig, k: int, prec: int = 64):
    """Interval for ``log #E_k / -log L_k`` from counts alone.

    ``#E_k = prod (N-1)^(a_i + c_i)`` and the largest level-``m_k`` length
    ``L_k`` lies in ``[C (N+1)^-(m_k+1), N^-(m_k-1)]`` with
    ``C = (N-1)^2 / N``.
    """
    if k < 1:
        raise OutOfRange("k must be >= 1")
    iv = make_iv(prec)
    N = config.N
    free = sum(config.params(i).a + config.params(i).c for i in range(1, k + 1))
    m = config.params(k).m
    log_count = free * iv.log(N - 1)
    log_c = iv.log(iv.mpf((N - 1) ** 2) / N)
    worst = -log_c + (m + 1) * iv.log(N + 1)
    best = (m - 1) * iv.log(N)
    lo = log_count / worst
    hi = log_count / best
    return iv.mpf([lo.a, hi.b])


def count_of_words(config: CantorConfig, k: int) -> int:
    return math.prod((config.N - 1) ** (config.params(i).a + config.params(i).c) for i in range(1, k + 1))


# ---------------------------------------------------------------------------
# ball counts


def ball_constant(N: int) -> Fraction:
    """``C_1 = 2 N / C + 2`` with ``C = (N-1)^2 / N``."""
    return Fraction(2 * N * N, (N - 1) ** 2) + 2


def ball_count_bound(N: int, n: int) -> Fraction:
    return ball_constant(N) * Fraction(N + 1, N) ** n


@dataclass
class BallSample:
    generation: int
    n: int
    level: int
    r: Fraction
    count: int
    bound: Fraction

    @property
    def violation(self) -> bool:
        return self.count > self.bound


class _Path:
    """A seeded path with its layout, length engine and neighbour stepping."""

    def __init__(self, config: CantorConfig, generation: int, seed: int):
        cfg = CantorConfig(
            config.delta, config.zeta, config.N, max(config.K, generation), seed,
            config.growth, config.n1, config.schedule,
        )
        self.config = cfg
        self.lay = layout(cfg, generation)
        self.free = _draw_free(cfg, self.lay)
        self.word = self.lay.build(self.free, len(self.lay))
        self.engine = LengthEngine(self.word, digit_max=cfg.N + 1)
        bits = (len(self.word) + 2) * (cfg.N + 1).bit_length() + 64
        self.p = bits
        deep = cylinder_endpoints(self.word, bits)
        # the base lies somewhere in the deepest cylinder of its path
        self.beta_lo, self.beta_hi = deep.lower.lo, deep.upper.hi

    def length_bounds(self, level: int) -> tuple[Fraction, Fraction]:
        x = self.engine.iv.exp(self.engine.log_length(level))
        return iv_bounds(x)

    def neighbours(self, level: int, lo: Fraction, hi: Fraction) -> int:
        """Number of level-``level`` words of the set whose cylinders meet
        the open interval ``(lo, hi)``; stepping stops at the first miss."""
        N = self.config.N
        positions = self.lay.free_positions(level)
        base = [self.free[j] for j in positions]

        def hits(vec) -> bool:
            w = self.lay.build(dict(zip(positions, vec)), level)
            c = cylinder_endpoints(w, self.p)
            return c.lower.lo < hi and c.upper.hi > lo

        count = 1 if hits(base) else 0
        for direction in (1, -1):
            vec = list(base)
            while True:
                i = len(vec) - 1
                while i >= 0:
                    nxt = vec[i] + direction
                    if 1 <= nxt <= N - 1:
                        vec[i] = nxt
                        break
                    vec[i] = 1 if direction == 1 else N - 1
                    i -= 1
                if i < 0 or not hits(vec):
                    break
                count += 1
        return count


def ball_count(path: _Path, n: int, r: Fraction) -> BallSample:
    """Count level-``n`` refined cylinders meeting ``B(beta, r)``.

    Requires ``|J_{n+1}| <= r < |J_n|``; the ball is widened by the
    uncertainty in ``beta`` so the count can only be overestimated.
    """
    cfg = path.config
    lvl_n, lvl_next = refined_level(cfg, n), refined_level(cfg, n + 1)
    _, next_hi = path.length_bounds(lvl_next)
    cur_lo, _ = path.length_bounds(lvl_n)
    if not next_hi <= r < cur_lo:
        raise OutOfRange("radius must satisfy |J_(n+1)| <= r < |J_n|")
    count = path.neighbours(lvl_n, path.beta_lo - r, path.beta_hi + r)
    return BallSample(cfg.generation_of(n), n, lvl_n, r, count, ball_count_bound(cfg.N, n))


def ball_mass_bound_check(
    config: CantorConfig, samples: int, generations: Sequence[int] = (1,), seed: int | None = None
) -> dict:
    """Sample ``(beta, r)`` pairs and compare sibling counts with the bound.

    Each sample draws a fresh path of one of ``generations``, a level ``n``
    whose refined cylinder differs from the next one, and a radius between
    the two refined lengths.
    """
    if samples < 1:
        raise OutOfRange("samples must be >= 1")
    rng = random.Random(config.seed if seed is None else seed)
    results = []
    paths: dict = {}
    for i in range(samples):
        g = generations[i % len(generations)]
        path_seed = rng.randrange(1 << 30)
        path = paths.get((g, path_seed)) or _Path(config, g, path_seed)
        cfg = path.config
        candidates = [
            n for n in range(2, len(path.word)) if refined_level(cfg, n) != refined_level(cfg, n + 1)
        ]
        n = rng.choice(candidates)
        _, next_hi = path.length_bounds(refined_level(cfg, n + 1))
        cur_lo, _ = path.length_bounds(refined_level(cfg, n))
        lam = Fraction(rng.randrange(1, 1 << 20), 1 << 20)
        # a point strictly inside [next_hi, cur_lo) on a log scale
        r = _geometric_point(next_hi, cur_lo, lam)
        results.append(ball_count(path, n, r))
    violations = [s for s in results if s.violation]
    return {
        "samples": len(results),
        "violations": len(violations),
        "details": [
            {
                "generation": s.generation,
                "n": s.n,
                "level": s.level,
                "count": s.count,
                "bound": float(s.bound),
            }
            for s in results
        ],
    }


def _geometric_point(lo: Fraction, hi: Fraction, lam: Fraction) -> Fraction:
    if not lo < hi:
        raise OutOfRange("empty radius range")
    llo, lhi = math.log2(lo.numerator) - math.log2(lo.denominator), math.log2(hi.numerator) - math.log2(hi.denominator)
    target = llo + float(lam) * (lhi - llo)
    e = math.floor(target) - 60
    r = Fraction(math.floor(2 ** (target - e)), 1) * Fraction(2) ** e
    return min(max(r, lo), hi - (hi - lo) / 1024)
