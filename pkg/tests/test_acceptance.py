"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that the terminal summary prints in order."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

import oracles
from conftest import ACCEPTANCE_LINES

from betacyl.cylinders import (
    cylinder_of_beta,
    endpoint_sequences,
    length_upper_bound,
    verify_partition,
    word_length_lower_bound,
)
from betacyl.density import density_profile, tau_beta_estimate
from betacyl.expansion import digits_of_one, digits_of_x, infinite_expansion_of_one
from betacyl.irregular import (
    CantorConfig,
    ball_mass_bound_check,
    box_dimension_estimate,
    generation_params,
    local_dimension_sequence,
    sample_word,
)
from betacyl.numerics import BetaSpec, refine
from betacyl.words import count_admissible, is_admissible, lambda_nk, lambda_nk_bound, successor

RUNNING = dict(delta="1.5", zeta="0.1", N=10, n1=10)


def record(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] AC{number:02d} {title}: {detail}")
    assert ok, detail


def test_ac01_parry_criterion_matches_grid():
    start = time.perf_counter()
    mismatches = []
    for spec in (BetaSpec.root((1, 1)), BetaSpec.root((2, 1)), BetaSpec.decimal("2")):
        eps = infinite_expansion_of_one(spec)
        observed = {n: set() for n in range(1, 6)}
        for j in range(1 << 12):
            d = digits_of_x(spec, Fraction(j, 1 << 12), 5)
            for n in range(1, 6):
                observed[n].add(d[:n])
        alphabet = eps.prefix(1)[0]
        for n in range(1, 6):
            admissible = {w for w in oracles.all_words(n, alphabet) if is_admissible(w, eps)}
            if admissible != observed[n]:
                mismatches.append((str(spec), n))
    elapsed = time.perf_counter() - start
    record(1, "Parry criterion vs grid prefixes", not mismatches and elapsed < 10,
           f"mismatches={mismatches} time={elapsed:.2f}s (limit 10s)")


def test_ac02_renyi_sandwich_golden():
    golden = (1, 1)
    spec = BetaSpec.root(golden)
    eps = infinite_expansion_of_one(spec)
    ref = oracles.quasi_greedy_of_root(golden)
    enc = refine(spec, 128)
    bad = []
    counts = []
    for n in range(1, 13):
        c = count_admissible(n, eps)
        brute = sum(oracles.parry_admissible(w, ref(n)) for w in oracles.all_words(n, 1))
        counts.append(c)
        lo_side = enc.hi**n
        hi_side = enc.lo ** (n + 1) / (enc.hi - 1)
        if c != brute or not lo_side <= c <= hi_side:
            bad.append(n)
    fib = [2, 3]
    while len(fib) < 12:
        fib.append(fib[-1] + fib[-2])
    ok = not bad and counts == fib
    record(2, "Renyi sandwich for golden beta", ok, f"counts={counts} violations={bad}")


def test_ac03_successor_law():
    start = time.perf_counter()
    bad = 0
    pairs = 0
    for n in range(1, 9):
        words = oracles.lambda_n_all(n, 4)
        for w, nxt in zip(words, words[1:]):
            pairs += 1
            if successor(w) != nxt:
                bad += 1
    elapsed = time.perf_counter() - start
    record(3, "successor law vs brute force", bad == 0 and elapsed < 30,
           f"pairs={pairs} mismatches={bad} time={elapsed:.2f}s (limit 30s)")


def test_ac04_endpoint_adjacency():
    issues = 0
    words = 0
    for n in range(1, 7):
        report = verify_partition(n, BetaSpec.decimal("1.1"), BetaSpec.decimal("3"), 80)
        issues += len(report.issues)
        words += report.words
    record(4, "endpoint adjacency over (1.1, 3]", issues == 0,
           f"words={words} issues={issues} tolerance=2^-79")


def test_ac05_limit_monotone_endpoints():
    problems = []
    for spec in (BetaSpec.decimal("1.8"), BetaSpec.root((2, 1, 1))):
        seq = endpoint_sequences(spec, 40, 256)
        for n in range(1, 40):
            (lo_a, up_a), (lo_b, up_b) = seq[n - 1], seq[n]
            if lo_b.lo < lo_a.lo or lo_b.hi < lo_a.hi:
                problems.append((str(spec), n, "lower"))
            if up_b.hi > up_a.hi or up_b.lo > up_a.lo:
                problems.append((str(spec), n, "upper"))
        lo40, up40 = seq[-1]
        if not up40.hi - lo40.lo < Fraction(1, 10**6):
            problems.append((str(spec), 40, "width"))
    record(5, "monotone endpoints, width at n=40 below 1e-6", not problems, f"problems={problems}")


def test_ac06_length_sandwich():
    p = 256
    slack = Fraction(1, 1 << (p - 3))
    violations = []
    for spec in (BetaSpec.decimal("1.8"), BetaSpec.root((2, 1, 1))):
        for n in range(1, 31):
            c = cylinder_of_beta(spec, n, p)
            est = word_length_lower_bound(c.word, p).value
            upper = length_upper_bound(c)
            if c.length_lo < est - slack or c.length_hi > upper + slack:
                violations.append((str(spec), n))
    record(6, "length sandwich", not violations, f"violations={violations}")


def _seeded_root_specs(count: int, seed: int = 2024):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        text = f"{rng.uniform(1.2, 3.6):.6f}"
        length = rng.randint(60, 150)
        word = digits_of_one(BetaSpec.decimal(text), length)
        while word and word[-1] == 0:
            word = word[:-1]
        if len(word) >= 2:
            out.append(BetaSpec.root(word))
    return out


def test_ac07_density_limits():
    bad = []
    for spec in (BetaSpec.decimal("2"), BetaSpec.root((1, 1))):
        prof = density_profile(spec, 200, p=512)
        for n, d in zip(prof.n, prof.d):
            if 100 <= n <= 200 and (d is None or d[0] < Fraction(95, 100) or d[1] > Fraction(105, 100)):
                bad.append((str(spec), n))
    seeded = []
    for spec in _seeded_root_specs(10):
        prof = density_profile(spec, 200)
        tau = tau_beta_estimate(spec, 200)
        ok = prof.limsup_est is not None and prof.limsup_est[1] <= 1 + tau + Fraction(5, 100)
        seeded.append(ok)
    record(7, "density limits", not bad and all(seeded),
           f"out-of-band n={bad[:5]} seeded ok={sum(seeded)}/{len(seeded)}")


def test_ac08_lambda_nk_bound():
    start = time.perf_counter()
    failures = []
    checked = 0
    for b1, b2 in (("1.5", "2.5"), ("2", "3")):
        q1, q2 = Fraction(b1), Fraction(b2)
        for n in range(2, 11):
            base = [w for w in oracles.lambda_n_all(n, 3, beta_hi=q2) if oracles.meets_range(w, q1, q2)]
            for k in range(1, n):
                brute = [w for w in base if _zero_window(w, k)]
                got = lambda_nk(n, k, BetaSpec.decimal(b1), BetaSpec.decimal(b2))
                checked += 1
                if got != brute or len(brute) > lambda_nk_bound(q2, n, k):
                    failures.append((b1, b2, n, k))
    elapsed = time.perf_counter() - start
    record(8, "Lambda_{n,k} counting bound", not failures and elapsed < 60,
           f"cases={checked} failures={failures[:5]} time={elapsed:.2f}s (limit 60s)")


def _zero_window(w, k):
    _, t = oracles.recurrence(w)
    return t + k <= len(w) and not any(w[t : t + k])


def test_ac09_cantor_generation_one():
    cfg = CantorConfig(**RUNNING)
    g = generation_params(cfg, 1)
    word = sample_word(cfg, 1)
    tau, t = oracles.recurrence(word)
    ok = (
        (g.a, g.b, g.c, g.m) == (8, 34, 14, 101)
        and oracles.self_admissible(word)
        and (tau, t) == (58, 43)
    )
    record(9, "Cantor generation 1", ok,
           f"params={(g.a, g.b, g.c, g.m)} self_admissible={oracles.self_admissible(word)} tau={tau} t={t}")


@pytest.mark.slow
def test_ac10_local_dimension():
    start = time.perf_counter()
    cfg = CantorConfig(**RUNNING, K=3, growth=4)
    ld = local_dimension_sequence(cfg, 3)
    threshold = mpmath.mpf("0.2138") - mpmath.mpf("0.05")
    ratios = ld.ratios_from(cfg.m(1))
    worst = min(float(r.a) for r in ratios)
    elapsed = time.perf_counter() - start
    ok = all(r.a > threshold for r in ratios) and elapsed < 300
    record(10, "local dimension ratios", ok,
           f"n_checked={len(ratios)} min_ratio={worst:.5f} threshold=0.1638 time={elapsed:.1f}s (limit 300s)")


def test_ac11_box_dimension():
    cfg = CantorConfig(delta="1.5", zeta="0.01", N=10, n1=10, K=3)
    est = box_dimension_estimate(cfg, 3)
    lo = math.log(9) / math.log(11) * (1 / 3 - 0.01) - 0.08
    hi = 1 / 3 + 0.08
    e_lo, e_hi = float(est.a), float(est.b)
    record(11, "box dimension estimate", e_lo <= hi and e_hi >= lo,
           f"estimate=[{e_lo:.4f}, {e_hi:.4f}] target=[{lo:.4f}, {hi:.4f}] (true value 1/3 only as N grows, zeta shrinks)")


def test_ac12_ball_mass_bound():
    small = CantorConfig(delta="1.2", zeta="0.3", N=4, n1=4, K=2, seed=7)
    deep = ball_mass_bound_check(small, 50, generations=(1, 2))
    running = ball_mass_bound_check(CantorConfig(**RUNNING, seed=7), 50, generations=(1,))
    bad = deep["violations"] + running["violations"]
    record(12, "ball-mass sibling bound", bad == 0 and deep["samples"] == 50,
           f"small config gens 1-2: {deep['violations']}/{deep['samples']} violations; "
           f"running config gen 1: {running['violations']}/{running['samples']} violations")
