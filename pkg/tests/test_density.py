from fractions import Fraction

import pytest

import oracles
from betacyl import errors
from betacyl.density import (
    CSV_COLUMNS,
    auto_precision,
    density_profile,
    full_recurrence_indices,
    tail_window,
    tau_beta_estimate,
)
from betacyl.expansion import digits_of_one
from betacyl.numerics import BetaSpec

SAMPLED = ["1.8", "2.7", "1.37", "3.21"]


@pytest.fixture(scope="module")
def profiles():
    return {text: density_profile(BetaSpec.decimal(text), 200, p=512) for text in SAMPLED}


def test_tau_nondecreasing_and_unbounded(profiles):
    for prof in profiles.values():
        assert all(a <= b for a, b in zip(prof.tau, prof.tau[1:]))
        assert prof.tau[-1] >= 100


def test_recurrence_columns_match_oracle(profiles):
    prof = profiles["1.8"]
    d = digits_of_one(BetaSpec.decimal("1.8"), 200)
    for n in (1, 2, 7, 50, 200):
        assert (prof.tau[n - 1], prof.t[n - 1]) == oracles.recurrence(d[:n])


def test_density_floor(profiles):
    for prof in profiles.values():
        for n, d in zip(prof.n, prof.d):
            if d is not None:
                assert d[0] >= 1 - Fraction(3, n)


def test_lower_density_near_one_on_full_recurrence(profiles):
    for text, prof in profiles.items():
        full = set(full_recurrence_indices(BetaSpec.decimal(text), 200))
        lo, hi = prof.window
        tail = [d for n, d in zip(prof.n, prof.d) if lo <= n <= hi and n in full]
        assert tail
        best = min(tail, key=lambda d: d[0])
        assert Fraction(95, 100) <= best[0] and best[1] <= Fraction(105, 100)


def test_upper_density_bound(profiles):
    for text, prof in profiles.items():
        tau = tau_beta_estimate(BetaSpec.decimal(text), 200)
        assert prof.limsup_est[1] <= 1 + tau + Fraction(5, 100)


def test_integer_and_golden_are_one():
    for spec in (BetaSpec.decimal("2"), BetaSpec.root((1, 1))):
        prof = density_profile(spec, 120, p=512)
        assert all(Fraction(95, 100) <= d[0] and d[1] <= Fraction(105, 100)
                   for n, d in zip(prof.n, prof.d) if n >= 100)
        assert tau_beta_estimate(spec, 120) == 1


def test_golden_full_recurrence_indices():
    idx = full_recurrence_indices(BetaSpec.root((1, 1)), 10)
    assert idx == [1] + list(range(3, 11))
    assert full_recurrence_indices(BetaSpec.root((1, 1)), 0) == []


def test_degenerate_prefixes_are_skipped():
    prof = density_profile(BetaSpec.decimal("1.05"), 20)
    assert prof.degenerate and prof.degenerate[0] == 1
    rows = prof.rows()
    assert len(rows[0]) == len(CSV_COLUMNS) and rows[0][3] == ""


def test_profile_json_shape():
    prof = density_profile(BetaSpec.decimal("2.5"), 10, p=128)
    data = prof.to_json()
    assert set(data) == {"beta", "p", "window", "liminf_est", "limsup_est", "degenerate", "rows"}
    assert data["rows"][0]["n"] == 1


def test_window_and_precision():
    assert tail_window(200) == (100, 200)
    assert auto_precision(BetaSpec.decimal("1.8"), 100) == 164
    with pytest.raises(errors.OutOfRange):
        tail_window(3, (0.9, 0.95))
    with pytest.raises(errors.OutOfRange):
        density_profile(BetaSpec.decimal("2"), 0)
