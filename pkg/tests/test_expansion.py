import random
from fractions import Fraction

import pytest

import oracles
from betacyl import errors
from betacyl.expansion import (
    EventuallyPeriodicSequence,
    Expansion,
    PrefixOnly,
    digits_of_one,
    digits_of_x,
    expand_one,
    infinite_expansion_of_one,
    periodic_from_finite,
    sequence_from_json,
)
from betacyl.numerics import BetaSpec


def _rng_betas(count, seed=11):
    rng = random.Random(seed)
    return [f"{rng.uniform(1.05, 4.5):.5f}" for _ in range(count)]


@pytest.mark.parametrize(
    "text, expected",
    [("2", (2, 0, 0)), ("root:1,1", (1, 1, 0, 0)), ("1.8", (1, 1, 0, 1, 0)), ("3", (3, 0))],
)
def test_small_expansions(text, expected):
    assert digits_of_one(BetaSpec.parse(text), len(expected)) == expected


@pytest.mark.parametrize("text", _rng_betas(12))
def test_digits_match_high_precision_orbit(text):
    spec = BetaSpec.decimal(text)
    got = digits_of_one(spec, 40)
    # two generous working precisions must agree before serving as reference
    ref = oracles.orbit_digits(text, Fraction(1), 40, 120)
    assert ref == oracles.orbit_digits(text, Fraction(1), 40, 200)
    assert got == ref


@pytest.mark.parametrize("text", _rng_betas(20, seed=5))
def test_expansion_of_one_reconstructs_and_is_self_admissible(text):
    spec = BetaSpec.decimal(text)
    beta = Fraction(text)
    n = 60
    d = digits_of_one(spec, n)
    partial = sum(Fraction(x) / beta**i for i, x in enumerate(d, 1))
    assert partial <= 1 < partial + beta**-n
    assert all(0 <= x < beta for x in d)
    for k in range(1, n + 1):
        assert oracles.self_admissible(d[:k])


def test_digits_of_x():
    spec = BetaSpec.decimal("1.8")
    x = Fraction(3, 7)
    d = digits_of_x(spec, x, 25)
    partial = sum(Fraction(v) / Fraction(9, 5) ** i for i, v in enumerate(d, 1))
    assert partial <= x < partial + Fraction(5, 9) ** 25
    assert digits_of_x(spec, 0, 4) == (0, 0, 0, 0)
    with pytest.raises(errors.OutOfRange):
        digits_of_x(spec, 1, 3)


def test_exact_termination_and_symbolic_roots():
    e = expand_one(BetaSpec.decimal("2"), 5)
    assert e.terminates_at == 1
    r = expand_one(BetaSpec.root((2, 1, 1)), 6)
    assert r.digits == (2, 1, 1, 0, 0, 0) and r.certified_precision is None


def test_infinite_expansions():
    assert infinite_expansion_of_one(BetaSpec.decimal("2")).prefix(4) == (1, 1, 1, 1)
    golden = infinite_expansion_of_one(BetaSpec.root((1, 1)))
    assert golden == EventuallyPeriodicSequence((), (1, 0))
    tail = infinite_expansion_of_one(BetaSpec.decimal("1.8"), horizon=20)
    assert isinstance(tail, PrefixOnly) and len(tail.digits) == 20
    with pytest.raises(errors.OutOfRange):
        tail.prefix(21)


def test_quasi_greedy_shifts_are_bounded_by_itself():
    roots = [w for n in range(1, 7) for w in oracles.lambda_n_all(n, 3) if w[-1] and w != (1,)]
    assert len(roots) > 100
    for w in roots:
        pre = infinite_expansion_of_one(BetaSpec.root(w)).prefix(40)
        assert oracles.parry_admissible(pre, pre, 1)
    assert periodic_from_finite((2, 1, 1)).prefix(6) == (2, 1, 0, 2, 1, 0)


def test_precision_exhaustion(monkeypatch):
    monkeypatch.setenv("BETACYL_PMAX", "8")
    with pytest.raises(errors.PrecisionExhausted):
        digits_of_one(BetaSpec.decimal("1.8"), 200)


def test_json_round_trips():
    seq = periodic_from_finite((1, 1))
    assert sequence_from_json(seq.to_json()) == seq
    tail = PrefixOnly((1, 1, 0))
    assert sequence_from_json(tail.to_json()) == tail
    e = Expansion((1, 0), 64)
    assert Expansion.from_json(e.to_json()) == e
