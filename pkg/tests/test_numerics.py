from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from betacyl import errors
from betacyl.numerics import (
    BetaSpec,
    Ordering,
    RealEnclosure,
    certify_root,
    compare,
    dyadic_from_str,
    dyadic_to_str,
    escalate,
    parry_poly_root,
    refine,
)

small_words = st.lists(st.integers(0, 3), min_size=1, max_size=6).filter(lambda w: sum(w) >= 1)


@given(small_words, st.integers(4, 80))
def test_root_enclosure_is_certified_and_narrow(w, p):
    enc = parry_poly_root(w, p)
    assert certify_root(w, enc)
    assert enc.width <= Fraction(1, 2**p)
    lo, hi = oracles.bisect_root(w, p + 2)
    assert enc.lo <= hi and lo <= enc.hi


@given(small_words, st.integers(2, 60))
def test_root_enclosures_nest(w, p):
    coarse, fine = parry_poly_root(w, p), parry_poly_root(w, p + 7)
    assert coarse.contains(fine)


def test_root_map_is_monotone_on_self_admissible_words():
    for n in range(1, 7):
        words = oracles.lambda_n_all(n, 3)
        for a, b in zip(words, words[1:]):
            p = 32
            while parry_poly_root(a, p).hi >= parry_poly_root(b, p).lo:
                assert p < 1024, (a, b)
                p *= 2


def test_known_roots():
    golden = parry_poly_root((1, 1), 64)
    # x^2 - x - 1 changes sign across the cell
    assert golden.lo**2 - golden.lo - 1 <= 0 <= golden.hi**2 - golden.hi - 1
    assert parry_poly_root((2,), 10).is_point
    assert parry_poly_root((1, 0, 0), 10) == RealEnclosure.point(Fraction(1), 10)


def test_root_errors():
    with pytest.raises(errors.EmptyWord):
        parry_poly_root((), 10)
    with pytest.raises(errors.RootBelowOne):
        parry_poly_root((0, 0), 10)


def test_refine_decimal_is_nested_and_exact_when_dyadic():
    spec = BetaSpec.decimal("1.8")
    assert not spec.exact
    e8, e30 = refine(spec, 8), refine(spec, 30)
    assert e8.contains(e30) and e30.contains(Fraction(9, 5))
    assert refine(BetaSpec.decimal("2.5"), 3).is_point


@pytest.mark.parametrize("text", ["abc", "1.2.3", "", "root:", "root:1,x"])
def test_parse_errors(text):
    with pytest.raises(errors.ParseError):
        BetaSpec.parse(text)


def test_parse_rejections():
    with pytest.raises(errors.OutOfRange):
        BetaSpec.parse("0.5")
    with pytest.raises(errors.NotSelfAdmissible):
        BetaSpec.parse("root:1,2")
    with pytest.raises(errors.OutOfRange):
        BetaSpec.parse("root:1,0,0")
    assert str(BetaSpec.parse("root:2,1,1")) == "root:2,1,1"


@given(st.integers(-10**6, 10**6), st.integers(-40, 40))
def test_dyadic_round_trip(m, e):
    q = Fraction(m) * Fraction(2) ** e
    assert dyadic_from_str(dyadic_to_str(q)) == q


def test_enclosure_json_and_compare():
    enc = RealEnclosure.grid(3, 4)
    assert RealEnclosure.from_json(enc.to_json()) == enc
    assert compare(enc, Fraction(1)) is Ordering.LESS
    assert compare(enc, Fraction(0)) is Ordering.GREATER
    assert compare(enc, Fraction(7, 32)) is Ordering.STRADDLES


def test_escalate_gives_up():
    seen = []
    with pytest.raises(errors.PrecisionExhausted):
        escalate(lambda p: seen.append(p), 8, 64, index=3)
    assert seen == [8, 16, 32, 64]
