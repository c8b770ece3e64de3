import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from betacyl import _pykernels

ck = pytest.importorskip("betacyl._ckernels")

words = st.lists(st.integers(0, 3), min_size=0, max_size=40)
nonempty = st.lists(st.integers(0, 3), min_size=1, max_size=40)


@given(words)
def test_z_function_agrees(w):
    assert ck.z_function(w) == _pykernels.z_function(w)


@given(words)
def test_prefix_function_agrees(w):
    assert ck.prefix_function(w) == _pykernels.prefix_function(w)


@given(nonempty)
def test_self_admissible_agrees_with_definition(w):
    expected = oracles.self_admissible(w)
    assert _pykernels.is_self_admissible(w) == expected
    assert ck.is_self_admissible(w) == expected


@given(nonempty, st.lists(st.integers(0, 3), min_size=40, max_size=40), st.integers(0, 1))
def test_shifts_dominated_agrees(w, ref, start):
    expected = oracles.parry_admissible(w, ref, start)
    assert _pykernels.shifts_dominated(w, ref, start) == expected
    assert ck.shifts_dominated(w, ref, start) == expected


@given(nonempty)
def test_recurrence_times_agree(w):
    expected = [oracles.recurrence(w[: j + 1])[0] for j in range(len(w))]
    assert _pykernels.recurrence_times(w) == expected
    assert ck.recurrence_times(w) == expected


@settings(max_examples=50)
@given(words)
def test_first_nonzero_agrees(w):
    assert ck.first_nonzero_from(w) == _pykernels.first_nonzero_from(w)


def test_empty_inputs():
    assert ck.z_function([]) == []
    assert ck.recurrence_times([]) == []
    assert ck.shifts_dominated([], [1], 0)


def test_pure_fallback_selected_and_consistent():
    import os
    import subprocess
    import sys

    code = (
        "from betacyl import BACKEND; from betacyl.words import enumerate_self_admissible as e;"
        "print(BACKEND, sum(1 for _ in e(9, max_first_digit=2)))"
    )
    env = dict(os.environ, BETACYL_PURE="1")
    pure = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    env.pop("BETACYL_PURE")
    fast = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert pure.stdout.split()[0] == "python"
    assert pure.stdout.split()[1] == fast.stdout.split()[1]
