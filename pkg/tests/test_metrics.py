import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projstg.exceptions import InvalidArgumentError
from projstg.metrics import bootstrap_band, score_trial


def test_score_exact_match():
    s = score_trial({1, 3}, {1, 3})
    assert s.recovered and s.tpr == 1 and s.fdr == 0


def test_score_half():
    s = score_trial((1, 2), (1, 3))
    assert not s.recovered and s.tpr == 0.5 and s.fdr == 0.5
    assert (s.tp, s.fp, s.fn) == (1, 1, 1)


def test_score_empty_estimate():
    s = score_trial((), (0,))
    assert s.tpr == 0 and s.fdr == 0 and not s.recovered


def test_score_empty_truth():
    with pytest.raises(InvalidArgumentError):
        score_trial((0,), ())


def test_score_l2():
    s = score_trial((0,), (0,), [1.0, 0.0], [0.0, 0.0])
    assert s.l2_error == 1.0
    assert math.isnan(score_trial((0,), (0,)).l2_error)


@settings(max_examples=100, deadline=None)
@given(D=st.integers(2, 12), data=st.data())
def test_score_permutation_symmetric(D, data):
    est = data.draw(st.sets(st.integers(0, D - 1)))
    true = data.draw(st.sets(st.integers(0, D - 1), min_size=1))
    perm = data.draw(st.permutations(range(D)))
    a = score_trial(est, true)
    b = score_trial({perm[i] for i in est}, {perm[i] for i in true})
    assert (a.recovered, a.tpr, a.fdr) == (b.recovered, b.tpr, b.fdr)
    assert 0 <= a.tpr <= 1 and 0 <= a.fdr <= 1
    if a.recovered:
        assert a.tpr == 1 and a.fdr == 0


def test_bootstrap_constant_outcomes():
    r = np.random.default_rng(0)
    assert bootstrap_band([True] * 30, rng=r) == (1.0, 1.0, 1.0)
    assert bootstrap_band([False] * 30, rng=r) == (0.0, 0.0, 0.0)


def test_bootstrap_width_matches_binomial():
    outcomes = [True] * 60 + [False] * 40
    rate, lo, hi = bootstrap_band(outcomes, 0.9, 10 ** 4, np.random.default_rng(1))
    assert rate == 0.6
    assert abs((hi - lo) - 2 * 1.645 * math.sqrt(0.24 / 100)) < 0.03


def test_bootstrap_errors():
    with pytest.raises(InvalidArgumentError):
        bootstrap_band([], rng=np.random.default_rng(0))
    with pytest.raises(InvalidArgumentError):
        bootstrap_band([True], level=1.0)


@settings(max_examples=40, deadline=None)
@given(outcomes=st.lists(st.booleans(), min_size=1, max_size=60),
       levels=st.tuples(st.floats(0.05, 0.95), st.floats(0.05, 0.95)),
       seed=st.integers(0, 1000))
def test_bootstrap_monotone_in_level(outcomes, levels, seed):
    narrow, wide = sorted(levels)
    r1, lo1, hi1 = bootstrap_band(outcomes, narrow, 300, np.random.default_rng(seed))
    r2, lo2, hi2 = bootstrap_band(outcomes, wide, 300, np.random.default_rng(seed))
    assert lo2 <= lo1 and hi1 <= hi2
    assert lo1 <= r1 <= hi1
    assert r1 == np.mean(outcomes)
