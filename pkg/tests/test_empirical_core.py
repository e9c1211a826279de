import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import maximal_oracle, quantile_oracle
from specrisk import DomainError, InvalidInputError, LossSample, load_csv, rearrange
from specrisk.empirical_core import maximal_function, quantile, survival


def test_loss_sample_validation():
    with pytest.raises(InvalidInputError):
        LossSample(np.array([]))
    with pytest.raises(InvalidInputError):
        LossSample(np.array([1.0, np.nan]))
    with pytest.raises(InvalidInputError):
        LossSample(np.array([1.0, 2.0]), np.array([0.5]))
    with pytest.raises(InvalidInputError):
        LossSample(np.array([1.0, 2.0]), np.array([0.7, 0.7]))
    with pytest.raises(InvalidInputError):
        LossSample(np.array([1.0, 2.0]), np.array([-0.1, 1.1]))


def test_uniform_weights_default():
    s = LossSample(np.array([3.0, 1.0, 2.0]))
    assert np.allclose(s.weights, 1.0 / 3.0)
    assert s.mean() == pytest.approx(2.0)
    assert s.support_max() == 3.0


def test_rearrangement_merges_ties():
    s = LossSample(np.array([2.0, -2.0, 1.0]))
    r = rearrange(s)  # absolute by default
    assert r.sorted_values.tolist() == [2.0, 1.0]
    assert np.allclose(r.cum_probs, [0.0, 2.0 / 3.0, 1.0])


def test_rearrangement_signed():
    s = LossSample(np.array([-5.0, 1.0]))
    assert rearrange(s, signed=True).sorted_values.tolist() == [1.0, -5.0]
    assert rearrange(s, signed=False).sorted_values.tolist() == [5.0, 1.0]


def test_step_function_values():
    r = rearrange(LossSample(np.array([1.0, 2.0, 3.0])))
    # right-continuous step function with the final block extended to t=1
    assert r(0.0) == 3.0
    assert r(1.0 / 3.0) == 2.0
    assert r(0.5) == 2.0
    assert r(1.0) == 1.0
    with pytest.raises(DomainError):
        r(1.5)


def test_prefix_matches_oracle():
    vals = [1.0, 2.0, 3.0]
    r = rearrange(LossSample(np.array(vals)))
    for t in (1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0):
        assert r.prefix(t) == pytest.approx(float(t * maximal_oracle(vals, None, t)), abs=1e-12)
    assert r.total() == pytest.approx(2.0)


def test_quantile_lower_convention():
    s = LossSample(np.array([1.0, 2.0, 3.0, 4.0]))
    assert quantile(s, 0.5) == 2.0  # [DERIVED: quantile oracle]
    assert quantile(s, 0.51) == 3.0
    assert quantile(s, 1.0) == 4.0
    with pytest.raises(DomainError):
        quantile(s, 0.0)


def test_maximal_function_worked_values():
    s = LossSample(np.array([1.0, 2.0, 3.0]))
    assert maximal_function(s, 1.0 / 3.0) == pytest.approx(3.0)
    assert maximal_function(s, 2.0 / 3.0) == pytest.approx(2.5)


def test_survival():
    s = LossSample(np.array([1.0, 2.0, 3.0]))
    assert survival(s, 0.0) == pytest.approx(1.0)
    assert survival(s, 1.0) == pytest.approx(2.0 / 3.0)
    assert survival(s, 3.0) == 0.0


def test_load_csv_header_and_weights(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("value,weight\n1.0,0.25\n3.0,0.75\n")
    s = load_csv(p)
    assert s.values.tolist() == [1.0, 3.0]
    assert s.weights.tolist() == [0.25, 0.75]
    q = tmp_path / "plain.csv"
    q.write_text("2.0\n4.0\n")
    assert np.allclose(load_csv(q).weights, 0.5)


def test_load_csv_rejects_garbage(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1.0,2.0,3.0\n")
    with pytest.raises(InvalidInputError):
        load_csv(p)


finite_vals = st.lists(
    st.floats(min_value=-50, max_value=50, allow_nan=False, width=32), min_size=1, max_size=40
)


@settings(max_examples=120, deadline=None)
@given(finite_vals)
def test_rearrangement_invariants(vals):
    s = LossSample(np.array(vals, dtype=np.float64))
    r = rearrange(s)
    assert np.all(np.diff(r.sorted_values) < 0)  # strictly decreasing after merge
    assert r.cum_probs[0] == 0.0
    assert r.cum_probs[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(r.cum_probs) > 0)
    assert r.prefix(1.0) == pytest.approx(np.abs(s.values) @ s.weights, abs=1e-10)
    assert r.prefix(0.0) == 0.0


@settings(max_examples=80, deadline=None)
@given(finite_vals, st.floats(min_value=0.01, max_value=1.0))
def test_quantile_matches_oracle(vals, q):
    s = LossSample(np.array(vals, dtype=np.float64))
    # pin q to an exact dyadic so the oracle and float comparison are exact
    q = round(q * 64) / 64 or 1.0 / 64
    assert quantile(s, q) == pytest.approx(
        float(quantile_oracle([float(v) for v in s.values], None, q)), abs=1e-9
    )
