import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cvar_oracle, gini_area_oracle, gini_discrete_oracle, lorenz_oracle
from specrisk import (
    Curve,
    DomainError,
    Distortion,
    InvalidInputError,
    LossSample,
    RiskSpec,
    cvar_breakpoint_grid,
    cvar_curve,
    evaluate,
    gini,
    lorenz_breakpoint_grid,
    lorenz_curve,
    second_order_dominates,
)


def s(*vals, w=None):
    return LossSample(np.array(vals, dtype=float), None if w is None else np.array(w))


def test_curve_validation():
    with pytest.raises(InvalidInputError):
        Curve("cvar_curve", np.array([0.0, 0.0]), np.array([1.0, 1.0]))  # grid not increasing
    with pytest.raises(InvalidInputError):
        Curve("nope", np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(InvalidInputError):
        Curve("lorenz", np.array([0.0, 1.0]), np.array([1.0]))


def test_curve_serialization():
    c = Curve("lorenz", np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert c.to_csv_text() == "0.0,0.0\n1.0,1.0\n"
    obj = c.to_json_obj()
    assert obj["kind"] == "lorenz"
    assert obj["grid"] == [0.0, 1.0]


def test_cvar_breakpoints():
    g = cvar_breakpoint_grid(s(1, 2, 3, 4))
    assert np.allclose(g, [0.0, 0.25, 0.5, 0.75])
    g = cvar_breakpoint_grid(s(1, 2, 3, 4), max_alpha=0.6)
    assert np.allclose(g, [0.0, 0.25, 0.5])


def test_cvar_curve_matches_oracle():
    x = s(1, 2, 3, 4)
    curve = cvar_curve(x, cvar_breakpoint_grid(x))
    for a, v in zip(curve.grid, curve.values):
        assert v == pytest.approx(float(cvar_oracle([1, 2, 3, 4], None, a)), abs=1e-12)
    with pytest.raises(DomainError):
        cvar_curve(x, [0.0, 1.0])  # alpha = 1 not allowed


def test_lorenz_worked_values():
    x = s(1, 3)
    curve = lorenz_curve(x, [0.0, 0.5, 1.0])
    assert curve.values.tolist() == [0.0, pytest.approx(0.25), 1.0]  # [DERIVED: lorenz oracle]
    y = s(0, 0, 0, 1)
    assert lorenz_curve(y, [0.75]).values[0] == pytest.approx(0.0)


def test_lorenz_requires_positive_mean_nonneg():
    with pytest.raises(InvalidInputError):
        lorenz_curve(s(0, 0), [0.5])
    with pytest.raises(InvalidInputError):
        lorenz_curve(s(-1, 2), [0.5])


def test_lorenz_breakpoints():
    g = lorenz_breakpoint_grid(s(1, 2, 3))
    assert g[0] == 0.0 and g[-1] == 1.0
    assert np.allclose(g, [0.0, 1 / 3, 2 / 3, 1.0])


def test_lorenz_diagonal_for_constant():
    x = s(2, 2, 2)
    q = np.linspace(0, 1, 9)
    assert np.max(np.abs(lorenz_curve(x, q).values - q)) <= 1e-12


def test_gini_worked_values():
    assert gini(s(0, 0, 0, 1)) == pytest.approx(0.75, abs=1e-12)  # [DERIVED: area oracle]
    assert gini(s(1, 3)) == pytest.approx(0.25, abs=1e-12)  # [DERIVED: area oracle]
    assert gini(s(5, 5, 5)) == 0.0
    assert gini(s(0, 4, w=[0.25, 0.75])) == pytest.approx(0.25, abs=1e-12)


def test_gini_matches_both_oracles():
    vals = [0.5, 1.0, 1.0, 2.5, 7.0]
    g = gini(s(*vals))
    assert g == pytest.approx(float(gini_area_oracle(vals)), abs=1e-12)
    assert g == pytest.approx(float(gini_discrete_oracle(vals)), abs=1e-12)


def test_dominates_reflexive_and_ordered():
    a = s(1, 2, 3)
    assert second_order_dominates(a, a)
    b = s(1, 2, 5)
    assert second_order_dominates(a, b)
    assert not second_order_dominates(b, a)


def test_dominates_mean_crossing():
    # lower mean but fatter tail: no dominance either way
    a = s(0, 0, 9)
    b = s(3, 3, 4)
    assert not second_order_dominates(a, b)
    assert not second_order_dominates(b, a)


def test_dominates_custom_grid():
    a = s(1, 2)
    b = s(1, 2)
    assert second_order_dominates(a, b, alpha_grid=[0.0, 0.3, 0.49])


def test_dominance_implies_spectral_order():
    rng = np.random.default_rng(5)
    for _ in range(25):
        base = np.sort(rng.gamma(2.0, 1.0, size=12))
        bump = np.zeros(12)
        bump[rng.integers(0, 12)] = rng.uniform(0.5, 2.0)
        a = LossSample(base)
        b = LossSample(np.sort(base + bump))
        assert second_order_dominates(a, b)
        for spec in (
            RiskSpec.from_json({"type": "cvar", "alpha": 0.4}),
            RiskSpec.from_json({"type": "spectral", "phi": {"type": "power_complement", "n": 3}}),
            RiskSpec.from_json({"type": "rim", "alpha": 0.6, "beta": 0.5}),
        ):
            assert evaluate(spec, a) <= evaluate(spec, b) + 1e-9


def test_equal_mean_lorenz_link():
    # same mean: CVaR ordering flips the Lorenz ordering
    a = s(2, 2, 2)
    b = s(1, 2, 3)
    assert second_order_dominates(a, b)
    q = np.linspace(0, 1, 13)
    la = lorenz_curve(a, q).values
    lb = lorenz_curve(b, q).values
    assert np.all(la >= lb - 1e-12)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(0.01, 50.0, allow_nan=False), min_size=1, max_size=20), st.floats(0.1, 10.0))
def test_gini_scale_invariant(vals, lam):
    x = s(*vals)
    assert gini(x.scale(lam)) == pytest.approx(gini(x), abs=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(0.0, 50.0, allow_nan=False, width=32), min_size=2, max_size=20))
def test_lorenz_is_convex_below_diagonal(vals):
    if sum(vals) <= 0:
        vals = [v + 1.0 for v in vals]
    x = s(*vals)
    q = np.linspace(0, 1, 33)
    L = lorenz_curve(x, q).values
    assert L[0] == 0.0
    assert L[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(L <= q + 1e-12)
    assert np.all(np.diff(L, 2) >= -1e-10)  # convex in q
