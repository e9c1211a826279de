import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hull_eval, upper_concave_hull
from specrisk import Distortion, DomainError, InvalidInputError, least_concave_majorant


def test_cvar_distortion_values():
    phi = Distortion.cvar(0.5)
    assert phi(0.0) == 0.0
    assert phi(0.25) == pytest.approx(0.5)
    assert phi(0.5) == 1.0
    assert phi(0.9) == 1.0
    with pytest.raises(DomainError):
        phi(1.5)
    with pytest.raises(DomainError):
        phi(-0.1)


def test_identity_is_cvar_zero():
    phi = Distortion.identity()
    ts = np.linspace(0, 1, 11)
    assert np.allclose(phi(ts), ts)


def test_rim_is_convex_mix():
    phi = Distortion.rim(0.5, 0.25)
    base = Distortion.cvar(0.5)
    ts = np.linspace(0, 1, 101)
    assert np.allclose(phi(ts), 0.25 * ts + 0.75 * base(ts))


def test_power_complement_values():
    phi = Distortion.power_complement(2)
    assert phi(0.5) == pytest.approx(0.75)
    assert phi(1.0) == 1.0
    assert Distortion.power_complement(1)(0.3) == pytest.approx(0.3)


def test_proportional_power():
    phi = Distortion.proportional_power(0.5)
    assert phi(0.25) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        Distortion.proportional_power(0.0)
    with pytest.raises(DomainError):
        Distortion.proportional_power(1.5)


def test_piecewise_validation():
    with pytest.raises(InvalidInputError):
        Distortion.piecewise_linear([0.0, 0.5, 1.0], [0.0, 0.2, 0.9])  # convex kink
    with pytest.raises(InvalidInputError):
        Distortion.piecewise_linear([0.0, 1.0], [0.1, 1.0])  # phi(0) != 0
    with pytest.raises(InvalidInputError):
        Distortion.piecewise_linear([0.0, 0.5], [0.0, 1.0])  # ts must end at 1
    with pytest.raises(InvalidInputError):
        Distortion.piecewise_linear([0.0, 1.0], [0.0, 1.2])  # exceeds 1
    # sub-normalized is allowed: family members may stop short of 1
    phi = Distortion.piecewise_linear([0.0, 1.0], [0.0, 0.6])
    assert not phi.is_normalized
    assert phi.end_value == pytest.approx(0.6)


def test_parameter_validation():
    with pytest.raises(DomainError):
        Distortion.cvar(1.0)
    with pytest.raises(DomainError):
        Distortion.cvar(-0.1)
    with pytest.raises(DomainError):
        Distortion.rim(0.5, 1.2)
    with pytest.raises(DomainError):
        Distortion.power_complement(0.5)


def test_increments_sum_to_end_value():
    for phi in (
        Distortion.cvar(0.3),
        Distortion.rim(0.6, 0.4),
        Distortion.power_complement(3),
        Distortion.proportional_power(0.5),
        Distortion.piecewise_linear([0.0, 0.2, 1.0], [0.0, 0.5, 1.0]),
    ):
        ts = np.array([0.0, 0.1, 0.25, 0.5, 0.8, 1.0])
        inc = phi.increments(ts)
        assert inc.shape == (5,)
        assert np.all(inc >= -1e-15)
        assert inc.sum() == pytest.approx(phi.end_value, abs=1e-12)
        assert np.allclose(np.cumsum(inc), phi(ts[1:]), atol=1e-12)


def test_cvar_increments_cancellation_free():
    # tiny cells far past the kink must give exactly zero increments
    phi = Distortion.cvar(0.9)
    ts = np.array([0.0, 0.1, 0.9999999999, 1.0])
    inc = phi.increments(ts)
    assert inc[0] == 1.0
    assert inc[1] == 0.0
    assert inc[2] == 0.0


def test_derivative_at_zero():
    assert Distortion.cvar(0.75).derivative_at_zero == pytest.approx(4.0)
    assert Distortion.rim(0.5, 0.5).derivative_at_zero == pytest.approx(1.5)
    assert Distortion.power_complement(3).derivative_at_zero == pytest.approx(3.0)
    assert Distortion.proportional_power(0.5).derivative_at_zero == np.inf
    assert Distortion.proportional_power(1.0).derivative_at_zero == pytest.approx(1.0)
    assert Distortion.piecewise_linear([0.0, 0.25, 1.0], [0.0, 0.75, 1.0]).derivative_at_zero == pytest.approx(3.0)


def test_kinks():
    assert Distortion.cvar(0.4).kinks().tolist() == [pytest.approx(0.6)]
    assert Distortion.cvar(0.0).kinks().size == 0
    assert Distortion.rim(0.4, 1.0).kinks().size == 0  # pure mean: no kink left
    assert Distortion.power_complement(2).kinks().size == 0
    assert Distortion.piecewise_linear([0.0, 0.3, 0.7, 1.0], [0.0, 0.6, 0.9, 1.0]).kinks().tolist() == [
        pytest.approx(0.3),
        pytest.approx(0.7),
    ]


def test_dual_function():
    phi = Distortion.cvar(0.5)
    dual = phi.dual()
    assert dual(0.0) == 0.0
    assert dual(0.25) == pytest.approx(0.5)  # t / phi(t)
    assert dual(1.0) == pytest.approx(1.0)
    assert dual.is_quasiconcave()


def test_json_round_trip():
    for phi in (
        Distortion.cvar(0.25),
        Distortion.rim(0.5, 0.3),
        Distortion.power_complement(2),
        Distortion.proportional_power(0.7),
        Distortion.piecewise_linear([0.0, 0.4, 1.0], [0.0, 0.8, 1.0]),
    ):
        back = Distortion.from_json(json.loads(json.dumps(phi.to_json())))
        ts = np.linspace(0, 1, 257)
        assert np.allclose(phi(ts), back(ts), atol=1e-15)


def test_from_json_rejects_unknown_and_subnormalized():
    with pytest.raises(InvalidInputError):
        Distortion.from_json({"type": "nope"})
    sub = {"type": "piecewise", "knots": [[0.0, 0.0], [1.0, 0.5]]}
    with pytest.raises(InvalidInputError):
        Distortion.from_json(sub)
    phi = Distortion.from_json(sub, require_normalized=False)
    assert phi.end_value == pytest.approx(0.5)


def test_least_concave_majorant_of_convex_power():
    # t^2 has hull equal to the chord t
    hull = least_concave_majorant(lambda t: np.asarray(t) ** 2)
    ts = np.linspace(0, 1, 101)
    assert np.allclose(hull(ts), ts, atol=1e-12)


def test_least_concave_majorant_fixes_concave():
    phi = Distortion.power_complement(2)
    hull = least_concave_majorant(phi)
    ts = np.linspace(0, 1, 513)
    assert np.allclose(hull(ts), phi(ts), atol=1e-6)  # grid-chord error only


def test_least_concave_majorant_normalizes():
    hull = least_concave_majorant(lambda t: 2.0 * np.asarray(t))
    assert hull(1.0) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        least_concave_majorant(lambda t: np.zeros_like(np.asarray(t, dtype=float)))


def test_majorant_matches_hull_oracle():
    def f(t):
        t = np.asarray(t, dtype=float)
        return np.minimum(3 * t, np.maximum(0.4, t))  # dips below its chord

    hull = least_concave_majorant(f, grid_resolution=4096)
    pts = [(x, float(f(x))) for x in np.linspace(0, 1, 4097)]
    oracle = upper_concave_hull(pts)
    for t in np.linspace(0, 1, 37):
        assert hull(float(t)) == pytest.approx(hull_eval(oracle, float(t)), abs=1e-9)


@st.composite
def concave_knots(draw):
    n_interior = draw(st.integers(min_value=0, max_value=4))
    cuts = sorted(draw(st.lists(st.floats(0.05, 0.95), min_size=n_interior, max_size=n_interior, unique=True)))
    ts = [0.0] + cuts + [1.0]
    slopes = sorted(
        draw(st.lists(st.floats(0.1, 4.0), min_size=len(ts) - 1, max_size=len(ts) - 1)), reverse=True
    )
    vals = [0.0]
    for a, b, m in zip(ts[:-1], ts[1:], slopes):
        vals.append(vals[-1] + m * (b - a))
    top = vals[-1]
    return ts, [v / top for v in vals]


@settings(max_examples=100, deadline=None)
@given(concave_knots())
def test_random_concave_piecewise_accepted(knots):
    ts, vals = knots
    phi = Distortion.piecewise_linear(ts, vals)
    grid = np.linspace(0, 1, 101)
    out = phi(grid)
    assert np.all(np.diff(out) >= -1e-12)
    assert out[0] == 0.0
    assert out[-1] == pytest.approx(1.0)
    # midpoint concavity on the grid
    assert np.all(out[1:-1] >= 0.5 * (out[:-2] + out[2:]) - 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 0.95), st.floats(0.0, 1.0))
def test_rim_increments_nonnegative(alpha, beta):
    phi = Distortion.rim(alpha, beta)
    ts = np.linspace(0, 1, 64)
    inc = phi.increments(ts)
    assert np.all(inc >= -1e-15)
    assert inc.sum() == pytest.approx(1.0, abs=1e-12)
