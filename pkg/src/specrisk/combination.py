"""Building new fundamental functions from old ones.

The device is the perspective of a quasiconcave function psi with psi(1) = 1:
two distortions are merged pointwise through (x, y) -> y * psi(x / y). Taking
psi = min(t, 1) or max(t, 1) gives the pointwise minimum and maximum; the
power family t^(1/a), extended symmetrically, interpolates between them. The
result is quasiconcave but not necessarily concave, so a final hull step
(``combine_to_distortion``) turns it back into a usable distortion.
"""

from __future__ import annotations

import numpy as np

from .distortion import CONCAVITY_TOL, Distortion, QuasiconcaveFn, least_concave_majorant
from .errors import DomainError, InvalidInputError

_ONE_TOL = 1e-12
_DEFAULT_COMBINER_GRID = np.linspace(0.0, 8.0, 1025)


class Combiner:
    """A quasiconcave psi on [0, inf) with psi(1) = 1, plus its slope at infinity.

    The slope lim psi(s)/s closes the perspective continuously at y = 0; it is
    0 for bounded psi and positive for asymptotically linear ones (the max
    combiner has slope 1).
    """

    def __init__(self, fn, asymptotic_slope: float, name: str = "combiner"):
        self._fn = fn
        self.asymptotic_slope = float(asymptotic_slope)
        self.name = name
        one = float(np.asarray(fn(np.array([1.0])))[0])
        if abs(one - 1.0) > _ONE_TOL:
            raise InvalidInputError("a combiner must satisfy psi(1) = 1")

    def __call__(self, t):
        ts = np.asarray(t, dtype=np.float64)
        if np.any(ts < 0.0):
            raise DomainError("combiner argument must be non-negative")
        out = np.asarray(self._fn(np.atleast_1d(ts)), dtype=np.float64)
        return float(out[0]) if np.isscalar(t) or ts.ndim == 0 else out

    def is_quasiconcave(self, grid=None, tol: float = CONCAVITY_TOL) -> bool:
        """Grid test: psi non-decreasing and psi(t)/t non-increasing."""
        if grid is None:
            grid = _DEFAULT_COMBINER_GRID
        return QuasiconcaveFn(self._fn, self.name).is_quasiconcave(grid, tol)

    def __repr__(self):
        return f"Combiner({self.name})"

    # -- stock combiners -----------------------------------------------------

    @classmethod
    def min_combiner(cls) -> "Combiner":
        """psi(t) = min(t, 1); the perspective is the pointwise minimum."""
        return cls(lambda ts: np.minimum(ts, 1.0), 0.0, name="min")

    @classmethod
    def max_combiner(cls) -> "Combiner":
        """psi(t) = max(t, 1); the perspective is the pointwise maximum."""
        return cls(lambda ts: np.maximum(ts, 1.0), 1.0, name="max")

    @classmethod
    def power(cls, a: float) -> "Combiner":
        """t^(1/a) on [0, 1], extended symmetrically (a = 1 is the min combiner)."""
        if not a >= 1.0:
            raise DomainError("power combiner needs a >= 1")
        return symmetrize(lambda ts: ts ** (1.0 / a), name=f"power({a:g})")

    @classmethod
    def from_json(cls, obj) -> "Combiner":
        if not isinstance(obj, dict) or "type" not in obj:
            raise InvalidInputError("combiner spec must be an object with a 'type' key")
        kind = obj["type"]
        if kind == "min":
            return cls.min_combiner()
        if kind == "max":
            return cls.max_combiner()
        if kind == "power":
            try:
                return cls.power(float(obj["a"]))
            except KeyError as exc:
                raise InvalidInputError(f"combiner spec missing field {exc}") from exc
        if kind == "custom_half":
            knots = obj.get("knots")
            if not knots or len(knots) < 2:
                raise InvalidInputError("custom_half needs at least two knots")
            ts = np.asarray([k[0] for k in knots], dtype=np.float64)
            vs = np.asarray([k[1] for k in knots], dtype=np.float64)
            if ts[0] != 0.0 or ts[-1] != 1.0 or np.any(np.diff(ts) <= 0):
                raise InvalidInputError("custom_half knots must increase strictly from 0 to 1")
            return symmetrize(lambda s: np.interp(s, ts, vs), name="custom_half")
        raise InvalidInputError(f"unknown combiner type {kind!r}")


def perspective(c: Combiner, x, y):
    """y * psi(x / y), closed continuously at y = 0 by x times psi's slope at
    infinity. Positively homogeneous and non-decreasing in both arguments."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    ys = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if np.any(xs < 0.0) or np.any(ys < 0.0):
        raise DomainError("perspective arguments must be non-negative")
    xs, ys = np.broadcast_arrays(xs, ys)
    out = np.empty(xs.shape)
    pos = ys > 0.0
    out[pos] = ys[pos] * c(xs[pos] / ys[pos])
    out[~pos] = xs[~pos] * c.asymptotic_slope
    scalar = np.isscalar(x) and np.isscalar(y)
    return float(out[0]) if scalar and out.size == 1 else out


def combine(phi0: Distortion, phi1: Distortion, c: Combiner) -> QuasiconcaveFn:
    """Merge two distortions through the perspective: f(t) = psi_hat(phi0(t), phi1(t)).

    The result is quasiconcave with f(0) = 0 and, for normalized inputs and
    combiner, f(1) = 1; it is generally not concave, so pass it through
    ``combine_to_distortion`` before using it spectrally.
    """
    if not c.is_quasiconcave():
        raise InvalidInputError("combiner fails the quasiconcavity grid test")

    def fn(ts):
        return perspective(c, phi0(ts), phi1(ts))

    return QuasiconcaveFn(fn, name=f"combine({phi0!r}, {phi1!r}, {c.name})")


def csiszar_conjugate(c: Combiner) -> QuasiconcaveFn:
    """psi_diamond(t) = t * psi(1/t), continued at 0 by psi's slope at infinity.

    The perspective of psi is symmetric in its two arguments exactly when psi
    equals its own conjugate on (0, 1].
    """

    def fn(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
        out = np.full(ts.shape, c.asymptotic_slope)
        pos = ts > 0.0
        out[pos] = ts[pos] * c(1.0 / ts[pos])
        return out

    return QuasiconcaveFn(fn, name=f"conjugate({c.name})")


def symmetrize(psi_half, name: str = "symmetrized") -> Combiner:
    """Extend a quasiconcave psi_half on [0, 1] with psi_half(1) = 1 to all of
    [0, inf) via t * psi_half(1/t), which makes the perspective symmetric."""
    one = float(np.asarray(psi_half(np.array([1.0])))[0])
    if abs(one - 1.0) > _ONE_TOL:
        raise InvalidInputError("symmetrize needs psi_half(1) = 1")
    slope = float(np.asarray(psi_half(np.array([0.0])))[0])

    def fn(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
        out = np.empty(ts.shape)
        low = ts <= 1.0
        out[low] = np.asarray(psi_half(ts[low]), dtype=np.float64)
        out[~low] = ts[~low] * np.asarray(psi_half(1.0 / ts[~low]), dtype=np.float64)
        return out

    return Combiner(fn, asymptotic_slope=slope, name=name)


def combine_to_distortion(f, grid_resolution: int = 1024) -> Distortion:
    """Concavify a combined fundamental function back into a distortion.

    Already-concave inputs come back unchanged on the grid; everything else is
    replaced by its least concave majorant.
    """
    return least_concave_majorant(f, grid_resolution=grid_resolution)
