"""Concave distortion functions and the quasiconcave helpers around them.

A distortion here is a concave, non-decreasing function phi on [0, 1] with
phi(0) = 0 and phi continuous at 0. Normalized distortions (phi(1) = 1) are
fundamental functions of risk measures; piecewise-linear members of
supremum families may end below 1 and are accepted sub-normalized.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InvalidInputError

CONCAVITY_TOL = 1e-10
NORMALIZATION_TOL = 1e-12

_CVAR = "cvar"
_RIM = "rim"
_POWER_COMPLEMENT = "power_complement"
_PROPORTIONAL_POWER = "proportional_power"
_PIECEWISE = "piecewise_linear"


def check_concave(ts, values, tol: float = CONCAVITY_TOL) -> bool:
    """True iff successive slopes of the sampled graph are non-increasing within tol."""
    ts = np.asarray(ts, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ts.size != values.size or ts.size < 2:
        raise InvalidInputError("need equally many ts and values, at least two points")
    if np.any(np.diff(ts) <= 0):
        raise InvalidInputError("ts must be strictly increasing")
    slopes = np.diff(values) / np.diff(ts)
    return bool(np.all(np.diff(slopes) <= tol))


class QuasiconcaveFn:
    """A function on [0, inf) (or a subinterval) given by an evaluation rule.

    Quasiconcavity is asserted on a grid: f non-decreasing and t -> f(t)/t
    non-increasing, each within a slope tolerance.
    """

    def __init__(self, fn, name: str = "quasiconcave"):
        self._fn = fn
        self.name = name

    def __call__(self, t):
        ts = np.asarray(t, dtype=np.float64)
        out = np.asarray(self._fn(ts), dtype=np.float64)
        return float(np.ravel(out)[0]) if np.isscalar(t) or ts.ndim == 0 else out

    def is_quasiconcave(self, grid=None, tol: float = CONCAVITY_TOL) -> bool:
        if grid is None:
            grid = np.linspace(0.0, 1.0, 1025)
        grid = np.asarray(grid, dtype=np.float64)
        vals = self(grid)
        if np.any(np.diff(vals) < -tol):
            return False
        pos = grid > 0.0
        ratios = vals[pos] / grid[pos]
        return bool(np.all(np.diff(ratios) <= tol))

    def __repr__(self):
        return f"QuasiconcaveFn({self.name})"


class Distortion:
    """Concave distortion phi on [0, 1]; construct via the classmethods."""

    __slots__ = ("kind", "alpha", "beta", "n", "p", "knots_t", "knots_v")

    def __init__(self, kind, alpha=0.0, beta=0.0, n=1.0, p=1.0, knots_t=None, knots_v=None):
        self.kind = kind
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.n = float(n)
        self.p = float(p)
        self.knots_t = knots_t
        self.knots_v = knots_v

    # -- constructors ------------------------------------------------------

    @classmethod
    def cvar(cls, alpha: float) -> "Distortion":
        """phi(t) = min(t / (1 - alpha), 1) for alpha in [0, 1)."""
        if not 0.0 <= alpha < 1.0:
            raise DomainError("cvar level must lie in [0, 1)")
        return cls(_CVAR, alpha=alpha)

    @classmethod
    def identity(cls) -> "Distortion":
        """phi(t) = t, the distortion of the plain mean."""
        return cls(_CVAR, alpha=0.0)

    @classmethod
    def rim(cls, alpha: float, beta: float) -> "Distortion":
        """phi(t) = beta * t + (1 - beta) * min(t / (1 - alpha), 1)."""
        if not 0.0 <= alpha < 1.0:
            raise DomainError("rim alpha must lie in [0, 1)")
        if not 0.0 <= beta <= 1.0:
            raise DomainError("rim beta must lie in [0, 1]")
        return cls(_RIM, alpha=alpha, beta=beta)

    @classmethod
    def power_complement(cls, n: float) -> "Distortion":
        """phi(t) = 1 - (1 - t)^n for n >= 1."""
        if not n >= 1.0:
            raise DomainError("power_complement exponent must be >= 1")
        return cls(_POWER_COMPLEMENT, n=n)

    @classmethod
    def proportional_power(cls, p: float) -> "Distortion":
        """phi(t) = t^p for p in (0, 1]."""
        if not 0.0 < p <= 1.0:
            raise DomainError("proportional_power exponent must lie in (0, 1]")
        return cls(_PROPORTIONAL_POWER, p=p)

    @classmethod
    def piecewise_linear(cls, ts, values) -> "Distortion":
        """Piecewise-linear distortion through the given knots.

        Knot abscissae must be strictly increasing from 0 to 1; ordinates
        start at 0, are non-decreasing and concave (slopes non-increasing
        within 1e-10). The end value may be below 1 (sub-normalized members
        of supremum families); see ``is_normalized``.
        """
        ts = np.asarray(ts, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if ts.size != values.size or ts.size < 2:
            raise InvalidInputError("need matching knot abscissae and values, at least two")
        if ts[0] != 0.0 or ts[-1] != 1.0 or np.any(np.diff(ts) <= 0):
            raise InvalidInputError("knot abscissae must increase strictly from 0 to 1")
        if abs(values[0]) > NORMALIZATION_TOL:
            raise InvalidInputError("a distortion must start at phi(0) = 0")
        if np.any(np.diff(values) < -CONCAVITY_TOL):
            raise InvalidInputError("distortion values must be non-decreasing")
        if values[-1] > 1.0 + 1e-9:
            raise InvalidInputError("distortion values must not exceed 1")
        if not check_concave(ts, values):
            raise InvalidInputError("knots must describe a concave function")
        ts = ts.copy()
        values = np.clip(values, 0.0, None)
        ts.setflags(write=False)
        values.setflags(write=False)
        return cls(_PIECEWISE, knots_t=ts, knots_v=values)

    # -- evaluation --------------------------------------------------------

    def _eval(self, ts: np.ndarray) -> np.ndarray:
        if self.kind == _CVAR:
            if self.alpha == 0.0:
                return ts.astype(np.float64, copy=True)
            return np.minimum(ts / (1.0 - self.alpha), 1.0)
        if self.kind == _RIM:
            core = np.minimum(ts / (1.0 - self.alpha), 1.0) if self.alpha > 0.0 else ts
            return self.beta * ts + (1.0 - self.beta) * core
        if self.kind == _POWER_COMPLEMENT:
            return 1.0 - (1.0 - ts) ** self.n
        if self.kind == _PROPORTIONAL_POWER:
            return ts**self.p
        return np.interp(ts, self.knots_t, self.knots_v)

    def __call__(self, t):
        ts = np.asarray(t, dtype=np.float64)
        if np.any(ts < 0.0) or np.any(ts > 1.0):
            raise DomainError("distortion argument must lie in [0, 1]")
        out = self._eval(np.atleast_1d(ts))
        return float(out[0]) if np.isscalar(t) or ts.ndim == 0 else out

    def increments(self, ts) -> np.ndarray:
        """phi(ts[i+1]) - phi(ts[i]) using cancellation-free closed forms."""
        ts = np.asarray(ts, dtype=np.float64)
        if self.kind == _CVAR:
            if self.alpha == 0.0:
                return np.diff(ts)
            s = 1.0 - self.alpha
            return np.diff(np.minimum(ts, s)) / s
        if self.kind == _RIM:
            s = 1.0 - self.alpha
            core = np.diff(np.minimum(ts, s)) / s if self.alpha > 0.0 else np.diff(ts)
            return self.beta * np.diff(ts) + (1.0 - self.beta) * core
        if self.kind == _POWER_COMPLEMENT:
            u = (1.0 - ts) ** self.n
            return u[:-1] - u[1:]
        return np.diff(self._eval(ts))

    # -- structure ---------------------------------------------------------

    @property
    def derivative_at_zero(self) -> float:
        """Slope of phi at the origin; +inf when the tangent is vertical."""
        if self.kind == _CVAR:
            return 1.0 / (1.0 - self.alpha)
        if self.kind == _RIM:
            return self.beta + (1.0 - self.beta) / (1.0 - self.alpha)
        if self.kind == _POWER_COMPLEMENT:
            return self.n
        if self.kind == _PROPORTIONAL_POWER:
            return 1.0 if self.p == 1.0 else math.inf
        return float((self.knots_v[1] - self.knots_v[0]) / (self.knots_t[1] - self.knots_t[0]))

    def kinks(self) -> np.ndarray:
        """Interior points in (0, 1) where the slope jumps."""
        if self.kind == _CVAR and self.alpha > 0.0:
            return np.array([1.0 - self.alpha])
        if self.kind == _RIM and self.alpha > 0.0 and self.beta < 1.0:
            return np.array([1.0 - self.alpha])
        if self.kind == _PIECEWISE:
            return np.asarray(self.knots_t[1:-1], dtype=np.float64)
        return np.empty(0)

    @property
    def end_value(self) -> float:
        """phi(1); below 1 for sub-normalized piecewise members."""
        if self.kind == _PIECEWISE:
            return float(self.knots_v[-1])
        return 1.0

    @property
    def is_normalized(self) -> bool:
        return abs(self.end_value - 1.0) <= NORMALIZATION_TOL

    def dual(self) -> QuasiconcaveFn:
        """The dual t -> t / phi(t), extended by 0 at the origin."""

        def fn(ts):
            ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
            vals = self._eval(ts)
            out = np.zeros_like(ts)
            pos = ts > 0.0
            out[pos] = ts[pos] / vals[pos]
            return out

        return QuasiconcaveFn(fn, name=f"dual({self!r})")

    # -- interchange -------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == _CVAR:
            return {"type": "cvar", "alpha": self.alpha}
        if self.kind == _RIM:
            return {"type": "rim", "alpha": self.alpha, "beta": self.beta}
        if self.kind == _POWER_COMPLEMENT:
            return {"type": "power_complement", "n": self.n}
        if self.kind == _PROPORTIONAL_POWER:
            return {"type": "proportional_power", "p": self.p}
        return {"type": "piecewise", "knots": [[float(t), float(v)] for t, v in zip(self.knots_t, self.knots_v)]}

    @classmethod
    def from_json(cls, obj, require_normalized: bool = True) -> "Distortion":
        if not isinstance(obj, dict) or "type" not in obj:
            raise InvalidInputError("distortion spec must be an object with a 'type' key")
        kind = obj["type"]
        try:
            if kind == "cvar":
                return cls.cvar(float(obj["alpha"]))
            if kind == "rim":
                return cls.rim(float(obj["alpha"]), float(obj["beta"]))
            if kind == "power_complement":
                return cls.power_complement(float(obj["n"]))
            if kind == "proportional_power":
                return cls.proportional_power(float(obj["p"]))
            if kind == "piecewise":
                knots = obj["knots"]
                phi = cls.piecewise_linear([k[0] for k in knots], [k[1] for k in knots])
                if require_normalized and not phi.is_normalized:
                    raise InvalidInputError("piecewise distortion must end at phi(1) = 1")
                return phi
        except KeyError as exc:
            raise InvalidInputError(f"distortion spec missing field {exc}") from exc
        raise InvalidInputError(f"unknown distortion type {kind!r}")

    def __repr__(self):
        if self.kind == _CVAR:
            return f"Distortion.cvar({self.alpha:g})"
        if self.kind == _RIM:
            return f"Distortion.rim({self.alpha:g}, {self.beta:g})"
        if self.kind == _POWER_COMPLEMENT:
            return f"Distortion.power_complement({self.n:g})"
        if self.kind == _PROPORTIONAL_POWER:
            return f"Distortion.proportional_power({self.p:g})"
        return f"Distortion.piecewise_linear(<{len(self.knots_t)} knots>)"


def least_concave_majorant(f, grid_resolution: int = 1024) -> Distortion:
    """Smallest concave function above f on a uniform sampling grid of [0, 1].

    f is any callable on [0, 1] with f(0) = 0 and f(1) > 0; values are
    normalized by f(1) first. Returns the upper hull as a piecewise-linear
    distortion; already-concave inputs come back unchanged on the grid.
    """
    if grid_resolution < 2:
        raise DomainError("grid_resolution must be at least 2")
    ts = np.linspace(0.0, 1.0, grid_resolution + 1)
    ys = np.asarray(f(ts), dtype=np.float64)
    if ys.shape != ts.shape or not np.all(np.isfinite(ys)):
        raise InvalidInputError("function values must be finite on the grid")
    end = float(ys[-1])
    if end <= 0.0:
        raise InvalidInputError("cannot normalize: f(1) must be positive")
    ys = ys / end
    if abs(float(ys[0])) > 1e-12:
        raise InvalidInputError("least concave majorant requires f(0) = 0")

    hull_t = [float(ts[0])]
    hull_v = [float(ys[0])]
    for x, y in zip(ts[1:], ys[1:]):
        while len(hull_t) >= 2:
            x1, y1 = hull_t[-2], hull_v[-2]
            x2, y2 = hull_t[-1], hull_v[-1]
            # drop the middle point when it sits on or below the chord
            if (y2 - y1) * (x - x2) <= (y - y2) * (x2 - x1):
                hull_t.pop()
                hull_v.pop()
            else:
                break
        hull_t.append(float(x))
        hull_v.append(float(y))
    return Distortion.piecewise_linear(hull_t, hull_v)
