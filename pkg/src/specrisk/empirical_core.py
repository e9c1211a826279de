"""Empirical distribution machinery.

Weighted loss samples, decreasing rearrangements, lower quantiles, survival
probabilities and the maximal function. Everything is a pure function of
immutable inputs, so concurrent use is safe.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._backend import integral_upto, prefix_integrals, sort_merge
from .errors import DomainError, InvalidInputError

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class LossSample:
    """A finite, weighted empirical loss distribution.

    values
        Finite real loss values (any sign).
    weights
        Probabilities of the same length: nonnegative, summing to one within
        1e-12. When omitted, the uniform law 1/n is used.
    """

    values: np.ndarray
    weights: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise InvalidInputError("values must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("values must all be finite")
        if self.weights is None:
            weights = np.full(values.size, 1.0 / values.size)
        else:
            weights = np.ascontiguousarray(self.weights, dtype=np.float64)
            if weights.shape != values.shape:
                raise InvalidInputError("weights must match values in length")
            if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
                raise InvalidInputError("weights must be finite and nonnegative")
            if abs(float(weights.sum()) - 1.0) > WEIGHT_TOL:
                raise InvalidInputError("weights must sum to one within 1e-12")
        values.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def mean(self) -> float:
        return float(np.dot(self.values, self.weights))

    def support_max(self) -> float:
        """Largest value carrying positive probability."""
        mask = self.weights > 0.0
        return float(np.max(self.values[mask])) if mask.any() else float(np.max(self.values))

    def scale(self, factor: float) -> "LossSample":
        return LossSample(self.values * float(factor), self.weights)

    def shift(self, offset: float) -> "LossSample":
        return LossSample(self.values + float(offset), self.weights)


@dataclass(frozen=True)
class Rearrangement:
    """A non-increasing step function on [0, 1], equimeasurable with the sample.

    sorted_values
        Strictly decreasing block values (ties merged into one block).
    cum_probs
        Breakpoints 0 = t_0 < t_1 < ... < t_m = 1; block i lives on
        (t_{i-1}, t_i].

    The function is right-continuous on [0, 1); at the right endpoint the
    final block's value is used, so evaluation at 1 returns the smallest
    block value.
    """

    sorted_values: np.ndarray
    cum_probs: np.ndarray

    def __post_init__(self):
        if self.sorted_values.size + 1 != self.cum_probs.size:
            raise InvalidInputError("cum_probs must have one more entry than sorted_values")
        if np.any(np.diff(self.cum_probs) <= 0):
            raise InvalidInputError("cum_probs must be strictly increasing")
        if np.any(np.diff(self.sorted_values) >= 0):
            raise InvalidInputError("sorted_values must be strictly decreasing")

    @cached_property
    def _prefix(self) -> np.ndarray:
        return prefix_integrals(self.sorted_values, self.cum_probs)

    def __call__(self, t):
        """Step-function value at t (scalar or array), t in [0, 1]."""
        ts = np.asarray(t, dtype=np.float64)
        if np.any(ts < 0.0) or np.any(ts > 1.0):
            raise DomainError("rearrangement argument must lie in [0, 1]")
        idx = np.searchsorted(self.cum_probs, ts, side="right") - 1
        idx = np.clip(idx, 0, self.sorted_values.size - 1)
        out = self.sorted_values[idx]
        return float(out) if np.isscalar(t) or ts.ndim == 0 else out

    def prefix(self, t):
        """Exact integral of the step function over [0, t]."""
        ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = integral_upto(np.ascontiguousarray(ts), self.cum_probs, self._prefix)
        return float(out[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else out

    def total(self) -> float:
        return float(self._prefix[-1])

    def blocks(self):
        """Iterate (value, prob_lo, prob_hi) triples."""
        for i, v in enumerate(self.sorted_values):
            yield float(v), float(self.cum_probs[i]), float(self.cum_probs[i + 1])


def rearrange(sample: LossSample, signed: bool = False) -> Rearrangement:
    """Decreasing rearrangement of |X| (default) or of X itself (signed=True).

    The signed variant sorts the raw values, so evaluating it at w recovers
    the lower quantile at 1 - w on the breakpoint grid.
    """
    base = sample.values if signed else np.abs(sample.values)
    block_values, cum_probs = sort_merge(np.ascontiguousarray(base), sample.weights)
    return Rearrangement(block_values, cum_probs)


def quantile(sample: LossSample, q: float) -> float:
    """Lower quantile sup{lam : F(lam) < q} of the signed empirical law.

    :param q: probability in (0, 1].
    """
    if not 0.0 < q <= 1.0:
        raise DomainError("quantile level must lie in (0, 1]")
    order = np.argsort(sample.values, kind="stable")
    cum = np.cumsum(sample.weights[order])
    idx = int(np.searchsorted(cum, q, side="left"))
    idx = min(idx, sample.size - 1)
    return float(sample.values[order[idx]])


def maximal_function(sample: LossSample, t: float) -> float:
    """Best average of |X| on a set of measure t: (1/t) * int_0^t X*(w) dw.

    Equals the tail average of |X| beyond its (1-t)-quantile; non-increasing
    in t; at t = 1 it is the mean of |X|.
    """
    if not 0.0 < t <= 1.0:
        raise DomainError("maximal function argument must lie in (0, 1]")
    return rearrange(sample, signed=False).prefix(t) / t


def survival(sample: LossSample, lam: float) -> float:
    """P(X > lam) under the empirical law; right-continuous in lam."""
    return float(np.sum(sample.weights[sample.values > lam]))


def load_csv(path) -> LossSample:
    """Load a loss sample from CSV.

    Accepts a single column of values or two columns (value, weight). A
    non-numeric first row is treated as a header. Two-column weights are
    normalized to sum to one. UTF-8, '.' decimal separator.
    """
    rows: list[list[str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            cells = [c.strip() for c in row if c.strip() != ""]
            if cells:
                rows.append(cells)
    if not rows:
        raise InvalidInputError(f"no data rows in {path}")

    def _numeric(cells):
        try:
            return [float(c) for c in cells]
        except ValueError:
            return None

    if _numeric(rows[0]) is None:
        rows = rows[1:]
        if not rows:
            raise InvalidInputError(f"only a header row in {path}")
    width = len(rows[0])
    if width not in (1, 2):
        raise InvalidInputError("expected one (value) or two (value, weight) columns")
    parsed = []
    for cells in rows:
        nums = _numeric(cells)
        if nums is None or len(nums) != width:
            raise InvalidInputError(f"malformed CSV row {cells!r}")
        parsed.append(nums)
    data = np.asarray(parsed, dtype=np.float64)
    if width == 1:
        return LossSample(data[:, 0])
    weights = data[:, 1]
    total = float(weights.sum())
    if not np.isfinite(total) or total <= 0 or np.any(weights < 0):
        raise InvalidInputError("weights must be nonnegative with a positive sum")
    return LossSample(data[:, 0], weights / total)
