"""Risk functionals on finite weighted samples.

The workhorse is the spectral form: integrate the decreasing rearrangement
against the increments of a concave distortion. Everything else here is
either a reparametrization of that form (tail value, max-of-iid, Choquet,
mean blends) or an extremal construction around the same distortion
(Marcinkiewicz and two-sided suprema). ``evaluate`` dispatches a declarative
RiskSpec onto these functions, using the signed rearrangement for the
translation-equivariant variants and |X| for the norm variants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import spectral_sum, sup_scaled_average, sup_two_sided
from .distortion import Distortion
from .empirical_core import LossSample, quantile, rearrange
from .errors import DomainError, InvalidInputError

DEFAULT_REFINEMENT = 64


def spectral_risk(sample: LossSample, phi: Distortion, signed: bool = True) -> float:
    """Integral of the decreasing rearrangement against the increments of phi.

    signed=True (default) rearranges the raw values, which is the form that
    prices signed positions and is translation-equivariant; signed=False
    rearranges |X| and yields the rearrangement-invariant norm of the sample.
    """
    r = rearrange(sample, signed=signed)
    return spectral_sum(r.sorted_values, phi.increments(r.cum_probs))


def cvar(sample: LossSample, alpha: float) -> float:
    """Average of the worst (1 - alpha) fraction of outcomes, alpha in [0, 1)."""
    if not 0.0 <= alpha < 1.0:
        raise DomainError("cvar level must lie in [0, 1)")
    r = rearrange(sample, signed=True)
    s = 1.0 - alpha
    return r.prefix(s) / s


def cvar_regret(sample: LossSample, alpha: float) -> float:
    """Tail value via the scalar projection min_c { c + E[(X - c)+] / (1 - alpha) }.

    The minimum sits at the lower alpha-quantile; evaluating there gives the
    same number as ``cvar`` without integrating the sorted tail explicitly.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("cvar level must lie in [0, 1)")
    if alpha == 0.0:
        c = float(np.min(sample.values[sample.weights > 0.0]))
    else:
        c = quantile(sample, alpha)
    excess = np.maximum(sample.values - c, 0.0)
    return c + float(np.dot(sample.weights, excess)) / (1.0 - alpha)


def top_fraction_average(sample: LossSample, alpha: float) -> float:
    """Plain average of the top (1 - alpha)*n values; cross-check only.

    Defined only for uniformly weighted samples where (1 - alpha) * n is an
    integer, in which case it agrees with ``cvar`` exactly.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("cvar level must lie in [0, 1)")
    n = sample.size
    if not np.allclose(sample.weights, 1.0 / n, rtol=0.0, atol=1e-12):
        raise InvalidInputError("top-fraction average needs uniform weights")
    k = (1.0 - alpha) * n
    if abs(k - round(k)) > 1e-9 or round(k) < 1:
        raise InvalidInputError("(1 - alpha) * n must be a positive integer")
    k = int(round(k))
    top = np.sort(sample.values)[-k:]
    return float(np.mean(top))


def choquet_integral(sample: LossSample, phi: Distortion) -> float:
    """Distorted-survival integral: phi(P(X > x)) over the positive axis plus
    phi(P(X > x)) - 1 over the negative axis.

    Only normalized distortions keep the lower integral finite, so phi(1) = 1
    is required. Agrees with the signed spectral form on every sample.
    """
    if not phi.is_normalized:
        raise DomainError("the Choquet form needs phi(1) = 1")
    r = rearrange(sample, signed=True)
    v = r.sorted_values
    total = max(float(v[-1]), 0.0) + min(float(v[0]), 0.0)
    if v.size == 1:
        return total
    f = phi(r.cum_probs[1:-1])
    pos = np.maximum(v, 0.0)
    neg = np.minimum(v, 0.0)
    total += float(np.dot(f, pos[:-1] - pos[1:]))
    total += float(np.dot(f - 1.0, neg[:-1] - neg[1:]))
    return total


def rim(sample: LossSample, alpha: float, beta: float) -> float:
    """Mean/tail blend beta * E[X] + (1 - beta) * cvar(alpha)."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError("rim beta must lie in [0, 1]")
    return beta * sample.mean() + (1.0 - beta) * cvar(sample, alpha)


def rim_variational(sample: LossSample, alpha: float, beta: float) -> float:
    """The mean/tail blend as a scalar projection inf_mu { mu + E[v(X - mu)] }.

    The penalty v is linear with slope beta on losses below mu and slope
    (1 - beta * alpha) / (1 - alpha) above; the minimum over mu is attained at
    a sample value, so scanning the support is exact.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("rim alpha must lie in [0, 1)")
    if not 0.0 <= beta <= 1.0:
        raise DomainError("rim beta must lie in [0, 1]")
    lo = beta
    hi = (1.0 - beta * alpha) / (1.0 - alpha)
    diffs = sample.values[None, :] - sample.values[:, None]
    penalty = np.where(diffs > 0.0, hi * diffs, lo * diffs)
    objective = sample.values + penalty @ sample.weights
    return float(np.min(objective))


def dutch(sample: LossSample) -> float:
    """Mean of X pushed up to at least its own mean: E[max(X, E X)]."""
    m = sample.mean()
    return float(np.dot(sample.weights, np.maximum(sample.values, m)))


def maxvar(sample: LossSample, n: float) -> float:
    """Expected maximum of n independent draws from |X| (n >= 1, possibly fractional)."""
    return spectral_risk(sample, Distortion.power_complement(n), signed=False)


def _candidate_grid(cum_probs: np.ndarray, phi: Distortion, refinement: int, open_right: bool) -> np.ndarray:
    """Supremum candidates: sample breakpoints, distortion kinks, and a uniform
    refinement of every cell in between. Always inside (0, 1]; with
    open_right the right endpoint 1 is dropped."""
    if refinement < 1:
        raise DomainError("refinement must be a positive integer")
    base = np.unique(np.concatenate([cum_probs, phi.kinks(), [0.0, 1.0]]))
    base = base[(base >= 0.0) & (base <= 1.0)]
    parts = [np.linspace(lo, hi, refinement + 1)[1:] for lo, hi in zip(base[:-1], base[1:])]
    ts = np.unique(np.concatenate(parts))
    ts = ts[ts > 0.0]
    if open_right:
        ts = ts[ts < 1.0]
    return np.ascontiguousarray(ts)


def marcinkiewicz_norm(sample: LossSample, phi: Distortion, refinement: int = DEFAULT_REFINEMENT) -> float:
    """sup over t in (0, 1] of phi(t) times the running average of rearranged |X|.

    The supremum is resolved on the candidate grid (breakpoints, kinks, and a
    per-cell refinement); for the kinked closed-form families the maximizer is
    itself a grid point, so the value is exact there. Approximates from below
    elsewhere.
    """
    r = rearrange(sample, signed=False)
    ts = _candidate_grid(r.cum_probs, phi, refinement, open_right=False)
    return sup_scaled_average(ts, phi(ts), r.cum_probs, r._prefix)


def tm_norm(sample: LossSample, phi: Distortion, refinement: int = DEFAULT_REFINEMENT) -> float:
    """Two-sided supremum blending head and tail averages of rearranged |X|:

        sup over t in (0, 1) of phi(t)/t * head(t) + (phi(t) - 1)/(t - 1) * tail(t)

    where head/tail split the integral of the rearrangement at t. This is the
    smallest translation-equivariant functional with the same value on
    indicators as phi; it dominates the Marcinkiewicz value and stays below
    the spectral one on nonnegative samples.
    """
    r = rearrange(sample, signed=False)
    ts = _candidate_grid(r.cum_probs, phi, refinement, open_right=True)
    best = sup_two_sided(ts, phi(ts), r.cum_probs, r._prefix)
    # t -> 1 limit of the objective is the plain mean of |X|
    return max(best, r.total())


def equivalence_constant(phi: Distortion) -> float:
    """1 / phi(1 / phi'(0)): a constant K with spectral <= K * marcinkiewicz.

    Finite exactly when the distortion has a finite slope at the origin;
    steep-at-zero families (proportional powers below 1) return +inf, meaning
    the two extremal functionals are not equivalent for that phi.
    """
    if not phi.is_normalized:
        raise DomainError("equivalence constant requires a normalized distortion")
    d0 = phi.derivative_at_zero
    if not math.isfinite(d0):
        return math.inf
    return 1.0 / phi(1.0 / d0)


_PHI_VARIANTS = {"cvar", "rim", "spectral"}


@dataclass(frozen=True)
class RiskSpec:
    """Declarative description of a risk functional, JSON round-trippable.

    variant is one of mean | worst_case | cvar | rim | dutch | maxvar |
    spectral | marcinkiewicz | tm | kusuoka, with the matching parameters set.
    """

    variant: str
    alpha: float = 0.0
    beta: float = 0.0
    n: float = 1.0
    phi: Distortion | None = None
    members: tuple = ()
    refinement: int = DEFAULT_REFINEMENT

    def __post_init__(self):
        known = {"mean", "worst_case", "cvar", "rim", "dutch", "maxvar", "spectral", "marcinkiewicz", "tm", "kusuoka"}
        if self.variant not in known:
            raise InvalidInputError(f"unknown risk variant {self.variant!r}")
        if self.variant in {"spectral", "marcinkiewicz", "tm"} and self.phi is None:
            raise InvalidInputError(f"{self.variant} spec needs a distortion")
        if self.variant == "kusuoka" and not self.members:
            raise InvalidInputError("kusuoka spec needs at least one member")

    @classmethod
    def from_json(cls, obj) -> "RiskSpec":
        if not isinstance(obj, dict) or "type" not in obj:
            raise InvalidInputError("risk spec must be an object with a 'type' key")
        kind = obj["type"]
        try:
            if kind == "mean":
                return cls("mean")
            if kind == "worst_case":
                return cls("worst_case")
            if kind == "cvar":
                Distortion.cvar(float(obj["alpha"]))
                return cls("cvar", alpha=float(obj["alpha"]))
            if kind == "rim":
                Distortion.rim(float(obj["alpha"]), float(obj["beta"]))
                return cls("rim", alpha=float(obj["alpha"]), beta=float(obj["beta"]))
            if kind == "dutch":
                return cls("dutch")
            if kind == "maxvar":
                n = float(obj["n"])
                if n < 1.0:
                    raise DomainError("maxvar needs n >= 1")
                return cls("maxvar", n=n)
            if kind == "spectral":
                return cls("spectral", phi=Distortion.from_json(obj["phi"]))
            if kind in {"power_complement", "proportional_power", "piecewise"}:
                # bare distortion JSON doubles as "spectral risk of that distortion"
                return cls("spectral", phi=Distortion.from_json(obj))
            if kind == "marcinkiewicz":
                return cls(
                    "marcinkiewicz",
                    phi=Distortion.from_json(obj["phi"]),
                    refinement=int(obj.get("refinement", DEFAULT_REFINEMENT)),
                )
            if kind == "tm":
                return cls(
                    "tm",
                    phi=Distortion.from_json(obj["phi"]),
                    refinement=int(obj.get("refinement", DEFAULT_REFINEMENT)),
                )
            if kind == "kusuoka":
                members = tuple(Distortion.from_json(m, require_normalized=False) for m in obj["members"])
                return cls("kusuoka", members=members)
        except KeyError as exc:
            raise InvalidInputError(f"risk spec missing field {exc}") from exc
        raise InvalidInputError(f"unknown risk spec type {kind!r}")

    def to_json(self) -> dict:
        if self.variant in {"mean", "worst_case", "dutch"}:
            return {"type": self.variant}
        if self.variant == "cvar":
            return {"type": "cvar", "alpha": self.alpha}
        if self.variant == "rim":
            return {"type": "rim", "alpha": self.alpha, "beta": self.beta}
        if self.variant == "maxvar":
            return {"type": "maxvar", "n": self.n}
        if self.variant == "spectral":
            return {"type": "spectral", "phi": self.phi.to_json()}
        if self.variant in {"marcinkiewicz", "tm"}:
            return {"type": self.variant, "phi": self.phi.to_json(), "refinement": self.refinement}
        return {"type": "kusuoka", "members": [m.to_json() for m in self.members]}


def evaluate(spec: RiskSpec, sample: LossSample) -> float:
    """Dispatch a RiskSpec: signed path for the translation-equivariant
    variants, |X| path for the norm variants (marcinkiewicz, maxvar)."""
    v = spec.variant
    if v == "mean":
        return sample.mean()
    if v == "worst_case":
        return sample.support_max()
    if v == "cvar":
        return cvar(sample, spec.alpha)
    if v == "rim":
        return rim(sample, spec.alpha, spec.beta)
    if v == "dutch":
        return dutch(sample)
    if v == "maxvar":
        return maxvar(sample, spec.n)
    if v == "spectral":
        return spectral_risk(sample, spec.phi, signed=True)
    if v == "marcinkiewicz":
        return marcinkiewicz_norm(sample, spec.phi, spec.refinement)
    if v == "tm":
        return tm_norm(sample, spec.phi, spec.refinement)
    # kusuoka: supremum of signed spectral values over the member set
    return max(spectral_risk(sample, m, signed=True) for m in spec.members)
