"""Supremum-over-spectral representations.

A risk functional can be described by a set of concave distortions whose
spectral values are maximized over. Two explicit families matter here: the
"linear-then-flat" members whose supremum recovers the Marcinkiewicz value,
and the "linear-then-linear-to-one" members whose supremum recovers the
two-sided (TM) value. Translation equivariance of the supremum is exactly
the question of whether every member ends at 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distortion import Distortion
from .empirical_core import LossSample, rearrange
from .errors import DomainError, InvalidInputError
from .risk_measures import spectral_risk

DEFAULT_FAMILY_POINTS = 256
_WITNESS_MARGIN = 1e-9
_WITNESS_TRIALS = 10_000


@dataclass(frozen=True)
class KusuokaSet:
    """A non-empty collection of concave distortions, evaluated by supremum.

    pte is True exactly when every member is normalized (ends at 1), which is
    when the supremum functional adds constants through.
    """

    members: tuple

    def __post_init__(self):
        if not self.members:
            raise InvalidInputError("a member set must not be empty")
        object.__setattr__(self, "members", tuple(self.members))

    @property
    def pte(self) -> bool:
        return all(m.is_normalized for m in self.members)

    @classmethod
    def from_json(cls, obj) -> "KusuokaSet":
        if not isinstance(obj, dict) or "members" not in obj:
            raise InvalidInputError("member-set spec needs a 'members' list")
        return cls(tuple(Distortion.from_json(m, require_normalized=False) for m in obj["members"]))

    def to_json(self) -> dict:
        return {"members": [m.to_json() for m in self.members]}


def kusuoka_risk(sample: LossSample, kset: KusuokaSet) -> float:
    """Maximum of the signed spectral values over the member set."""
    return max(spectral_risk(sample, m, signed=True) for m in kset.members)


def default_grid(m: int = DEFAULT_FAMILY_POINTS, sample: LossSample | None = None) -> np.ndarray:
    """Family grid {i/m : i = 1..m-1}, optionally merged with a sample's own
    breakpoints so that kink-aligned suprema are attained exactly."""
    if m < 2:
        raise DomainError("grid needs m >= 2")
    pts = np.arange(1, m) / m
    if sample is not None:
        cums = rearrange(sample, signed=False).cum_probs
        pts = np.concatenate([pts, cums[(cums > 0.0) & (cums < 1.0)]])
    return np.unique(pts)


def marcinkiewicz_family(phi: Distortion, grid) -> KusuokaSet:
    """Members Z_t: linear with slope phi(t)/t up to t, then flat at phi(t).

    Sub-normalized unless phi(t) = 1, so the supremum is not translation
    equivariant in general; its pointwise sup over a dense grid recovers phi.
    """
    ts = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    if ts.size == 0:
        raise InvalidInputError("family grid must be non-empty")
    if np.any(ts <= 0.0) or np.any(ts > 1.0):
        raise DomainError("family grid must lie in (0, 1]")
    members = []
    for t in ts:
        v = phi(t)
        if t == 1.0:
            members.append(Distortion.piecewise_linear([0.0, 1.0], [0.0, v]))
        else:
            members.append(Distortion.piecewise_linear([0.0, t, 1.0], [0.0, v, v]))
    return KusuokaSet(tuple(members))


def tm_family(phi: Distortion, grid) -> KusuokaSet:
    """Members Z_t: slope phi(t)/t up to t, then linear on to Z_t(1) = 1.

    All members are normalized, so the supremum is translation equivariant;
    over a dense grid it recovers the two-sided (TM) value of phi.
    """
    ts = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    if ts.size == 0:
        raise InvalidInputError("family grid must be non-empty")
    if np.any(ts <= 0.0) or np.any(ts >= 1.0):
        raise DomainError("family grid must lie in (0, 1)")
    members = tuple(
        Distortion.piecewise_linear([0.0, t, 1.0], [0.0, phi(t), 1.0]) for t in ts
    )
    return KusuokaSet(members)


def comonotone_additivity_witness(kset: KusuokaSet, n: int, seed: int, trials: int = _WITNESS_TRIALS):
    """Search for a comonotone pair on which the supremum is strictly subadditive.

    Draws seeded integer-valued pairs on up to n shared atoms, sorted the same
    way so they are comonotone, and returns the first (X, Y) with
    risk(X + Y) < risk(X) + risk(Y) - 1e-9, or None when the budget runs out.
    A single-member set is additive on every comonotone pair, so the search is
    skipped and None returned immediately.
    """
    if n < 2:
        raise DomainError("witness search needs n >= 2 atoms")
    if len(kset.members) < 2:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        size = int(rng.integers(2, n + 1))
        x = np.sort(rng.integers(0, 10, size)).astype(np.float64)
        y = np.sort(rng.integers(0, 10, size)).astype(np.float64)
        sx = LossSample(x)
        sy = LossSample(y)
        gap = kusuoka_risk(sx, kset) + kusuoka_risk(sy, kset) - kusuoka_risk(LossSample(x + y), kset)
        if gap > _WITNESS_MARGIN:
            return sx, sy
    return None
