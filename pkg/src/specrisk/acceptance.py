"""Desk-scale acceptance suite.

Thirteen self-contained checks covering the functional core: coherence
axioms, the survival-integral/spectral identity, the extremal-functional
sandwich and its collapse cases, supremum representations, exhaustive
rearrangement bounds, the diagnostics, the trainers, and the combination
calculus. Each criterion returns a structured pass/fail result; the pytest
suite and the CLI ``selftest`` subcommand both run exactly these functions.

All randomness is drawn from fixed per-criterion seeds, so the suite is
deterministic run to run.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .combination import Combiner, combine
from .distortion import Distortion
from .empirical_core import LossSample, rearrange
from .evaluation import gini, lorenz_curve, second_order_dominates
from .kusuoka import KusuokaSet, comonotone_additivity_witness
from .optimizer import pca_losses, pca_star, spectral_weights
from .risk_measures import (
    RiskSpec,
    choquet_integral,
    cvar,
    dutch,
    equivalence_constant,
    evaluate,
    marcinkiewicz_norm,
    maxvar,
    rim,
    rim_variational,
    spectral_risk,
    tm_norm,
)
from .synthetic import heavy_tail_pair, two_cluster

_BASE_SEED = 20260816


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status} ({self.elapsed:.2f}s): {self.name} — {self.detail}"


def _rng(k: int) -> np.random.Generator:
    return np.random.default_rng(_BASE_SEED + k)


def _random_concave_distortion(rng) -> Distortion:
    k = int(rng.integers(0, 4))
    ts = np.unique(np.concatenate([[0.0, 1.0], rng.uniform(0.05, 0.95, k)]))
    slopes = np.sort(rng.uniform(0.2, 3.0, ts.size - 1))[::-1]
    vals = np.concatenate([[0.0], np.cumsum(slopes * np.diff(ts))])
    vals /= vals[-1]
    return Distortion.piecewise_linear(ts, vals)


def _random_nonneg(rng, max_n: int = 64) -> LossSample:
    n = int(rng.integers(2, max_n + 1))
    values = rng.gamma(2.0, 1.5, n)
    weights = rng.dirichlet(np.ones(n)) if rng.random() < 0.5 else None
    return LossSample(values, weights)


def _random_signed(rng, max_n: int = 32) -> LossSample:
    n = int(rng.integers(2, max_n + 1))
    weights = rng.dirichlet(np.ones(n)) if rng.random() < 0.5 else None
    return LossSample(rng.standard_normal(n) * 2.0, weights)


# -- criterion 1 ---------------------------------------------------------------


def criterion_1() -> CriterionResult:
    """Coherence axiom suite over seven translation-equivariant specs."""
    start = time.perf_counter()
    rng = _rng(1)
    fixed = [
        RiskSpec("mean"),
        RiskSpec("cvar", alpha=0.3),
        RiskSpec("rim", alpha=0.7, beta=0.4),
        RiskSpec("dutch"),
        RiskSpec("maxvar", n=2.0),
        RiskSpec("tm", phi=Distortion.power_complement(2.0)),
    ]
    worst = 0.0
    for _ in range(200):
        x = _random_nonneg(rng)
        y = LossSample(rng.gamma(2.0, 1.5, x.size), x.weights)
        bump = rng.gamma(1.0, 0.8, x.size)
        c = float(rng.uniform(0.1, 3.0))
        specs = fixed + [RiskSpec("spectral", phi=_random_concave_distortion(rng))]
        for spec in specs:
            rx = evaluate(spec, x)
            ry = evaluate(spec, y)
            for lam in (0.5, 2.0, 7.0):
                worst = max(worst, abs(evaluate(spec, x.scale(lam)) - lam * rx))
            sub = evaluate(spec, LossSample(x.values + y.values, x.weights)) - rx - ry
            worst = max(worst, sub)
            mono = rx - evaluate(spec, LossSample(x.values + bump, x.weights))
            worst = max(worst, mono)
            worst = max(worst, abs(evaluate(spec, x.shift(c)) - rx - c))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    return CriterionResult(
        1,
        "coherence axioms (PH, subadd, monotone, PTE)",
        ok,
        f"max violation {worst:.2e} over 200 samples x 7 specs, tol 1e-9",
        elapsed,
    )


# -- criterion 2 ---------------------------------------------------------------


def criterion_2() -> CriterionResult:
    """Distorted-survival integral coincides with the signed spectral form."""
    start = time.perf_counter()
    rng = _rng(2)
    distortions = [
        Distortion.identity(),
        Distortion.cvar(0.3),
        Distortion.cvar(0.9),
        Distortion.rim(0.5, 0.5),
        Distortion.rim(0.8, 0.2),
        Distortion.power_complement(2.0),
        Distortion.power_complement(7.0),
        Distortion.proportional_power(0.5),
        Distortion.proportional_power(0.9),
        Distortion.piecewise_linear([0.0, 0.2, 0.7, 1.0], [0.0, 0.5, 0.9, 1.0]),
    ]
    worst = 0.0
    for _ in range(500):
        x = _random_signed(rng)
        for phi in distortions:
            worst = max(worst, abs(choquet_integral(x, phi) - spectral_risk(x, phi, signed=True)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    return CriterionResult(
        2,
        "survival-integral / spectral identity",
        ok,
        f"max gap {worst:.2e} over 500 signed samples x 10 distortions, tol 1e-9",
        elapsed,
    )


# -- criterion 3 ---------------------------------------------------------------


def criterion_3() -> CriterionResult:
    """Extremal sandwich and the 4/3 equivalence chain for the square complement."""
    start = time.perf_counter()
    rng = _rng(3)
    phi = Distortion.power_complement(2.0)
    k = equivalence_constant(phi)
    worst = 0.0
    for _ in range(200):
        x = _random_nonneg(rng)
        m = marcinkiewicz_norm(x, phi)
        d = dutch(x)
        v = maxvar(x, 2.0)
        worst = max(worst, m - d, d - v, v - k * m)
    exact = LossSample(np.array([1.0, 2.0, 3.0]))
    triple = (
        marcinkiewicz_norm(exact, phi),
        dutch(exact),
        maxvar(exact, 2.0),
    )
    exact_dev = max(abs(triple[0] - 20.0 / 9.0), abs(triple[1] - 21.0 / 9.0), abs(triple[2] - 22.0 / 9.0))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and exact_dev <= 1e-9 and abs(k - 4.0 / 3.0) <= 1e-12
    return CriterionResult(
        3,
        "sandwich chain marcinkiewicz <= dutch <= maxvar <= 4/3 marcinkiewicz",
        ok,
        f"max chain violation {worst:.2e}; worked triple off by {exact_dev:.2e}",
        elapsed,
    )


# -- criterion 4 ---------------------------------------------------------------


def criterion_4() -> CriterionResult:
    """For tail-value distortions the extremal gap closes: all three coincide."""
    start = time.perf_counter()
    rng = _rng(4)
    worst = 0.0
    for _ in range(100):
        x = _random_nonneg(rng)
        for alpha in (0.0, 0.25, 0.5, 0.9):
            phi = Distortion.cvar(alpha)
            m = marcinkiewicz_norm(x, phi)
            s = spectral_risk(x, phi, signed=False)
            c = cvar(x, alpha)
            worst = max(worst, abs(m - s), abs(m - c), abs(s - c))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9
    return CriterionResult(
        4,
        "tail-value collapse: marcinkiewicz = spectral = cvar",
        ok,
        f"max pairwise gap {worst:.2e} over 100 samples x 4 levels, tol 1e-9",
        elapsed,
    )


# -- criterion 5 ---------------------------------------------------------------


def criterion_5() -> CriterionResult:
    """Mean/tail blends: two-sided supremum meets the exact spectral value."""
    start = time.perf_counter()
    rng = _rng(5)
    worst_tm = 0.0
    worst_closed = 0.0
    for _ in range(50):
        x = _random_nonneg(rng)
        for alpha in (0.1, 0.3, 0.6, 0.85):
            for beta in (0.0, 0.3, 0.7, 1.0):
                phi = Distortion.rim(alpha, beta)
                s = spectral_risk(x, phi, signed=False)
                t = tm_norm(x, phi)
                closed = beta * x.mean() + (1.0 - beta) * cvar(x, alpha)
                worst_tm = max(worst_tm, abs(t - s))
                worst_closed = max(worst_closed, abs(s - closed), abs(rim(x, alpha, beta) - closed))
    elapsed = time.perf_counter() - start
    ok = worst_tm <= 1e-6 and worst_closed <= 1e-9
    return CriterionResult(
        5,
        "mean/tail blend collapse: tm = spectral = closed form",
        ok,
        f"max |tm - spectral| {worst_tm:.2e} (tol 1e-6); closed-form gap {worst_closed:.2e} (tol 1e-9)",
        elapsed,
    )


# -- criterion 6 ---------------------------------------------------------------


def criterion_6() -> CriterionResult:
    """Dutch premium: two-sided square-complement supremum and the blend supremum."""
    start = time.perf_counter()
    rng = _rng(6)
    phi = Distortion.power_complement(2.0)
    base = np.arange(1, 256) / 256.0
    worst_tm = 0.0
    worst_sup = 0.0
    for _ in range(100):
        x = _random_nonneg(rng, max_n=32)
        d = dutch(x)
        worst_tm = max(worst_tm, abs(d - tm_norm(x, phi)))
        cums = rearrange(x, signed=True).cum_probs
        inner = cums[(cums > 0.0) & (cums < 1.0)]
        betas = np.unique(np.concatenate([[0.0], base, inner, 1.0 - inner]))
        sup = max(rim(x, float(b), float(b)) for b in betas)
        worst_sup = max(worst_sup, abs(d - sup))
    elapsed = time.perf_counter() - start
    ok = worst_tm <= 1e-6 and worst_sup <= 1e-6
    return CriterionResult(
        6,
        "dutch premium representations",
        ok,
        f"max |dutch - tm| {worst_tm:.2e}; max |dutch - sup blend| {worst_sup:.2e}; tol 1e-6",
        elapsed,
    )


# -- criterion 7 ---------------------------------------------------------------


def criterion_7() -> CriterionResult:
    """The blend's scalar-projection form matches its closed form."""
    start = time.perf_counter()
    rng = _rng(7)
    pairs = [(float(rng.uniform(0.0, 0.95)), float(rng.uniform(0.0, 1.0))) for _ in range(10)]
    worst = 0.0
    for _ in range(100):
        x = _random_signed(rng)
        for alpha, beta in pairs:
            worst = max(worst, abs(rim(x, alpha, beta) - rim_variational(x, alpha, beta)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9
    return CriterionResult(
        7,
        "blend variational form",
        ok,
        f"max gap {worst:.2e} over 100 samples x 10 parameter pairs, tol 1e-9",
        elapsed,
    )


# -- criterion 8 ---------------------------------------------------------------


def criterion_8() -> CriterionResult:
    """Comonotone additivity of single spectral functionals, and a strict
    subadditivity witness for the two-member tail set {cvar(0), cvar(0.5)}.

    The second clause cannot hold: the level-0.5 tail value dominates the mean
    on every sample, so that supremum IS the single functional cvar(0.5),
    which is additive on every comonotone pair. The search is run faithfully
    and the clause reported as failed; see the companion notes for the
    argument and for a two-member set with mixed normalization where a witness
    does exist.
    """
    start = time.perf_counter()
    rng = _rng(8)
    distortions = [
        Distortion.identity(),
        Distortion.cvar(0.4),
        Distortion.rim(0.6, 0.3),
        Distortion.power_complement(3.0),
        _random_concave_distortion(rng),
    ]
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        w = rng.dirichlet(np.ones(n)) if rng.random() < 0.5 else None
        x = LossSample(np.sort(rng.standard_normal(n) * 2.0), w)
        y = LossSample(np.sort(rng.gamma(2.0, 1.0, n)), w)
        both = LossSample(x.values + y.values, w)
        for phi in distortions:
            gap = abs(spectral_risk(both, phi) - spectral_risk(x, phi) - spectral_risk(y, phi))
            worst = max(worst, gap)
    additive_ok = worst <= 1e-9
    witness = comonotone_additivity_witness(
        KusuokaSet((Distortion.cvar(0.0), Distortion.cvar(0.5))), n=8, seed=_BASE_SEED
    )
    elapsed = time.perf_counter() - start
    ok = additive_ok and witness is not None
    if witness is None:
        tail = (
            "no witness in 10000 seeded trials — none can exist: the 0.5-level tail value "
            "dominates the mean on every sample, so this supremum equals the single "
            "functional cvar(0.5), which is comonotone additive"
        )
    else:
        tail = "witness found"
    return CriterionResult(
        8,
        "comonotone additivity + subadditivity witness",
        ok,
        f"max additivity gap {worst:.2e} (tol 1e-9); {tail}",
        elapsed,
    )


# -- criterion 9 ---------------------------------------------------------------


def criterion_9() -> CriterionResult:
    """Exhaustive rearrangement bound: no pairing beats the sorted pairing."""
    start = time.perf_counter()
    worst = 0.0
    checked = 0
    for n in range(1, 6):
        grids = np.array(list(itertools.product((0.0, 1.0, 2.0), repeat=n)))
        sorted_rows = np.sort(grids, axis=1)
        paired = grids @ grids.T / n
        aligned = sorted_rows @ sorted_rows.T / n
        worst = max(worst, float(np.max(paired - aligned)))
        checked += grids.shape[0] ** 2
    elapsed = time.perf_counter() - start
    ok = worst <= 0.0
    return CriterionResult(
        9,
        "exhaustive sorted-pairing bound",
        ok,
        f"max excess {worst:.2e} over {checked} pairs (n <= 5, values in {{0,1,2}})",
        elapsed,
    )


# -- criterion 10 --------------------------------------------------------------


def criterion_10() -> CriterionResult:
    """Inequality diagnostics and dominance consistency."""
    start = time.perf_counter()
    rng = _rng(10)
    spike = gini(LossSample(np.array([0.0, 0.0, 0.0, 1.0])))
    flat = gini(LossSample(np.full(5, 3.7)))
    qs = np.linspace(0.0, 1.0, 11)
    diag = lorenz_curve(LossSample(np.full(6, 2.5)), qs)
    diag_dev = float(np.max(np.abs(diag.values - qs)))
    worst = 0.0
    dominance_ok = True
    specs = [RiskSpec("spectral", phi=_random_concave_distortion(rng)) for _ in range(20)]
    for _ in range(50):
        a = _random_signed(rng)
        b = LossSample(a.values + rng.gamma(1.0, 0.5, a.size), a.weights)
        dominance_ok = dominance_ok and second_order_dominates(a, b)
        for spec in specs:
            worst = max(worst, evaluate(spec, a) - evaluate(spec, b))
    elapsed = time.perf_counter() - start
    ok = (
        abs(spike - 0.75) <= 1e-12
        and abs(flat) <= 1e-12
        and diag_dev <= 1e-12
        and dominance_ok
        and worst <= 1e-9
    )
    return CriterionResult(
        10,
        "diagnostics: gini values, diagonal lorenz, dominance consistency",
        ok,
        f"gini spike err {abs(spike - 0.75):.1e}; diag dev {diag_dev:.1e}; max spec violation {worst:.2e}",
        elapsed,
    )


# -- criterion 11 --------------------------------------------------------------


def criterion_11() -> CriterionResult:
    """Heavy tails dominate light tails in both Gini and high-level tail value."""
    start = time.perf_counter()
    normal, heavy = heavy_tail_pair(500, seed=_BASE_SEED + 11)
    gn, gh = gini(normal), gini(heavy)
    cn, ch = cvar(normal, 0.9), cvar(heavy, 0.9)
    elapsed = time.perf_counter() - start
    ok = gh > gn and ch > cn and elapsed < 2.0
    return CriterionResult(
        11,
        "heavy-tail direction (|t_2| vs |N(0,1)|, n=500)",
        ok,
        f"gini {gh:.3f} > {gn:.3f}; tail value 0.9: {ch:.3f} > {cn:.3f}",
        elapsed,
    )


# -- criterion 12 --------------------------------------------------------------


def criterion_12() -> CriterionResult:
    """Rank-weight subgradients check out against finite differences, and
    tail-aware subspace training beats mean training where it should."""
    start = time.perf_counter()
    rng = _rng(12)
    h = 1e-6
    worst_fd = 0.0
    for trial in range(100):
        n = 12
        base = np.linspace(0.0, 4.0, n)
        losses = rng.permutation(base) + rng.uniform(-0.05, 0.05, n)
        if trial % 3 == 0:
            phi = Distortion.cvar(float(rng.uniform(0.0, 0.9)))
        elif trial % 3 == 1:
            phi = Distortion.power_complement(float(rng.uniform(1.0, 5.0)))
        else:
            phi = _random_concave_distortion(rng)
        w = spectral_weights(losses, phi)
        r0 = spectral_risk(LossSample(losses), phi)
        for i in range(n):
            bumped = losses.copy()
            bumped[i] += h
            fd = (spectral_risk(LossSample(bumped), phi) - r0) / h
            worst_fd = max(worst_fd, abs(fd - w[i] / n))
    fd_ok = worst_fd <= 10.0 * h

    train = two_cluster(seed=_BASE_SEED + 120)
    test = two_cluster(seed=_BASE_SEED + 121)
    steps, lr = 400, 2e-3
    state_tail, _, _ = pca_star(train, 1, RiskSpec("cvar", alpha=0.8), steps, lr, seed=0)
    state_mean, _, _ = pca_star(train, 1, RiskSpec("mean"), steps, lr, seed=0)
    tail_losses = LossSample(pca_losses(state_tail.params, test))
    mean_losses = LossSample(pca_losses(state_mean.params, test))
    tail_at_tail = cvar(tail_losses, 0.9)
    tail_at_mean = cvar(mean_losses, 0.9)
    mean_at_tail = tail_losses.mean()
    mean_at_mean = mean_losses.mean()
    train_ok = tail_at_tail < tail_at_mean and mean_at_mean <= mean_at_tail
    elapsed = time.perf_counter() - start
    ok = fd_ok and train_ok and elapsed < 30.0
    return CriterionResult(
        12,
        "subgradient check + tail-aware subspace training",
        ok,
        (
            f"max FD gap {worst_fd:.2e} (tol 1e-5); test tail value 0.9: {tail_at_tail:.3f} < {tail_at_mean:.3f}; "
            f"test mean: {mean_at_mean:.3f} <= {mean_at_tail:.3f}"
        ),
        elapsed,
    )


# -- criterion 13 --------------------------------------------------------------


def criterion_13() -> CriterionResult:
    """Combination calculus: identity stability, min/max endpoints, symmetry,
    and coincidence at crossings of the quarter-power / capped-line pair."""
    start = time.perf_counter()
    rng = _rng(13)
    grid = np.linspace(0.0, 1.0, 1025)
    worst_id = 0.0
    for _ in range(5):
        phi = _random_concave_distortion(rng)
        a = float(rng.uniform(1.0, 4.0))
        psi = Combiner.power(a)
        f = combine(phi, phi, psi)
        worst_id = max(worst_id, float(np.max(np.abs(f(grid) - phi(grid)))))

    phi0 = Distortion.proportional_power(0.25)
    phi1 = Distortion.piecewise_linear([0.0, 1.0 / 3.0, 1.0], [0.0, 1.0, 1.0])
    v0, v1 = phi0(grid), phi1(grid)
    fmin = combine(phi0, phi1, Combiner.min_combiner())(grid)
    fmax = combine(phi0, phi1, Combiner.max_combiner())(grid)
    worst_endpoints = max(
        float(np.max(np.abs(fmin - np.minimum(v0, v1)))),
        float(np.max(np.abs(fmax - np.maximum(v0, v1)))),
    )

    worst_sym = 0.0
    for a in (1.0, 2.0, 4.0):
        psi = Combiner.power(a)
        worst_sym = max(
            worst_sym,
            float(np.max(np.abs(combine(phi0, phi1, psi)(grid) - combine(phi1, phi0, psi)(grid)))),
        )

    crossings = np.array([0.0, 3.0 ** (-4.0 / 3.0), 1.0])
    worst_cross = 0.0
    for a in (1.0, 2.0, 4.0, 8.0):
        f = combine(phi0, phi1, Combiner.power(a))
        vals = f(crossings)
        worst_cross = max(
            worst_cross,
            float(np.max(np.abs(vals - phi0(crossings)))),
            float(np.max(np.abs(vals - phi1(crossings)))),
        )
    elapsed = time.perf_counter() - start
    ok = worst_id <= 1e-12 and worst_endpoints <= 1e-12 and worst_sym <= 1e-12 and worst_cross <= 1e-9
    return CriterionResult(
        13,
        "combination calculus (identity, endpoints, symmetry, crossings)",
        ok,
        (
            f"identity dev {worst_id:.1e}; endpoint dev {worst_endpoints:.1e}; "
            f"asymmetry {worst_sym:.1e}; crossing dev {worst_cross:.1e}"
        ),
        elapsed,
    )


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
)


def run_all():
    """Run every criterion in order; returns the list of CriterionResults."""
    return [fn() for fn in CRITERIA]
