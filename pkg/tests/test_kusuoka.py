import numpy as np
import pytest

from specrisk import (
    Distortion,
    DomainError,
    InvalidInputError,
    KusuokaSet,
    LossSample,
    comonotone_additivity_witness,
    cvar,
    default_grid,
    kusuoka_risk,
    marcinkiewicz_family,
    spectral_risk,
    tm_family,
)

PC2 = Distortion.power_complement(2)


def s(*vals):
    return LossSample(np.array(vals, dtype=float))


def test_set_requires_members():
    with pytest.raises(InvalidInputError):
        KusuokaSet(())


def test_pte_flag():
    assert KusuokaSet((Distortion.cvar(0.2), Distortion.cvar(0.7))).pte
    sub = Distortion.piecewise_linear([0.0, 1.0], [0.0, 0.6])
    assert not KusuokaSet((Distortion.identity(), sub)).pte


def test_kusuoka_risk_is_member_max():
    x = s(1, 2, 3, 4)
    kset = KusuokaSet((Distortion.cvar(0.0), Distortion.cvar(0.5)))
    assert kusuoka_risk(x, kset) == pytest.approx(max(x.mean(), cvar(x, 0.5)), abs=1e-12)
    assert kusuoka_risk(x, kset) == pytest.approx(3.5)


def test_default_grid():
    g = default_grid(8)
    assert np.allclose(g, np.arange(1, 8) / 8)
    g2 = default_grid(8, sample=s(1, 2, 3))
    assert 1 / 3 in [pytest.approx(v) for v in g2]
    assert np.all((g2 > 0) & (g2 < 1))


def test_marcinkiewicz_family_members():
    fam = marcinkiewicz_family(PC2, [0.5, 1.0])
    assert len(fam.members) == 2
    z = fam.members[0]
    # plateau member: rises to phi(t) at t, then flat
    assert z(0.5) == pytest.approx(0.75)
    assert z(0.75) == pytest.approx(0.75)
    assert z.end_value == pytest.approx(0.75)
    # t=1 collapses to the straight chord up to phi(1)
    assert fam.members[1](0.5) == pytest.approx(0.5)
    assert not fam.pte
    with pytest.raises(DomainError):
        marcinkiewicz_family(PC2, [0.0, 0.5])


def test_tm_family_members():
    fam = tm_family(PC2, [0.5])
    z = fam.members[0]
    assert z(0.5) == pytest.approx(0.75)
    assert z(1.0) == 1.0
    assert fam.pte
    with pytest.raises(DomainError):
        tm_family(PC2, [0.5, 1.0])  # grid must stay inside (0,1)


def test_family_envelope_recovers_phi_at_grid():
    grid = np.arange(1, 16) / 16
    for phi in (PC2, Distortion.cvar(0.25), Distortion.rim(0.5, 0.3)):
        mfam = marcinkiewicz_family(phi, grid)
        tfam = tm_family(phi, grid)
        for x in grid:
            m_env = max(z(float(x)) for z in mfam.members)
            t_env = max(z(float(x)) for z in tfam.members)
            assert m_env == pytest.approx(phi(float(x)), abs=1e-12)
            assert t_env == pytest.approx(phi(float(x)), abs=1e-12)


def test_tm_family_risk_bounded_by_spectral():
    x = s(0.5, 1.5, 4.0, 9.0)
    fam = tm_family(PC2, default_grid(64, x))
    assert kusuoka_risk(x, fam) <= spectral_risk(x, PC2) + 1e-9


def test_tm_family_exact_for_aligned_kink():
    # cvar kink at 1-alpha on the grid: the matching member reproduces it exactly
    x = s(1, 2, 3, 4)
    phi = Distortion.cvar(0.5)
    fam = tm_family(phi, [0.25, 0.5, 0.75])
    assert kusuoka_risk(x, fam) == pytest.approx(spectral_risk(x, phi), abs=1e-12)


def test_json_round_trip():
    kset = KusuokaSet((Distortion.cvar(0.3), Distortion.piecewise_linear([0.0, 0.5, 1.0], [0.0, 0.8, 0.8])))
    back = KusuokaSet.from_json(kset.to_json())
    x = s(0.5, 2.0, 7.0)
    assert kusuoka_risk(x, back) == pytest.approx(kusuoka_risk(x, kset), abs=1e-15)


def test_witness_validation():
    kset = KusuokaSet((Distortion.cvar(0.0), Distortion.cvar(0.5)))
    with pytest.raises(DomainError):
        comonotone_additivity_witness(kset, n=1, seed=0)


def test_witness_none_for_singleton():
    kset = KusuokaSet((Distortion.cvar(0.5),))
    assert comonotone_additivity_witness(kset, n=4, seed=0) is None


def test_no_witness_for_tail_value_pair():
    # sup of mean and the 0.5-tail value IS the 0.5-tail value, which adds up
    # exactly on comonotone pairs, so the search must come back empty
    kset = KusuokaSet((Distortion.cvar(0.0), Distortion.cvar(0.5)))
    assert comonotone_additivity_witness(kset, n=6, seed=123, trials=2000) is None


def test_witness_found_for_mixed_normalization_set():
    # identity vs a steep capped member: the max genuinely switches members,
    # which breaks comonotone additivity and the search finds a certificate
    capped = Distortion.piecewise_linear([0.0, 0.2, 1.0], [0.0, 0.6, 0.6])
    kset = KusuokaSet((Distortion.identity(), capped))
    out = comonotone_additivity_witness(kset, n=5, seed=7)
    assert out is not None
    x, y = out
    both = LossSample(x.values + y.values, x.weights)
    gap = kusuoka_risk(x, kset) + kusuoka_risk(y, kset) - kusuoka_risk(both, kset)
    assert gap > 1e-9
    # the witness pair is comonotone by construction (both sorted ascending)
    assert np.all(np.diff(x.values) >= 0)
    assert np.all(np.diff(y.values) >= 0)
