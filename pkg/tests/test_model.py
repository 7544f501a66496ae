import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_light.errors import DegenerateDrive, IncommensurateMomentum
from chiral_light.model import (
    EffectiveModel,
    ModelParams,
    band_map,
    band_parameter,
    band_parameter_from_dispersion,
    effective_couplings,
    pair_blocks,
    pairing,
    self_paired_indices,
    snap_momentum,
)
from oracles import bessel_series, brute_partner

# frozen from the power-series oracle
G1_TONE = 0.23985182308409203
G2_TONE = 0.09337852722724421
G1_DETUNING = 0.24150251127492042
G2_DETUNING = 0.05270545695450395


def drive(z1, z2, **kw):
    Om1, Om2 = kw.pop("Omega1", 20.0), kw.pop("Omega2", 22.0)
    return ModelParams(lambda1=z1 * Om1 / 2, lambda2=z2 * Om2 / 2, Omega1=Om1, Omega2=Om2, **kw)


def test_couplings_tone_convention():
    m = effective_couplings(drive(0.5, 0.2))
    assert m.g1 == pytest.approx(G1_TONE, abs=1e-14)
    assert m.g2 == pytest.approx(G2_TONE, abs=1e-14)
    assert m.eta == pytest.approx(G2_TONE / G1_TONE, rel=1e-13)


def test_couplings_detuning_convention():
    p = ModelParams(epsilon=10.0, lambda1=1.5, lambda2=0.9, Omega1=4.0, Omega2=6.0)
    m = effective_couplings(p, "detuning")
    assert m.g1 == pytest.approx(G1_DETUNING, abs=1e-14)
    assert m.g2 == pytest.approx(G2_DETUNING, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.0, 1.0), st.floats(0.1, 3.0))
def test_couplings_match_series(z1, z2, g):
    m = effective_couplings(drive(z1, z2, g=g))
    assert m.g1 == pytest.approx(g * bessel_series(1, z1) * bessel_series(0, z2), rel=1e-12)
    assert m.g2 == pytest.approx(g * bessel_series(0, z1) * bessel_series(1, z2), rel=1e-12, abs=1e-15)


def test_gbar_is_g1():
    m = effective_couplings(drive(0.5, 0.2, g=3.0))
    assert m.gbar_mag == m.g1


def test_zero_first_drive_is_degenerate():
    with pytest.raises(DegenerateDrive):
        effective_couplings(drive(0.0, 0.3))


def test_strong_drive_warns():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        effective_couplings(drive(1.4, 0.2))
    assert any(issubclass(x.category, RuntimeWarning) for x in w)


def test_eta_above_one_is_reported_not_raised():
    m = effective_couplings(drive(0.1, 0.5))
    assert m.eta > 1 and not m.stable


def test_detuning():
    p = ModelParams(epsilon=20.0, Omega1=19.0, Omega2=21.5)
    assert p.Delta == pytest.approx(0.25)


def test_regime_valid():
    assert ModelParams(epsilon=100, Gamma=10, g=0.5, omega_r=0.5, Omega1=100, Omega2=100).regime_valid()
    assert not ModelParams(epsilon=100, Gamma=10, g=2.0, Omega1=100, Omega2=100).regime_valid()


def test_snap_momentum():
    assert snap_momentum(2 * math.pi / 10 + 1e-12, 10) == 1
    assert snap_momentum(-2 * math.pi / 10, 10) == 9
    with pytest.raises(IncommensurateMomentum):
        snap_momentum(0.1, 10)


def test_incommensurate_phase_difference():
    with pytest.raises(IncommensurateMomentum):
        effective_couplings(drive(0.5, 0.2, N=10, phi1=0.3))


@pytest.mark.parametrize("N", [1, 2, 3, 4, 7, 10, 12])
def test_pairing_matches_scan(N):
    for qi in range(N):
        m = EffectiveModel(g1=1.0, g2=0.3, N=N, q_index=qi)
        for k in m.k_grid:
            assert pairing(m, k) == pytest.approx(brute_partner(k, m.q, N), abs=1e-12)


def test_pair_blocks_cover_grid_once():
    for N in (4, 5, 10):
        for qi in range(N):
            m = EffectiveModel(g1=1.0, g2=0.3, N=N, q_index=qi)
            seen = sorted(i for blk in pair_blocks(m) for i in set(blk))
            assert seen == list(range(N))


def test_self_paired_counts():
    m = EffectiveModel(g1=1.0, g2=0.3, N=10, q_index=1)
    assert self_paired_indices(m) == []
    assert len(pair_blocks(m)) == 5
    m = EffectiveModel(g1=1.0, g2=0.3, N=4, q_index=0)
    assert self_paired_indices(m) == [0, 2]
    assert (1, 3) in pair_blocks(m)


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 16),
    st.integers(0, 15),
    st.integers(0, 15),
    st.floats(-2, 2),
    st.floats(0, 1),
    st.floats(0.1, 3),
)
def test_band_parameter_forms_agree(N, qi, ki, Delta, J, g1):
    m = EffectiveModel(g1=g1, g2=0.1 * g1, Delta=Delta, J=J, Gamma=1.7, N=N, q_index=qi % N)
    k = m.k_grid[ki % N]
    assert band_parameter(m, k) == pytest.approx(band_parameter_from_dispersion(m, k), abs=1e-10)


def test_band_map_q0_column():
    m = EffectiveModel(g1=0.2, g2=0.05, Delta=0.1, J=0.06, Gamma=1.0, N=10)
    E = band_map(m)
    expected = m.Gamma * (m.Delta + 2 * m.J * np.cos(m.k_grid)) / (2 * m.g1**2)
    np.testing.assert_allclose(E[:, 0], expected, rtol=0, atol=1e-12)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(N=0)
    with pytest.raises(ValueError):
        ModelParams(Gamma=0)
    with pytest.raises(ValueError):
        ModelParams(g=math.nan)
