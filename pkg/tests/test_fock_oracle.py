import math
import time

import numpy as np
import pytest

from chiral_light import gaussian as gs
from chiral_light.errors import StepTooLarge, TruncationLeak, Unstable
from chiral_light.fock_oracle import (
    FockConfig,
    FockState,
    coherent_state,
    destroy,
    drive_sideband_weights,
    effective_lindblad_steady,
    embed,
    full_model_evolve,
    max_step,
    reduced_covariance,
    vacuum,
)
from chiral_light.model import ModelParams
from helpers import late_photon_number, sideband_drive
from oracles import bessel_series, lyapunov_steady, single_drift_diffusion, single_moments


def test_destroy_and_embed():
    a = destroy(4)
    np.testing.assert_allclose(a.conj().T @ a, np.diag([0, 1, 2, 3]), atol=1e-14)
    b = embed(destroy(3), 1, (2, 3))
    assert b.shape == (6, 6)
    np.testing.assert_allclose(b, np.kron(np.eye(2), destroy(3)))


def test_partial_trace_of_product():
    c = coherent_state(8, 0.4)
    rho = np.kron(vacuum((2,)).rho, c.rho)
    s = FockState(rho, (2, 8), ("qubit", "cavity"))
    np.testing.assert_allclose(s.photons().rho, c.rho, atol=1e-14)
    assert s.partial_trace([0]).rho[0, 0] == pytest.approx(1.0)


def test_coherent_state_covariance_is_vacuum():
    cov = reduced_covariance(coherent_state(20, 0.7 + 0.2j))
    np.testing.assert_allclose(cov.gamma, 0.5 * np.eye(2), atol=1e-9)


@pytest.mark.parametrize("q", [0.0, 0.9])
def test_single_site_steady_matches_lyapunov(q):
    eta = 0.3
    state = effective_lindblad_steady(1.0, eta, q, 1.0, FockConfig(n_max=16))
    aa_ref, n_ref = single_moments(lyapunov_steady(*single_drift_diffusion(1.0, eta, 0.0, 1.0, q)))
    cov = reduced_covariance(state)
    aa, n, _ = cov.moments()
    assert n == pytest.approx(n_ref, abs=1e-4)
    assert aa == pytest.approx(aa_ref, abs=1e-4)
    assert n_ref == pytest.approx(eta**2 / (1 - eta**2), abs=1e-12)


def test_rotating_single_site():
    eta, w = 0.3, 0.2
    state = effective_lindblad_steady(1.0, eta, 0.0, 1.0, FockConfig(n_max=16), omegas=(w,))
    aa_ref, _ = single_moments(lyapunov_steady(*single_drift_diffusion(1.0, eta, w, 1.0)))
    aa, _, _ = reduced_covariance(state).moments()
    assert aa == pytest.approx(aa_ref, abs=1e-4)
    assert aa == pytest.approx(gs.steady_moments(eta, 2 * w / 4)[0], abs=1e-4)


def test_truncation_error_shrinks_with_n_max():
    eta = 0.4
    errs = []
    for n_max in (6, 9, 12):
        state = effective_lindblad_steady(1.0, eta, 0.0, 1.0, FockConfig(n_max=n_max, leak_threshold=1.0))
        errs.append(abs(reduced_covariance(state).moments()[1] - eta**2 / (1 - eta**2)))
    assert errs[0] > errs[1] > errs[2]


def test_leak_raises():
    with pytest.raises(TruncationLeak):
        effective_lindblad_steady(1.0, 0.6, 0.0, 1.0, FockConfig(n_max=4))


def test_unstable_oracle():
    with pytest.raises(Unstable):
        effective_lindblad_steady(1.0, 1.0, 0.0, 1.0)


def test_sideband_weights_match_bessel_series():
    lam, Om = 3.0, 20.0
    w = drive_sideband_weights(lam, Om, orders=(0, 1, -1, 2))
    z = 2 * lam / Om
    # trapezoidal phase accumulation limits agreement to ~1e-8 at 4096 samples
    assert w[0] == pytest.approx(bessel_series(0, z), abs=1e-7)
    assert w[1] == pytest.approx(bessel_series(1, z), abs=1e-7)
    assert w[2] == pytest.approx(-bessel_series(1, z), abs=1e-7)
    assert w[3] == pytest.approx(bessel_series(2, z), abs=1e-7)


def test_full_model_qubit_decay():
    p = ModelParams(epsilon=5.0, g=0.0, Gamma=1.0)
    rho = np.zeros((8, 8), dtype=complex)
    rho[4, 4] = 1.0  # excited qubit, cavity vacuum
    init = FockState(rho, (2, 4), ("qubit", "cavity"))
    traj = full_model_evolve(p, FockConfig(n_max=4, t_final=2.0, sample_every=200), init)
    np.testing.assert_allclose(traj.qubit_excitation(), np.exp(-traj.times), atol=1e-9)


def test_full_model_free_cavity_keeps_photons():
    p = ModelParams(omega_r=1.0, epsilon=3.0, g=0.0, Gamma=1.0)
    c = coherent_state(12, 0.8)
    init = FockState(np.kron(vacuum((2,)).rho, c.rho), (2, 12), ("qubit", "cavity"))
    # a pure state with no damping is the worst case for RK4's slight amplitude loss
    cfg = FockConfig(n_max=12, t_final=3.0, dt=max_step(p, 12) / 8, sample_every=500)
    traj = full_model_evolve(p, cfg, init)
    n = traj.photon_number()
    np.testing.assert_allclose(n, n[0], atol=1e-10)


def test_full_model_step_guard():
    p = ModelParams(epsilon=10.0, Gamma=1.0)
    with pytest.raises(StepTooLarge):
        full_model_evolve(p, FockConfig(n_max=3, t_final=1.0, dt=2 * max_step(p, 3)))


def test_full_model_states_are_physical():
    p = sideband_drive(0.3, epsilon=100.0, omega_r=10.0, Gamma=1.0)
    traj = full_model_evolve(p, FockConfig(n_max=6, t_final=2.0, sample_every=2000))
    for s in traj.states:
        s.check()
        assert gs.physicality_margin(reduced_covariance(s).gamma) >= -1e-9


@pytest.mark.slow
def test_full_model_resolved_sidebands():
    # well-resolved sidebands (Gamma << omega_r) are where elimination is controlled
    errs = []
    for Gamma in (2.0, 4.0):
        p = sideband_drive(0.3, epsilon=400.0, omega_r=40.0, Gamma=Gamma)
        start = time.perf_counter()
        n, pred, _ = late_photon_number(p, n_max=10)
        errs.append(abs(n - pred) / pred)
        print(f"Gamma/g = {Gamma}: <n> = {n:.5f}, predicted {pred:.5f}, {time.perf_counter() - start:.1f} s")
    assert errs[0] < 0.05 and errs[1] < 0.05
    assert errs[0] < errs[1]
