"""Shared builders for the Fock-space tests."""

import numpy as np
from scipy.optimize import brentq
from scipy.special import j0, j1

from chiral_light.fock_oracle import FockConfig, full_model_evolve, max_step
from chiral_light.model import ModelParams, effective_couplings


def sideband_drive(eta, epsilon, omega_r, Gamma, g=1.0, z1=0.5):
    """Single-site parameters whose two tones hit the red and blue sidebands with ratio ``eta``."""
    z2 = brentq(lambda z: j0(z1) * j1(z) / (j1(z1) * j0(z)) - eta, 1e-9, 1.0)
    Om1, Om2 = epsilon - omega_r, epsilon + omega_r
    return ModelParams(
        omega_r=omega_r,
        epsilon=epsilon,
        g=g,
        Gamma=Gamma,
        lambda1=z1 * Om1 / 2,
        lambda2=z2 * Om2 / 2,
        Omega1=Om1,
        Omega2=Om2,
    )


def late_photon_number(p, n_max, n_T1=4.0, leak_threshold=1e-4):
    """Mean photon number over the last quarter of a vacuum-start run of ``n_T1`` relaxation times.

    Returns (mean n, prediction, trajectory).
    """
    m = effective_couplings(p)
    T1 = p.Gamma / (4 * (m.g1**2 - m.g2**2))
    every = int(T1 / max_step(p, n_max)) + 1
    cfg = FockConfig(n_max=n_max, t_final=n_T1 * T1, sample_every=every, leak_threshold=leak_threshold)
    traj = full_model_evolve(p, cfg)
    n = traj.photon_number()
    late = float(np.mean(n[traj.times >= 0.75 * traj.times[-1]]))
    return late, m.eta**2 / (1 - m.eta**2), traj
