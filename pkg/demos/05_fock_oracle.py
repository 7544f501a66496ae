"""
Checking the Gaussian theory in a truncated Fock space
======================================================

Two brute-force checks.  First the squeezed-mode dissipator is integrated on
two truncated cavities and compared with the Gaussian prediction.  Then the
original driven qubit-cavity site is simulated with no approximations, in a
regime where the sidebands are well resolved.
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import j0, j1

from chiral_light import gaussian as gs
from chiral_light.fock_oracle import FockConfig, effective_lindblad_steady, full_model_evolve, reduced_covariance
from chiral_light.model import ModelParams, effective_couplings

#%%
# Effective dissipator on two cavities of 12 levels each.
eta = 0.4
cov = reduced_covariance(effective_lindblad_steady(1.0, eta, 0.0, 1.0, FockConfig(n_max=12, sites=2)))
print("max covariance error:", np.max(np.abs(cov.gamma - gs.two_mode_covariance(eta, 0.0))))
print("E_N oracle / closed:", gs.log_negativity_sympl(cov), gs.log_negativity_closed(eta, 0.0))

#%%
# Full driven site, in units of g.  The tone amplitudes are tuned so that
# eta = 0.3; the cavity should settle at <n> = eta^2 / (1 - eta^2).
eps, wr, Gamma, z1 = 400.0, 40.0, 2.0, 0.5
z2 = brentq(lambda z: j0(z1) * j1(z) / (j1(z1) * j0(z)) - 0.3, 1e-9, 1.0)
p = ModelParams(omega_r=wr, epsilon=eps, Gamma=Gamma, lambda1=z1 * (eps - wr) / 2, lambda2=z2 * (eps + wr) / 2,
                Omega1=eps - wr, Omega2=eps + wr)
m = effective_couplings(p)
T1 = gs.criticality(m).T1
traj = full_model_evolve(p, FockConfig(n_max=10, t_final=3 * T1, sample_every=20000))
n = traj.photon_number()
print(f"\nT1 = {T1:.2f} / g,  predicted <n> = {m.eta**2 / (1 - m.eta**2):.4f}")
for t, x in zip(traj.times[::2], n[::2]):
    print(f"  t = {t:6.2f}   <n> = {x:.4f}")
