"""
How fast the entanglement builds up
===================================

Starting from the vacuum every second moment relaxes at the same rate
r = 4 (g1^2 - g2^2) / Gamma.  Larger eta gives more entanglement but r
shrinks as 1 - eta^2, so there is a trade-off between how much and how soon.
"""

import math

import numpy as np

from chiral_light import gaussian as gs
from chiral_light.model import EffectiveModel

g1 = 0.05
for eta in (0.3, 0.5, 0.7, 0.9):
    m = EffectiveModel(g1=g1, g2=eta * g1, N=4)
    T1 = gs.criticality(m).T1
    traj = gs.evolve(gs.CorrelatorState.vacuum(), m, math.pi / 2, 5 * T1)
    en = traj.log_negativity()
    closed = gs.transient_log_negativity_closed(eta, gs.relaxation_fraction(m, traj.t))
    half = traj.t[np.argmax(en >= 0.5 * en[-1])]
    print(f"eta = {eta}   T1 = {T1:8.1f}   E_N(5 T1) = {en[-1]:.3f}   half-way at {half:7.1f}   "
          f"max |RK4 - closed| = {np.max(np.abs(en - closed)):.1e}")

#%%
# Near eta = 1 the relaxation time diverges like 1 / (1 - eta).
for n in (2, 4, 6, 8, 10):
    eta = 1 - 2.0**-n
    rep = gs.criticality(EffectiveModel(g1=g1, g2=eta * g1))
    print(f"eta = 1 - 2^-{n:<2d}  T1 (1 - eta) = {rep.T1 * (1 - eta):.2f}   (limit {1 / (8 * g1**2):.2f})")
