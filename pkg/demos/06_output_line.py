"""
What leaves the array
=====================

Each momentum mode leaks into a transmission line in a frequency window of
width 2 pi / N.  For vacuum input the emitted pair is the intracavity pair
scaled by |c|^2, mixed with vacuum, so its entanglement is bounded by the
intracavity value.
"""

from chiral_light import gaussian as gs
from chiral_light.lineout import LineParams, output_correlators, output_log_negativity
from chiral_light.model import EffectiveModel

m = EffectiveModel(g1=0.012, g2=0.005, Delta=1e-4, J=6e-5, N=10, q_index=1)
blocks = gs.lattice_steady(m)
for gamma_line in (0.5, 5.0, 50.0):
    lp = LineParams(gamma_line=gamma_line, N=m.N)
    print(f"gamma_line = {gamma_line:5.1f}   |c|^2 = {lp.scale:.4f}")
    for o, b in zip(output_correlators(blocks, lp), blocks):
        out_en = output_log_negativity(b, lp)
        print(f"   k = {o.k:.3f}  partner = {o.k_partner:.3f}  out <n> = {o.out_nk:.2e}  "
              f"E_N out {out_en:.4f} <= {o.en_upper_bound:.4f}")
