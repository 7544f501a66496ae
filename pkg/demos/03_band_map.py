"""
Which pairs get entangled on a ring
===================================

On an N-site ring with hopping J the band parameter depends on the pair's
momenta.  Pairs where it vanishes are perfectly entangled; pairs with
E >= 1 hardly are.  Zeros exist once 2J exceeds Delta.
"""

import numpy as np

from chiral_light.model import EffectiveModel, band_map

g1, N = 0.012, 10
Delta = 3 * g1**2  # puts the band centre at E = 1.5

#%%
# Print the sign of E over the (k, q) grid: '-' negative, '0' near zero,
# '+' positive below one and '#' for E >= 1.
for ratio in (1.2, 0.8):
    m = EffectiveModel(g1=g1, g2=0.4 * g1, Delta=Delta, J=ratio * Delta / 2, N=N)
    E = band_map(m)
    print(f"2J/Delta = {ratio}   (rows k, columns q)")
    for row in E:
        print("  " + " ".join("#" if e >= 1 else "0" if abs(e) < 0.05 else "+" if e > 0 else "-" for e in row))
    signs = np.sign(E)
    crossings = int(np.sum(signs * np.roll(signs, -1, axis=0) < 0))
    print(f"  sign changes along k: {crossings}\n")
