"""
Range conditions
================

Detector data of any phantom are even, integrate to zero in time, and have
harmonic moments that vanish at Bessel zeros. Data that break any of these
cannot come from an initial pressure.
"""

# %%
import numpy as np

from patcirc import SphereGrid, SphereTimeGrid, bundled_phantom, detector_signal, range_report

spec = bundled_phantom("fig3")
grid = SphereTimeGrid(SphereGrid(25, 50), n_t=100)
P = detector_signal(spec, grid)
mirror = detector_signal(spec, grid, antipodal=True)
rep = range_report(P, l_max=4, n_zeros=5, antipodal=mirror)
print(rep.summary())

# %%
# a time-truncated bump added to the data is not in the range
dirs = grid.sphere.directions()
box = ((grid.times > 0.5) & (grid.times < 0.8)).astype(float)
bad = P.with_values(P.values + 0.3 * np.abs(P.values).max() * (1 + dirs[..., 2:] ** 2) * box)
print(range_report(bad, l_max=4, n_zeros=5).summary())

# %%
print(rep.to_csv().splitlines()[:6])
