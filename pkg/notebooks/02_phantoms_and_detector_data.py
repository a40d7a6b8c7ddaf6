"""
Phantoms and detector data
==========================

Ball phantoms, the pressure they produce on the detector sphere, and the
great-circle averages recorded by the circular detectors.
"""

# %%
import numpy as np

from patcirc import SphereGrid, SphereTimeGrid, boundary_pressure, bundled_phantom, detector_signal
from patcirc.forward import rp_to_detector
from patcirc.rangecheck import check_zero_integral

spec = bundled_phantom("fig3")
for c in spec.components:
    print(c.kind, c.center, c.outer_radius, c.inner_radius, c.amplitude)

# %%
# pressure seen at the detector point (0, 1, 0); nothing arrives before
# the first wavefront and the signal is over after the last one
t = np.linspace(0, 2, 11)
print(np.round(boundary_pressure(spec, np.array([0.0, 1.0, 0.0]), t), 4))

# %%
# detector data on a coarse grid (the reconstruction default is 50 x 200 x 50)
grid = SphereTimeGrid(SphereGrid(12, 24), n_t=100)
P = detector_signal(spec, grid)
print(P.values.shape, "max |P| =", np.abs(P.values).max())
print("zero time-integral residual:", check_zero_integral(P))

# %%
# the same data through the spherical mean transform and its Funk transform
Q = rp_to_detector(spec, grid)
print("rel. difference:", np.linalg.norm(Q.values - P.values) / np.linalg.norm(P.values))
