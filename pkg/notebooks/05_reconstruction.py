"""
Reconstruction
==============

Detector data to initial pressure: Funk inversion per time slice, then
backprojection of the recovered boundary pressure. A 40^3 volume keeps the
run short; the command line uses 80^3.
"""

# %%
import time

import numpy as np

from patcirc import SphereTimeGrid, VolumeGrid, bundled_phantom, detector_signal, reconstruct_pipeline
from patcirc.cli import add_noise, sample_volume, volume_metrics

spec = bundled_phantom("fig3")
grid = SphereTimeGrid()
P = detector_signal(spec, grid)

# %%
start = time.perf_counter()
vol = reconstruct_pipeline(P, vol=VolumeGrid(40))
m = volume_metrics(vol, spec)
print(f"{time.perf_counter() - start:.1f} s, rel. L2 over the upper half-ball {m['relative_l2']:.3f}")
for center, amp, value in m["centers"]:
    print(center, amp, round(value, 3))

# %%
# 20% uniform noise relative to max |P|
noisy = reconstruct_pipeline(add_noise(P, 0.2, seed=7), vol=VolumeGrid(40))
print("noisy rel. L2:", volume_metrics(noisy, spec)["relative_l2"])

# %%
# a line profile through the three balls on the x3 = 0.5 plane
y = np.linspace(-0.9, 0.9, 19)
print(np.round([sample_volume(vol, (0.0, yi, 0.5)) for yi in y], 2))
