"""
Planar filtered backprojection
==============================

The Funk inversion reduces to a 2D Radon inversion: derivative in the
offset, a discrete Hilbert filter, and backprojection.
"""

# %%
import numpy as np

from patcirc import PlaneGrid, Sinogram2D, fbp_invert, hilbert

# the Hilbert transform of 1/(1+s^2) is s/(1+s^2)
s = np.linspace(-200, 200, 8001)
h = hilbert(1 / (1 + s * s))
print("Hilbert pair rel. error:", np.linalg.norm(h - s / (1 + s * s)) / np.linalg.norm(s / (1 + s * s)))

# %%
# the unit disk has projections 2 sqrt(1 - s^2) in every direction
sino = Sinogram2D(360, 401, 1.2)
sino = sino.with_values(np.broadcast_to(2 * np.sqrt(np.clip(1 - sino.s**2, 0, None)), (360, 401)))
img = fbp_invert(sino, PlaneGrid(128, 128, 1.4))
r = np.linalg.norm(img.points(), axis=-1)
print("mean inside  r < 0.9:", img.values[r < 0.9].mean())
print("mean outside r > 1.1:", img.values[r > 1.1].mean())
