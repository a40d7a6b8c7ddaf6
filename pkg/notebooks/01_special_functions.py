"""
Special functions
=================

Legendre polynomials, real spherical harmonics, spherical Bessel functions
and their zeros. The zeros of J_{l+1/2} are where the harmonic moments of
range data have to vanish.
"""

# %%
import numpy as np

from patcirc.specfun import bessel_j_half, bessel_zeros, funk_hecke_coeff, legendre_p, real_sph_harm, spherical_bessel_j
from patcirc.sphere import gauss_sphere_rule

# P_l(0) gives the Funk eigenvalue 2 pi P_l(0) of a degree-l harmonic
for l in range(0, 9, 2):
    print(l, legendre_p(l, 0.0), 2 * np.pi * legendre_p(l, 0.0))

# %%
# orthonormality of the real harmonics on a Gauss rule
dirs, w = gauss_sphere_rule(24, 48)
Y = np.stack([real_sph_harm(l, m, dirs) for l in range(4) for m in range(-l, l + 1)])
gram = (Y * w) @ Y.T
print("max |Gram - I|:", np.abs(gram - np.eye(len(Y))).max())

# %%
# zeros of J_{l+1/2}; the first one for l = 1 solves tan x = x
for l in range(5):
    z = bessel_zeros(l, 3)
    print(l, np.round(z, 6), np.abs(bessel_j_half(l, z)).max())

# %%
# in three dimensions the normalized spherical Bessel function is sin(t)/t
t = np.linspace(0, 10, 6)
print(spherical_bessel_j(3, t) - np.sinc(t / np.pi))

# %%
# Funk-Hecke coefficients of exp(u) on [-1, 1]
print([funk_hecke_coeff(l, np.exp) for l in range(5)])
