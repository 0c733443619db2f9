"""Continuous half-plane picture: the factor omega(z), the minimax damping,
and the band-limited parameter advisor.

For two half planes the per-frequency contraction of the undamped sweep is
omega(k coth k).  The advisor picks (gamma2, theta) for a band k <= K so
that the damped factor stays under a certified bound, which lands below 1/3
for any band.
"""

import numpy as np

from robinlab.spectral import (COTH_1, omega, omega_max, theta_star,
                               von_neumann_advisor, von_neumann_rho)

g1, g2 = 1.0, 128.0
print(f"omega(z) with gamma1={g1:g}, gamma2={g2:g}")
for z in (1.0, 2.0, np.sqrt(g2), 32.0, 128.0, 1e4):
    print(f"  z={z:10.2f}: omega={omega(z, g1, g2):+.6f}")
z0, w0 = omega_max(g1, g2)
print(f"  peak value {w0:.6f} at z = sqrt(gamma1 gamma2) = {z0:.3f}")
theta0, value = theta_star(0.5, 1.0)
print(f"  on the grid the undamped factor -c ranges over (1/2, 1);"
      f" balancing that")
print(f"  interval gives theta* = {theta0:.6f} with radius {value:.6f}")
print()

print("band advisor: gamma1 fixed, pick gamma2 and theta for k <= K")
for K in (3, 10, 100, 1000):
    gamma2, theta, bound = von_neumann_advisor(K, 1.0)
    k = np.arange(1, int(K) + 1, dtype=float)
    worst = np.abs(von_neumann_rho(k, 1.0, gamma2, theta)).max()
    print(f"  K={K:5d}: gamma2={gamma2:10.3f}  theta={theta:.4f}"
          f"  bound={bound:.4f}  realized={worst:.4f}")
print(f"  (all bounds < 1/3 = {1/3:.4f})")
print()

print("a large gamma1 switches the advisor to the flat branch (theta = 0)")
for g in (1.0, COTH_1, 2.0, 10.0):
    gamma2, theta, bound = von_neumann_advisor(1.5, g)
    print(f"  gamma1={g:6.3f}: theta={theta:.4f}  bound={bound:.4f}")
