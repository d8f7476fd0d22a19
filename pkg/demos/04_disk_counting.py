"""Unit disk eigenvalues from Bessel secular determinants.
======================================================

Each angular order k contributes a 2x2 boundary system whose determinant
zeros are eigenvalues (double for k >= 1).  Counting them confirms the
two-term growth with the DF/FD boundary densities.
"""

import math

import numpy as np

from elastic_weyl import (
    BoundaryCondition,
    boundary_weyl_constant,
    bulk_weyl_constant,
    count_disk,
    disk_spectrum,
    find_mode_roots,
    secular_det,
    validate_material,
)

p = validate_material(0.0, 1.0, 2)

# the k = 0 block decouples into torsional and compressional families;
# the first torsional eigenvalue is the squared first zero of J_1
mode0 = find_mode_roots(BoundaryCondition.DF, 0, p, 40.0)
print("k=0 eigenvalues below 40:", [f"{r:.6f}" for r in mode0.roots])
print("  (3.8317059702...^2 =", f"{3.8317059702075123**2:.6f})")

for k in (1, 2, 3):
    mode = find_mode_roots(BoundaryCondition.DF, k, p, 40.0)
    print(f"k={k}: {[f'{r:.4f}' for r in mode.roots]} (each double)")

lam_probe = 25.0
print(f"\nsecular determinant at L={lam_probe}: "
      f"{secular_det(BoundaryCondition.DF, 1, p, lam_probe):+.6f}")

a = bulk_weyl_constant(p, 2)
print(f"\ncounting vs two-term prediction (a*pi = {a * math.pi:.5f}):")
for bc in BoundaryCondition:
    c1 = boundary_weyl_constant(p, 2, bc) * 2.0 * math.pi
    spectrum = disk_spectrum(bc, p, 1200.0)
    lams = np.linspace(300.0, 1199.0, 240)
    res = (spectrum.count(lams) - a * math.pi * lams) / np.sqrt(lams)
    print(f"  {bc.value}: N(1200) = {count_disk(bc, p, 1200.0)}, "
          f"window-mean residual {res.mean():+.4f}, closed form {c1:+.4f}")
