"""Closed-form Weyl coefficients for isotropic elasticity.
====================================================

The eigenvalue counting function of an elastic body grows like
a*Vol_d*L^(d/2) with a boundary correction b*Vol_{d-1}*L^((d-1)/2) whose
sign and size depend on the mixed boundary condition (DF: clamped
tangentially, traction-free normally; FD: the other way around).
"""

import math

from elastic_weyl import (
    BoundaryCondition,
    DomainGeometry,
    assemble_coefficients,
    boundary_weyl_constant,
    bulk_weyl_constant,
    validate_material,
)

# a steel-like Lame pair, in natural units
p = validate_material(1.15, 0.77, 3)
print(f"material: lambda={p.lam}, mu={p.mu}, lam+2mu={p.p_modulus}")

# the bulk constant does not care about boundary conditions
for d in (2, 3, 4):
    print(f"d={d}: bulk constant a = {bulk_weyl_constant(p, d):.10f}")

# the boundary density flips sign between DF and FD, and its sign pattern
# flips between d=2 and d>=3
for d in (2, 3):
    b_df = boundary_weyl_constant(p, d, BoundaryCondition.DF)
    b_fd = boundary_weyl_constant(p, d, BoundaryCondition.FD)
    print(f"d={d}: b_DF = {b_df:+.10f}, b_FD = {b_fd:+.10f}")

# assembled for a concrete body: the unit disk
disk = DomainGeometry(2, math.pi, 2.0 * math.pi)
p2 = validate_material(0.0, 1.0, 2)
for bc in BoundaryCondition:
    co = assemble_coefficients(p2, 2, bc, disk)
    print(
        f"unit disk, {bc.value}: N(L) ~ {co.leading:.6f}*L {co.second:+.6f}*sqrt(L)"
    )
