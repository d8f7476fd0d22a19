"""Material data and closed-form Weyl coefficients for isotropic elasticity.

The operator of linear elasticity on a d-dimensional body is determined by
the Lame pair (lambda, mu).  Its eigenvalue counting function grows like

    N(L) = a * Vol_d * L^(d/2) + b * Vol_{d-1} * L^((d-1)/2) + o(L^((d-1)/2)),

where the bulk constant ``a`` is boundary-condition independent while the
boundary density ``b`` depends on which mixed condition is imposed: DF
(clamped tangentially, traction-free normally) or FD (traction-free
tangentially, clamped normally).  This module holds the validated material
data, the two mixed-condition labels, and the closed forms for ``a`` and
``b`` together with their assembly into counting-function coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "NonConvexError",
    "MaterialParameters",
    "BoundaryCondition",
    "DomainGeometry",
    "WeylCoefficients",
    "half_integer_gamma",
    "validate_material",
    "bulk_weyl_constant",
    "boundary_weyl_constant",
    "assemble_coefficients",
]


class NonConvexError(ValueError):
    """Raised when a Lame pair violates strong convexity."""


class BoundaryCondition(Enum):
    """The two mixed boundary conditions.

    DF: Dirichlet (clamped) tangential components, free (zero traction)
    normal component.  FD: free tangential traction, Dirichlet normal
    component.  The "pure" all-Dirichlet and all-free conditions are not
    represented here; their boundary coefficients are outside the scope of
    this package.
    """

    DF = "df"
    FD = "fd"

    @property
    def sign(self) -> int:
        """Sign attached to the boundary term: -1 for DF, +1 for FD."""
        return -1 if self is BoundaryCondition.DF else +1


@dataclass(frozen=True)
class MaterialParameters:
    """Validated Lame pair.  Create through :func:`validate_material`."""

    lam: float
    mu: float

    @property
    def p_modulus(self) -> float:
        """Longitudinal modulus lambda + 2 mu."""
        return self.lam + 2.0 * self.mu


@dataclass(frozen=True)
class DomainGeometry:
    """Bulk and boundary volumes of the body the coefficients refer to."""

    dimension: int
    volume: float
    boundary_volume: float

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        if not self.volume > 0:
            raise ValueError(f"volume must be positive, got {self.volume}")
        if not self.boundary_volume > 0:
            raise ValueError(
                f"boundary_volume must be positive, got {self.boundary_volume}"
            )


@dataclass(frozen=True)
class WeylCoefficients:
    """Two-term counting coefficients for one body and boundary condition.

    ``leading``  multiplies L^(d/2) and equals a * volume.
    ``second``   multiplies L^((d-1)/2) and equals b * boundary_volume.
    ``second_reduced`` is the same boundary term in the derivative-normalised
    convention, exactly (d-1)/2 times ``second``.
    """

    a: float
    b: float
    leading: float
    second: float
    second_reduced: float


def validate_material(lam: float, mu: float, d: int) -> MaterialParameters:
    """Check strong convexity of (lam, mu) in dimension d.

    Requires mu > 0 and d*lam + 2*mu > 0 (both strict).  Returns the
    validated pair; raises :class:`NonConvexError` naming the violated
    inequality otherwise.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not mu > 0:
        raise NonConvexError(f"shear modulus must satisfy mu > 0, got mu={mu}")
    if not d * lam + 2 * mu > 0:
        raise NonConvexError(
            f"need d*lambda + 2*mu > 0, got {d}*{lam} + 2*{mu} = {d * lam + 2 * mu}"
        )
    return MaterialParameters(float(lam), float(mu))


def half_integer_gamma(x: float) -> float:
    """Gamma(x) for positive half-integer or integer x.

    Only half-integer arguments ever occur in the coefficient formulas, so
    the function is evaluated from Gamma(1/2) = sqrt(pi), Gamma(1) = 1 and
    the recurrence Gamma(x+1) = x*Gamma(x); no general special-function
    machinery is involved.  Relative accuracy is ~1e-15 over the argument
    range used here (x <= ~60).
    """
    two_x = 2.0 * x
    n = round(two_x)
    if n <= 0 or abs(two_x - n) > 1e-12:
        raise ValueError(f"argument must be a positive half-integer, got {x}")
    if n % 2 == 0:
        value, k = 1.0, 1.0
    else:
        value, k = math.sqrt(math.pi), 0.5
    while k < 0.5 * n - 0.25:
        value *= k
        k += 1.0
    return value


def bulk_weyl_constant(p: MaterialParameters, d: int) -> float:
    """Bulk eigenvalue density constant.

    a = ((d-1)/mu^(d/2) + 1/(lam+2mu)^(d/2)) / ((4 pi)^(d/2) Gamma(1+d/2)),
    the same for every boundary condition.
    """
    validate_material(p.lam, p.mu, d)
    norm = (4.0 * math.pi) ** (d / 2.0) * half_integer_gamma(1.0 + d / 2.0)
    return ((d - 1) / p.mu ** (d / 2.0) + 1.0 / p.p_modulus ** (d / 2.0)) / norm


def boundary_weyl_constant(p: MaterialParameters, d: int, bc: BoundaryCondition) -> float:
    """Boundary eigenvalue density for the mixed condition ``bc``.

    b = -+ ((d-3)/mu^((d-1)/2) + 1/(lam+2mu)^((d-1)/2))
         / (2^(d+1) pi^((d-1)/2) Gamma((d+1)/2)),

    with the minus sign for DF and plus for FD.  In d = 2 the bracket is
    negative (lam+2mu > mu), so b_DF > 0; from d = 3 on it is positive and
    b_DF < 0.
    """
    validate_material(p.lam, p.mu, d)
    half = (d - 1) / 2.0
    norm = 2.0 ** (d + 1) * math.pi ** half * half_integer_gamma((d + 1) / 2.0)
    bracket = (d - 3) / p.mu ** half + 1.0 / p.p_modulus ** half
    return bc.sign * bracket / norm


def assemble_coefficients(
    p: MaterialParameters,
    d: int,
    bc: BoundaryCondition,
    geom: DomainGeometry,
) -> WeylCoefficients:
    """Combine densities with the body's volumes into counting coefficients."""
    if geom.dimension != d:
        raise ValueError(
            f"geometry is {geom.dimension}-dimensional but d={d} was requested"
        )
    a = bulk_weyl_constant(p, d)
    b = boundary_weyl_constant(p, d, bc)
    second = b * geom.boundary_volume
    return WeylCoefficients(
        a=a,
        b=b,
        leading=a * geom.volume,
        second=second,
        second_reduced=0.5 * (d - 1) * second,
    )
