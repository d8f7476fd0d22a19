"""Half-line scattering analysis behind the boundary Weyl coefficient.

Freezing the momentum along the boundary turns the elasticity eigenvalue
problem into an ODE system on the half-line z >= 0.  Its continuous spectrum
opens in two steps, at mu*|xi|^2 (shear channels) and at (lam+2mu)*|xi|^2
(compressional channel).  This module computes, numerically from the boundary
conditions:

  * the scattering matrix attached to each spectral value,
  * the soft/rigid classification of the two thresholds,
  * the phase of det S with the threshold jump corrections,
  * the spectral shift function  phi/(2 pi) + N_1D,
  * and its momentum integral, which reproduces the closed-form boundary
    coefficient of :mod:`elastic_weyl.materials`.

Everything is assembled block-wise on the two invariant polarisations: the
in-plane block (the span of the frozen momentum direction and the normal,
a 2x2 system identical to the two-dimensional problem) and the normal block
(d-2 decoupled scalar channels polarised along the boundary but orthogonal
to the momentum).  Momenta are normalised to |xi| = 1 internally; the general
case is recovered by rescaling the spectral parameter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import integrate

from .materials import BoundaryCondition, MaterialParameters, half_integer_gamma, validate_material

__all__ = [
    "Thresholds",
    "SpectralZone",
    "ScatteringMatrix",
    "ThresholdClass",
    "ThresholdKind",
    "PiecewiseConstantFunction",
    "ThresholdError",
    "GridRefinementError",
    "SingularSystemError",
    "AnomalousThresholdError",
    "QuadratureError",
    "thresholds",
    "zone_of",
    "boundary_system",
    "scattering_matrix",
    "classify_threshold",
    "phase_shift_curve",
    "point_spectrum_scan",
    "spectral_shift",
    "integrate_to_second_coefficient",
]

UNITARITY_TOL = 1e-10
NULLSPACE_RTOL = 1e-9
THRESHOLD_MARGIN = 1e-6


class ThresholdError(ValueError):
    """Spectral value sits on (or too close to) a threshold."""


class GridRefinementError(RuntimeError):
    """Phase unwrapping found adjacent grid points more than pi/2 apart."""


class SingularSystemError(RuntimeError):
    """Outgoing-amplitude system is singular (spurious resonance)."""


class AnomalousThresholdError(RuntimeError):
    """Bounded-solution count is strictly between 0 and the multiplicity."""


class QuadratureError(RuntimeError):
    """Adaptive momentum quadrature failed to converge."""


@dataclass(frozen=True)
class Thresholds:
    """Opening points of the two continuous-spectrum branches."""

    lower: float  # mu |xi|^2, shear channels (multiplicity d-1)
    upper: float  # (lam+2mu) |xi|^2, compressional channel (multiplicity 1)


class SpectralZone(Enum):
    BELOW_SPECTRUM = "below"
    I1 = "I1"  # (lower, upper): d-1 propagating channels
    I2 = "I2"  # (upper, inf): d propagating channels


@dataclass(frozen=True)
class ScatteringMatrix:
    """Unitary map from incoming to outgoing wave amplitudes.

    Amplitude ordering is fixed as: in-plane channels first (shear, then,
    in I2, compressional), followed by the d-2 normal channels.  The
    ordering is a bookkeeping convention; determinants, phases and shift
    values do not depend on it.
    """

    lam: float
    zone: SpectralZone
    entries: np.ndarray

    def unitarity_defect(self) -> float:
        s = self.entries
        return float(np.max(np.abs(s @ s.conj().T - np.eye(s.shape[0]))))


class ThresholdKind(Enum):
    SOFT = "soft"
    RIGID = "rigid"


@dataclass(frozen=True)
class ThresholdClass:
    """Soft/rigid verdict with the bounded-solution count behind it."""

    variant: ThresholdKind
    j_star: int
    multiplicity: int


@dataclass(frozen=True)
class PiecewiseConstantFunction:
    """Right-open step function; undefined exactly at its breakpoints."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def value_at(self, x: float) -> float:
        if any(x == b for b in self.breakpoints):
            raise ThresholdError(f"evaluation at breakpoint x={x} is undefined")
        i = int(np.searchsorted(self.breakpoints, x))
        return self.values[i]


def thresholds(p: MaterialParameters, xi_norm: float, d: int) -> Thresholds:
    """Branch openings mu*|xi|^2 < (lam+2mu)*|xi|^2 for momentum norm |xi|."""
    validate_material(p.lam, p.mu, d)
    if not xi_norm > 0:
        raise ValueError(f"momentum norm must be positive, got {xi_norm}")
    return Thresholds(lower=p.mu * xi_norm**2, upper=p.p_modulus * xi_norm**2)


def zone_of(lam: float, thr: Thresholds) -> SpectralZone:
    """Strict zone membership; raises on exact threshold hits."""
    if lam == thr.lower or lam == thr.upper:
        raise ThresholdError(f"lambda={lam} is a threshold")
    if lam < thr.lower:
        return SpectralZone.BELOW_SPECTRUM
    return SpectralZone.I1 if lam < thr.upper else SpectralZone.I2


# ---------------------------------------------------------------------------
# mode columns and boundary rows (normalised momentum |xi| = 1)
# ---------------------------------------------------------------------------
# Every mode is V * exp(kappa z) with a constant 2-vector V = (tangential,
# normal) component pair for the in-plane block, or a scalar for a normal
# channel; kappa is i*(real wavenumber) for propagating modes and a negative
# real for evanescent ones.


def _inplane_modes(p: MaterialParameters, lam: float, zone: SpectralZone):
    """Outgoing, incoming and evanescent in-plane columns at |xi| = 1."""
    mu, big_m = p.mu, p.p_modulus
    k0 = 1.0 / math.sqrt(4.0 * math.pi * lam)
    q1 = (lam / mu - 1.0) ** 0.25
    alpha = q1 * q1
    out_shear = (np.array([-q1, 1.0 / q1]) * k0, 1j * alpha)
    in_shear = (np.array([q1, 1.0 / q1]) * k0, -1j * alpha)
    if zone is SpectralZone.I1:
        beta = math.sqrt(1.0 - lam / big_m)
        evan = (math.sqrt(big_m / lam) * np.array([1.0, 1j * beta]), -beta)
        return [out_shear], [in_shear], [evan]
    q2 = (lam / big_m - 1.0) ** 0.25
    gamma = q2 * q2
    out_comp = (np.array([1.0 / q2, q2]) * k0, 1j * gamma)
    in_comp = (np.array([1.0 / q2, -q2]) * k0, -1j * gamma)
    return [out_shear, out_comp], [in_shear, in_comp], []


def _inplane_bc_rows(p: MaterialParameters, bc: BoundaryCondition, mode) -> np.ndarray:
    """Boundary operator applied to one in-plane mode: a length-2 row."""
    v, kappa = mode
    if bc is BoundaryCondition.DF:
        return np.array([v[0], -p.p_modulus * kappa * v[1]])
    return np.array([-p.mu * kappa * v[0], v[1]])


def _normal_bc_value(p: MaterialParameters, bc: BoundaryCondition, kappa) -> complex:
    """Boundary operator on a scalar normal channel mode exp(kappa z)."""
    if bc is BoundaryCondition.DF:
        return 1.0 + 0.0j
    return -p.mu * kappa


def _inplane_system(p, bc, zone, lam):
    """Reduced (M_out, M_in) of the in-plane block, evanescent eliminated."""
    out_modes, in_modes, evan_modes = _inplane_modes(p, lam, zone)
    b_out = np.column_stack([_inplane_bc_rows(p, bc, m) for m in out_modes])
    b_in = np.column_stack([_inplane_bc_rows(p, bc, m) for m in in_modes])
    if evan_modes:
        b_ev = _inplane_bc_rows(p, bc, evan_modes[0])
        pivot = int(np.argmax(np.abs(b_ev)))
        other = 1 - pivot
        if abs(b_ev[pivot]) == 0.0:
            raise SingularSystemError(
                f"evanescent column vanishes from the boundary system at lambda={lam}"
            )
        f = b_ev[other] / b_ev[pivot]
        m_out = (b_out[other] - f * b_out[pivot]).reshape(1, 1)
        m_in = -(b_in[other] - f * b_in[pivot]).reshape(1, 1)
        return m_out, m_in
    return b_out, -b_in


def boundary_system(p: MaterialParameters, bc: BoundaryCondition, zone: SpectralZone,
                    lam: float, d: int):
    """Linear maps (M_out, M_in) with M_out c+ = M_in c- at spectral value lam.

    The in-plane block occupies the leading rows/columns; each of the d-2
    normal channels contributes one decoupled scalar row.  In zone I1 the
    evanescent compressional amplitude has already been eliminated by
    pivoted elimination of its boundary row, so the returned matrices are
    square: (d-1) x (d-1) in I1 and d x d in I2.
    """
    validate_material(p.lam, p.mu, d)
    thr = thresholds(p, 1.0, d)
    if zone_of(lam, thr) is not zone:
        raise ValueError(f"lambda={lam} does not lie in zone {zone.value}")
    if zone is SpectralZone.BELOW_SPECTRUM:
        raise ValueError("no propagating channels below the continuous spectrum")
    mp_in, mm_in = _inplane_system(p, bc, zone, lam)
    n_in = mp_in.shape[0]
    n = n_in + (d - 2)
    m_out = np.zeros((n, n), dtype=complex)
    m_in = np.zeros((n, n), dtype=complex)
    m_out[:n_in, :n_in] = mp_in
    m_in[:n_in, :n_in] = mm_in
    sigma = math.sqrt(lam / p.mu - 1.0)
    for j in range(d - 2):
        m_out[n_in + j, n_in + j] = _normal_bc_value(p, bc, 1j * sigma)
        m_in[n_in + j, n_in + j] = -_normal_bc_value(p, bc, -1j * sigma)
    return m_out, m_in


def scattering_matrix(p: MaterialParameters, bc: BoundaryCondition, lam: float,
                      d: int) -> ScatteringMatrix:
    """Solve the boundary system for S = M_out^(-1) M_in and check unitarity."""
    thr = thresholds(p, 1.0, d)
    zone = zone_of(lam, thr)
    m_out, m_in = boundary_system(p, bc, zone, lam, d)
    cond = np.linalg.cond(m_out)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularSystemError(f"outgoing system singular at lambda={lam}")
    s = np.linalg.solve(m_out, m_in)
    sm = ScatteringMatrix(lam=lam, zone=zone, entries=s)
    defect = sm.unitarity_defect()
    if defect > UNITARITY_TOL:
        raise SingularSystemError(
            f"scattering matrix not unitary at lambda={lam}: defect {defect:.3e}"
        )
    expected = d - 1 if zone is SpectralZone.I1 else d
    if s.shape != (expected, expected):
        raise SingularSystemError(
            f"scattering matrix has size {s.shape}, expected {expected}"
        )
    return sm


# ---------------------------------------------------------------------------
# thresholds: bounded-solution counts
# ---------------------------------------------------------------------------


def _nullity(mat: np.ndarray) -> int:
    if mat.size == 0:
        return mat.shape[1]
    sv = np.linalg.svd(mat, compute_uv=False)
    top = sv[0] if sv.size else 0.0
    if top == 0.0:
        return mat.shape[1]
    return int(np.sum(sv < NULLSPACE_RTOL * top)) + (mat.shape[1] - len(sv))


def _jstar_from_basis(p, bc, const_modes, decaying_modes) -> int:
    """Dimension of bc-satisfying threshold solutions with nonzero constant part.

    Columns are boundary rows of the candidate basis; the count is the
    nullity of the full matrix minus the nullity of the decaying-only part,
    i.e. the dimension of the projection of the solution space onto the
    constant (non-decaying) directions.
    """
    cols = [_inplane_bc_rows(p, bc, m) for m in const_modes + decaying_modes]
    full = np.column_stack(cols) if cols else np.zeros((2, 0))
    dec = np.column_stack(
        [_inplane_bc_rows(p, bc, m) for m in decaying_modes]
    ) if decaying_modes else np.zeros((2, 0))
    return _nullity(full) - _nullity(dec)


def _inplane_jstar(p: MaterialParameters, bc: BoundaryCondition, which: int) -> int:
    """Bounded-solution count of the in-plane block at threshold 1 or 2."""
    if which == 1:
        # shear channel opens: constant normal-polarised vector plus the
        # evanescent compressional solution that is still decaying here
        kappa_t = math.sqrt(1.0 - p.mu / p.p_modulus)
        const = [(np.array([0.0, 1.0]), 0.0)]
        decaying = [(np.array([1.0, 1j * kappa_t]), -kappa_t)]
        return _jstar_from_basis(p, bc, const, decaying)
    # compressional channel opens: constant tangential vector, no decaying
    # corrections remain at this spectral value
    const = [(np.array([1.0, 0.0]), 0.0)]
    return _jstar_from_basis(p, bc, const, [])


def _normal_jstar_per_channel(p: MaterialParameters, bc: BoundaryCondition) -> int:
    """Bounded-solution count of one normal channel at its opening (constant mode)."""
    row = np.array([[_normal_bc_value(p, bc, 0.0)]])
    return _nullity(row)


def classify_threshold(p: MaterialParameters, bc: BoundaryCondition, which: int,
                       d: int) -> ThresholdClass:
    """Soft/rigid classification of threshold 1 (mu) or 2 (lam+2mu).

    The verdict refers to the invariant block in which the threshold lives:
    the upper threshold belongs to the in-plane block for every d; the lower
    one is an in-plane matter in d = 2 and a normal-block matter for d >= 3
    (where the normal channels dominate its multiplicity).  Counts strictly
    between 0 and the block multiplicity are flagged as anomalous.
    """
    validate_material(p.lam, p.mu, d)
    if which not in (1, 2):
        raise ValueError(f"threshold index must be 1 or 2, got {which}")
    if which == 2:
        j, mult = _inplane_jstar(p, bc, 2), 1
    elif d == 2:
        j, mult = _inplane_jstar(p, bc, 1), 1
    else:
        per = _normal_jstar_per_channel(p, bc)
        j, mult = per * (d - 2), d - 2
    if j == mult:
        kind = ThresholdKind.SOFT
    elif j == 0:
        kind = ThresholdKind.RIGID
    else:
        raise AnomalousThresholdError(
            f"threshold {which} has {j} bounded solutions out of {mult}"
        )
    return ThresholdClass(variant=kind, j_star=j, multiplicity=mult)


def _threshold_jump(p, bc, which: int, d: int) -> float:
    """Phase jump pi*(j* - m/2) of the full problem across threshold ``which``."""
    if which == 1:
        j = _inplane_jstar(p, bc, 1) + (d - 2) * _normal_jstar_per_channel(p, bc)
        m = d - 1
    else:
        j, m = _inplane_jstar(p, bc, 2), 1
    return math.pi * (j - 0.5 * m)


# ---------------------------------------------------------------------------
# phase and spectral shift
# ---------------------------------------------------------------------------


def _wrap_to_pi(x: float) -> float:
    return math.remainder(x, 2.0 * math.pi)


def _check_grid(grid, thr):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly ascending")
    for t in (thr.lower, thr.upper):
        if np.any(np.abs(grid - t) < THRESHOLD_MARGIN * t):
            raise ThresholdError(
                f"grid point within {THRESHOLD_MARGIN:g} (relative) of threshold {t}"
            )
    return grid


def _unwrapped_args(p, bc, d, pts, det_cache=None):
    """Continuously unwrapped arg det S along ascending in-zone points."""
    args = []
    for lam in pts:
        det = complex(np.linalg.det(scattering_matrix(p, bc, float(lam), d).entries))
        if det_cache is not None:
            det_cache[float(lam)] = det
        args.append(cmath.phase(det))
    unwrapped = [args[0]]
    for prev, cur in zip(args, args[1:]):
        step = _wrap_to_pi(cur - prev)
        if abs(step) > 0.5 * math.pi:
            raise GridRefinementError(
                f"phase step {step:.3f} exceeds pi/2; refine the grid"
            )
        unwrapped.append(unwrapped[-1] + step)
    return np.array(unwrapped)


def phase_shift_curve(p: MaterialParameters, bc: BoundaryCondition, d: int,
                      lambda_grid) -> PiecewiseConstantFunction:
    """Phase of det S with threshold jump corrections, as a step function.

    The phase vanishes below the continuous spectrum; inside each zone it is
    the continuous unwrapping of arg det S shifted by a constant so that the
    jump across threshold k equals pi*(j*_k - m_k/2).  For this operator the
    phase is constant on each zone; the grid is used to audit that (to 1e-9)
    and to drive the unwrapping.
    """
    validate_material(p.lam, p.mu, d)
    thr = thresholds(p, 1.0, d)
    grid = _check_grid(lambda_grid, thr)
    in_i1 = grid[(grid > thr.lower) & (grid < thr.upper)]
    in_i2 = grid[grid > thr.upper]
    if in_i1.size == 0 or in_i2.size == 0:
        raise ValueError("grid must contain points in both continuous-spectrum zones")

    u1 = _unwrapped_args(p, bc, d, in_i1)
    if np.max(np.abs(u1 - u1[0])) > 1e-9:
        raise GridRefinementError("arg det S drifts inside the first zone")
    v1 = _threshold_jump(p, bc, 1, d) + (u1[-1] - u1[0])

    u2 = _unwrapped_args(p, bc, d, in_i2)
    if np.max(np.abs(u2 - u2[0])) > 1e-9:
        raise GridRefinementError("arg det S drifts inside the second zone")
    v2 = v1 + _threshold_jump(p, bc, 2, d) + (u2[-1] - u2[0])

    return PiecewiseConstantFunction(
        breakpoints=(thr.lower, thr.upper), values=(0.0, v1, v2)
    )


# ---------------------------------------------------------------------------
# point spectrum (expected empty)
# ---------------------------------------------------------------------------


def _decaying_inplane_modes(p, lam):
    mu, big_m = p.mu, p.p_modulus
    modes = []
    if lam < mu:
        tau_s = math.sqrt(1.0 - lam / mu)
        modes.append((np.array([-1j * tau_s, 1.0]), -tau_s))
    if lam < big_m:
        tau_p = math.sqrt(1.0 - lam / big_m)
        modes.append((np.array([1.0, 1j * tau_p]), -tau_p))
    return modes


def _decay_residuals(p, bc, d, lams) -> np.ndarray:
    """Scale-free eigenfunction residual over an array of spectral values.

    Zero residual means the decaying solutions admit a combination meeting
    the boundary conditions, i.e. a square-integrable eigenfunction.  Below
    the lower threshold the in-plane block has two decaying modes and the
    residual is the smallest singular value of the 2x2 boundary matrix over
    its Frobenius norm; between the thresholds only the compressional mode
    decays and both boundary rows must vanish together.  Normal channels
    (d >= 3) contribute their own scalar residual.  Modes degenerate as a
    threshold is approached, so residuals sink near the very ends of each
    zone; the scan grids stop 1e-9 (relative) short of the thresholds,
    which keeps that artefact orders of magnitude above the detection cut.
    """
    lams = np.asarray(lams, dtype=float)
    mu, big_m = p.mu, p.p_modulus
    df = bc is BoundaryCondition.DF
    below = lams < mu
    tau_s = np.sqrt(np.maximum(1.0 - lams / mu, 0.0))
    tau_p = np.sqrt(np.maximum(1.0 - lams / big_m, 0.0))

    # boundary rows on the two decaying in-plane modes, matching
    # _inplane_bc_rows on (V, kappa) = ((-i tau_s, 1), -tau_s) and
    # ((1, i tau_p), -tau_p)
    if df:
        r1s, r2s = -1j * tau_s, big_m * tau_s
        r1p, r2p = np.ones_like(lams), 1j * big_m * tau_p * tau_p
    else:
        r1s, r2s = -1j * mu * tau_s * tau_s, np.ones_like(lams)
        r1p, r2p = mu * tau_p, 1j * tau_p

    res = np.full(lams.shape, np.inf)
    # two-mode regime: smallest singular value of [[r1s, r1p], [r2s, r2p]]
    frob2 = (np.abs(r1s) ** 2 + np.abs(r2s) ** 2
             + np.abs(r1p) ** 2 + np.abs(r2p) ** 2)
    det2 = np.abs(r1s * r2p - r1p * r2s) ** 2
    disc = np.sqrt(np.maximum(frob2**2 - 4.0 * det2, 0.0))
    smin = np.sqrt(np.maximum(0.5 * (frob2 - disc), 0.0))
    with np.errstate(invalid="ignore", divide="ignore"):
        two_mode = smin / np.sqrt(frob2)
    res[below] = two_mode[below]
    # single-mode regime: both rows of the compressional column must vanish
    mid = (lams > mu) & (lams < big_m)
    scale = (1.0 + mu + big_m) * (1.0 + tau_p)
    one_mode = np.maximum(np.abs(r1p), np.abs(r2p)) / scale
    res[mid] = one_mode[mid]
    if d >= 3:
        # normal channels decay only below the lower threshold; their sole
        # boundary row is 1 (DF) or mu*tau_s (FD) on the decaying mode
        row = np.ones_like(lams) if df else mu * tau_s
        normal = np.where(below, row / (1.0 + mu * (1.0 + tau_s)), np.inf)
        res = np.minimum(res, normal)
    return res


def point_spectrum_scan(p: MaterialParameters, bc: BoundaryCondition, d: int,
                        lambda_max: float):
    """Search for half-line eigenvalues below and inside the continuous spectrum.

    Returns the sorted list of eigenvalues found (the theory behind the
    pipeline requires the list to be empty; a non-empty result signals an
    assembly bug rather than an input error).  Covers (0, mu) with the full
    decaying basis, the two thresholds, and (mu, lam+2mu) where only the
    evanescent compressional mode could decay; above lam+2mu no solution
    decays, so nothing can be square-integrable there.
    """
    validate_material(p.lam, p.mu, d)
    thr = thresholds(p, 1.0, d)
    if not lambda_max > thr.upper:
        raise ValueError("lambda_max must exceed the upper threshold")
    found = []

    def probe(lams):
        vals = _decay_residuals(p, bc, d, lams)
        for i in np.where(vals < 1e-7)[0]:
            lo = lams[max(i - 1, 0)]
            hi = lams[min(i + 1, len(lams) - 1)]
            xs = np.linspace(lo, hi, 41)
            fine = _decay_residuals(p, bc, d, xs)
            j = int(np.argmin(fine))
            if fine[j] < 1e-10:
                found.append(float(xs[j]))

    probe(np.linspace(thr.lower * 1e-4, thr.lower * (1.0 - 1e-9), 601))
    probe(np.linspace(thr.lower * (1.0 + 1e-9), thr.upper * (1.0 - 1e-9), 601))

    # thresholds: any purely decaying solution surviving there?
    for t in (thr.lower, thr.upper):
        modes = _decaying_inplane_modes(p, t)
        if modes:
            cols = np.column_stack([_inplane_bc_rows(p, bc, m) for m in modes])
            sv = np.linalg.svd(cols, compute_uv=False)
            if sv[-1] < 1e-10 * max(sv[0], 1e-300):
                found.append(float(t))
    return sorted(found)


# ---------------------------------------------------------------------------
# spectral shift and its momentum integral
# ---------------------------------------------------------------------------

_DEFAULT_ZONE_POINTS = 48


@lru_cache(maxsize=64)
def _cached_phase_curve(p: MaterialParameters, bc: BoundaryCondition,
                        d: int) -> PiecewiseConstantFunction:
    thr = thresholds(p, 1.0, d)
    m = 64.0 * THRESHOLD_MARGIN
    g1 = np.geomspace(thr.lower * (1 + m), thr.upper * (1 - m), _DEFAULT_ZONE_POINTS)
    g2 = np.geomspace(thr.upper * (1 + m), thr.upper * 8.0, _DEFAULT_ZONE_POINTS)
    return phase_shift_curve(p, bc, d, np.concatenate([g1, g2]))


@lru_cache(maxsize=64)
def _cached_point_spectrum(p: MaterialParameters, bc: BoundaryCondition,
                           d: int) -> tuple:
    return tuple(point_spectrum_scan(p, bc, d, p.p_modulus * 4.0))


def _closed_form_shift(p, bc, d, lam_normalised, component="total") -> float:
    thr = thresholds(p, 1.0, d)
    if lam_normalised in (thr.lower, thr.upper):
        raise ThresholdError(f"normalised value {lam_normalised} is a threshold")
    in_plane = 0.0
    if thr.lower < lam_normalised < thr.upper:
        in_plane = -bc.sign * 0.25
    normal = bc.sign * 0.25 * (d - 2) if lam_normalised > thr.lower else 0.0
    if component == "in_plane":
        return in_plane
    if component == "normal":
        return normal
    return in_plane + normal


def _pipeline_shift(p, bc, d, lam_normalised, component="total") -> float:
    thr = thresholds(p, 1.0, d)
    if component == "total":
        curve = _cached_phase_curve(p, bc, d)
        phi = curve.value_at(lam_normalised)
        spectrum = _cached_point_spectrum(p, bc, d)
    elif component == "in_plane":
        # the in-plane block is the two-dimensional problem verbatim
        curve = _cached_phase_curve(p, bc, 2)
        phi = curve.value_at(lam_normalised)
        spectrum = _cached_point_spectrum(p, bc, 2)
    elif component == "normal":
        if d == 2 or lam_normalised < thr.lower:
            phi = 0.0
        else:
            phi = math.pi * (d - 2) * (_normal_jstar_per_channel(p, bc) - 0.5)
        spectrum = ()
    else:
        raise ValueError(f"unknown component {component!r}")
    n_1d = sum(1 for e in spectrum if e < lam_normalised)
    return phi / (2.0 * math.pi) + n_1d


def spectral_shift(p: MaterialParameters, bc: BoundaryCondition, d: int, lam: float,
                   xi_norm: float = 1.0, method: str = "pipeline",
                   component: str = "total") -> float:
    """Spectral shift function phi/(2 pi) + N_1D at spectral value lam.

    The momentum enters only through its norm; evaluation always happens at
    the normalised value lam/xi_norm^2.  ``method="pipeline"`` runs the
    scattering computation, ``method="closed_form"`` evaluates the known step
    function directly.  ``component`` selects the in-plane part, the normal
    part, or their sum.
    """
    validate_material(p.lam, p.mu, d)
    if not xi_norm > 0:
        raise ValueError(f"momentum norm must be positive, got {xi_norm}")
    lam_n = lam / (xi_norm * xi_norm)
    thr = thresholds(p, 1.0, d)
    for t in (thr.lower, thr.upper):
        if abs(lam_n - t) < 1e-12 * t:
            raise ThresholdError(f"normalised value {lam_n} hits threshold {t}")
    if method == "closed_form":
        return _closed_form_shift(p, bc, d, lam_n, component)
    if method == "pipeline":
        return _pipeline_shift(p, bc, d, lam_n, component)
    raise ValueError(f"unknown method {method!r}")


def _unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / half_integer_gamma(n / 2.0 + 1.0)


def integrate_to_second_coefficient(p: MaterialParameters, bc: BoundaryCondition,
                                    d: int, boundary_volume: float,
                                    method: str = "exact") -> float:
    """Momentum integral of the shift function, scaled to the boundary term.

    Computes (d-1)/2 * boundary_volume / (2 pi)^(d-1) * integral over
    (d-1)-dimensional momenta of shift(1; xi).  The shift at unit spectral
    value is a radial step function of |xi| with jumps at (lam+2mu)^(-1/2)
    and mu^(-1/2); ``exact`` integrates it against spherical shells in closed
    form using zone values produced by the scattering pipeline, while
    ``quadrature`` integrates the pipeline pointwise and must agree.
    """
    validate_material(p.lam, p.mu, d)
    if not boundary_volume > 0:
        raise ValueError("boundary_volume must be positive")
    r_inner = p.p_modulus ** -0.5  # inside: both channels propagate at lam=1
    r_outer = p.mu ** -0.5
    prefactor = 0.5 * (d - 1) * boundary_volume / (2.0 * math.pi) ** (d - 1)
    vol = _unit_ball_volume(d - 1)

    if method == "exact":
        v_full = _pipeline_shift(p, bc, d, 2.0 * p.p_modulus)
        v_mid = _pipeline_shift(p, bc, d, math.sqrt(p.mu * p.p_modulus))
        integral = vol * (
            r_inner ** (d - 1) * v_full
            + (r_outer ** (d - 1) - r_inner ** (d - 1)) * v_mid
        )
        return prefactor * integral

    if method == "quadrature":
        shell = (d - 1) * vol

        def integrand(rho):
            return shell * rho ** (d - 2) * _pipeline_shift(p, bc, d, 1.0 / rho**2)

        eps = 1e-6 * r_inner
        head = _pipeline_shift(p, bc, d, 2.0 * p.p_modulus) * vol * eps ** (d - 1)
        body, err = integrate.quad(
            integrand, eps, 1.25 * r_outer,
            points=[r_inner, r_outer], limit=200,
            epsabs=1e-12, epsrel=1e-11,
        )
        if err > 1e-7 * max(1.0, abs(body)):
            raise QuadratureError(f"momentum quadrature error estimate {err:.2e}")
        return prefactor * (head + body)

    raise ValueError(f"unknown method {method!r}")
