"""Eigenvalue counting for the unit disk via Bessel secular determinants.

Separating the elasticity eigenvalue problem on the unit disk in polar
coordinates reduces each angular order k to a 2x2 boundary system acting on
the amplitudes of two scalar potentials (a compressional one and a shear
one), with entries built from Bessel functions of the first kind.  The
determinant of that system is the secular function whose positive zeros are
the eigenvalues; each root carries multiplicity 1 for k = 0 and 2 for k >= 1
(the two angular branches).

Root scanning is done on a grid uniform in the shear wavenumber
s2 = sqrt(L/mu): plain sign changes catch isolated roots, and every local
minimum of the column-normalised |det| is re-examined on a 10x finer grid,
recursively, because roots of the compressional and shear families form
close pairs (avoided crossings) that a fixed-step scan would miss.  At k = 0
the system decouples exactly, the normalised determinant carries no
magnitude information, and the two diagonal factors are scanned separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.optimize import brentq

from .materials import BoundaryCondition, MaterialParameters, validate_material

__all__ = [
    "BesselEvaluator",
    "DiskModeRoots",
    "DiskSpectrum",
    "DoubleRootError",
    "bessel_j",
    "boundary_matrix",
    "secular_det",
    "find_mode_roots",
    "disk_spectrum",
    "count_disk",
]

SCAN_STEP = 0.4          # max advance of sqrt(L/mu) between scan nodes
REFINE_DEPTH = 7         # recursive 10x refinements of suspicious dips
DIP_TOL = 1e-6           # |normalised det| flagging an unresolved tangency
COLUMN_FLOOR = 1e-250    # below this column norm the matrix is pure underflow
ND_FLOOR = 1e-13         # below this |normalised det| the sign is cancellation noise


class DoubleRootError(RuntimeError):
    """A suspected tangential (double) root could not be resolved."""


@dataclass(frozen=True)
class BesselEvaluator:
    """Bessel J_k evaluation with the validity window used by this module.

    The evaluation itself is delegated to scipy's jv, which meets the 1e-10
    relative accuracy contract on 0 <= x <= 300 and k <= max_order; the
    window is enforced here so out-of-range use fails loudly rather than
    degrading silently.
    """

    max_order: int = 200
    max_argument: float = 300.0

    def j(self, k: int, x: float) -> float:
        if not 0 <= k <= self.max_order:
            raise ValueError(f"order {k} outside [0, {self.max_order}]")
        if not 0.0 <= x <= self.max_argument:
            raise ValueError(f"argument {x} outside [0, {self.max_argument}]")
        return float(special.jv(k, x))


_DEFAULT_EVALUATOR = BesselEvaluator()


def bessel_j(k: int, x: float) -> float:
    """J_k(x) within the evaluator's validated window."""
    return _DEFAULT_EVALUATOR.j(k, x)


# ---------------------------------------------------------------------------
# boundary system
# ---------------------------------------------------------------------------
# Real amplitude basis (A, b): A multiplies the compressional potential
# J_k(s1 r) e^(i k theta), and b = -i B multiplies the shear potential
# J_k(s2 r) e^(i k theta); rows that carry a common factor i are divided by
# it.  Determinant zeros are unchanged by these scalings.


def _rows(bc, k, p, lam):
    """Vectorised 2x2 boundary rows at spectral values lam (array-safe)."""
    lam = np.asarray(lam, dtype=float)
    mu, big_m = p.mu, p.p_modulus
    s1 = np.sqrt(lam / big_m)
    s2 = np.sqrt(lam / mu)
    w2 = lam / mu
    c1 = special.jv(k, s1)
    c1p = 0.5 * (special.jv(k - 1, s1) - special.jv(k + 1, s1))
    c2 = special.jv(k, s2)
    c2p = 0.5 * (special.jv(k - 1, s2) - special.jv(k + 1, s2))
    if bc is BoundaryCondition.DF:
        # tangential displacement; normal traction
        a11, a12 = k * c1, s2 * c2p
        a21 = (2.0 * mu * k * k - lam) * c1 - 2.0 * mu * s1 * c1p
        a22 = 2.0 * mu * k * (s2 * c2p - c2)
    else:
        # normal displacement; tangential traction (over mu)
        a11, a12 = s1 * c1p, k * c2
        a21 = 2.0 * k * (s1 * c1p - c1)
        a22 = (2.0 * k * k - w2) * c2 - 2.0 * s2 * c2p
    return a11, a12, a21, a22


def boundary_matrix(bc: BoundaryCondition, k: int, p: MaterialParameters,
                    lam: float) -> np.ndarray:
    """The 2x2 real boundary system in the (A, b) amplitude basis."""
    validate_material(p.lam, p.mu, 2)
    if not lam > 0:
        raise ValueError("lam must be positive")
    a11, a12, a21, a22 = _rows(bc, k, p, lam)
    return np.array([[float(a11), float(a12)], [float(a21), float(a22)]])


def secular_det(bc: BoundaryCondition, k: int, p: MaterialParameters,
                lam: float) -> float:
    """Secular function whose zeros are the order-k disk eigenvalues.

    For the DF condition this is the explicit closed-form combination of
    Bessel values (which the boundary matrix reproduces identically, a fact
    the tests pin down); the FD condition has no closed form here and is the
    numerically assembled determinant.
    """
    validate_material(p.lam, p.mu, 2)
    if not lam > 0:
        raise ValueError("lam must be positive")
    mu, big_m = p.mu, p.p_modulus
    if bc is BoundaryCondition.DF:
        w1, w2 = lam / big_m, lam / mu
        s1, s2 = math.sqrt(w1), math.sqrt(w2)
        jk1, jk2 = bessel_j(k, s1), bessel_j(k, s2)
        jk1n, jk2n = bessel_j(k + 1, s1), bessel_j(k + 1, s2)
        return (mu * k * jk2 * (w2 * jk1 - 2.0 * s1 * jk1n)
                + mu * s2 * jk2n * (2.0 * s1 * jk1n - (2.0 * k + w2) * jk1))
    m = boundary_matrix(bc, k, p, lam)
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _normalised_det(bc, k, p, lam):
    """Determinant scaled by the column norms: sign-true, magnitude-tamed.

    Deep inside the evanescent region (spectral values far below the first
    order-k eigenvalue) the two columns become numerically parallel and the
    computed determinant is pure cancellation noise with a random sign;
    such nodes are masked out of the validity array so they can neither
    bracket a root nor masquerade as a dip.
    """
    a11, a12, a21, a22 = _rows(bc, k, p, lam)
    n1 = np.hypot(a11, a21)
    n2 = np.hypot(a12, a22)
    det = a11 * a22 - a12 * a21
    col_ok = (n1 > COLUMN_FLOOR) & (n2 > COLUMN_FLOOR)
    with np.errstate(divide="ignore", invalid="ignore"):
        nd = np.where(col_ok, det / np.maximum(n1 * n2, COLUMN_FLOOR), np.nan)
    valid = col_ok & (np.abs(nd) > ND_FLOOR)
    return nd, valid


def _k0_factor(bc, p, lam, which):
    """The two decoupled k = 0 factors (0: compressional, 1: torsional)."""
    a11, a12, a21, a22 = _rows(bc, 0, p, lam)
    if bc is BoundaryCondition.DF:
        return a21 if which == 0 else a12
    return a11 if which == 0 else a22


# ---------------------------------------------------------------------------
# root scanning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskModeRoots:
    """Eigenvalues of one angular order below the scan cutoff."""

    angular_order: int
    roots: tuple
    multiplicity_per_root: int
    diagnostics: tuple = field(default=())

    def __post_init__(self):
        if any(b >= c for b, c in zip(self.roots, self.roots[1:])):
            raise ValueError("roots must be strictly increasing")


def _bracketed_roots(f, grid_lams, vals, valid, roots):
    for i in range(len(grid_lams) - 1):
        if valid[i] and valid[i + 1] and vals[i] * vals[i + 1] < 0:
            roots.append(brentq(f, grid_lams[i], grid_lams[i + 1],
                                xtol=1e-13, rtol=1e-12))
        elif valid[i] and vals[i] == 0.0:
            roots.append(float(grid_lams[i]))


def _scan_panel(bc, k, p, s_lo, s_hi, npts, depth, roots, diagnostics):
    s = np.linspace(s_lo, s_hi, npts)
    lams = p.mu * s * s
    vals, valid = _normalised_det(bc, k, p, lams)

    def f(x):
        v, _ = _normalised_det(bc, k, p, np.array([x]))
        return float(v[0])

    _bracketed_roots(f, lams, vals, valid, roots)
    av = np.abs(vals)
    for i in range(1, len(s) - 1):
        if not (valid[i - 1] and valid[i] and valid[i + 1]):
            continue
        if av[i] < av[i - 1] and av[i] < av[i + 1]:
            no_sign_change = vals[i - 1] * vals[i] > 0 and vals[i] * vals[i + 1] > 0
            if depth >= REFINE_DEPTH:
                if no_sign_change and av[i] < DIP_TOL:
                    diagnostics.append(
                        (k, float(lams[i]), float(av[i]),
                         "unresolved suspected double root")
                    )
                continue
            _scan_panel(bc, k, p, s[i - 1], s[i + 1], 21, depth + 1,
                        roots, diagnostics)


def _confirm_root(bc, k, p, root) -> bool:
    """Keep a determinant zero only if it carries a nontrivial displacement.

    The null vector of the raw boundary matrix (rank deficiency can come
    from a small column, so no per-column scaling here) is fed back into the
    displacement field and sampled at interior radii; a determinant zero
    that produces no displacement field is spurious.
    """
    m = boundary_matrix(bc, k, p, root)
    _, sv, vt = np.linalg.svd(m)
    if sv[0] <= 0.0 or sv[-1] / sv[0] > 1e-6:
        return False
    amp = vt[-1]  # (A, b) amplitudes
    mu, big_m = p.mu, p.p_modulus
    s1, s2 = math.sqrt(root / big_m), math.sqrt(root / mu)
    radii = (0.27, 0.52, 0.71, 0.88)
    best = 0.0
    scale = 0.0
    for r in radii:
        j1, j1p = special.jv(k, s1 * r), special.jvp(k, s1 * r)
        j2, j2p = special.jv(k, s2 * r), special.jvp(k, s2 * r)
        u_r = amp[0] * s1 * j1p + amp[1] * (k / r) * j2
        u_t = amp[0] * (k / r) * j1 + amp[1] * s2 * j2p
        best = max(best, abs(u_r), abs(u_t))
        scale = max(
            scale,
            abs(amp[0] * s1 * j1p), abs(amp[1] * (k / r) * j2),
            abs(amp[0] * (k / r) * j1), abs(amp[1] * s2 * j2p),
        )
    return best > 1e-8 * max(scale, 1e-300)


def find_mode_roots(bc: BoundaryCondition, k: int, p: MaterialParameters,
                    lambda_max: float, step: float = SCAN_STEP) -> DiskModeRoots:
    """All order-k eigenvalues in (0, lambda_max), with double-root diagnostics.

    ``step`` bounds the advance of sqrt(L/mu) between scan nodes; the root
    list must be stable under halving it, which the tests assert.
    """
    validate_material(p.lam, p.mu, 2)
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    if not 0 < step <= SCAN_STEP:
        raise ValueError(f"step must lie in (0, {SCAN_STEP}]")
    s_hi = math.sqrt(lambda_max / p.mu) + 3.0 * step
    npts = max(int(math.ceil(s_hi / step)), 8) + 1
    s_lo = min(0.1, s_hi / npts)
    roots: list = []
    diagnostics: list = []
    if k == 0:
        s = np.linspace(s_lo, s_hi, npts)
        lams = p.mu * s * s
        for which in (0, 1):
            vals = _k0_factor(bc, p, lams, which)
            valid = np.isfinite(vals)

            def f(x, w=which):
                return float(_k0_factor(bc, p, np.array([x]), w)[0])

            _bracketed_roots(f, lams, vals, valid, roots)
    else:
        _scan_panel(bc, k, p, s_lo, s_hi, npts, 0, roots, diagnostics)

    kept = []
    for r in sorted(r for r in roots if 0.0 < r < lambda_max):
        if kept and r - kept[-1] <= 1e-9 * max(1.0, r):
            continue
        if _confirm_root(bc, k, p, r):
            kept.append(r)
    return DiskModeRoots(
        angular_order=k,
        roots=tuple(kept),
        multiplicity_per_root=1 if k == 0 else 2,
        diagnostics=tuple(diagnostics),
    )


# ---------------------------------------------------------------------------
# spectrum aggregation and counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskSpectrum:
    """Merged disk spectrum up to a cutoff, with per-order audit data."""

    bc: BoundaryCondition
    cutoff: float
    per_order: tuple  # DiskModeRoots, ascending k
    values: np.ndarray
    multiplicities: np.ndarray
    _cumulative: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        padded = np.concatenate([[0], np.cumsum(self.multiplicities)])
        object.__setattr__(self, "_cumulative", padded)

    def count(self, lam):
        """Total multiplicity strictly below lam (scalar or array)."""
        return self._cumulative[np.searchsorted(self.values, lam, side="left")]

    @property
    def diagnostics(self):
        return tuple(d for mode in self.per_order for d in mode.diagnostics)


_SPECTRUM_CACHE: dict = {}


def disk_spectrum(bc: BoundaryCondition, p: MaterialParameters,
                  lambda_max: float, max_consecutive_empty: int = 3) -> DiskSpectrum:
    """Scan angular orders adaptively until several in a row stay empty.

    Results are cached per (bc, material); a request below an earlier cutoff
    returns the earlier, larger spectrum (counting queries are unaffected,
    but ``values``/``per_order`` may then extend beyond ``lambda_max``).
    """
    validate_material(p.lam, p.mu, 2)
    key = (bc, p)
    cached = _SPECTRUM_CACHE.get(key)
    if cached is not None and cached.cutoff >= lambda_max:
        return cached
    per_order = []
    empty_streak = 0
    k = 0
    k_cap = int(math.sqrt(lambda_max / p.mu)) + 60
    while empty_streak < max_consecutive_empty:
        mode = find_mode_roots(bc, k, p, lambda_max)
        per_order.append(mode)
        empty_streak = 0 if mode.roots else empty_streak + 1
        k += 1
        if k > k_cap:
            raise RuntimeError(
                f"angular-order scan failed to terminate by k={k_cap}"
            )
    pairs = sorted(
        (r, mode.multiplicity_per_root)
        for mode in per_order for r in mode.roots
    )
    spectrum = DiskSpectrum(
        bc=bc,
        cutoff=float(lambda_max),
        per_order=tuple(per_order),
        values=np.array([r for r, _ in pairs]),
        multiplicities=np.array([m for _, m in pairs], dtype=np.int64),
    )
    _SPECTRUM_CACHE[key] = spectrum
    return spectrum


def count_disk(bc: BoundaryCondition, p: MaterialParameters, lam: float) -> int:
    """N(lam) for the unit disk; raises on unresolved double-root diagnostics."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    spectrum = disk_spectrum(bc, p, lam)
    if spectrum.diagnostics:
        raise DoubleRootError(
            f"{len(spectrum.diagnostics)} unresolved double-root diagnostics: "
            f"{spectrum.diagnostics[:3]}"
        )
    return int(spectrum.count(lam))
