"""Exact elasticity spectra on flat cylinders and their counting functions.

On a flat cylinder (a torus cross-section times an interval of height h)
variables separate completely and the spectrum under either mixed boundary
condition is a union of explicit series indexed by the transverse lattice
frequency and the number of half-waves across the height.  This module
enumerates those series into an auditable table, evaluates the equivalent
closed-form floor sums, checks every tabulated eigenvalue against the
separated secular equation, and provides the number-theoretic floor-sum
estimates that drive the two-term counting asymptotics.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt, pi, sqrt

import numpy as np

from .materials import BoundaryCondition, MaterialParameters, validate_material

__all__ = [
    "CylinderGeometry",
    "SpectrumTable",
    "FloorSumRow",
    "FloorSumReport",
    "r2",
    "r2_sieve",
    "enumerate_cylinder",
    "counting_closed_form",
    "secular_residual",
    "cylinder_two_term",
    "floor_sum_checks",
]


@dataclass(frozen=True)
class CylinderGeometry:
    """Flat cylinder: torus cross-section of side 2*pi, height h."""

    dimension: int
    height: float

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError(f"cylinder dimension must be 2 or 3, got {self.dimension}")
        if not self.height > 0:
            raise ValueError(f"height must be positive, got {self.height}")

    @property
    def volume(self) -> float:
        if self.dimension == 2:
            return 2.0 * pi * self.height
        return 4.0 * pi**2 * self.height

    @property
    def boundary_volume(self) -> float:
        return 4.0 * pi if self.dimension == 2 else 8.0 * pi**2


# ---------------------------------------------------------------------------
# sum-of-two-squares function
# ---------------------------------------------------------------------------


def r2(n: int) -> int:
    """Number of ordered integer pairs (a, b) with a^2 + b^2 = n.

    Multiplicative fast path: factor n, return 0 if any prime = 3 (mod 4)
    occurs to an odd power, otherwise 4 * product of (e+1) over primes
    = 1 (mod 4).  Powers of 2 do not affect the count.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 1
    total = 4
    while n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            if f % 4 == 3:
                if e % 2:
                    return 0
            else:
                total *= e + 1
        f += 2
    if n > 1:
        if n % 4 == 3:
            return 0
        total *= 2
    return total


_R2_CACHE: dict = {"limit": -1, "table": None}


def r2_sieve(limit: int) -> np.ndarray:
    """Table r2(0..limit) by direct enumeration of the lattice a^2 + b^2.

    This is the slow, assumption-free path; it doubles as the oracle for the
    multiplicative formula.  The largest table built so far is kept and
    reused (counting at many spectral values shares one sieve).
    """
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if _R2_CACHE["limit"] >= limit:
        return _R2_CACHE["table"][: limit + 1]
    table = np.zeros(limit + 1, dtype=np.int64)
    for a in range(isqrt(limit) + 1):
        bmax = isqrt(limit - a * a)
        b = np.arange(bmax + 1)
        weights = (2 if a > 0 else 1) * np.where(b > 0, 2, 1)
        np.add.at(table, a * a + b * b, weights)
    _R2_CACHE["limit"] = limit
    _R2_CACHE["table"] = table
    return table


# ---------------------------------------------------------------------------
# spectrum enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumTable:
    """Sorted eigenvalue table with multiplicities and per-series audit tags.

    ``tags[i]`` lists the contributing series as (label, n, k) triples; a
    merged entry keeps every contributor.  The counting query is strict:
    eigenvalues equal to the query point are not counted.
    """

    values: np.ndarray
    multiplicities: np.ndarray
    tags: tuple
    cutoff: float
    _cumulative: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if np.any(np.diff(self.values) <= 0):
            raise ValueError("eigenvalues must be strictly increasing after merging")
        if np.any(self.multiplicities < 1):
            raise ValueError("multiplicities must be positive")
        if self.values.size and self.values[-1] > self.cutoff:
            raise ValueError("table contains entries beyond the cutoff")
        padded = np.concatenate([[0], np.cumsum(self.multiplicities)])
        object.__setattr__(self, "_cumulative", padded)

    def count(self, lam):
        """N(lam): total multiplicity of eigenvalues strictly below lam."""
        return self._cumulative[np.searchsorted(self.values, lam, side="left")]

    @property
    def total_multiplicity(self) -> int:
        return int(self._cumulative[-1])


def _series_clauses(d: int, bc: BoundaryCondition, p: MaterialParameters):
    """Series of the separated spectrum, as (label, factor, kind, mult) rows.

    kind "k": value = (k pi/h)^2 * factor; kind "n": value = n^alpha * factor
    (alpha = 2 in d=2 where n is the frequency itself, alpha = 1 in d=3 where
    n is a sum of two squares); kind "nk": value = (n^alpha + (k pi/h)^2) *
    factor.  mult is "1", "2", "r2" or "2r2" per entry of the series.
    """
    mu, big_m = p.mu, p.p_modulus
    if d == 2:
        if bc is BoundaryCondition.DF:
            return [
                ("i", big_m, "k", "1"),
                ("ii", mu, "k", "1"),
                ("iii", mu, "n", "2"),
                ("iv", mu, "nk", "2"),
                ("v", big_m, "nk", "2"),
            ]
        return [
            ("i", big_m, "k", "1"),
            ("ii", mu, "k", "1"),
            ("iii", mu, "nk", "2"),
            ("iv", big_m, "n", "2"),
            ("v", big_m, "nk", "2"),
        ]
    if bc is BoundaryCondition.DF:
        return [
            ("i", big_m, "k", "1"),
            ("ii", mu, "n", "r2"),
            ("iii", mu, "nk", "2r2"),
            ("iv", big_m, "nk", "r2"),
        ]
    return [
        ("i", big_m, "k", "1"),
        ("ii", mu, "n", "r2"),
        ("iii", mu, "nk", "2r2"),
        ("iv", big_m, "n", "r2"),
        ("v", big_m, "nk", "r2"),
    ]


def enumerate_cylinder(geom: CylinderGeometry, p: MaterialParameters,
                       bc: BoundaryCondition, lambda_max: float) -> SpectrumTable:
    """All eigenvalues <= lambda_max, series by series, merged when coincident."""
    validate_material(p.lam, p.mu, geom.dimension)
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    d, h = geom.dimension, geom.height
    kfac = (pi / h) ** 2
    entries = []  # (value, multiplicity, (label, n, k))

    def multiplicity(code: str, n: int) -> int:
        if code == "1":
            return 1
        if code == "2":
            return 2
        if code == "r2":
            return r2(n)
        return 2 * r2(n)

    def npow(n: int) -> int:
        return n * n if d == 2 else n

    for label, factor, kind, code in _series_clauses(d, bc, p):
        if kind == "k":
            k = 1
            while True:
                val = k * k * kfac * factor
                if val > lambda_max:
                    break
                entries.append((val, 1, (label, 0, k)))
                k += 1
        elif kind == "n":
            n = 1
            while npow(n) * factor <= lambda_max:
                m = multiplicity(code, n)
                if m:
                    entries.append((npow(n) * factor, m, (label, n, 0)))
                n += 1
        else:  # "nk"
            n = 1
            while (npow(n) + kfac) * factor <= lambda_max:
                m = multiplicity(code, n)
                if m:
                    k = 1
                    while True:
                        val = (npow(n) + k * k * kfac) * factor
                        if val > lambda_max:
                            break
                        entries.append((val, m, (label, n, k)))
                        k += 1
                n += 1

    entries.sort(key=lambda e: e[0])
    # genuine coincidences across series are integer identities and land
    # within a few ulps of each other; 1e-12 relative merges them all while
    # staying far below any honest spectral gap
    values, mults, tags = [], [], []
    for val, m, tag in entries:
        if values and val - values[-1] <= 1e-12 * max(1.0, val):
            mults[-1] += m
            tags[-1].append(tag)
        else:
            values.append(val)
            mults.append(m)
            tags.append([tag])
    return SpectrumTable(
        values=np.array(values),
        multiplicities=np.array(mults, dtype=np.int64),
        tags=tuple(tuple(t) for t in tags),
        cutoff=float(lambda_max),
    )


# ---------------------------------------------------------------------------
# closed-form counting
# ---------------------------------------------------------------------------


def counting_closed_form(geom: CylinderGeometry, p: MaterialParameters,
                         bc: BoundaryCondition, lam: float) -> int:
    """Floor-sum expression for N(lam); lam must not be an eigenvalue."""
    validate_material(p.lam, p.mu, geom.dimension)
    if not lam > 0:
        return 0
    h, mu, big_m = geom.height, p.mu, p.p_modulus
    hp = h / pi
    if geom.dimension == 2:
        n_df = (
            floor(hp * sqrt(lam / big_m))
            + floor(hp * sqrt(lam / mu))
            + 2 * floor(sqrt(lam / mu))
            + 2 * sum(floor(hp * sqrt(lam / mu - n * n))
                      for n in range(1, floor(sqrt(lam / mu)) + 1))
            + 2 * sum(floor(hp * sqrt(lam / big_m - n * n))
                      for n in range(1, floor(sqrt(lam / big_m)) + 1))
        )
        if bc is BoundaryCondition.DF:
            return n_df
        return n_df + 2 * (floor(sqrt(lam / big_m)) - floor(sqrt(lam / mu)))

    nmax_mu = floor(lam / mu)
    nmax_m = floor(lam / big_m)
    table = r2_sieve(nmax_mu)
    n_mu = np.arange(1, nmax_mu + 1)
    w_mu = table[1 : nmax_mu + 1]
    t2 = int(np.sum(w_mu * (2 * np.floor(hp * np.sqrt(lam / mu - n_mu)).astype(np.int64) + 1)))
    n_m = np.arange(1, nmax_m + 1)
    w_m = table[1 : nmax_m + 1]
    t3 = int(np.sum(w_m * np.floor(hp * np.sqrt(lam / big_m - n_m)).astype(np.int64)))
    n_df = floor(hp * sqrt(lam / big_m)) + t2 + t3
    if bc is BoundaryCondition.DF:
        return n_df
    return n_df + int(np.sum(w_m))


# ---------------------------------------------------------------------------
# secular equations
# ---------------------------------------------------------------------------


def secular_residual(geom: CylinderGeometry, p: MaterialParameters,
                     bc: BoundaryCondition, xi_index: int, lam: float) -> float:
    """|secular expression| at integer transverse frequency data.

    For d = 2, ``xi_index`` is the transverse frequency xi; for d = 3 it is
    n = xi_1^2 + xi_2^2.  Square roots of negative arguments are taken
    complex; the modulus of the resulting expression is returned.  Every
    tabulated eigenvalue must be a zero.
    """
    validate_material(p.lam, p.mu, geom.dimension)
    h, mu, big_m = geom.height, p.mu, p.p_modulus
    lam_c = complex(lam)
    if geom.dimension == 2:
        xi2 = xi_index * xi_index
        s_mu = cmath.sin(h * cmath.sqrt(lam_c / mu - xi2))
        s_m = cmath.sin(h * cmath.sqrt(lam_c / big_m - xi2))
        front = lam_c**2 * ((lam_c / mu - xi2) if bc is BoundaryCondition.DF
                            else (lam_c / big_m - xi2))
        return abs(front * s_mu * s_m)
    n = xi_index
    s_mu = cmath.sin(h * cmath.sqrt(lam_c / mu - n))
    s_m = cmath.sin(h * cmath.sqrt(lam_c / big_m - n))
    front = lam_c**2 * n**2 * (lam_c / mu - n)
    if bc is BoundaryCondition.FD:
        front *= lam_c / big_m - n
    return abs(front * s_mu**2 * s_m)


def cylinder_two_term(geom: CylinderGeometry, p: MaterialParameters,
                      bc: BoundaryCondition):
    """Closed-form (leading, second) coefficients of the counting function."""
    validate_material(p.lam, p.mu, geom.dimension)
    h, mu, big_m = geom.height, p.mu, p.p_modulus
    if geom.dimension == 2:
        leading = 0.5 * h * (1.0 / mu + 1.0 / big_m)
        second = -bc.sign * (mu**-0.5 - big_m**-0.5)
        return leading, second
    leading = (2.0 * h / 3.0) * (2.0 / mu**1.5 + 1.0 / big_m**1.5)
    second = bc.sign * pi / (2.0 * big_m)
    return leading, second


# ---------------------------------------------------------------------------
# number-theoretic floor-sum estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FloorSumRow:
    x: int
    circle_sum: int          # sum over n <= x of r2(n)
    disc_sum: int            # sum over n <= sqrt(x) of floor(a sqrt(x - n^2))
    weighted_sum: int        # sum over n <= x of floor(a sqrt(x - n)) r2(n)
    disc_residual: float     # (disc_sum - pi a x / 4) / sqrt(x)
    circle_residual: float   # (circle_sum - pi x) / x^(1/3)
    weighted_residual: float  # (weighted_sum - 2 pi a x^(3/2) / 3) / x


@dataclass(frozen=True)
class FloorSumReport:
    a: Fraction
    rows: tuple
    disc_target: float        # -(a+1)/2
    weighted_target: float    # -pi/2


def _exact_floor_a_sqrt(p_num: int, q_den: int, m: int) -> int:
    # floor(a sqrt(m)) for a = p/q in lowest terms, exactly in integers
    return isqrt(p_num * p_num * m) // q_den


def floor_sum_checks(a, x_list) -> FloorSumReport:
    """Exact lattice/floor sums against their known asymptotic forms.

    All three sums are computed in integer arithmetic (a must be rational;
    floats convert exactly).  The first and third residuals converge to
    -(a+1)/2 and -pi/2 respectively; the second stays bounded (the lattice
    points of a disk fill pi*x with a small remainder).
    """
    a = Fraction(a)
    if a <= 0:
        raise ValueError("a must be positive")
    xs = [int(x) for x in x_list]
    if any(x < 1000 for x in xs):
        raise ValueError("x values below 1000 do not show the remainder regime")
    if any(y <= x for x, y in zip(xs, xs[1:])):
        raise ValueError("x_list must be strictly ascending")
    pn, qd = a.numerator, a.denominator
    rows = []
    table = r2_sieve(max(xs))
    cum = np.concatenate([[0], np.cumsum(table[1:])])
    for x in xs:
        disc = sum(_exact_floor_a_sqrt(pn, qd, x - n * n)
                   for n in range(1, isqrt(x) + 1))
        circle = int(cum[x])
        weighted = 0
        nz = np.nonzero(table[1 : x + 1])[0]
        for idx in nz:
            n = int(idx) + 1
            weighted += _exact_floor_a_sqrt(pn, qd, x - n) * int(table[n])
        rows.append(FloorSumRow(
            x=x,
            circle_sum=circle,
            disc_sum=disc,
            weighted_sum=weighted,
            disc_residual=(disc - pi * float(a) * x / 4.0) / sqrt(x),
            circle_residual=(circle - pi * x) / x ** (1.0 / 3.0),
            weighted_residual=(weighted - 2.0 * pi * float(a) / 3.0 * x**1.5) / x,
        ))
    return FloorSumReport(
        a=a,
        rows=tuple(rows),
        disc_target=-(float(a) + 1.0) / 2.0,
        weighted_target=-pi / 2.0,
    )
