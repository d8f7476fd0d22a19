"""Command-line interface with CSV/JSON output for scripting and plotting.

Commands: ``coeffs`` (closed-form coefficients), ``shift`` (scattering and
spectral-shift profile), ``cylinder2d``/``cylinder3d`` (exact counting vs
closed form vs prediction), ``disk`` (disk counting plus per-order root
tables), ``verify`` (self-check suite).  CSV output is deterministic:
17-significant-digit floats, ``\\n`` line endings, one header row, metadata
in leading ``# key=value`` comment lines.  Exit codes: 0 success,
1 validation failure, 2 numerical diagnostic, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .asymptotics import AsymptoticModel, two_term_prediction
from .cylinders import (
    CylinderGeometry,
    counting_closed_form,
    cylinder_two_term,
    enumerate_cylinder,
    r2,
    r2_sieve,
    secular_residual,
)
from .disk import DoubleRootError, disk_spectrum
from .materials import (
    BoundaryCondition,
    DomainGeometry,
    NonConvexError,
    assemble_coefficients,
    boundary_weyl_constant,
    bulk_weyl_constant,
    validate_material,
)
from .shift import (
    AnomalousThresholdError,
    GridRefinementError,
    QuadratureError,
    SingularSystemError,
    SpectralZone,
    ThresholdKind,
    classify_threshold,
    integrate_to_second_coefficient,
    point_spectrum_scan,
    scattering_matrix,
    spectral_shift,
    thresholds,
    zone_of,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

NUMERICAL_ERRORS = (
    DoubleRootError,
    GridRefinementError,
    SingularSystemError,
    AnomalousThresholdError,
    QuadratureError,
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    lambda_lame: float
    mu: float
    bc: BoundaryCondition
    h: float
    lambda_max: float
    samples: int
    out_path: str | None
    format: str
    dimension: int
    volume: float
    boundary_volume: float


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _max_workers() -> int:
    env = os.environ.get("WEYL_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"WEYL_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ValueError("WEYL_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _parallel_map(fn, items):
    """Order-preserving map, parallel over threads when allowed."""
    workers = _max_workers()
    if workers == 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(metadata: dict, header: list, rows: list) -> str:
    lines = [f"# {k}={v}" for k, v in metadata.items()]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _sample_grid(lam_min: float, lam_max: float, samples: int) -> np.ndarray:
    if samples == 1:
        return np.array([lam_max])
    return np.geomspace(lam_min, lam_max, samples)


def _nudge_off_eigenvalues(grid, eigenvalues):
    """Shift any sample colliding with an eigenvalue up by 1e-9 relative."""
    out = []
    for lam in grid:
        while eigenvalues.size:
            i = np.searchsorted(eigenvalues, lam)
            near = min(
                abs(lam - eigenvalues[j])
                for j in (i - 1, i) if 0 <= j < eigenvalues.size
            )
            if near > 1e-9 * max(1.0, lam):
                break
            lam = lam * (1.0 + 1e-9) + 1e-15
        out.append(lam)
    return np.array(out)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_coeffs(cfg: RunConfig) -> int:
    p = validate_material(cfg.lambda_lame, cfg.mu, cfg.dimension)
    geom = DomainGeometry(cfg.dimension, cfg.volume, cfg.boundary_volume)
    payload = {
        "dimension": cfg.dimension,
        "lambda": cfg.lambda_lame,
        "mu": cfg.mu,
        "volume": cfg.volume,
        "boundary_volume": cfg.boundary_volume,
        "a": bulk_weyl_constant(p, cfg.dimension),
    }
    for bc in BoundaryCondition:
        co = assemble_coefficients(p, cfg.dimension, bc, geom)
        payload[bc.value] = {
            "b": co.b,
            "leading": co.leading,
            "second": co.second,
            "second_reduced": co.second_reduced,
        }
    if cfg.format == "json":
        _write_text(cfg.out_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        rows = []
        for bc in BoundaryCondition:
            co = payload[bc.value]
            rows.append([bc.value, _fmt(payload["a"]), _fmt(co["b"]),
                         _fmt(co["leading"]), _fmt(co["second"]),
                         _fmt(co["second_reduced"])])
        meta = {k: _fmt(payload[k]) for k in
                ("lambda", "mu", "volume", "boundary_volume")}
        meta["dimension"] = str(cfg.dimension)
        text = _csv(meta, ["bc", "a", "b", "leading", "second", "second_reduced"], rows)
        _write_text(cfg.out_path, text)
    return EXIT_OK


def _cmd_shift(cfg: RunConfig) -> int:
    d = cfg.dimension
    p = validate_material(cfg.lambda_lame, cfg.mu, d)
    thr = thresholds(p, 1.0, d)
    lam_max = max(cfg.lambda_max, thr.upper * 4.0)
    grid = _sample_grid(thr.lower / 4.0, lam_max, max(cfg.samples, 16))
    margin = 2e-6
    grid = np.array([
        lam * (1.0 + 4.0 * margin)
        if any(abs(lam - t) < margin * t for t in (thr.lower, thr.upper)) else lam
        for lam in grid
    ])

    unitarity_max = 0.0
    rows = []
    for lam in grid:
        zone = zone_of(lam, thr)
        if zone is SpectralZone.BELOW_SPECTRUM:
            det = complex(1.0, 0.0)
        else:
            s = scattering_matrix(p, cfg.bc, float(lam), d)
            unitarity_max = max(unitarity_max, s.unitarity_defect())
            det = complex(np.linalg.det(s.entries))
        value = spectral_shift(p, cfg.bc, d, float(lam))
        rows.append([zone.value, _fmt(lam), _fmt(value), _fmt(det.real), _fmt(det.imag)])

    closed_max_err = max(
        abs(spectral_shift(p, cfg.bc, d, float(lam))
            - spectral_shift(p, cfg.bc, d, float(lam), method="closed_form"))
        for lam in grid
    )
    pipeline_coeff = integrate_to_second_coefficient(p, cfg.bc, d, cfg.boundary_volume)
    closed_coeff = (0.5 * (d - 1) * boundary_weyl_constant(p, d, cfg.bc)
                    * cfg.boundary_volume)

    meta = {
        "lambda": _fmt(cfg.lambda_lame),
        "mu": _fmt(cfg.mu),
        "bc": cfg.bc.value,
        "dimension": str(d),
        "unitarity_max": _fmt(unitarity_max),
        "pipeline_vs_closed_shift_max_err": _fmt(closed_max_err),
        "pipeline_coefficient": _fmt(pipeline_coeff),
        "closed_form_coefficient": _fmt(closed_coeff),
    }
    if cfg.format == "json":
        payload = dict(meta)
        payload["profile"] = [
            {"xi_zone": r[0], "lambda": float(r[1]), "shift_value": float(r[2]),
             "det_s_re": float(r[3]), "det_s_im": float(r[4])}
            for r in rows
        ]
        _write_text(cfg.out_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        text = _csv(meta, ["xi_zone", "lambda", "shift_value", "det_s_re", "det_s_im"],
                    rows)
        _write_text(cfg.out_path, text)
    return EXIT_OK


def _smallest_cylinder_eigenvalue(geom, p, bc) -> float:
    table = enumerate_cylinder(geom, p, bc, 16.0 * (math.pi / geom.height) ** 2
                               * p.p_modulus + 16.0 * p.p_modulus)
    return float(table.values[0])


def _cmd_cylinder(cfg: RunConfig) -> int:
    d = cfg.dimension
    p = validate_material(cfg.lambda_lame, cfg.mu, d)
    geom = CylinderGeometry(d, cfg.h)
    table = enumerate_cylinder(geom, p, cfg.bc, cfg.lambda_max)
    leading, second = cylinder_two_term(geom, p, cfg.bc)
    model = AsymptoticModel(leading=leading, second=second, dimension=d)

    lam_min = 1.1 * _smallest_cylinder_eigenvalue(geom, p, cfg.bc)
    grid = _sample_grid(min(lam_min, cfg.lambda_max), cfg.lambda_max, cfg.samples)
    grid = _nudge_off_eigenvalues(grid, table.values)

    n_exact = table.count(grid)
    n_closed = _parallel_map(
        lambda lam: counting_closed_form(geom, p, cfg.bc, float(lam)), list(grid)
    )
    rows = []
    for lam, ne, nc in zip(grid, n_exact, n_closed):
        pred = two_term_prediction(model, float(lam))
        res1 = (float(ne) - leading * lam ** (d / 2.0)) / lam ** ((d - 1) / 2.0)
        rows.append([_fmt(lam), str(int(ne)), str(int(nc)), _fmt(pred), _fmt(res1)])

    meta = {
        "lambda": _fmt(cfg.lambda_lame), "mu": _fmt(cfg.mu),
        "h": _fmt(cfg.h), "bc": cfg.bc.value, "dimension": str(d),
        "leading": _fmt(leading), "c_second": _fmt(second),
    }
    header = ["lambda", "n_exact", "n_closed", "pred_two_term", "residual1"]
    if cfg.format == "json":
        payload = dict(meta)
        payload["rows"] = [
            {"lambda": float(r[0]), "n_exact": int(r[1]), "n_closed": int(r[2]),
             "pred_two_term": float(r[3]), "residual1": float(r[4])}
            for r in rows
        ]
        _write_text(cfg.out_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        _write_text(cfg.out_path, _csv(meta, header, rows))
    return EXIT_OK


def _cmd_disk(cfg: RunConfig) -> int:
    p = validate_material(cfg.lambda_lame, cfg.mu, 2)
    spectrum = disk_spectrum(cfg.bc, p, cfg.lambda_max)
    if spectrum.diagnostics:
        raise DoubleRootError(f"unresolved diagnostics: {spectrum.diagnostics[:3]}")
    a = bulk_weyl_constant(p, 2)
    b = boundary_weyl_constant(p, 2, cfg.bc)
    leading = a * math.pi
    second = b * 2.0 * math.pi
    model = AsymptoticModel(leading=leading, second=second, dimension=2)

    lam_min = 1.1 * float(spectrum.values[0]) if spectrum.values.size else 1.0
    grid = _sample_grid(min(lam_min, cfg.lambda_max), cfg.lambda_max, cfg.samples)
    grid = _nudge_off_eigenvalues(grid, spectrum.values)

    rows = []
    for lam in grid:
        n = int(spectrum.count(lam))
        pred = two_term_prediction(model, float(lam))
        res1 = (n - leading * lam) / math.sqrt(lam)
        rows.append([_fmt(lam), str(n), _fmt(pred), _fmt(res1)])
    root_rows = [
        [str(mode.angular_order), _fmt(root), str(mode.multiplicity_per_root)]
        for mode in spectrum.per_order for root in mode.roots
    ]

    meta = {
        "lambda": _fmt(cfg.lambda_lame), "mu": _fmt(cfg.mu), "bc": cfg.bc.value,
        "leading": _fmt(leading), "c_second": _fmt(second),
    }
    header = ["lambda", "n", "pred_two_term", "residual1"]
    roots_header = ["k", "root", "multiplicity"]
    if cfg.format == "json":
        payload = dict(meta)
        payload["rows"] = [
            {"lambda": float(r[0]), "n": int(r[1]), "pred_two_term": float(r[2]),
             "residual1": float(r[3])} for r in rows
        ]
        payload["roots"] = [
            {"k": int(r[0]), "root": float(r[1]), "multiplicity": int(r[2])}
            for r in root_rows
        ]
        _write_text(cfg.out_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    main_csv = _csv(meta, header, rows)
    roots_csv = _csv({"table": "roots", "bc": cfg.bc.value}, roots_header, root_rows)
    if cfg.out_path is None:
        _write_text(None, main_csv + "\n" + roots_csv)
    else:
        _write_text(cfg.out_path, main_csv)
        _write_text(cfg.out_path + ".roots.csv", roots_csv)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    """Fast end-to-end self-check across all modules."""
    failures = []

    def check(name, ok, detail=""):
        line = f"PASS {name}" if ok else f"FAIL {name}: {detail}"
        print(line)
        if not ok:
            failures.append(name)

    # material validation
    try:
        validate_material(0.0, 1.0, 2)
        validate_material(2.0, 1.0, 3)
        ok = True
    except NonConvexError:
        ok = False
    try:
        validate_material(-1.0, 1.0, 2)
        ok = False
    except NonConvexError:
        pass
    check("material-validation", ok)

    # coefficient pipeline vs closed form
    worst = 0.0
    for d in (2, 3, 4, 5):
        for lam_, mu_ in ((0.0, 1.0), (1.0, 1.0), (2.0, 0.5)):
            p = validate_material(lam_, mu_, d)
            for bc in BoundaryCondition:
                got = integrate_to_second_coefficient(p, bc, d, 1.0)
                want = 0.5 * (d - 1) * boundary_weyl_constant(p, d, bc)
                worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    check("coefficient-crosscheck", worst <= 1e-10, f"max rel err {worst:.2e}")

    # scattering unitarity and threshold table
    p = validate_material(cfg.lambda_lame, cfg.mu, 3)
    defect = 0.0
    for d in (2, 3, 4):
        thr = thresholds(p, 1.0, d)
        for bc in BoundaryCondition:
            for lam in np.geomspace(thr.lower * 1.01, thr.upper * 0.99, 24):
                defect = max(defect, scattering_matrix(p, bc, float(lam), d)
                             .unitarity_defect())
            for lam in np.geomspace(thr.upper * 1.01, thr.upper * 8, 24):
                defect = max(defect, scattering_matrix(p, bc, float(lam), d)
                             .unitarity_defect())
    check("scattering-unitarity", defect <= 1e-10, f"max defect {defect:.2e}")

    table_ok = (
        classify_threshold(p, BoundaryCondition.DF, 1, 2).variant is ThresholdKind.SOFT
        and classify_threshold(p, BoundaryCondition.DF, 2, 2).variant is ThresholdKind.RIGID
        and classify_threshold(p, BoundaryCondition.FD, 1, 2).variant is ThresholdKind.RIGID
        and classify_threshold(p, BoundaryCondition.FD, 2, 2).variant is ThresholdKind.SOFT
        and classify_threshold(p, BoundaryCondition.DF, 1, 4).variant is ThresholdKind.RIGID
        and classify_threshold(p, BoundaryCondition.FD, 1, 4).variant is ThresholdKind.SOFT
    )
    check("threshold-classification", table_ok)

    empty = all(
        not point_spectrum_scan(p, bc, d, p.p_modulus * 3.0)
        for bc in BoundaryCondition for d in (2, 5)
    )
    check("no-point-spectrum", empty)

    # cylinder oracle equivalence on a small random batch
    rng = np.random.default_rng(7)
    agree = True
    for d in (2, 3):
        geom = CylinderGeometry(d, math.pi)
        pm = validate_material(0.0, 1.0, d)
        lmax = 200.0 if d == 2 else 100.0
        for bc in BoundaryCondition:
            table = enumerate_cylinder(geom, pm, bc, lmax)
            lams = _nudge_off_eigenvalues(rng.uniform(1.0, lmax, 40), table.values)
            for lam in lams:
                if int(table.count(lam)) != counting_closed_form(geom, pm, bc, float(lam)):
                    agree = False
    check("cylinder-oracle-equivalence", agree)

    # worked counting values
    geom2 = CylinderGeometry(2, math.pi)
    geom3 = CylinderGeometry(3, math.pi)
    pm2 = validate_material(0.0, 1.0, 2)
    pm3 = validate_material(0.0, 1.0, 3)
    vals_ok = (
        counting_closed_form(geom2, pm2, BoundaryCondition.DF, 5.5) == 15
        and counting_closed_form(geom2, pm2, BoundaryCondition.FD, 5.5) == 13
        and counting_closed_form(geom3, pm3, BoundaryCondition.DF, 4.5) == 33
        and counting_closed_form(geom3, pm3, BoundaryCondition.FD, 4.5) == 41
    )
    check("cylinder-worked-values", vals_ok)

    # lattice multiplicities: formula vs enumeration
    sieve = r2_sieve(2000)
    check("sum-of-squares-fastpath",
          all(r2(n) == int(sieve[n]) for n in range(2001)))

    check("secular-zero-audit",
          secular_residual(geom2, pm2, BoundaryCondition.DF, 0, 2.0) < 1e-9)

    return EXIT_OK if not failures else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValueError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="elastic-weyl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, bc=True, h=False, lam_max=None, dim=None):
        sp.add_argument("--lambda", dest="lambda_lame", type=float, default=0.0,
                        help="first Lame parameter (dimensionless units)")
        sp.add_argument("--mu", type=float, default=1.0, help="shear modulus")
        if bc:
            sp.add_argument("--bc", choices=["df", "fd"], default="df")
        if h:
            sp.add_argument("--h", type=float, default=math.pi,
                            help="cylinder height")
        if lam_max is not None:
            sp.add_argument("--lambda-max", dest="lambda_max", type=float,
                            default=lam_max,
                            help="top of the spectral sampling range"
                                 + (" (0 = auto)" if lam_max == 0.0 else ""))
        if dim is not None:
            sp.add_argument("--dim", dest="dimension", type=int, default=dim)
        sp.add_argument("--samples", type=int, default=200)
        sp.add_argument("--out", dest="out_path", default=None)
        sp.add_argument("--format", choices=["csv", "json"], default=None)

    sp = sub.add_parser("coeffs", help="closed-form coefficients for both bc")
    common(sp, bc=False, dim=3)
    sp.add_argument("--volume", type=float, default=1.0)
    sp.add_argument("--boundary-volume", dest="boundary_volume", type=float,
                    default=1.0)

    sp = sub.add_parser("shift", help="spectral shift profile and audits")
    common(sp, lam_max=0.0, dim=3)
    sp.add_argument("--boundary-volume", dest="boundary_volume", type=float,
                    default=1.0)

    sp = sub.add_parser("cylinder2d", help="2d cylinder counting table")
    common(sp, h=True, lam_max=1000.0)
    sp = sub.add_parser("cylinder3d", help="3d cylinder counting table")
    common(sp, h=True, lam_max=500.0)
    sp = sub.add_parser("disk", help="unit disk counting table and roots")
    common(sp, lam_max=500.0)
    sp = sub.add_parser("verify", help="run the invariant self-check suite")
    common(sp, bc=False)
    return parser


def _config_from_args(args) -> RunConfig:
    fmt = getattr(args, "format", None)
    if fmt is None:
        fmt = "json" if args.command == "coeffs" else "csv"
    samples = getattr(args, "samples", 200)
    if samples < 1:
        raise ValueError("--samples must be >= 1")
    dimension = getattr(args, "dimension", None)
    if dimension is None:
        dimension = 2 if args.command in ("cylinder2d", "disk") else 3
    if args.command == "cylinder2d":
        dimension = 2
    if args.command == "cylinder3d":
        dimension = 3
    return RunConfig(
        command=args.command,
        lambda_lame=getattr(args, "lambda_lame", 0.0),
        mu=getattr(args, "mu", 1.0),
        bc=BoundaryCondition(getattr(args, "bc", "df")),
        h=getattr(args, "h", math.pi),
        lambda_max=getattr(args, "lambda_max", 500.0),
        samples=samples,
        out_path=getattr(args, "out_path", None),
        format=fmt,
        dimension=dimension,
        volume=getattr(args, "volume", 1.0),
        boundary_volume=getattr(args, "boundary_volume", 1.0),
    )


def run(cfg: RunConfig) -> int:
    """Dispatch a validated configuration to its command."""
    validate_material(cfg.lambda_lame, cfg.mu, cfg.dimension)
    if cfg.command == "coeffs":
        return _cmd_coeffs(cfg)
    if cfg.command == "shift":
        return _cmd_shift(cfg)
    if cfg.command in ("cylinder2d", "cylinder3d"):
        return _cmd_cylinder(cfg)
    if cfg.command == "disk":
        return _cmd_disk(cfg)
    if cfg.command == "verify":
        return _cmd_verify(cfg)
    raise ValueError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _config_from_args(args)
        return run(cfg)
    except (NonConvexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
