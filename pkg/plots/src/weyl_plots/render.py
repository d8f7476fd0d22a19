"""Render counting/residual panels from elastic-weyl CSV tables.

Input tables follow the producer's documented schemas: comment lines
``# key=value`` carrying metadata (notably ``c_second``, the closed-form
boundary coefficient), one header row, then data rows.  A counting panel
overlays the counting-function step curve on the two-term prediction; a
residual panel shows the first residual with a horizontal reference line at
the closed-form coefficient.  Rendering never modifies the input, and
reruns produce identical bytes (figure timestamps are suppressed).

Usage: ``plots <spec.json>`` with keys input_csv, panel, title, output.
Exit codes: 0 on success, 2 on a schema mismatch (the column diff is
printed), 1 on any other failure.  No output file is written on error.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "weyl-plots"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COUNTING_HEADERS = {
    "cylinder": ["lambda", "n_exact", "n_closed", "pred_two_term", "residual1"],
    "disk": ["lambda", "n", "pred_two_term", "residual1"],
}
PANELS = ("counting", "residual")


class SchemaError(ValueError):
    """Input CSV does not match any documented table schema."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    panel: str
    title: str
    output: str

    def __post_init__(self):
        if self.panel not in PANELS:
            raise ValueError(f"panel must be one of {PANELS}, got {self.panel!r}")
        suffix = Path(self.output).suffix.lower()
        if suffix not in (".png", ".svg"):
            raise ValueError(f"output must be .png or .svg, got {self.output!r}")


def _load_raw(path):
    """Metadata dict, header list and raw string rows of a producer CSV."""
    metadata = {}
    header = None
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("# ")
                if "=" in body:
                    key, value = body.split("=", 1)
                    metadata[key.strip()] = value.strip()
                continue
            if header is None:
                header = next(csv.reader([line]))
                continue
            rows.append(next(csv.reader([line])))
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    if not rows:
        raise ValueError(f"{path}: table body is empty")
    return metadata, header, rows


def _to_columns(header, rows):
    return {
        name: np.array([float(r[i]) for r in rows])
        for i, name in enumerate(header)
    }


def load_table(path):
    """Metadata dict, header list and float columns of a producer CSV."""
    metadata, header, rows = _load_raw(path)
    return metadata, header, _to_columns(header, rows)


def _check_schema(header, panel):
    matches = any(header == want for want in COUNTING_HEADERS.values())
    if not matches:
        expected = " or ".join(",".join(h) for h in COUNTING_HEADERS.values())
        raise SchemaError(
            f"unexpected columns {','.join(header)}; expected {expected}"
        )
    if panel == "residual" and "residual1" not in header:
        raise SchemaError("residual panel needs a residual1 column")


def build_figure(spec: FigureSpec):
    """Figure object for a spec; raises instead of writing on any problem."""
    metadata, header, rows = _load_raw(spec.input_csv)
    _check_schema(header, spec.panel)  # before any float conversion
    columns = _to_columns(header, rows)
    lam = columns["lambda"]
    counts = columns["n_exact"] if "n_exact" in columns else columns["n"]

    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    if spec.panel == "counting":
        ax.step(lam, counts, where="post", lw=1.2, label="counting function")
        ax.plot(lam, columns["pred_two_term"], lw=1.0, ls="--",
                label="two-term prediction")
        if "leading" in metadata:
            power = 1.5 if metadata.get("dimension") == "3" else 1.0
            ax.plot(lam, float(metadata["leading"]) * lam**power, lw=0.8, ls=":",
                    label="one-term prediction")
        ax.set_ylabel("N")
        ax.legend(loc="upper left")
    else:
        ax.plot(lam, columns["residual1"], lw=0.9, label="residual1")
        if "c_second" in metadata:
            ref = float(metadata["c_second"])
            ax.axhline(ref, color="k", lw=1.0, ls="--",
                       label=f"closed form {ref:.6g}")
        ax.set_ylabel("(N - leading term) / boundary power")
        ax.legend(loc="best")
    ax.set_xlabel("spectral parameter")
    ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Write the figure for ``spec`` and return the output path."""
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output, dpi=130, metadata={"Date": None})
    finally:
        plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: plots <spec.json>", file=sys.stderr)
        return 1
    try:
        raw = json.loads(Path(argv[0]).read_text(encoding="utf-8"))
        spec = FigureSpec(**raw)
        out = render(spec)
    except SchemaError as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
