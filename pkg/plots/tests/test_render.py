"""Plot helper: schema handling, panel structure, deterministic output."""

import json
import shutil
import subprocess

import numpy as np
import pytest

from weyl_plots import FigureSpec, SchemaError, render
from weyl_plots.render import build_figure, load_table, main

CYL_HEADER = "lambda,n_exact,n_closed,pred_two_term,residual1"
DISK_HEADER = "lambda,n,pred_two_term,residual1"


def write_cylinder_csv(path, n=40):
    lams = np.geomspace(5.0, 400.0, n)
    leading, second = 2.35, 0.29
    lines = [
        "# lambda=0", "# mu=1", "# h=3.14", "# bc=df", "# dimension=2",
        f"# leading={leading}", f"# c_second={second}",
        CYL_HEADER,
    ]
    for lam in lams:
        n_exact = int(leading * lam + second * np.sqrt(lam))
        pred = leading * lam + second * np.sqrt(lam)
        res1 = (n_exact - leading * lam) / np.sqrt(lam)
        lines.append(f"{lam:.17g},{n_exact},{n_exact},{pred:.17g},{res1:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return lams


def write_disk_csv(path, n=25):
    lams = np.geomspace(10.0, 500.0, n)
    lines = ["# bc=fd", "# leading=0.375", "# c_second=-0.1464", DISK_HEADER]
    for lam in lams:
        count = int(0.375 * lam)
        pred = 0.375 * lam - 0.1464 * np.sqrt(lam)
        res1 = (count - 0.375 * lam) / np.sqrt(lam)
        lines.append(f"{lam:.17g},{count},{pred:.17g},{res1:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return lams


class TestLoading:
    def test_metadata_and_columns(self, tmp_path):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        meta, header, cols = load_table(f)
        assert meta["c_second"] == "0.29"
        assert header == CYL_HEADER.split(",")
        assert cols["lambda"].size == 40

    def test_empty_body_rejected(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("# a=1\n" + CYL_HEADER + "\n", encoding="utf-8")
        with pytest.raises(ValueError, match="empty"):
            load_table(f)


class TestPanels:
    def test_counting_panel_covers_data(self, tmp_path):
        f = tmp_path / "t.csv"
        lams = write_cylinder_csv(f)
        spec = FigureSpec(str(f), "counting", "cylinder", str(tmp_path / "o.png"))
        fig = build_figure(spec)
        ax = fig.axes[0]
        xlo, xhi = ax.get_xlim()
        assert xlo <= lams.min() and xhi >= lams.max()
        assert len(ax.lines) >= 2  # prediction curves on top of the step
        fig.clf()

    def test_residual_panel_reference_line(self, tmp_path):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        spec = FigureSpec(str(f), "residual", "resid", str(tmp_path / "o.png"))
        fig = build_figure(spec)
        ax = fig.axes[0]
        heights = [l.get_ydata()[0] for l in ax.lines if len(set(l.get_ydata())) == 1]
        assert any(abs(h - 0.29) < 1e-12 for h in heights)
        fig.clf()

    def test_disk_schema_accepted(self, tmp_path):
        f = tmp_path / "d.csv"
        write_disk_csv(f)
        out = tmp_path / "d.png"
        render(FigureSpec(str(f), "counting", "disk", str(out)))
        assert out.exists() and out.stat().st_size > 0

    def test_png_and_svg_outputs(self, tmp_path):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        for suffix in ("png", "svg"):
            out = tmp_path / f"o.{suffix}"
            got = render(FigureSpec(str(f), "residual", "r", str(out)))
            assert got == str(out)
            assert out.stat().st_size > 0

    def test_rerun_is_deterministic(self, tmp_path):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        out = tmp_path / "o.svg"
        render(FigureSpec(str(f), "counting", "c", str(out)))
        first = out.read_bytes()
        render(FigureSpec(str(f), "counting", "c", str(out)))
        assert out.read_bytes() == first

    def test_input_untouched(self, tmp_path):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        before = f.read_bytes()
        render(FigureSpec(str(f), "counting", "c", str(tmp_path / "o.png")))
        assert f.read_bytes() == before


class TestErrors:
    def test_schema_mismatch_lists_columns(self, tmp_path):
        f = tmp_path / "bad.csv"
        f.write_text("alpha,beta\n1,2\n", encoding="utf-8")
        spec = FigureSpec(str(f), "counting", "x", str(tmp_path / "o.png"))
        with pytest.raises(SchemaError, match="alpha,beta"):
            build_figure(spec)

    def test_cli_schema_exit_code(self, tmp_path, capsys):
        f = tmp_path / "bad.csv"
        f.write_text("alpha,beta\n1,2\n", encoding="utf-8")
        spec_file = tmp_path / "spec.json"
        out = tmp_path / "o.png"
        spec_file.write_text(json.dumps({
            "input_csv": str(f), "panel": "counting",
            "title": "x", "output": str(out),
        }))
        assert main([str(spec_file)]) == 2
        assert "expected" in capsys.readouterr().err
        assert not out.exists()

    def test_string_column_table_is_schema_error_not_crash(self, tmp_path, capsys):
        # a profile-style table with a text column must fail the schema
        # check before any float conversion is attempted
        f = tmp_path / "profile.csv"
        f.write_text(
            "xi_zone,lambda,shift_value,det_s_re,det_s_im\n"
            "below,0.5,0,1,0\n",
            encoding="utf-8",
        )
        spec_file = tmp_path / "spec.json"
        out = tmp_path / "o.png"
        spec_file.write_text(json.dumps({
            "input_csv": str(f), "panel": "counting",
            "title": "x", "output": str(out),
        }))
        assert main([str(spec_file)]) == 2
        assert "xi_zone" in capsys.readouterr().err
        assert not out.exists()

    def test_cli_empty_body_no_file(self, tmp_path):
        f = tmp_path / "empty.csv"
        f.write_text(CYL_HEADER + "\n", encoding="utf-8")
        spec_file = tmp_path / "spec.json"
        out = tmp_path / "o.png"
        spec_file.write_text(json.dumps({
            "input_csv": str(f), "panel": "counting",
            "title": "x", "output": str(out),
        }))
        assert main([str(spec_file)]) == 1
        assert not out.exists()

    def test_cli_happy_path(self, tmp_path, capsys):
        f = tmp_path / "t.csv"
        write_cylinder_csv(f)
        out = tmp_path / "fig.svg"
        spec_file = tmp_path / "spec.json"
        spec_file.write_text(json.dumps({
            "input_csv": str(f), "panel": "residual",
            "title": "residual panel", "output": str(out),
        }))
        assert main([str(spec_file)]) == 0
        assert out.exists()

    def test_bad_spec_values(self, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec("x.csv", "sideways", "t", "o.png")
        with pytest.raises(ValueError):
            FigureSpec("x.csv", "counting", "t", "o.pdf")

    def test_usage_error(self):
        assert main([]) == 1


@pytest.mark.skipif(shutil.which("elastic-weyl") is None,
                    reason="producer CLI not installed")
class TestIntegration:
    def test_renders_real_producer_output(self, tmp_path):
        csv_path = tmp_path / "cyl.csv"
        subprocess.run(
            ["elastic-weyl", "cylinder2d", "--lambda-max", "200",
             "--samples", "30", "--out", str(csv_path)],
            check=True,
        )
        for panel in ("counting", "residual"):
            out = tmp_path / f"{panel}.png"
            render(FigureSpec(str(csv_path), panel, f"cylinder {panel}", str(out)))
            assert out.stat().st_size > 0

    def test_renders_disk_output(self, tmp_path):
        csv_path = tmp_path / "disk.csv"
        subprocess.run(
            ["elastic-weyl", "disk", "--lambda-max", "80",
             "--samples", "10", "--out", str(csv_path)],
            check=True,
        )
        out = tmp_path / "disk.svg"
        render(FigureSpec(str(csv_path), "counting", "disk", str(out)))
        assert out.stat().st_size > 0

    def test_renders_every_counting_command(self, tmp_path):
        jobs = [
            (["cylinder2d", "--lambda-max", "150", "--samples", "12"], "c2.csv"),
            (["cylinder3d", "--lambda-max", "60", "--samples", "12"], "c3.csv"),
            (["disk", "--lambda-max", "60", "--samples", "6"], "dk.csv"),
        ]
        for args, name in jobs:
            path = tmp_path / name
            subprocess.run(["elastic-weyl", *args, "--out", str(path)], check=True)
            for panel in ("counting", "residual"):
                out = tmp_path / f"{name}.{panel}.png"
                render(FigureSpec(str(path), panel, name, str(out)))
                assert out.stat().st_size > 0
