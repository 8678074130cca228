import csv
import io
import json
import math
from pathlib import Path

import jsonschema
import pytest

from gasymptote import cli
from gasymptote.branches import CascadeDivergence
from gasymptote.cli import RunConfig, main, run

from golden import COS_SIN, RATIONAL, SPACE, SQRT_SIN, UNIT

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())


def run_json(components, **kw):
    code, out = run(RunConfig(components=list(components), output="json", **kw))
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return code, report


def value(c):
    return complex(c["re"], c["im"])


class TestReport:

    def test_fractional_example(self):
        code, report = run_json(SQRT_SIN, window=UNIT)
        assert code == 0 and report["status"] == "ok"
        (a,) = report["asymptotes"]
        assert a["base_exponent"] == 3
        assert [c["rational"] for c in a["component_polynomials"][0]] == ["8/3", "-10/3", "5"]
        (entry,) = report["poles"]
        assert entry["pole"]["gamma"] == 2 and entry["pole"]["nbar"] == [3, 2]
        assert [d["radius"] for d in entry["approach"]] == [10, 100, 1000, 10000]

    def test_slope(self):
        code, report = run_json(COS_SIN, window=UNIT)
        (a,) = report["asymptotes"]
        c0, c1 = (value(c) for c in a["component_polynomials"][0])
        assert abs(c1 + 2 * math.pi) < 1e-9 and abs(c0) < 1e-9

    def test_empty_window(self):
        code, report = run_json(("1/s", "1/s"), window=(2, 3, -1, 1))
        assert code == 0 and report["asymptotes"] == [] and report["poles"] == []

    def test_scanned_pole_equation(self):
        code, report = run_json(SPACE, window=UNIT)
        assert code == 0
        assert len(report["asymptotes"][0]["component_polynomials"]) == 2

    def test_byte_stable(self):
        config = RunConfig(components=list(RATIONAL), output="json")
        assert run(config) == run(config)

    def test_text_matches_json(self):
        _, report = run_json(RATIONAL)
        code, text = run(RunConfig(components=list(RATIONAL)))
        lines = [ln for ln in text.splitlines() if "asymptote (" in ln]
        assert [ln.split("): ", 1)[1] for ln in lines] == [a["text"] for a in report["asymptotes"]]

    def test_fifteen_digits(self):
        _, report = run_json(RATIONAL)
        b1 = report["asymptotes"][1]["component_polynomials"][0][1]["re"]
        assert b1 == float(f"{b1:.15g}")


class TestExitCodes:

    def test_parse_error(self):
        code, report = run_json(("s +", "1/s"))
        assert code == 2 and report["error"]["type"] == "parse_error"
        assert report["error"]["position"] == 3

    def test_depth_too_small(self):
        code, report = run_json(("1/s^3", "1/s"), depth=2)
        assert code == 2 and report["status"] == "partial"
        assert report["poles"][0]["error"]["type"] == "config_error"

    def test_invalid_config(self):
        assert run_json(RATIONAL, tolerance=0.5)[0] == 2
        assert run_json(RATIONAL, window=(1, -1, 0, 0))[0] == 2
        assert run_json(RATIONAL, radii=(100.0, 10.0))[0] == 2

    def test_unsupported_structure(self):
        code, report = run_json(("1/(1+(s+2)^(3/4))", "s"), scan_general=False)
        assert code == 3 and report["error"]["type"] == "unsupported_structure"

    def test_divergence(self, monkeypatch):
        def diverge(*args, **kw):
            raise CascadeDivergence("synthetic")
        monkeypatch.setattr(cli, "branch_series", diverge)
        code, report = run_json(SQRT_SIN, window=UNIT)
        assert code == 4 and report["poles"][0]["error"]["type"] == "cascade_divergence"


class TestMain:

    def test_negative_window(self, capsys):
        assert main([*SQRT_SIN, "--window", "-1,1,-1,1", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["input"]["window"] == [-1, 1, -1, 1]

    def test_radii_flag(self, capsys):
        assert main([*SQRT_SIN, "--window=-1,1,-1,1", "--radii", "10,100"]) == 0
        assert "r=100: 0.0496465" in capsys.readouterr().out

    def test_bad_flag_value(self):
        with pytest.raises(SystemExit) as info:
            main([*RATIONAL, "--window", "1,2"])
        assert info.value.code == 2


def read_csv(path):
    raw = Path(path).read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode("utf-8"))))
    return rows[0], rows[1:]


class TestPlot:

    def test_fractional_example(self, tmp_path):
        path = tmp_path / "samples.csv"
        code, _ = run(RunConfig(components=list(SQRT_SIN), window=UNIT, plot_path=str(path)))
        header, rows = read_csv(path)
        assert header == ["series_id", "x", "y"]
        assert {r[0] for r in rows} == {"curve", "asymptote_1"}
        # only real samples are kept; sqrt(s) is imaginary for s < 0
        xs = [float(r[1]) for r in rows if r[0] == "curve"]
        assert len(xs) > 100

    def test_line_spans_range(self, tmp_path):
        path = tmp_path / "samples.csv"
        run(RunConfig(components=list(RATIONAL), plot_path=str(path), plot_range=(-4, 6)))
        _, rows = read_csv(path)
        ids = sorted({r[0] for r in rows})
        # the two complex horizontal lines are skipped
        assert ids == ["asymptote_2", "asymptote_4", "curve"]
        line = [(float(r[1]), float(r[2])) for r in rows if r[0] == "asymptote_4"]
        assert line[0] == (-4, 25) and line[-1] == (6, 5)

    def test_only_complex_poles(self, tmp_path):
        # asymptotes (t, I) and (t, -I): nothing real to trace
        path = tmp_path / "samples.csv"
        run(RunConfig(components=["1/(s^2+1)", "s"], plot_path=str(path)))
        _, rows = read_csv(path)
        assert rows == []

    def test_space_curve_header(self, tmp_path):
        path = tmp_path / "samples.csv"
        run(RunConfig(components=["1/s", "1/s", "1/s"], window=UNIT, plot_path=str(path)))
        header, rows = read_csv(path)
        assert header == ["series_id", "x", "y", "z"]
        assert all(len(r) == 4 for r in rows)

    def test_io_error(self, tmp_path):
        code, out = run(RunConfig(components=list(SQRT_SIN), window=UNIT,
                                  plot_path=str(tmp_path / "missing" / "x.csv")))
        assert code == 1 and "io_error" in out
