"""
Command-line front end.

    python -m gasymptote "(sqrt(s)+1)/(sqrt(s)*sin(s))" "(s^2+s+5)/sin(s)" \
        --window -1,1,-1,1 --json

Exit status: 0 on success, 2 for unparsable input or invalid options, 3 for
a denominator outside the supported structure, 4 when a cascade limit
diverges, 1 for any other per-pole failure.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import expr as ex
from .asymptotes import asymptote_at
from .branches import (COEF_TOL, DEFAULT_RADII, CascadeDivergence, SamplingError,
                       approach_distance, branch_series)
from .poles import DEFAULT_WINDOW, UnsupportedStructureError, find_poles
from .series import SeriesError, format_coefficient

__all__ = ["RunConfig", "run", "emit_plot_samples", "build_parser", "main"]

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_DIVERGENCE = 4


@dataclass
class RunConfig:
    components: list
    window: tuple = DEFAULT_WINDOW
    depth: int = None
    tail_terms: int = 3
    tolerance: float = COEF_TOL
    output: str = "text"
    plot_path: str = None
    plot_range: tuple = (-10.0, 10.0)
    radii: tuple = DEFAULT_RADII
    scan_general: bool = True

    def validate(self):
        xmin, xmax, ymin, ymax = self.window
        if not (xmin <= xmax and ymin <= ymax):
            raise ValueError(f"invalid window {self.window}")
        if not 0 < self.tolerance < 1e-2:
            raise ValueError("tolerance must lie in (0, 1e-2)")
        if self.tail_terms < 0:
            raise ValueError("tail must be nonnegative")
        if self.output not in ("text", "json"):
            raise ValueError(f"unknown output mode {self.output!r}")
        if any(r <= 0 for r in self.radii) or list(self.radii) != sorted(self.radii):
            raise ValueError("radii must be positive and increasing")


# =============
# Serialization
# =============

def _float(x):
    return float(f"{x:.15g}") + 0.0


def _number(c):
    if isinstance(c, (int, Fraction)):
        return {"re": _float(float(c)), "im": 0.0, "rational": str(Fraction(c))}
    c = complex(c)
    return {"re": _float(c.real), "im": _float(c.imag)}


def _pole_json(pole):
    return {
        "tau": _number(pole.tau),
        "equation": pole.equation,
        "gamma": pole.gamma,
        "nbar": list(pole.nbar),
        "orders": [{"numerator": str(u), "denominator": str(n)} for u, n in pole.orders],
        "pivot": pole.pivot + 1,
    }


def _branch_json(b):
    comps = []
    for i, s in enumerate(b.components):
        if i == b.pivot:
            continue
        comps.append({
            "component": i + 1,
            "series": str(s),
            "head": [{"exponent": str(Fraction(j, b.ramification_index)), "coefficient": _number(c)}
                     for j, c in sorted(b.head(i).items(), reverse=True)],
            "tail": [{"exponent": str(Fraction(j, b.ramification_index)), "coefficient": _number(c)}
                     for j, c in sorted(b.tail(i).items(), reverse=True)],
        })
    return {"ramification_index": b.ramification_index, "degree": b.degree,
            "components": comps}


def _asymptote_json(a):
    return {
        "kind": a.kind,
        "base_exponent": a.base_exponent,
        "pivot": a.pivot + 1,
        "reduction_factor": a.reduction_factor,
        "component_polynomials": [[_number(c) for c in poly]
                                  for poly in a.component_polynomials],
        "infinity_point": [_number(c) for c in a.infinity_point],
        "source_pole": _number(a.source_pole),
        "flags": list(a.flags),
        "text": str(a),
    }


def _error(kind, exc, **extra):
    out = {"type": kind, "message": str(exc)}
    out.update(extra)
    return out


# =========
# Algorithm
# =========

def _analyze_pole(p, pole, config):
    entry = {"pole": _pole_json(pole), "branch": None, "infinity_point": None,
             "asymptote": None, "approach": None, "error": None}
    axis = all(pole.nbar[i] <= 0 for i in range(p.dimension) if i != pole.pivot)
    if config.depth is not None and config.depth < max(max(pole.nbar), 0) + config.tail_terms + 1:
        needed = max(max(pole.nbar), 0) + config.tail_terms + 1
        entry["error"] = _error("config_error", f"depth must be at least {needed}")
        return entry, EXIT_USAGE, None
    try:
        if not axis:
            b = branch_series(p, pole, config.tail_terms, config.depth)
            entry["branch"] = _branch_json(b)
        a = asymptote_at(p, pole, config.tail_terms, config.depth, config.tolerance)
    except CascadeDivergence as exc:
        entry["error"] = _error("cascade_divergence", exc)
        return entry, EXIT_DIVERGENCE, None
    except (SeriesError, ValueError, ArithmeticError) as exc:
        entry["error"] = _error("computation_error", exc)
        return entry, EXIT_FAILURE, None
    entry["infinity_point"] = [_number(c) for c in a.infinity_point]
    entry["asymptote"] = _asymptote_json(a)
    try:
        dist = approach_distance(p, pole, a, config.radii)
        entry["approach"] = [{"radius": _float(r), "distance": _float(d)}
                             for r, d in zip(config.radii, dist)]
    except SamplingError as exc:
        entry["approach"] = {"error": str(exc)}
    return entry, EXIT_OK, a


def _analyze(config):
    report = {
        "input": {
            "components": list(config.components),
            "window": [_float(x) for x in config.window],
            "depth": config.depth,
            "tail_terms": config.tail_terms,
            "tolerance": config.tolerance,
            "radii": [_float(r) for r in config.radii],
        },
        "status": "ok",
        "poles": [],
        "asymptotes": [],
        "error": None,
    }
    try:
        config.validate()
    except ValueError as exc:
        report["status"] = "error"
        report["error"] = _error("config_error", exc)
        return report, EXIT_USAGE, None, []
    try:
        p = ex.CurveParam.from_strings(*config.components)
    except ex.ParseError as exc:
        report["status"] = "error"
        report["error"] = _error("parse_error", exc, position=exc.position)
        return report, EXIT_USAGE, None, []
    except (ValueError, ZeroDivisionError) as exc:
        report["status"] = "error"
        report["error"] = _error("parse_error", exc, position=None)
        return report, EXIT_USAGE, None, []
    try:
        poles = find_poles(p, tuple(config.window), scan_general=config.scan_general)
    except UnsupportedStructureError as exc:
        report["status"] = "error"
        report["error"] = _error("unsupported_structure", exc)
        return report, EXIT_UNSUPPORTED, p, []
    except (SeriesError, ArithmeticError) as exc:
        report["status"] = "error"
        report["error"] = _error("computation_error", exc)
        return report, EXIT_FAILURE, p, []
    code = EXIT_OK
    asymptotes = []
    for pole in poles:
        entry, status, a = _analyze_pole(p, pole, config)
        report["poles"].append(entry)
        if a is not None:
            asymptotes.append(a)
            report["asymptotes"].append(entry["asymptote"])
        if status != EXIT_OK and code == EXIT_OK:
            code = status
    if code != EXIT_OK:
        report["status"] = "partial"
    return report, code, p, asymptotes


def _point_text(point):
    return "(" + " : ".join(format_coefficient(c) for c in point) + ")"


def _text_report(report):
    lines = []
    inp = report["input"]
    lines.append("curve: (" + ", ".join(inp["components"]) + ")")
    if report["error"]:
        lines.append(f"error [{report['error']['type']}]: {report['error']['message']}")
        return "\n".join(lines) + "\n"
    lines.append(f"poles in window: {len(report['poles'])}")
    for entry in report["poles"]:
        pole = entry["pole"]
        tau = _json_number_text(pole["tau"])
        lines.append("")
        lines.append(f"pole {tau}  gamma={pole['gamma']}  nbar={tuple(pole['nbar'])}"
                     f"  pivot={pole['pivot']}")
        if pole["equation"]:
            lines.append(f"  defined by: {pole['equation']}")
        if entry["error"]:
            lines.append(f"  error [{entry['error']['type']}]: {entry['error']['message']}")
            continue
        if entry["branch"]:
            for comp in entry["branch"]["components"]:
                lines.append(f"  branch[{comp['component']}]: {comp['series']}")
            lines.append(f"  degree: {entry['branch']['degree']}")
        lines.append("  infinity point: (" + " : ".join(
            _json_number_text(c) for c in entry["infinity_point"]) + ")")
        a = entry["asymptote"]
        extra = f"  [{', '.join(a['flags'])}]" if a["flags"] else ""
        lines.append(f"  asymptote ({a['kind']}, beta={a['reduction_factor']}): {a['text']}{extra}")
        if isinstance(entry["approach"], list):
            lines.append("  approach: " + ", ".join(
                f"r={d['radius']:g}: {d['distance']:.6g}" for d in entry["approach"]))
        elif entry["approach"]:
            lines.append(f"  approach: {entry['approach']['error']}")
    return "\n".join(lines) + "\n"


def _json_number_text(c):
    if "rational" in c:
        return c["rational"]
    return format_coefficient(complex(c["re"], c["im"]))


def run(config):
    """Run the full analysis.

    Returns
    -------
    (int, str)
        Exit status and the serialized report (JSON or text).
    """
    report, code, p, asymptotes = _analyze(config)
    if config.plot_path and p is not None:
        try:
            emit_plot_samples(p, asymptotes, config.plot_path, config.plot_range)
        except OSError as exc:
            report["error"] = _error("io_error", exc)
            report["status"] = "error"
            code = EXIT_FAILURE
    if config.output == "json":
        return code, json.dumps(report, indent=2, sort_keys=False) + "\n"
    return code, _text_report(report)


# ==========
# Plot data
# ==========

def _real_values(p, s):
    try:
        vals = [ex.evaluate(c, s) for c in p.components]
    except (ex.PoleError, ValueError, OverflowError):
        return None
    if any(abs(v.imag) > 1e-9 * (1 + abs(v)) or abs(v) > 1e8 for v in vals):
        return None
    return [v.real for v in vals]


def _fmt(x):
    return f"{x:.15g}"


def emit_plot_samples(p, asymptotes, path, x_range=(-10.0, 10.0), samples=401):
    """Write curve and asymptote samples as CSV.

    Columns are ``series_id, x, y`` (plus ``z`` for space curves). The curve
    is traced for real ``s`` within 3 of its real poles; each asymptote with
    real coefficients is traced so that its pivot coordinate covers
    ``x_range`` with exact endpoints.
    """
    dim = p.dimension
    header = ["series_id", "x", "y", "z"][:dim + 1]
    rows = []
    real_poles = sorted({complex(a.source_pole).real for a in asymptotes
                         if abs(complex(a.source_pole).imag) <= 1e-12})
    if real_poles:
        grid = np.linspace(real_poles[0] - 3, real_poles[-1] + 3, 20 * samples)
        for s in grid:
            if min(abs(s - t) for t in real_poles) < 1e-3:
                continue
            vals = _real_values(p, complex(s))
            if vals is not None:
                rows.append(["curve"] + [_fmt(v) for v in vals])
    lo, hi = x_range
    for idx, a in enumerate(asymptotes, start=1):
        if not a.is_real:
            continue
        k = a.base_exponent
        xs = np.linspace(lo, hi, samples)
        xs[0], xs[-1] = lo, hi
        params = []
        if k % 2:
            params = [(x, math.copysign(abs(x) ** (1.0 / k), x)) for x in xs]
        else:
            pos = [x for x in xs if x >= 0]
            params = [(x, -x ** (1.0 / k)) for x in reversed(pos)]
            params += [(x, x ** (1.0 / k)) for x in pos]
        for x, t in params:
            coords = [complex(v).real for v in a(t)]
            coords[a.pivot] = x
            rows.append([f"asymptote_{idx}"] + [_fmt(v) for v in coords])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


# ===
# CLI
# ===

def _floats(text, count=None):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers, got {len(vals)}")
    return vals


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gasymptote",
        description="Infinity branches and generalized asymptotes of parametrized curves.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    ap.add_argument("components", nargs="+", help="component expressions in s (two or more)")
    ap.add_argument("--window", type=lambda t: _floats(t, 4), default=DEFAULT_WINDOW,
                    help="pole search rectangle xmin,xmax,ymin,ymax")
    ap.add_argument("--depth", type=int, default=None,
                    help="relative series order (default: blow-up order + max(5, tail+2))")
    ap.add_argument("--tail", type=int, default=3, help="negative-exponent branch terms")
    ap.add_argument("--tol", type=float, default=COEF_TOL, help="zero-coefficient tolerance")
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    ap.add_argument("--plot", metavar="PATH", default=None, help="write plot samples as CSV")
    ap.add_argument("--plot-range", type=lambda t: _floats(t, 2), default=(-10.0, 10.0),
                    help="x-range for asymptote samples")
    ap.add_argument("--radii", type=_floats, default=DEFAULT_RADII,
                    help="radii for the approach-distance table")
    ap.add_argument("--no-scan", action="store_true",
                    help="reject denominator factors that need a numeric root scan")
    return ap


_LIST_FLAGS = ("--window", "--plot-range", "--radii")


def _join_negative_lists(argv):
    # "--window -1,1,-1,1" would otherwise read the value as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_lists(argv))
    config = RunConfig(
        components=args.components, window=args.window, depth=args.depth,
        tail_terms=args.tail, tolerance=args.tol,
        output="json" if args.json else "text", plot_path=args.plot,
        plot_range=args.plot_range, radii=args.radii, scan_general=not args.no_scan)
    code, out = run(config)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
