"""Command line interface.

A run is described by a JSON config::

    {
      "family": {"parameter": "t", "factors": [{"type": "henon", "a": "1", "p": "y^2 + t"}]},
      "point": ["0", "0"],
      "options": {"iters": 12, "guard": 64, "charts": ["0,0,8", "inf,0.125"]},
      "output": {"dir": "out", "format": "json"}
    }

Flags override the matching config fields.  The whole config is parsed and
the family validated before anything is computed.  Exit codes: 2 for config
or parse errors, 3 for a family that is not regular, 0 otherwise.  Errors are
written to stderr as one JSON object per line.
"""

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, NotRegular, ParseError
from .family import family_from_config, parse_point, random_point, validate_regular

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_REGULAR = 3

COMMANDS = ("height", "periodic", "fixed-points", "green-scan", "certify", "gap")

_TOP_KEYS = {"family", "point", "options", "output"}
_OUTPUT_KEYS = {"dir", "format"}
_OPTION_TYPES = {
    "iters": int,
    "guard": int,
    "cap": int,
    "window": int,
    "period": int,
    "bound": int,
    "charts": list,
    "resolution": int,
    "max_iter": int,
    "tolerance": float,
    "seed": int,
    "samples": int,
    "height_bound": int,
}
_DEFAULTS = {
    "iters": 12,
    "guard": None,
    "cap": 4096,
    "window": 3,
    "period": 1,
    "bound": 16,
    "charts": ["0,0,8", "inf,0.125"],
    "resolution": 200,
    "max_iter": 200,
    "tolerance": 1e-6,
    "seed": 0,
    "samples": 200,
    "height_bound": 4,
}


@dataclass
class RunConfig:
    family: object
    point: object = None
    options: dict = field(default_factory=dict)
    out_dir: str = None
    fmt: str = "json"

    def opt(self, key):
        return self.options.get(key, _DEFAULTS[key])


class UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    ap = _Parser(prog="henonheights", description="Heights and Green functions of regular plane automorphisms over Q(t).")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run config")
    ap.add_argument("--iters", type=int, help="orbit length N (green-scan: iteration budget)")
    ap.add_argument("--guard", type=int, help="degree guard for periodicity detection")
    ap.add_argument("--chart", action="append", help="cx,cy,halfwidth or inf,halfwidth; repeatable")
    ap.add_argument("--resolution", type=int, help="grid cells per side")
    ap.add_argument("--out", help="directory for output files")
    ap.add_argument("--format", choices=("json", "csv"), help="stdout format")
    return ap


def _check_option(key, value):
    kind = _OPTION_TYPES[key]
    if key == "guard" and value is None:
        return None
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"options.{key} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"options.{key} must be an integer")
        if value < 0:
            raise ConfigError(f"options.{key} must be non-negative")
        return value
    if not isinstance(value, list) or not all(isinstance(c, str) for c in value) or not value:
        raise ConfigError(f"options.{key} must be a nonempty list of strings")
    return list(value)


def load_config(raw, command=None, flags=None):
    """Parse a config dict (plus flag overrides) into a RunConfig."""
    from .green import parse_chart

    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "family" not in raw:
        raise ConfigError("config needs a 'family'")
    F = family_from_config(raw["family"])
    param = F.param
    point = None
    if "point" in raw:
        pt = raw["point"]
        if not (isinstance(pt, list) and len(pt) == 2 and all(isinstance(c, (str, int)) for c in pt)):
            raise ConfigError("point must be a list of two expression strings")
        try:
            point = parse_point(pt[0], pt[1], param)
        except ParseError as e:
            e.where = "point"
            raise
    opts = raw.get("options", {})
    if not isinstance(opts, dict):
        raise ConfigError("options must be an object")
    unknown = set(opts) - set(_OPTION_TYPES)
    if unknown:
        raise ConfigError(f"unknown option keys: {sorted(unknown)}")
    options = {k: _check_option(k, v) for k, v in opts.items()}
    out = raw.get("output", {})
    if not isinstance(out, dict):
        raise ConfigError("output must be an object")
    unknown = set(out) - _OUTPUT_KEYS
    if unknown:
        raise ConfigError(f"unknown output keys: {sorted(unknown)}")
    out_dir = out.get("dir")
    fmt = out.get("format", "json")
    flags = flags or {}
    if flags.get("iters") is not None:
        options["max_iter" if command == "green-scan" else "iters"] = _check_option("iters", flags["iters"])
    if flags.get("guard") is not None:
        options["guard"] = _check_option("guard", flags["guard"])
    if flags.get("chart"):
        options["charts"] = list(flags["chart"])
    if flags.get("resolution") is not None:
        options["resolution"] = _check_option("resolution", flags["resolution"])
    if flags.get("out") is not None:
        out_dir = flags["out"]
    if flags.get("format") is not None:
        fmt = flags["format"]
    if fmt not in ("json", "csv"):
        raise ConfigError("output.format must be 'json' or 'csv'")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError("output.dir must be a string")
    for c in options.get("charts", []):
        try:
            parse_chart(c)
        except ValueError as e:
            raise ConfigError(f"bad chart '{c}': {e}") from None
    if options.get("resolution") is not None and options["resolution"] < 3:
        raise ConfigError("resolution must be at least 3")
    if options.get("max_iter") is not None and options["max_iter"] < 1:
        raise ConfigError("max_iter must be at least 1")
    if command in ("height", "periodic", "green-scan") and point is None:
        raise ConfigError(f"command '{command}' needs a 'point'")
    return RunConfig(F, point, options, out_dir, fmt)


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot serialize {type(o).__name__}")


class Output:
    """Collects named artifacts; the first is the stdout payload for each format."""

    def __init__(self):
        self.files = {}
        self.stdout = {}

    def add(self, name, text, stdout_format=None):
        self.files[name] = text
        if stdout_format is not None:
            self.stdout[stdout_format] = text


def cmd_height(cfg):
    from .heights import height_report

    rep = height_report(cfg.family, cfg.point, cfg.opt("iters"), cfg.opt("cap"), cfg.opt("window"), cfg.opt("guard"))
    out = Output()
    out.add("height.json", _dumps(rep.to_dict()), "json")
    out.add("degrees.csv", rep.to_csv(), "csv")
    return out


def cmd_periodic(cfg):
    from .northcott import detect_periodic

    v = detect_periodic(cfg.family, cfg.point, cfg.opt("guard"))
    out = Output()
    out.add("periodic.json", _dumps(v.to_dict(cfg.family.param)), "json")
    out.add("periodic.csv", _csv([["status", "period", "reason", "guard", "steps"],
                                  [v.status, v.period if v.period is not None else "", v.reason or "", v.guard, v.steps]]),
            "csv")
    return out


def cmd_fixed_points(cfg):
    from .northcott import fixed_points

    res = fixed_points(cfg.family, cfg.opt("period"), cfg.opt("bound"))
    out = Output()
    d = res.to_dict(cfg.family.param)
    out.add("fixed_points.json", _dumps(d), "json")
    var = cfg.family.param
    rows = [["x", "y"]] + [list(p.to_strs(var)) for p in res.points]
    out.add("fixed_points.csv", _csv(rows), "csv")
    return out


def cmd_green_scan(cfg):
    from .green import EscapeParams, green_marked, parse_chart, stability_probe, total_mass

    charts = [parse_chart(c) for c in cfg.opt("charts")]
    params = EscapeParams(max_iter=cfg.opt("max_iter"))
    R = cfg.opt("resolution")
    grids = [green_marked(cfg.family, cfg.point, c, R, params) for c in charts]
    mass, err, reports = total_mass(grids)
    probe = stability_probe(cfg.family, cfg.point, charts, R, params, cfg.opt("tolerance"), grids=grids)
    out = Output()
    rows = [["chart", "center_re", "center_im", "half_width", "at_infinity", "mass", "errBound"]]
    for k, (c, r) in enumerate(zip(charts, reports)):
        rows.append([k, repr(c.center.real), repr(c.center.imag), repr(c.half_width), str(c.at_infinity).lower(),
                     repr(r.mass), repr(r.err_bound)])
    rows.append(["total", "", "", "", "", repr(mass), repr(err)])
    summary = {"mass": mass, "errBound": err, "stability": probe.to_dict()}
    out.add("green_scan.json", _dumps(summary), "json")
    out.add("mass.csv", _csv(rows), "csv")
    for k, g in enumerate(grids):
        out.add(f"grid_{k}.csv", g.to_csv())
        out.add(f"grid_{k}.json", g.to_json() + "\n")
    return out


def cmd_certify(cfg):
    from .northcott import nonisotriviality_certificate

    cert = nonisotriviality_certificate(cfg.family)
    out = Output()
    d = cert.to_dict()
    out.add("certify.json", _dumps(d), "json")
    out.add("certify.csv", _csv([["status", "method"], [cert.status, cert.method or ""]]), "csv")
    return out


def cmd_gap(cfg):
    from .heights import canonical_height, empirical_constant, kawaguchi_gap
    from .points import naive_height

    F = cfg.family
    rng = random.Random(cfg.opt("seed"))
    hb = cfg.opt("height_bound")
    pts = [cfg.point] if cfg.point is not None else []
    while len(pts) < cfg.opt("samples"):
        z = random_point(rng, max_degree=hb)
        if naive_height(z) <= hb:
            pts.append(z)
    rows = [["x", "y", "h", "gap", "h_hat"]]
    gaps = []
    lower_ok = []
    data = []
    for z in pts:
        g = kawaguchi_gap(F, z)
        gaps.append(g)
        data.append((z, g, canonical_height(F, z, cfg.opt("iters"), cfg.opt("cap"), cfg.opt("window"))))
    C = empirical_constant(gaps)
    for z, g, hh in data:
        h = naive_height(z)
        lower_ok.append(h <= hh.upper + C)
        xs, ys = z.to_strs(F.param)
        rows.append([xs, ys, h, str(g), str(hh.value)])
    summary = {
        "samples": len(pts),
        "seed": cfg.opt("seed"),
        "C_emp": str(C),
        "min_gap": str(min(gaps)),
        "height_bounded_by_canonical": all(lower_ok),
        "violations": sum(1 for ok in lower_ok if not ok),
    }
    out = Output()
    out.add("gap.json", _dumps(summary), "json")
    out.add("gap.csv", _csv(rows), "csv")
    return out


_DISPATCH = {
    "height": cmd_height,
    "periodic": cmd_periodic,
    "fixed-points": cmd_fixed_points,
    "green-scan": cmd_green_scan,
    "certify": cmd_certify,
    "gap": cmd_gap,
}


def _csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _error(stream, kind, message, **extra):
    rec = {"error": kind, "message": message}
    rec.update({k: v for k, v in extra.items() if v is not None})
    stream.write(json.dumps(rec, sort_keys=True) + "\n")


def run(argv=None, stdout=None, stderr=None):
    """Entry point returning the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read config: {e.strerror}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            _error(stderr, "ConfigError", f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno)
            return EXIT_CONFIG
        cfg = load_config(raw, args.command, vars(args))
        validate_regular(cfg.family)
    except ParseError as e:
        _error(stderr, "ParseError", e.message, where=getattr(e, "where", None), text=e.text, position=e.position)
        return EXIT_CONFIG
    except UsageError as e:
        _error(stderr, "UsageError", str(e))
        return EXIT_CONFIG
    except ConfigError as e:
        _error(stderr, "ConfigError", str(e))
        return EXIT_CONFIG
    except NotRegular as e:
        _error(stderr, "NotRegular", str(e), condition=e.condition)
        return EXIT_NOT_REGULAR
    out = _DISPATCH[args.command](cfg)
    if cfg.out_dir is not None:
        os.makedirs(cfg.out_dir, exist_ok=True)
        for name in sorted(out.files):
            with open(os.path.join(cfg.out_dir, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(out.files[name])
    stdout.write(out.stdout[cfg.fmt])
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
