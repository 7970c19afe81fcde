"""Command line front end: ``bmetric describe|verify|sweep --config <path>``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from .acb import AcbManifold, cone_of, s1_extension_of
from .classify import decompose_f, f_tensor_at, lee_forms_at, nabla_phi_square_norm_at, phi_basis_at
from .curvature import Tolerances, curvature_table_at, verify_theorems
from .expr import ExprError, parse_expr
from .surface import gaussian_curvature_at, make_conformal_surface, make_flat_surface, nabla_J_square_norm_at
from .tensor import MetricChart

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CSV_COLUMNS = [
    "t", "u", "v", "tau", "tau_star", "tau_star2", "k12", "k13", "k23",
    "norm_nabla_phi", "class_label", "residual",
]


class ConfigError(ValueError):
    """Invalid configuration; ``path`` is a JSON pointer to the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


def load_schema(name: str = "config") -> dict:
    text = resources.files("bmetric").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass
class SweepSpec:
    t_range: tuple
    count: int
    u: float = 0.0
    v: float = 0.0

    def points(self) -> list:
        return [(float(t), self.u, self.v) for t in np.linspace(*self.t_range, self.count)]


@dataclass
class RunConfig:
    manifold: str
    base: dict
    points: list = field(default_factory=list)
    seed: tuple = (1.0, 0.0)
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: str = "json"
    sweep: Optional[SweepSpec] = None
    corrupt_metric: Optional[dict] = None

    def build(self) -> AcbManifold:
        if self.base["kind"] == "flat":
            surface = make_flat_surface()
        else:
            surface = make_conformal_surface(self.base["a"], self.base["b"])
        m = cone_of(surface) if self.manifold == "cone" else s1_extension_of(surface)
        if self.corrupt_metric:
            m = _corrupted(m, float(self.corrupt_metric["g_tt_scale"]))
        return m


def _corrupted(m: AcbManifold, scale: float) -> AcbManifold:
    inner = m.metric.components

    def components(p):
        g = [list(row) for row in inner(p)]
        g[0][0] = g[0][0] * scale
        return g

    chart = MetricChart(3, components, m.metric.domain, name=f"corrupted({m.metric.name})")
    return dataclasses.replace(m, metric=chart)


def _pointer(parts) -> str:
    return "".join(f"/{p}" for p in parts)


def parse_config(text: str) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, _pointer(err.absolute_path))

    base = dict(raw["base"])
    if base["kind"] == "conformal":
        for key in ("a", "b"):
            try:
                parse_expr(base[key])
            except ExprError as exc:
                raise ConfigError(f"expression error: {exc}", f"/base/{key}") from exc
    points = [tuple(float(x) for x in p) for p in raw.get("points", [])]
    if raw["manifold"] == "cone":
        for i, p in enumerate(points):
            if not p[0] > 0:
                raise ConfigError(f"cone points need t > 0, got t = {p[0]}", f"/points/{i}")
    tol = raw.get("tolerances", {})
    tolerances = Tolerances(
        second_order=tol.get("second_order", 1e-9),
        third_order=tol.get("third_order", 1e-4),
        class_=tol.get("class", 1e-8),
    )
    sweep = None
    if "sweep" in raw:
        s = raw["sweep"]
        sweep = SweepSpec(tuple(s["t_range"]), s["count"], s.get("u", 0.0), s.get("v", 0.0))
        if raw["manifold"] == "cone" and not min(sweep.t_range) > 0:
            raise ConfigError("cone sweeps need t > 0", "/sweep/t_range")
    return RunConfig(
        manifold=raw["manifold"],
        base=base,
        points=points,
        seed=tuple(raw.get("seed", (1.0, 0.0))),
        tolerances=tolerances,
        output=raw.get("output", "json"),
        sweep=sweep,
        corrupt_metric=raw.get("corrupt_metric"),
    )


def _clean(x):
    """JSON-safe copy: arrays to lists, non-finite floats to strings."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def describe_point(m: AcbManifold, p, config: RunConfig) -> dict:
    basis = phi_basis_at(m, p, config.seed)
    f = f_tensor_at(m, p, basis).data
    lee = lee_forms_at(m, p, basis)
    dec = decompose_f(f, lee, config.tolerances.class_)
    table = curvature_table_at(m, p, basis)
    q = m.base_point(p)
    return {
        "point": list(p),
        "g": m.g(p),
        "phi_basis": basis.frame,
        "F": f,
        "lee": {"theta": lee.theta, "theta_star": lee.theta_star, "omega": lee.omega},
        "class_label": dec.label_text,
        "class_residual": dec.residual_norm,
        "curvature": {
            "R": table.r_phi_basis,
            "rho": table.rho,
            "rho_star": table.rho_star,
            "tau": table.tau,
            "tau_star": table.tau_star,
            "tau_star2": table.tau_star2,
            "k12": table.k12,
            "k13": table.k13,
            "k23": table.k23,
        },
        "norm_nabla_phi": nabla_phi_square_norm_at(m, p),
        "norm_nabla_J": nabla_J_square_norm_at(m.base, q),
        "k_base": gaussian_curvature_at(m.base, q),
    }


def _records(config: RunConfig, points) -> list:
    m = config.build()
    out = []
    for p in points:
        try:
            out.append(describe_point(m, p, config))
        except (ArithmeticError, ValueError) as exc:
            out.append({"point": list(p), "error": f"{type(exc).__name__}: {exc}"})
    return out


def _header(config: RunConfig, command: str) -> dict:
    return {"command": command, "manifold": config.manifold, "base": config.base}


def cmd_describe(config: RunConfig) -> dict:
    return {**_header(config, "describe"), "records": _clean(_records(config, config.points))}


def cmd_verify(config: RunConfig) -> tuple:
    """``(exit_code, report_document)``."""
    report = verify_theorems(config.build(), config.points, config.tolerances, config.seed)
    doc = {**_header(config, "verify"), **_clean(report.to_dict())}
    return (EXIT_OK if report.passed else EXIT_FAILED), doc


def _row(record: dict) -> dict:
    t, u, v = record["point"]
    if "error" in record:
        return {"t": t, "u": u, "v": v, "class_label": "ERROR", "residual": record["error"]}
    c = record["curvature"]
    return {
        "t": t, "u": u, "v": v,
        "tau": c["tau"], "tau_star": c["tau_star"], "tau_star2": c["tau_star2"],
        "k12": c["k12"], "k13": c["k13"], "k23": c["k23"],
        "norm_nabla_phi": record["norm_nabla_phi"],
        "class_label": record["class_label"],
        "residual": record["class_residual"],
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x) if not math.isfinite(x) else format(x, ".17g")
    return str(x)


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row[k]) if k in row else "" for k in CSV_COLUMNS})
    return buf.getvalue()


def cmd_sweep(config: RunConfig, sweep: Optional[SweepSpec] = None) -> list:
    sweep = sweep or config.sweep
    if sweep is None:
        raise ConfigError("sweep needs a 'sweep' block or --t-range/--count", "/sweep")
    if sweep.count < 2:
        raise ConfigError("count must be at least 2", "/sweep/count")
    if config.manifold == "cone" and not min(sweep.t_range) > 0:
        raise ConfigError("cone sweeps need t > 0", "/sweep/t_range")
    return [_row(r) for r in _records(config, sweep.points())]


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmetric", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("describe", "tabulate F, Lee forms, class and curvature at each point"),
        ("verify", "check the closed-form theorems at each point"),
        ("sweep", "tabulate scalar invariants over a grid in t"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, required=True)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--format", choices=["json", "csv"], default=None)
        if name == "sweep":
            p.add_argument("--t-range", type=float, nargs=2, default=None, metavar=("T0", "T1"))
            p.add_argument("--count", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        config = parse_config(args.config.read_text())
    except OSError as exc:
        print(f"bmetric: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"bmetric: config error at {exc}", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.format or config.output

    try:
        if args.command == "verify":
            if fmt == "csv":
                raise ConfigError("verify reports are JSON only", "/output")
            code, doc = cmd_verify(config)
            _emit(json.dumps(doc, indent=2) + "\n", args.out)
            if code != EXIT_OK:
                names = sorted({c["name"] for c in doc["checks"] if c["gating"] and not c["passed"]})
                for name in names:
                    print(f"bmetric: FAILED {name}", file=sys.stderr)
                for err in doc["errors"]:
                    print(f"bmetric: ERROR at {err['point']}: {err['error']}", file=sys.stderr)
            return code
        if args.command == "describe":
            doc = cmd_describe(config)
            text = rows_to_csv([_row(r) for r in doc["records"]]) if fmt == "csv" else json.dumps(doc, indent=2) + "\n"
            _emit(text, args.out)
            return EXIT_OK
        sweep = config.sweep
        if args.t_range is not None or args.count is not None:
            base = sweep or SweepSpec((0.0, 1.0), 2)
            sweep = dataclasses.replace(
                base,
                t_range=tuple(args.t_range) if args.t_range is not None else base.t_range,
                count=args.count if args.count is not None else base.count,
            )
        rows = cmd_sweep(config, sweep)
        if fmt == "json":
            records = [{"point": [r["t"], r["u"], r["v"]], **r} for r in rows]
            doc = {**_header(config, "sweep"), "records": _clean(records)}
            _emit(json.dumps(doc, indent=2) + "\n", args.out)
        else:
            _emit(rows_to_csv(rows), args.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"bmetric: config error at {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
