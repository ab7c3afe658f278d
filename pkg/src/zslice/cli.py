"""Command-line front end: ``zslice {lambda-map, propagator, invariants, oracle}``.

Exit codes are 0 on success, 1 when a computed invariant fails and 2 on
invalid input (nothing is written in that case). Flags override values from
``--config``, a single JSON object keyed by flag name (``"cutoff"``,
``"point"``, ...). Output files contain no wall-clock data unless
``--timing`` is given, so reruns with the same configuration are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np
import scipy

from . import __version__
from .dispersion import BOUNDARY_ATOL, DomainError, MassParam, lambda_grid
from .propagator import METHODS, PreconditionError, QuadratureSpec, SpacetimePoint, relative_deviation
from .suites import SUITES
from .transfer_oracle import GENERATOR_DOC, LatticeSpec4D, RegulatorError, SizeCapError, compare_slicings

SCHEMA = "zslice.result/1"
EXIT_OK, EXIT_NUMERICAL, EXIT_INVALID = 0, 1, 2

DEFAULT_POINTS = ((0, 0, 0, 0), (0.5, 0, 0.5, 0.5), (1, 0, 0, 0), (0, 0, 1, 0), (0.3, 0.3, 0.3, 0.8))
PROPAGATOR_TOLERANCE = 0.02
ORACLE_TOLERANCE = 1e-8

DEFAULTS = {
    "lambda-map": {"m": 1.0, "eps": 0.0, "kx": "-3:3:61", "ky": "0", "kt": "-3:3:61", "format": "csv"},
    "propagator": {
        "m": 1.0, "eps": 0.1, "cutoff": 6.0, "nodes": 48, "nodes_4d": 32,
        "point": [list(p) for p in DEFAULT_POINTS], "method": "all", "format": "json",
    },
    "invariants": {"suite": "all", "seed": 0, "lattice": "3x2x2x3", "delta": 0.1, "format": "json"},
    "oracle": {"lattice": "3x2x2x3", "delta": 0.1, "m": 1.0, "seed": 42, "count": 20, "format": "json"},
}


class InputError(ValueError):
    pass


INPUT_ERRORS = (InputError, DomainError, PreconditionError, RegulatorError, SizeCapError, ValueError)


@dataclass
class ResultRecord:
    command: str
    inputs: dict
    outputs: list
    seed: int | None = None
    generator: str | None = None
    versions: dict = field(default_factory=dict)
    wall_time: float | None = None
    schema: str = SCHEMA

    def to_json(self) -> str:
        d = asdict(self)
        if d["wall_time"] is None:
            del d["wall_time"]
        return json.dumps(d, indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ResultRecord:
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise InputError(f"unsupported schema {d.get('schema')!r}")
        return cls(**d)


def versions() -> dict:
    return {"zslice": __version__, "numpy": np.__version__, "scipy": scipy.__version__, "python": platform.python_version()}


def cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def uncplx(d) -> complex:
    return complex(d["re"], d["im"])


# parsing helpers -----------------------------------------------------------

def parse_range(text) -> np.ndarray:
    """``"lo:hi:n"`` gives ``n`` evenly spaced values; a single number gives one."""
    if isinstance(text, (int, float)):
        return np.array([float(text)])
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1 or not (np.isfinite(lo) and np.isfinite(hi)):
                raise InputError(f"invalid range {text!r}")
            return np.linspace(lo, hi, n)
    except ValueError as exc:
        raise InputError(f"invalid range {text!r}: {exc}") from None
    raise InputError(f"range must be 'lo:hi:n' or a number, got {text!r}")


def parse_point(p) -> SpacetimePoint:
    if isinstance(p, str):
        p = p.split(",")
    try:
        vals = [float(v) for v in p]
    except (TypeError, ValueError):
        raise InputError(f"point must be four numbers x,y,z,t, got {p!r}") from None
    if len(vals) != 4:
        raise InputError(f"point must have four coordinates x,y,z,t, got {p!r}")
    return SpacetimePoint(*vals)


def parse_lattice(text) -> tuple[int, int, int, int]:
    if isinstance(text, (list, tuple)):
        dims = text
    else:
        dims = str(text).lower().split("x")
    try:
        dims = tuple(int(d) for d in dims)
    except ValueError:
        raise InputError(f"lattice must look like 3x2x2x3, got {text!r}") from None
    if len(dims) != 4:
        raise InputError(f"lattice needs four dimensions (t, x, y, z), got {text!r}")
    return dims


# commands ------------------------------------------------------------------

def cmd_lambda_map(cfg: dict):
    m = MassParam(float(cfg["m"]), float(cfg["eps"]))
    kx, ky, kt = parse_range(cfg["kx"]), parse_range(cfg["ky"]), parse_range(cfg["kt"])
    gx, gy, gt = (a.ravel() for a in np.meshgrid(kx, ky, kt, indexing="ij"))
    lam = lambda_grid(gx, gy, gt, m)
    gap = gt * gt - gx * gx - gy * gy - m.m**2
    region = np.where(np.abs(gap) <= BOUNDARY_ATOL, "Boundary", np.where(gap > 0, "P1", "P2"))
    rows = [
        {"kx": a, "ky": b, "kt": c, "re_lambda": lv.real, "im_lambda": lv.imag, "region": str(r), "accuracy": "exact"}
        for a, b, c, lv, r in zip(gx.tolist(), gy.tolist(), gt.tolist(), lam.tolist(), region.tolist())
    ]
    record = ResultRecord("lambda-map", _echo(cfg), rows)
    return record, EXIT_OK


def cmd_propagator(cfg: dict):
    m = MassParam(float(cfg["m"]), float(cfg["eps"]))
    if not m.eps > 0:
        raise PreconditionError("the propagator needs a positive i-eps regulator (eps > 0)")
    method = cfg["method"]
    if method not in (*METHODS, "all"):
        raise InputError(f"method must be one of zform, tform, fourd, all; got {method!r}")
    points = cfg["point"]
    if points and not isinstance(points[0], (list, tuple, str)):
        points = [points]
    points = [parse_point(p) for p in points]
    q3 = QuadratureSpec(float(cfg["cutoff"]), int(cfg["nodes"]))
    q4 = QuadratureSpec(float(cfg["cutoff"]), int(cfg["nodes_4d"]))
    names = list(METHODS) if method == "all" else [method]
    outputs, status = [], EXIT_OK
    for p in points:
        vals = {n: METHODS[n](p, m, q4 if n == "fourd" else q3) for n in names}
        entry = {
            "point": list(p.as_tuple()),
            "values": {n: {"value": cplx(v.value), "error": v.error} for n, v in vals.items()},
        }
        if len(names) > 1:
            devs = {}
            for a, b in combinations(names, 2):
                va, vb = vals[a], vals[b]
                dev = relative_deviation(va.value, vb.value)
                scale = max(abs(va.value), abs(vb.value)) or 1.0
                ok = dev <= PROPAGATOR_TOLERANCE
                devs[f"{a}-{b}"] = {
                    "relative_deviation": dev,
                    "error": (va.error + vb.error) / scale,
                    "within_tolerance": ok,
                }
                if not ok:
                    status = EXIT_NUMERICAL
            entry["deviations"] = devs
            entry["tolerance"] = PROPAGATOR_TOLERANCE
        outputs.append(entry)
    return ResultRecord("propagator", _echo(cfg), outputs), status


def cmd_invariants(cfg: dict):
    suite = cfg["suite"]
    if suite not in (*SUITES, "all"):
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join([*SUITES, 'all'])}")
    seed = _seed(cfg)
    lattice = parse_lattice(cfg["lattice"])
    delta = float(cfg["delta"])
    LatticeSpec4D(*lattice, delta=delta)  # validate before running anything
    names = list(SUITES) if suite == "all" else [suite]
    outputs = []
    for name in names:
        if name == "oracle":
            checks = SUITES[name](lattice=lattice, delta=delta, seed=seed)
        elif name == "algebra":
            checks = SUITES[name]()
        else:
            checks = SUITES[name](seed=seed)
        for c in checks:
            outputs.append({"suite": name, **c.as_dict(), "accuracy": "exact"})
    status = EXIT_OK if all(o["passed"] for o in outputs) else EXIT_NUMERICAL
    gen = GENERATOR_DOC if "oracle" in names else None
    return ResultRecord("invariants", _echo(cfg), outputs, seed=seed, generator=gen), status


def cmd_oracle(cfg: dict):
    seed = _seed(cfg)
    spec = LatticeSpec4D(*parse_lattice(cfg["lattice"]), m=float(cfg["m"]), delta=float(cfg["delta"]))
    count = int(cfg["count"])
    if count < 1:
        raise InputError(f"count must be positive, got {count}")
    rows = []
    for r in compare_slicings(spec, seed, count):
        dev = r.max_deviation
        rows.append({
            "config": r.index,
            "direct_re": r.direct.real, "direct_im": r.direct.imag,
            "t_sliced_re": r.t_sliced.real, "t_sliced_im": r.t_sliced.imag,
            "z_sliced_re": r.z_sliced.real, "z_sliced_im": r.z_sliced.imag,
            "dev_direct_t": relative_deviation(r.direct, r.t_sliced),
            "dev_direct_z": relative_deviation(r.direct, r.z_sliced),
            "dev_t_z": relative_deviation(r.t_sliced, r.z_sliced),
            "max_deviation": dev,
            "error": dev,
        })
    status = EXIT_OK if all(r["max_deviation"] <= ORACLE_TOLERANCE for r in rows) else EXIT_NUMERICAL
    return ResultRecord("oracle", _echo(cfg), rows, seed=seed, generator=GENERATOR_DOC), status


COMMANDS = {
    "lambda-map": cmd_lambda_map,
    "propagator": cmd_propagator,
    "invariants": cmd_invariants,
    "oracle": cmd_oracle,
}


def _seed(cfg) -> int:
    try:
        seed = int(cfg["seed"])
    except (TypeError, ValueError):
        raise InputError(f"seed must be an integer, got {cfg['seed']!r}") from None
    if not 0 <= seed < 2**64:
        raise InputError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def _echo(cfg: dict) -> dict:
    return {k: v for k, v in sorted(cfg.items()) if k not in ("out", "config", "timing")}


# output --------------------------------------------------------------------

def render(record: ResultRecord, fmt: str) -> str:
    if fmt == "json":
        return record.to_json()
    rows = record.outputs
    if not rows or not all(isinstance(r, dict) for r in rows):
        raise InputError(f"{record.command} output has no tabular form; use --format json")
    buf = io.StringIO()
    flat = [_flatten(r) for r in rows]
    w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    w.writeheader()
    for r in flat:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = " ".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        else:
            out[key] = v
    return out


def _check_writable(path: str):
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent):
        raise InputError(f"output directory {parent} does not exist")
    if not os.access(parent, os.W_OK) or (os.path.exists(path) and not os.access(path, os.W_OK)):
        raise InputError(f"cannot write output {path}")


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


# argument handling ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zslice", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"zslice {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file of defaults; flags override it")
        sp.add_argument("--out", help="output path (stdout if omitted)")
        sp.add_argument("--format", choices=["csv", "json"])
        sp.add_argument("--timing", action="store_true", default=None, help="record wall time (output no longer reproducible)")

    sp = sub.add_parser("lambda-map", help="grid of lambda(kx, ky, kt) with region labels")
    sp.add_argument("--m", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--kx", help="lo:hi:n or a single value")
    sp.add_argument("--ky", help="lo:hi:n or a single value")
    sp.add_argument("--kt", help="lo:hi:n or a single value")
    common(sp)

    sp = sub.add_parser("propagator", help="Feynman propagator at spacetime points")
    sp.add_argument("--m", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--cutoff", type=float)
    sp.add_argument("--nodes", type=int, help="nodes per axis for the 3D mode sums")
    sp.add_argument("--nodes-4d", dest="nodes_4d", type=int, help="nodes per axis for the 4D integral")
    sp.add_argument("--point", action="append", help="x,y,z,t (repeatable)")
    sp.add_argument("--method", choices=[*METHODS, "all"])
    common(sp)

    sp = sub.add_parser("invariants", help="run invariant suites")
    sp.add_argument("--suite", help=f"one of {', '.join([*SUITES, 'all'])}")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--lattice", help="lattice for the oracle suite, e.g. 3x2x2x3")
    sp.add_argument("--delta", type=float)
    common(sp)

    sp = sub.add_parser("oracle", help="lattice path integral: direct vs t-sliced vs z-sliced")
    sp.add_argument("--lattice", help="n_t x n_x x n_y x n_z, e.g. 3x2x2x3")
    sp.add_argument("--delta", type=float)
    sp.add_argument("--m", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--count", type=int)
    common(sp)
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS[args.command])
    cfg["out"], cfg["timing"] = None, False
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise InputError("config must be a JSON object")
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise InputError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        cfg.update(loaded)
    for k, v in vars(args).items():
        if k in ("command", "config") or v is None:
            continue
        cfg[k] = v
    if cfg["format"] not in ("csv", "json"):
        raise InputError(f"format must be csv or json, got {cfg['format']!r}")
    return cfg


def _glue_dash_values(argv: list[str]) -> list[str]:
    """Let ranges and points start with a minus sign: ``--kx -3:3:61`` -> ``--kx=-3:3:61``."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


VALUE_FLAGS = {"--kx", "--ky", "--kt", "--point", "--m", "--eps", "--delta", "--cutoff"}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_dash_values(argv))
    try:
        cfg = resolve_config(args)
        if cfg["out"]:
            _check_writable(cfg["out"])
        start = time.perf_counter()
        record, status = COMMANDS[args.command](cfg)
        record.versions = versions()
        if cfg["timing"]:
            record.wall_time = time.perf_counter() - start
        text = render(record, cfg["format"])
    except np.linalg.LinAlgError as exc:
        print(f"zslice {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except INPUT_ERRORS as exc:
        print(f"zslice {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _write(cfg["out"], text)
    if status != EXIT_OK:
        print(f"zslice {args.command}: numerical check failed (see output)", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
