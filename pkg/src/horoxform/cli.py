"""Command-line driver: transforms, inversions, verification suites and resolution sweeps."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NumericalFailure, PreconditionError
from .fields import ScalarField
from .horo import dual, forward, forward_field
from .inversion import BLConfig, MeanValueConfig, invert_bl, invert_mean_value
from .lorentz import HoroPoint, HPoint, unit_vector
from .oracles import corpus_field, dual_pair_fields, oracle_dual_pairs, oracle_hf_power
from .numerics.quadrature import DEFAULT_REL_TOL
from .potentials import q_potential
from .constants import lambda_n
from .suites import SCHEMA_VERSION, SUITES, run_suite

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3

FIELD_KINDS = ("power", "exp_bump", "compact_bump", "sampled", "dual_pair")
METHODS = ("forward", "dual", "invert-mean", "invert-bl", "verify")
MAX_DIM = 9


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment: dimension, field spec, method and grid/tolerance overrides."""

    n: int
    field: dict
    method: str | None = None
    overrides: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise PreconditionError("config must be a JSON object")
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise PreconditionError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or not 2 <= n <= MAX_DIM:
            raise PreconditionError(f"'n' must be an integer in [2, {MAX_DIM}]")
        spec = data.get("field")
        if not isinstance(spec, dict) or spec.get("kind") not in FIELD_KINDS:
            raise PreconditionError(f"'field.kind' must be one of {FIELD_KINDS}")
        spec = dict(spec)
        kind = spec["kind"]
        if kind == "power" and "beta" not in spec:
            raise PreconditionError("a power field needs 'beta'")
        if kind == "dual_pair" and "alpha" not in spec:
            raise PreconditionError("a dual_pair field needs 'alpha'")
        if kind == "sampled":
            if "path" not in spec:
                raise PreconditionError("a sampled field needs 'path'")
            path = Path(spec["path"])
            if base is not None and not path.is_absolute():
                path = base / path
            spec["path"] = str(path)
        method = data.get("method")
        if method is not None and method not in METHODS:
            raise PreconditionError(f"'method' must be one of {METHODS}")
        overrides = data.get("overrides", {})
        if not isinstance(overrides, dict):
            raise PreconditionError("'overrides' must be an object")
        return cls(n, spec, method, dict(overrides), version)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if not path.is_file():
            raise PreconditionError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data, path.parent)

    def scalar_field(self) -> ScalarField:
        params = {k: v for k, v in self.field.items() if k != "kind"}
        return corpus_field(self.field["kind"], self.n, **params)

    def get(self, key, default):
        return self.overrides.get(key, default)

    @property
    def rel_tol(self) -> float:
        return float(self.get("rel_tol", DEFAULT_REL_TOL))

    def heights(self, default=(1.0, 1.5, 2.0)):
        hs = [float(h) for h in self.get("heights", default)]
        if any(not h >= 1.0 for h in hs):
            raise PreconditionError("heights must be >= 1")
        return hs


def _rel(computed, reference):
    err = abs(computed - reference)
    return err / abs(reference) if reference != 0 else (0.0 if err == 0 else math.inf)


def _axis(n, h):
    return HPoint.on_axis(n, h)


def _forward_rows(cfg: ExperimentConfig):
    if cfg.field["kind"] == "dual_pair":
        raise PreconditionError("forward needs a field on H^n, not a light-cone kernel")
    f = cfg.scalar_field()
    omega = unit_vector(cfg.n, cfg.n - 1)
    rows = []
    for t in [float(v) for v in cfg.get("t", [-1.0, 0.0, 1.0])]:
        computed = forward(f, HoroPoint(t, omega), cfg.rel_tol)
        if cfg.field["kind"] == "power":
            reference = oracle_hf_power(float(cfg.field["beta"]), t, cfg.n)
        else:
            reference = forward(f, HoroPoint(t, omega), cfg.rel_tol, general=True)
        rows.append({"t": t, "computed": computed, "reference": reference, "rel_err": _rel(computed, reference)})
    return rows


def _dual_rows(cfg: ExperimentConfig):
    rows = []
    if cfg.field["kind"] == "dual_pair":
        alpha = float(cfg.field["alpha"])
        phi, _ = dual_pair_fields(alpha, cfg.n)
        for h in cfg.heights((1.2, 2.0, 4.0)):
            x = _axis(cfg.n, h)
            computed = dual(phi, x, rel_tol=cfg.rel_tol)
            reference = oracle_dual_pairs(alpha, x, "A")
            rows.append({"height": h, "computed": computed, "reference": reference,
                         "rel_err": _rel(computed, reference)})
        return rows
    f = cfg.scalar_field()
    hf = forward_field(f, cfg.rel_tol)
    for h in cfg.heights():
        x = _axis(cfg.n, h)
        computed = dual(hf, x, rel_tol=cfg.rel_tol)
        reference = q_potential(f, cfg.n - 1.0, x, cfg.rel_tol) / lambda_n(cfg.n)
        rows.append({"height": h, "computed": computed, "reference": reference,
                     "rel_err": _rel(computed, reference)})
    return rows


def _mean_config(cfg: ExperimentConfig, nodes=None) -> MeanValueConfig:
    base = MeanValueConfig()
    f_mu = cfg.scalar_field().decay_mu
    return MeanValueConfig(eta=float(cfg.get("eta", base.eta)), tau_max=float(cfg.get("tau_max", base.tau_max)),
                           nodes=int(nodes or cfg.get("nodes", base.nodes)), form=str(cfg.get("form", base.form)),
                           decay_mu=f_mu, rel_tol=cfg.rel_tol)


def _bl_config(cfg: ExperimentConfig, nodes=None) -> BLConfig:
    n = nodes or cfg.get("nodes", None)
    return BLConfig(radius_margin=float(cfg.get("radius_margin", 2.0)), nodes=int(n) if n else None,
                    rel_tol=cfg.rel_tol)


def _invert_rows(cfg: ExperimentConfig, method: str, nodes=None):
    f = cfg.scalar_field()
    hf = forward_field(f, cfg.rel_tol)
    rows = []
    for h in cfg.heights():
        x = _axis(cfg.n, h)
        if method == "invert-mean":
            computed = invert_mean_value(hf, x, _mean_config(cfg, nodes)).value
        else:
            computed = invert_bl(hf, x, _bl_config(cfg, nodes))
        reference = float(f(x))
        row = {"height": h, "computed": computed, "reference": reference, "rel_err": _rel(computed, reference)}
        rows.append(row if nodes is None else {"nodes": nodes, **row})
    return rows


def _table_rows(cfg: ExperimentConfig, method: str | None):
    method = method or cfg.method or "invert-mean"
    if method not in ("invert-mean", "invert-bl"):
        raise PreconditionError("table sweeps the grid of 'invert-mean' or 'invert-bl'")
    sweep = [int(v) for v in cfg.get("nodes_list", [16, 32, 64])]
    return [row for nodes in sweep for row in _invert_rows(cfg, method, nodes)]


def _plain(v):
    return v.item() if hasattr(v, "item") else v


def _emit(rows, fmt: str, out, meta: dict):
    rows = [{k: _plain(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        text = json.dumps({"schema_version": SCHEMA_VERSION, **meta,
                           "rows": [{k: (None if isinstance(v, float) and not math.isfinite(v) else v)
                                     for k, v in r.items()} for r in rows]}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        cols = ["schema_version"] + (list(rows[0].keys()) if rows else [])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({"schema_version": SCHEMA_VERSION,
                        **{k: repr(v) if isinstance(v, float) else v for k, v in r.items()}})
        text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="horoxform", description="Horospherical transforms on H^n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="ExperimentConfig JSON file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        return p

    common(sub.add_parser("forward", help="forward transform against its reference"))
    common(sub.add_parser("dual", help="dual transform against its reference"))
    common(sub.add_parser("invert-mean", help="mean-value inversion"))
    common(sub.add_parser("invert-bl", help="Beltrami-Laplace inversion"))
    v = common(sub.add_parser("verify", help="run a verification suite"), config_required=False)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    t = common(sub.add_parser("table", help="error against grid resolution"))
    t.add_argument("--method", choices=("invert-mean", "invert-bl"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    try:
        if args.command == "verify":
            report = run_suite(args.suite, seed=args.seed)
            text = report.to_json() + "\n" if args.format == "json" else report.to_csv()
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return 0 if report.passed else EXIT_VERIFY
        cfg = ExperimentConfig.load(args.config)
        if args.command == "forward":
            rows = _forward_rows(cfg)
        elif args.command == "dual":
            rows = _dual_rows(cfg)
        elif args.command in ("invert-mean", "invert-bl"):
            rows = _invert_rows(cfg, args.command)
        else:
            rows = _table_rows(cfg, args.method)
        _emit(rows, args.format, args.out, {"command": args.command, "n": cfg.n, "seed": args.seed})
        return 0
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PreconditionError, OSError, ValueError, TypeError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
