"""Command-line experiment harness.

Seven subcommands expose the library's main computations and write their
results as CSV with a reproducibility header.  Outputs are deterministic:
the same invocation with the same seed produces byte-identical files.

Exit codes: 0 on success, 1 for an unknown subcommand, 2 for validation
errors (bad flags, malformed config or input files, constraint
violations), 3 for numerical-quality failures (under-resolved quadrature,
degenerate ground sector).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import DegenerateGround, QstError, QuadratureUnderResolved
from .field import gaussian_tail_fit, locality_violation_profile
from .kernels import EventPointList, KernelSpec, kernel_density, transplanckian_damping
from .localization import euclidean_length_spectrum, sample_uncertainty_floor
from .oscillator import build_coordinates, weyl_ground_residual
from .pair import build_pair, pair_distance_spectrum
from .sigma import invariant_pfaffian, invariant_qq, is_base_point, random_sigma_point

COMMANDS = ("sigma-check", "spectrum", "distance", "uncertainty",
            "weyl-check", "kernel", "commutator")

_DEFAULTS = {
    "sigma-check": {"samples": 500, "seed": 0, "tol": 1e-10},
    "spectrum": {"dim": 32, "k": 5, "method": "factored"},
    "distance": {"dim": 6, "k": 5, "method": "normal_mode"},
    "uncertainty": {"dim": 24, "samples": 10000, "seed": 7},
    "weyl-check": {"dim": 64, "seed": None},
    "kernel": {"n": 2, "kmax": 8.0, "points": None},
    "commutator": {"mass": 0.0, "kmax": 8.0, "t_offset": 0.5},
}

#: Dimension ladder scanned by weyl-check, capped at the --dim flag.
WEYL_LADDER = (8, 16, 32, 64, 128)


class _CliValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 handled by main(), not argparse
        raise _CliValidationError(message)


@dataclass
class ExperimentConfig:
    """Fully resolved parameters of one CLI invocation."""

    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise _CliValidationError(f"unknown subcommand {self.command!r}")
        merged = dict(_DEFAULTS[self.command])
        for key, value in self.params.items():
            if key not in merged:
                raise _CliValidationError(
                    f"parameter {key!r} is not valid for {self.command}")
            if value is not None:
                merged[key] = value
        self.params = merged


def _build_parser() -> _Parser:
    parser = _Parser(prog="qst", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def add(name, *flags):
        p = sub.add_parser(name, add_help=True)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default=None, help="output CSV path")
        for flag in flags:
            if flag == "--dim":
                p.add_argument(flag, type=int, default=None)
            elif flag in ("--k", "--samples", "--seed", "--n"):
                p.add_argument(flag, type=int, default=None)
            elif flag in ("--tol", "--mass", "--kmax", "--t-offset"):
                p.add_argument(flag, type=float, default=None)
            elif flag == "--method":
                p.add_argument(flag, default=None)
            elif flag == "--points":
                p.add_argument(flag, default=None, help="CSV of flattened 4-vectors")
        return p

    add("sigma-check", "--samples", "--seed", "--tol")
    add("spectrum", "--dim", "--k", "--method")
    add("distance", "--dim", "--k", "--method")
    add("uncertainty", "--dim", "--samples", "--seed")
    add("weyl-check", "--dim", "--seed")
    add("kernel", "--n", "--kmax", "--points")
    add("commutator", "--mass", "--kmax", "--t-offset")
    return parser


def _read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _CliValidationError(
                        f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise _CliValidationError(f"cannot read config {path}: {exc}") from exc
    return out


def _coerce(command: str, key: str, raw: str):
    default = _DEFAULTS[command].get(key)
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def _resolve_out(config: ExperimentConfig) -> str:
    out = config.out or f"{config.command}.csv"
    base = os.environ.get("QST_OUT_DIR", "")
    if base and not os.path.isabs(out):
        out = os.path.join(base, out)
    return out


def _write_csv(path: str, header_meta: dict, columns: list[str],
               rows: list[list], trailing: list[str] = ()) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    seed = header_meta.get("seed")
    dim = header_meta.get("dim")
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(f"# qst-toolkit v{__version__} "
                     f"seed={0 if seed is None else seed} "
                     f"dim={0 if dim is None else dim}\n")
            fh.write("# columns: " + ",".join(columns) + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerows(rows)
            for line in trailing:
                fh.write(line + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(value: float) -> str:
    return repr(float(value))


def _run_sigma_check(params):
    rng = np.random.default_rng(params["seed"])
    rows = []
    for _ in range(params["samples"]):
        pt = random_sigma_point(rng)
        qq = invariant_qq(pt)
        pf = invariant_pfaffian(pt)
        if abs(qq) > params["tol"] or abs(abs(pf) - 1.0) > params["tol"]:
            raise QstError(
                f"invariant drift beyond tol: qq={qq:.3e}, pf={pf:.12f}")
        rows.append([*map(_fmt, pt.e), *map(_fmt, pt.m), _fmt(qq), _fmt(pf),
                     int(is_base_point(pt))])
    columns = ["e1", "e2", "e3", "m1", "m2", "m3", "qq", "pfaffian", "is_base"]
    return {"seed": params["seed"]}, columns, rows, []


def _run_spectrum(params):
    coords = build_coordinates(params["dim"])
    result = euclidean_length_spectrum(coords, params["k"], method=params["method"])
    rows = [[i, _fmt(v), f, m] for i, v, f, m in result.csv_rows()]
    return ({"dim": params["dim"]}, ["index", "eigenvalue", "edge_flag", "method"],
            rows, [f"# multiplicities={','.join(map(str, result.multiplicities))}"])


def _run_distance(params):
    pair = build_pair(params["dim"])
    result = pair_distance_spectrum(pair, params["k"], method=params["method"])
    rows = [[i, _fmt(v), f, m] for i, v, f, m in result.csv_rows()]
    return ({"dim": params["dim"]}, ["index", "eigenvalue", "edge_flag", "method"],
            rows, [f"# multiplicities={','.join(map(str, result.multiplicities))}"])


def _run_uncertainty(params):
    coords = build_coordinates(params["dim"])
    floor = sample_uncertainty_floor(coords, params["samples"], params["seed"])
    rows = [[*map(_fmt, rep.csv_row()[:-1]), rep.csv_row()[-1]]
            for rep in (floor.ground, floor.argmin_ts, floor.argmin_ss)]
    trailing = [f"# min_prod_ts={_fmt(floor.min_prod_ts)} "
                f"min_prod_ss={_fmt(floor.min_prod_ss)} "
                f"min_sum_sq={_fmt(floor.min_sum_sq)} "
                f"samples={floor.n_samples}"]
    columns = ["dq0", "dq1", "dq2", "dq3", "prod_ts", "prod_ss", "edge_flag"]
    return ({"seed": params["seed"], "dim": params["dim"]}, columns, rows, trailing)


def _run_weyl_check(params):
    if params["seed"] is None:
        alpha = np.array([0.3, -0.2, 0.5, 0.1])
        beta = np.array([-0.4, 0.6, 0.2, -0.3])
    else:
        rng = np.random.default_rng(params["seed"])
        alpha = rng.uniform(-0.5, 0.5, size=4)
        beta = rng.uniform(-0.5, 0.5, size=4)
    dims = [d for d in WEYL_LADDER if d <= params["dim"]]
    if not dims:
        raise _CliValidationError(
            f"--dim {params['dim']} is below the smallest ladder rung {WEYL_LADDER[0]}")
    rows = [[d, _fmt(weyl_ground_residual(d, alpha, beta))] for d in dims]
    meta = {"dim": params["dim"], "seed": params["seed"] or 0}
    return meta, ["dim", "residual"], rows, [
        "# alpha=" + ",".join(map(_fmt, alpha)),
        "# beta=" + ",".join(map(_fmt, beta)),
    ]


def _run_kernel(params):
    spec = KernelSpec(n_points=params["n"])
    if params["points"]:
        rows = []
        try:
            with open(params["points"], encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    vals = [float(tok) for tok in line.split(",")]
                    if len(vals) != 4 * spec.n_points:
                        raise _CliValidationError(
                            f"{params['points']}:{lineno}: expected "
                            f"{4 * spec.n_points} values, got {len(vals)}")
                    pts = EventPointList(np.array(vals).reshape(spec.n_points, 4))
                    rows.append([*map(_fmt, vals), _fmt(kernel_density(spec, pts))])
        except OSError as exc:
            raise _CliValidationError(f"cannot read points file: {exc}") from exc
        columns = [f"x{j}_{mu}" for j in range(1, spec.n_points + 1)
                   for mu in range(4)] + ["density"]
        return {}, columns, rows, []
    kappas = np.linspace(0.0, params["kmax"], 65)
    rows = [[_fmt(kp), _fmt(transplanckian_damping(spec, kp))] for kp in kappas]
    return {}, ["kappa", "envelope"], rows, []


def _run_commutator(params):
    curve = locality_violation_profile(mass=params["mass"], kmax=params["kmax"],
                                       t_offset=params["t_offset"])
    amplitude, decay, r2 = gaussian_tail_fit(curve)
    rows = [[_fmt(r), _fmt(re), _fmt(im), _fmt(ab)]
            for r, re, im, ab in curve.csv_rows()]
    trailing = [f"# amplitude={_fmt(amplitude)} decay={_fmt(decay)} c_r2={_fmt(r2)}"]
    return {}, ["r", "re_c", "im_c", "abs_c"], rows, trailing


_RUNNERS = {
    "sigma-check": _run_sigma_check,
    "spectrum": _run_spectrum,
    "distance": _run_distance,
    "uncertainty": _run_uncertainty,
    "weyl-check": _run_weyl_check,
    "kernel": _run_kernel,
    "commutator": _run_commutator,
}


def run(config: ExperimentConfig) -> str:
    """Execute a resolved configuration and return the written CSV path."""
    meta, columns, rows, trailing = _RUNNERS[config.command](config.params)
    return _write_csv(_resolve_out(config), meta, columns, rows, trailing)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    head = next((tok for tok in argv if not tok.startswith("-")), None)
    if head is not None and head not in COMMANDS:
        print(f"qst: unknown subcommand {head!r}; choose from {', '.join(COMMANDS)}",
              file=sys.stderr)
        return 1
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise _CliValidationError("a subcommand is required")
        params = {k: v for k, v in vars(ns).items()
                  if k not in ("command", "config", "out")}
        if ns.config:
            file_params = _read_config_file(ns.config)
            for key, raw in file_params.items():
                if key == "out":
                    if ns.out is None:
                        ns.out = raw
                    continue
                if key not in _DEFAULTS[ns.command]:
                    raise _CliValidationError(
                        f"config key {key!r} is not valid for {ns.command}")
                if params.get(key) is None:  # CLI flags win over config values
                    params[key] = _coerce(ns.command, key, raw)
        config = ExperimentConfig(command=ns.command, params=params, out=ns.out)
        path = run(config)
    except _CliValidationError as exc:
        print(f"qst: {exc}", file=sys.stderr)
        return 2
    except (QuadratureUnderResolved, DegenerateGround) as exc:
        print(f"qst: numerical quality failure: {exc}", file=sys.stderr)
        return 3
    except (QstError, ValueError) as exc:
        print(f"qst: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
