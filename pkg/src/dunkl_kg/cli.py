"""Command-line front end for radial Dunkl-Klein-Gordon computations.

    dunkl-kg transform  --n 3 --gamma 0.5 --profile gaussian
    dunkl-kg solve      --t 2.5 --mass 0          # mass 0: wave equation
    dunkl-kg energies   --t-max 200 --steps 4000 --out json
    dunkl-kg limits     --velocity-profile gaussian
    dunkl-kg repr-check --n 3 --times 0,0.5,1,1.5
    dunkl-kg selftest   --seed 0

Settings are resolved as built-in defaults < ``--config`` file (``key = value``
lines, ``#`` comments) < command-line flags.  Output goes to stdout in the
``--out`` format, or to ``PREFIX.csv`` and ``PREFIX.json`` with ``--output``.
Exit codes: 0 pass, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import tolerances
from .energetics import measure_limits
from .kernels import KernelParams, hankel_F_closed, hankel_G_closed, integral_representation_origin
from .measures import RadialProfile, grid_for, make_mult, weighted_norm_sq
from .oracle import ConvergenceError, classical_reference
from .propagator import CauchyData, solve, solve_at, solve_dt, wave_limit_solve, wave_limit_solve_dt
from .selftest import run_suite
from .transform import dunkl_forward, dunkl_inverse, unitary_scale

__all__ = ["RunConfig", "main", "load_config", "dumps17"]

PROFILES = ("gaussian", "gaussian_r2", "bump")
VELOCITIES = ("zero",) + PROFILES
FORMATS = ("csv", "json")
COMMANDS = ("transform", "solve", "energies", "limits", "repr-check", "selftest")


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


def _times(text) -> tuple[float, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _opt_str(text):
    return None if text in (None, "", "none") else str(text)


@dataclass
class RunConfig:
    n: int = 1
    gamma: float = 0.0
    mass: float = 1.0
    rmax: float = 40.0
    nodes: int = 1024
    profile: str = "gaussian"
    width: float = 1.0
    amplitude: float = 1.0
    velocity_profile: str = "zero"
    t: float = 1.0
    t_max: float = 200.0
    steps: int = 4000
    times: tuple = (0.0, 0.5, 1.0, 1.5)
    out: str = "csv"
    seed: int = 0
    output: str | None = None

    def validate(self, command: str) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.n >= 1, f"n must be >= 1, got {self.n}")
        need(math.isfinite(self.gamma) and self.gamma >= 0, f"gamma must be >= 0, got {self.gamma}")
        if command == "solve":
            need(math.isfinite(self.mass) and self.mass >= 0, f"mass must be >= 0, got {self.mass}")
        else:
            need(math.isfinite(self.mass) and self.mass > 0, f"mass must be > 0, got {self.mass}")
        need(math.isfinite(self.rmax) and self.rmax > 0, f"rmax must be > 0, got {self.rmax}")
        need(self.nodes >= tolerances.MIN_NODES, f"nodes must be >= {tolerances.MIN_NODES}, got {self.nodes}")
        need(self.profile in PROFILES, f"profile must be one of {PROFILES}, got {self.profile!r}")
        need(self.velocity_profile in VELOCITIES, f"velocity profile must be one of {VELOCITIES}")
        need(math.isfinite(self.width) and self.width > 0, f"width must be > 0, got {self.width}")
        need(math.isfinite(self.amplitude), "amplitude must be finite")
        need(math.isfinite(self.t), "t must be finite")
        need(math.isfinite(self.t_max) and self.t_max > 0, f"t-max must be > 0, got {self.t_max}")
        need(self.steps >= 1, f"steps must be >= 1, got {self.steps}")
        need(self.out in FORMATS, f"out must be one of {FORMATS}, got {self.out!r}")
        if command == "repr-check":
            alpha = self.gamma + self.n / 2 - 1
            need(alpha < 0.5 or math.isclose(alpha, 0.5), f"repr-check supports alpha <= 1/2, got {alpha}")
            need(len(self.times) > 0, "times must not be empty")
            need(all(math.isfinite(x) and abs(x) <= self.rmax for x in self.times), "times must lie in [-rmax, rmax]")


_PARSERS = {"int": int, "float": float, "str": str, "tuple": _times, "str | None": _opt_str}


def _coerce(name: str, value):
    types = {f.name: f.type for f in fields(RunConfig)}
    if name not in types:
        raise ConfigError(f"unknown setting {name!r}")
    try:
        out = _PARSERS[types[name]](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {value!r}") from exc
    if types[name] == "int" and isinstance(value, float) and value != int(value):
        raise ConfigError(f"{name} must be an integer")
    return out


def load_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        out[key] = _coerce(key, value.strip())
    return out


def resolve(args: dict) -> RunConfig:
    cfg = RunConfig()
    layers = []
    if args.get("config"):
        layers.append(load_config(args["config"]))
    layers.append({k: _coerce(k, v) for k, v in args.items() if k not in ("command", "config")})
    for layer in layers:
        for key, value in layer.items():
            setattr(cfg, key, value)
    return cfg


# ---- output -----------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def dumps17(obj) -> str:
    """``json.dumps`` with every finite float written to 17 significant digits.

    Non-finite floats become the strings ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    floats: list[str] = []

    def walk(x):
        if isinstance(x, dict):
            return {str(k): walk(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [walk(v) for v in x]
        if isinstance(x, (bool, np.bool_)):
            return bool(x)
        if isinstance(x, (int, np.integer)):
            return int(x)
        if isinstance(x, (float, np.floating)):
            x = float(x)
            if not math.isfinite(x):
                return str(x)
            floats.append(format(x, ".17g"))
            return f"\x00{len(floats) - 1}\x00"
        return x

    text = json.dumps(walk(obj), indent=2)
    return re.sub(r'"\\u0000(\d+)\\u0000"', lambda m: floats[int(m.group(1))], text) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


@dataclass
class Outcome:
    header: list
    rows: list
    results: dict
    residuals: dict
    passed: bool
    message: str = ""


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: RunConfig, mu, outcome: Outcome, stdout) -> None:
    doc = {
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(cfg).items()},
        "results": outcome.results,
        "residuals": outcome.residuals,
        "constants": {"alpha": mu.alpha, "d_k": mu.d_k, "unitary_scale": unitary_scale(mu)},
    }
    csv_text = to_csv(outcome.header, outcome.rows)
    json_text = dumps17(doc)
    if cfg.output:
        _atomic_write(cfg.output + ".csv", csv_text)
        _atomic_write(cfg.output + ".json", json_text)
    else:
        stdout.write(csv_text if cfg.out == "csv" else json_text)


# ---- data -------------------------------------------------------------------

def shape(name: str, width: float):
    if name == "gaussian":
        return lambda r: np.exp(-0.5 * (r / width) ** 2)
    if name == "gaussian_r2":
        return lambda r: (r / width) ** 2 * np.exp(-0.5 * (r / width) ** 2)
    if name == "bump":
        # C-infinity bump supported on r < 3 width, equal to 1 at r = 0
        radius = 3.0 * width

        def bump(r):
            x = np.clip(r / radius, 0.0, 1.0)
            inside = x < 1
            out = np.zeros_like(x)
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
            return out

        return bump
    if name == "zero":
        return lambda r: np.zeros_like(r)
    raise ConfigError(f"unknown profile {name!r}")


def build(cfg: RunConfig):
    mu = make_mult(cfg.n, cfg.gamma)
    grid = grid_for(mu, cfg.rmax, cfg.nodes)
    g = RadialProfile(grid, cfg.amplitude * shape(cfg.profile, cfg.width)(grid.nodes))
    f = RadialProfile(grid, shape(cfg.velocity_profile, cfg.width)(grid.nodes))
    return mu, grid, f, g


# ---- commands ---------------------------------------------------------------

def cmd_transform(cfg: RunConfig) -> tuple:
    """Forward transform of g with round-trip and Plancherel residuals."""
    mu, grid, _, g = build(cfg)
    F = dunkl_forward(mu, g)
    back = dunkl_inverse(mu, F)
    err = np.abs(back.values - g.values)
    scale = float(np.max(np.abs(g.values)))
    rel = float(np.max(err) / scale) if scale else 0.0
    norm_f, norm_F = weighted_norm_sq(mu, g), weighted_norm_sq(mu, F)
    plan = abs(norm_f - norm_F) / norm_f if norm_f else abs(norm_F)
    rows = list(zip(grid.nodes, g.values.real, F.values.real, err))
    passed = rel <= tolerances.get("ROUND_TRIP") and plan <= tolerances.get("PLANCHEREL")
    out = Outcome(
        ["r", "f", "Hf", "round_trip_error"], rows,
        {"norm_sq": norm_f, "transform_norm_sq": norm_F},
        {"round_trip_relative": rel, "plancherel_relative": plan},
        passed, "" if passed else "transform round trip or Plancherel outside tolerance",
    )
    return mu, out


def cmd_solve(cfg: RunConfig) -> tuple:
    """Solution u and du/dt at time t (mass 0 gives the wave equation)."""
    mu, grid, f, g = build(cfg)
    wave = cfg.mass == 0
    data = CauchyData(f, g, 1.0 if wave else cfg.mass, mu)
    if wave:
        u, ut = wave_limit_solve(data, cfg.t), wave_limit_solve_dt(data, cfg.t)
    else:
        u, ut = solve(data, cfg.t), solve_dt(data, cfg.t)
    header = ["r", "re_u", "im_u", "re_dtu"]
    cols = [grid.nodes, u.values.real, u.values.imag, ut.values.real]
    residuals, passed = {}, True
    if cfg.gamma == 0 and cfg.n == 1:
        ref = classical_reference(data, cfg.t, mass=cfg.mass)
        diff = np.abs(u.values - ref.values)
        header.append("oracle_diff")
        cols.append(diff)
        worst = float(np.max(diff) / max(1.0, np.max(np.abs(u.values))))
        residuals["oracle_relative"] = worst
        passed = worst <= tolerances.get("CLASSICAL_REFERENCE")
    results = {"t": cfg.t, "wave_limit": wave, "norm_sq": weighted_norm_sq(mu, u)}
    return mu, Outcome(header, list(zip(*cols)), results, residuals, passed,
                       "" if passed else "solution disagrees with the cosine-sum oracle")


def _series_setup(cfg):
    mu, _, f, g = build(cfg)
    return mu, CauchyData(f, g, cfg.mass, mu)


def cmd_energies(cfg: RunConfig) -> tuple:
    """K, P, E, Q and L2 on a uniform time grid with Cesaro residuals."""
    mu, data = _series_setup(cfg)
    report, series = measure_limits(data, cfg.t_max, cfg.steps)
    drift = float(np.ptp(series.Q) / series.Q[0]) if series.Q[0] else float(np.ptp(series.Q))
    rows = list(zip(series.times, series.K, series.P, series.E, series.Q, series.L2))
    results = {"predicted": report.as_dict(), "cesaro": report.measured}
    residuals = {"conservation_drift": drift, "cesaro": report.residuals}
    passed = drift <= tolerances.get("CONSERVATION")
    return mu, Outcome(["t", "K", "P", "E", "Q", "L2"], rows, results, residuals, passed,
                       "" if passed else "Q is not conserved within tolerance")


def cmd_limits(cfg: RunConfig) -> tuple:
    """Predicted large-time limits against measured Cesaro averages."""
    mu, data = _series_setup(cfg)
    report, _ = measure_limits(data, cfg.t_max, cfg.steps)
    pred = report.as_dict()
    rows = [
        (key, pred[f"{key}_inf"], report.measured[key], report.residuals[key], report.rate_constants[key])
        for key in ("K", "P", "E", "L2")
    ]
    bound = report.strichartz_bound
    holds = math.isinf(bound) or report.L2_inf <= bound
    ces_ok = max(report.residuals.values()) <= tolerances.get("CESARO")
    results = {"predicted": pred, "cesaro": report.measured, "t_max": cfg.t_max, "strichartz_holds": holds}
    residuals = {"cesaro": report.residuals, "rate_constants": report.rate_constants}
    passed = holds and ces_ok
    msg = "" if passed else ("Strichartz bound violated" if not holds else "Cesaro residual above tolerance")
    return mu, Outcome(["quantity", "predicted", "cesaro_average", "residual", "rate_constant"],
                       rows, results, residuals, passed, msg)


def cmd_repr_check(cfg: RunConfig) -> tuple:
    """u(0, t) from the spectral solution and from the radial integral formula."""
    mu, data = _series_setup(cfg)
    rows, worst = [], 0.0
    for t in cfg.times:
        spectral = complex(solve_at(data, t, [0.0])[0])
        rep = integral_representation_origin(data, t)
        diff = abs(spectral - rep)
        worst = max(worst, diff)
        rows.append((t, spectral.real, rep.real, diff))
    support = 0.0
    for t in cfg.times:
        if t == 0:
            continue
        p = KernelParams(mu.alpha, cfg.mass, t)
        y = abs(t) + np.linspace(0.0, 5.0, 51)
        support = max(support, float(np.max(np.abs(hankel_G_closed(p, y)))),
                      float(np.max(np.abs(hankel_F_closed(p, y)))))
    passed = worst <= tolerances.get("REPRESENTATION") and support == 0.0
    return mu, Outcome(["t", "u_spectral", "u_integral", "abs_diff"], rows,
                       {"max_abs_diff": worst}, {"max_abs_diff": worst, "support_max": support},
                       passed, "" if passed else "origin representation disagrees with the spectral solution")


def cmd_selftest(cfg: RunConfig) -> tuple:
    """Run the invariant suite; exit 1 if any check fails."""
    checks = run_suite(cfg.seed)
    rows = [(c.module, c.name, c.value, c.tolerance, c.limit, "pass" if c.passed else "FAIL") for c in checks]
    n_pass = sum(c.passed for c in checks)
    results = {"passed": n_pass, "failed": len(checks) - n_pass}
    residuals = {f"{c.module}.{c.name}": c.value for c in checks}
    passed = n_pass == len(checks)
    failed = ", ".join(f"{c.module}.{c.name}" for c in checks if not c.passed)
    return make_mult(cfg.n, cfg.gamma), Outcome(
        ["module", "check", "value", "tolerance", "limit", "status"], rows, results, residuals,
        passed, "" if passed else f"failed: {failed}",
    )


HANDLERS = {
    "transform": cmd_transform,
    "solve": cmd_solve,
    "energies": cmd_energies,
    "limits": cmd_limits,
    "repr-check": cmd_repr_check,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--n", type=int, help="dimension (default 1)")
    common.add_argument("--gamma", type=float, help="multiplicity index, >= 0 (default 0)")
    common.add_argument("--mass", type=float, help="Klein-Gordon mass (default 1; solve accepts 0)")
    common.add_argument("--rmax", type=float, help="radial truncation (default 40)")
    common.add_argument("--nodes", type=int, help="quadrature nodes (default 1024)")
    common.add_argument("--profile", choices=PROFILES, help="initial position g")
    common.add_argument("--velocity-profile", dest="velocity_profile", choices=VELOCITIES,
                        help="initial velocity f (default zero)")
    common.add_argument("--width", type=float, help="profile width (default 1)")
    common.add_argument("--amplitude", type=float, help="amplitude of g (default 1)")
    common.add_argument("--t", type=float, help="time for solve (default 1)")
    common.add_argument("--t-max", dest="t_max", type=float, help="end time for energies/limits (default 200)")
    common.add_argument("--steps", type=int, help="time steps for energies/limits (default 4000)")
    common.add_argument("--times", help="comma-separated times for repr-check")
    common.add_argument("--out", choices=FORMATS, help="stdout format (default csv)")
    common.add_argument("--output", help="write PREFIX.csv and PREFIX.json instead of stdout")
    common.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")

    parser = argparse.ArgumentParser(prog="dunkl-kg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        doc = (HANDLERS[name].__doc__ or "").strip().splitlines()
        sub.add_parser(name, parents=[common], help=doc[0] if doc else None)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = vars(parser.parse_args(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args["command"]
    try:
        cfg = resolve(args)
        cfg.validate(command)
        tolerances.overrides()
    except ValueError as exc:
        print(f"dunkl-kg {command}: invalid input: {exc}", file=stderr)
        return 2
    try:
        mu, outcome = HANDLERS[command](cfg)
    except ConvergenceError as exc:
        print(f"dunkl-kg {command}: {exc}", file=stderr)
        return 1
    emit(cfg, mu, outcome, stdout)
    if not outcome.passed:
        print(f"dunkl-kg {command}: verification failed: {outcome.message}", file=stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
