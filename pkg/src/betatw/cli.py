"""Command line: sample, cdf, tails, idcheck and verify.

Settings come from three layers, later ones winning: built-in defaults, a
flat ``key = value`` config file (``--config``), then command-line flags.

Exit status: 0 success, 1 a verify check failed, 2 usage error, 3 runtime
or infrastructure error (unreadable snapshot, solver failure, I/O).
"""

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from betatw import acceptance, formats, painleve, tails
from betatw.ensembles import EnsembleSpec, Kind
from betatw.montecarlo import run_batch

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3
COMMANDS = ("sample", "cdf", "tails", "idcheck", "verify")
SOURCES = ("asymptote", "painleve")

# per-command grid defaults: (x_min, x_max, x_step); idcheck reads x_step as
# the number of points on a logarithmic grid
GRID_DEFAULTS = {
    "cdf": (-6.0, 5.0, 0.1),
    "tails": (1.0, 10.0, 0.5),
    "idcheck": (10.0, 1e6, 31),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = None
    kind: str = Kind.BETA_HERMITE.value
    beta: float = 2.0
    n_dim: int = 200
    sao_length: float = 10.0
    sao_step: float = 0.01
    count: int = 1000
    seed: int = 0
    x_min: float = None
    x_max: float = None
    x_step: float = None
    out: str = None
    format: str = "csv"
    quick: bool = False
    threads: int = 0
    painleve_snapshot: str = None
    source: str = "asymptote"
    threshold: float = 10.0
    bound: str = None
    only: str = None

    def spec(self):
        return EnsembleSpec(self.kind, self.beta, self.n_dim, self.sao_length, self.sao_step)

    def grid(self):
        if self.command == "idcheck":
            return np.geomspace(self.x_min, self.x_max, int(self.x_step))
        n = int(math.floor((self.x_max - self.x_min) / self.x_step + 1e-9)) + 1
        return self.x_min + self.x_step * np.arange(n)


FIELDS = {f.name: f for f in fields(RunConfig)}
INT_KEYS = {"n_dim", "count", "seed", "threads"}
FLOAT_KEYS = {"beta", "sao_length", "sao_step", "x_min", "x_max", "x_step", "threshold"}
BOOL_KEYS = {"quick"}


def _coerce(key, value):
    if value is None or not isinstance(value, str):
        return value
    try:
        if key in INT_KEYS:
            return int(value)
        if key in FLOAT_KEYS:
            return float(value)
    except ValueError:
        raise UsageError(f"{key}: cannot parse {value!r}") from None
    if key in BOOL_KEYS:
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key}: expected a boolean, got {value!r}")
    return value


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from None
    out = {}
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in FIELDS:
            raise UsageError(f"config: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="betatw", description="Tracy-Widom laws, beta ensembles and tail diagnostics.")
    p.add_argument("command", choices=COMMANDS)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="flat key = value file")
    p.add_argument("--kind", choices=[k.value for k in Kind], default=S)
    p.add_argument("--beta", type=float, default=S)
    p.add_argument("--n-dim", type=int, default=S)
    p.add_argument("--sao-length", type=float, default=S)
    p.add_argument("--sao-step", type=float, default=S)
    p.add_argument("--count", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--x-min", type=float, default=S)
    p.add_argument("--x-max", type=float, default=S)
    p.add_argument("--x-step", type=float, default=S, help="grid step; for idcheck, the number of log-spaced points")
    p.add_argument("--out", default=S, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=S)
    p.add_argument("--quick", action="store_true", default=S, help="reduced-size verify run")
    p.add_argument("--threads", type=int, default=S, help="worker threads, 0 = all cores; never changes results")
    p.add_argument("--painleve-snapshot", default=S, help="CSV written by PainleveSolution.to_csv")
    p.add_argument("--source", choices=SOURCES, default=S, help="tail used by idcheck")
    p.add_argument("--threshold", type=float, default=S)
    p.add_argument("--bound", default=S, help="a,b,c for the exponential-bound criterion")
    p.add_argument("--only", default=S, help="comma-separated criterion numbers for verify")
    return p


def parse_config(args, config_file=None):
    """Token list (and optional config path) -> validated RunConfig.

    Raises UsageError naming the offending key. argparse-level problems
    (unknown flag, malformed number) exit with status 2 directly.
    """
    ns = vars(build_parser().parse_args(list(args)))
    path = ns.pop("config", config_file)
    merged = asdict(RunConfig())
    if path is not None:
        merged.update(read_config_file(path))
    merged.update(ns)
    cfg = RunConfig(**merged)
    _fill_grid(cfg)
    validate(cfg)
    return cfg


def _fill_grid(cfg):
    defaults = GRID_DEFAULTS.get(cfg.command)
    if defaults is None:
        return
    for key, value in zip(("x_min", "x_max", "x_step"), defaults):
        if getattr(cfg, key) is None:
            setattr(cfg, key, value)


def validate(cfg):
    if cfg.command not in COMMANDS:
        raise UsageError(f"command: must be one of {COMMANDS}, got {cfg.command!r}")
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"format: must be csv or json, got {cfg.format!r}")
    if cfg.source not in SOURCES:
        raise UsageError(f"source: must be one of {SOURCES}, got {cfg.source!r}")
    try:
        cfg.spec()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.count < 1:
        raise UsageError(f"count must be at least 1, got {cfg.count}")
    if cfg.seed < 0:
        raise UsageError(f"seed must be non-negative, got {cfg.seed}")
    if cfg.threads < 0:
        raise UsageError(f"threads must be non-negative, got {cfg.threads}")
    if not cfg.threshold > 0:
        raise UsageError(f"threshold must be positive, got {cfg.threshold}")
    if cfg.command in GRID_DEFAULTS:
        if not cfg.x_step > 0:
            raise UsageError(f"x_step must be positive, got {cfg.x_step}")
        if not cfg.x_max > cfg.x_min:
            raise UsageError(f"x_max must exceed x_min, got [{cfg.x_min}, {cfg.x_max}]")
    if cfg.command == "tails" and not cfg.x_min > 0:
        raise UsageError(f"x_min must be positive for tails, got {cfg.x_min}")
    if cfg.command == "idcheck":
        if not cfg.x_min > 1:
            raise UsageError(f"x_min must exceed 1 for idcheck, got {cfg.x_min}")
        if int(cfg.x_step) != cfg.x_step or cfg.x_step < 8:
            raise UsageError(f"x_step must be an integer >= 8 for idcheck, got {cfg.x_step}")
        if cfg.source == "painleve" and cfg.beta not in painleve.BETAS:
            raise UsageError(f"beta must be one of {painleve.BETAS} with source painleve, got {cfg.beta}")
    if cfg.command == "cdf" and cfg.kind != Kind.BETA_HERMITE.value:
        raise UsageError("kind: cdf has no ensemble argument")
    if cfg.bound is not None:
        parse_bound(cfg.bound)
    if cfg.only is not None:
        parse_only(cfg.only)


def parse_bound(text):
    try:
        a, b, c = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bound: expected a,b,c, got {text!r}") from None
    if not (a > 0 and b > 0):
        raise UsageError(f"bound: a and b must be positive, got {text!r}")
    return a, b, c


def parse_only(text):
    try:
        picked = {int(v) for v in text.split(",") if v.strip()}
    except ValueError:
        raise UsageError(f"only: expected criterion numbers, got {text!r}") from None
    unknown = picked - set(acceptance.CRITERIA)
    if unknown or not picked:
        raise UsageError(f"only: unknown criteria {sorted(unknown) or text!r}")
    return picked


# -- commands ----------------------------------------------------------------


class RuntimeFailure(Exception):
    pass


def load_solution(cfg):
    if cfg.painleve_snapshot is None:
        return painleve.default_solution()
    try:
        return painleve.PainleveSolution.from_csv(cfg.painleve_snapshot)
    except (OSError, ValueError) as exc:
        raise RuntimeFailure(f"cannot load Painleve snapshot {cfg.painleve_snapshot}: {exc}") from None


def _emit(cfg, text):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w") as fh:
            fh.write(text)


def _records(header, rows):
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"


def cmd_sample(cfg):
    batch = run_batch(cfg.spec(), cfg.count, cfg.seed, cfg.threads)
    if cfg.format == "json":
        body = dict(formats.batch_sidecar(batch), samples=batch.samples.tolist())
        _emit(cfg, json.dumps(body, indent=2) + "\n")
    elif cfg.out is None:
        sys.stdout.write(formats.batch_csv(batch))
    else:
        formats.write_batch(batch, cfg.out)
    return EXIT_OK


def cmd_cdf(cfg):
    sol = load_solution(cfg)
    xs = cfg.grid()
    for beta in painleve.BETAS:
        lo, hi = painleve.domain(beta, sol)
        if xs[0] < lo or xs[-1] > hi:
            raise UsageError(f"x_min/x_max: F{beta} is tabulated only on [{lo:.6g}, {hi:.6g}]")
    cols = [painleve.tw_cdf(beta, xs, sol) for beta in painleve.BETAS]
    header = ("x", "F1", "F2", "F4")
    rows = [tuple(float(v) for v in row) for row in zip(xs, *cols)]
    _emit(cfg, _records(header, rows) if cfg.format == "json" else formats.table_csv(header, rows))
    return EXIT_OK


def cmd_tails(cfg):
    header = ("x", "side", "log_asymptote")
    rows = []
    for x in cfg.grid():
        x = float(x)
        rows.append((x, tails.LEFT, tails.tail_asymptote(cfg.beta, tails.LEFT, x)))
        rows.append((x, tails.RIGHT, tails.tail_asymptote(cfg.beta, tails.RIGHT, x)))
        rows.append((x, "two_sided", tails.two_sided_tail(cfg.beta, x)))
    _emit(cfg, _records(header, rows) if cfg.format == "json" else formats.table_csv(header, rows))
    return EXIT_OK


def cmd_idcheck(cfg):
    if cfg.source == "painleve":
        tail = tails.painleve_tail(cfg.beta, "two_sided", load_solution(cfg))
        hi = tail.valid[1]
        if cfg.x_max > hi:
            raise UsageError(f"x_max: the Painleve tail is tabulated only up to {hi:.6g}")
    else:
        tail = tails.asymptote_tail(cfg.beta)
    bound = parse_bound(cfg.bound) if cfg.bound else None
    # Tracy-Widom laws are neither Gaussian nor degenerate
    verdict = tails.classify_id(tail, cfg.grid(), cfg.threshold, non_gaussian=True, bound=bound)
    _emit(cfg, verdict.to_json() + "\n")
    return EXIT_OK


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, float, str)) or v is None:
        return v
    if isinstance(v, (np.integer, np.floating)):
        return v.item()
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return str(v)


def cmd_verify(cfg):
    sol = load_solution(cfg)
    scale = acceptance.QUICK if cfg.quick else acceptance.FULL
    only = parse_only(cfg.only) if cfg.only else None
    checks = acceptance.run_all(scale, sol, only)
    report = {
        "scale": scale.name,
        "passed": sum(bool(c.passed) for c in checks),
        "failed": sum(not c.passed for c in checks),
        "checks": [{k: _jsonable(v) for k, v in c.to_dict().items()} for c in checks],
    }
    _emit(cfg, json.dumps(report, indent=2) + "\n")
    for c in checks:
        print(c.line(), file=sys.stderr)
    return EXIT_OK if report["failed"] == 0 else EXIT_CHECK


HANDLERS = {
    "sample": cmd_sample,
    "cdf": cmd_cdf,
    "tails": cmd_tails,
    "idcheck": cmd_idcheck,
    "verify": cmd_verify,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        build_parser().print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"betatw: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeFailure as exc:
        print(f"betatw: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, painleve.PainleveDivergence) as exc:
        print(f"betatw: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
