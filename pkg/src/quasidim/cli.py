"""Command-line entry point: ``quasidim <command> [options]``.

Exit codes: 0 success, 1 invalid input, 2 solver non-convergence,
3 identity-suite failure.
"""

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .bowen import large_c_bounds, solve_dimension
from .boxdim import RNG_ALGORITHM, box_dimension, sample_julia
from .dynamics import Parameter, Regime
from .errors import (BracketFailure, CriticalCollision, LogBranchViolation, NoConvergence,
                     NonMonotone, QuasidimError)
from .identities import MAX_IDENTITY_DEPTH, run_identity_suite
from .kernels import BACKEND
from .pressure import pressure_sample

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONVERGENCE = 2
EXIT_IDENTITY = 3

COMMANDS = ("dim", "sweep", "pressure", "identities", "sample", "boxdim", "bounds")

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<sign>[+-])(?P<im>{_NUM})?i)?$")
_IMAG_RE = re.compile(rf"^(?P<sign>[+-]?)(?P<im>{_NUM})?i$")


class InputError(Exception):
    pass


def parse_complex(text):
    """Parse ``a+bi`` / ``a-bi``, a bare real ``a`` or a bare imaginary ``bi``."""
    m = _IMAG_RE.match(text.strip())
    if m:
        imag = float(m.group("im") or "1")
        return complex(0.0, -imag if m.group("sign") == "-" else imag)
    m = _COMPLEX_RE.match(text.strip())
    if not m:
        raise InputError(f"cannot parse complex literal {text!r}; expected a+bi")
    real = float(m.group("re"))
    imag = 0.0
    if m.group("sign"):
        imag = float(m.group("im") or "1")
        if m.group("sign") == "-":
            imag = -imag
    return complex(real, imag)


def format_complex(z):
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_float_list(text):
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"cannot parse comma list {text!r}") from None


@dataclass
class RunConfig:
    command: str
    c: complex = 0j
    n_max: int = 18
    n: int = 10
    s: float = 1.0
    tol: float = 1e-12
    seed: int = 0
    count: int = 100_000
    burn_in: int = 1000
    scales: list = field(default_factory=lambda: [2.0 ** -k for k in range(4, 12)])
    moduli: list = field(default_factory=list)
    args: int = 1
    format: str = "csv"
    output_path: Optional[str] = None
    force: bool = False
    threads: int = 1
    points: Optional[str] = None

    def echo(self):
        out = {}
        for key, value in self.__dict__.items():
            out[key] = format_complex(value) if isinstance(value, complex) else value
        return out

    def parameter(self):
        try:
            return Parameter(self.c, Regime.FORCED if self.force else Regime.QUASI_CIRCLE)
        except QuasidimError as exc:
            raise InputError(str(exc).replace("force=True", "--force")) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c", default="0+0i", help="parameter c as a+bi")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", dest="output_path", default=None, help="output file (default stdout)")
    common.add_argument("--force", action="store_true", help="skip the |c| <= 0.2 regime guard")
    common.add_argument("--threads", type=int, default=1)

    parser = _Parser(prog="quasidim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dim", parents=[common], help="solve Bowen's equation for the dimension")
    p.add_argument("--n-max", type=int, default=18)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("sweep", parents=[common], help="dimension over a grid of |c| and arg c")
    p.add_argument("--moduli", required=True, help="comma list of |c| values")
    p.add_argument("--args", type=int, default=1, help="number of equally spaced arguments")
    p.add_argument("--n-max", type=int, default=18)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("pressure", parents=[common], help="partition sum and pressure estimates")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--n", type=int, default=10)

    p = sub.add_parser("identities", parents=[common], help="check the coding identities")
    p.add_argument("--n", type=int, default=10)

    p = sub.add_parser("sample", parents=[common], help="inverse-iteration sample of J")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("boxdim", parents=[common], help="box-counting dimension of a sample")
    p.add_argument("--count", type=int, default=1_000_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scales", default=None, help="comma list of box sides")
    p.add_argument("--points", default=None, help="read a re,im CSV instead of sampling")

    sub.add_parser("bounds", parents=[common], help="large-|c| dimension bounds")
    return parser


def config_from_args(ns):
    cfg = RunConfig(command=ns.command)
    cfg.c = parse_complex(ns.c)
    cfg.format = ns.format
    cfg.output_path = ns.output_path
    cfg.force = ns.force
    cfg.threads = ns.threads
    for name in ("n_max", "tol", "s", "n", "seed", "count", "burn_in", "args", "points"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "scales", None):
        cfg.scales = parse_float_list(ns.scales)
    if getattr(ns, "moduli", None):
        cfg.moduli = parse_float_list(ns.moduli)
    validate(cfg)
    return cfg


def validate(cfg):
    """Reject bad combinations before any computation."""
    if cfg.threads < 1:
        raise InputError("--threads must be at least 1")
    if cfg.command in ("dim", "sweep"):
        if cfg.n_max < 4 or cfg.n_max > 30:
            raise InputError("--n-max must lie in 4..30")
        if not cfg.tol > 0:
            raise InputError("--tol must be positive")
    if cfg.command == "dim":
        cfg.parameter()
    if cfg.command == "sweep":
        if not cfg.moduli:
            raise InputError("--moduli needs at least one value")
        if cfg.args < 1:
            raise InputError("--args must be at least 1")
        if any(m < 0 for m in cfg.moduli):
            raise InputError("moduli must be non-negative")
        if not cfg.force and any(m > 0.2 for m in cfg.moduli):
            raise InputError("moduli above the quasi-circle guard 0.2; pass --force")
    if cfg.command == "pressure":
        cfg.parameter()
        if not 1 <= cfg.n <= 30:
            raise InputError("--n must lie in 1..30")
    if cfg.command == "identities":
        cfg.parameter()
        if not 1 <= cfg.n <= MAX_IDENTITY_DEPTH:
            raise InputError(f"--n must lie in 1..{MAX_IDENTITY_DEPTH} for the identity suite")
    if cfg.command in ("sample", "boxdim"):
        if abs(cfg.c) > 2.0:
            raise InputError("sampling needs |c| <= 2")
        if cfg.count < 1 or cfg.burn_in < 0:
            raise InputError("--count must be positive and --burn-in non-negative")
    if cfg.command == "boxdim":
        if len(cfg.scales) < 2 or any(s <= 0 for s in cfg.scales):
            raise InputError("--scales needs at least two positive values")


def _num(x):
    """Shortest repr that round-trips exactly."""
    if x is None:
        return ""
    return repr(float(x))


class Emitter:
    """Collects tables and writes them as CSV blocks or one JSON document."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.tables = []
        self.started = time.perf_counter()

    def table(self, name, header, rows):
        self.tables.append((name, header, rows))

    def render(self):
        if self.cfg.format == "json":
            doc = {"meta": {
                "version": __version__,
                "backend": BACKEND,
                "seed": self.cfg.seed,
                "threads": self.cfg.threads,
                "rng": RNG_ALGORITHM,
                "wall_time_s": time.perf_counter() - self.started,
                "config": self.cfg.echo(),
            }}
            for name, header, rows in self.tables:
                doc[name] = [dict(zip(header, row)) for row in rows]
            return json.dumps(doc, indent=2, allow_nan=True) + "\n"
        buf = io.StringIO()
        for i, (_, header, rows) in enumerate(self.tables):
            if i:
                buf.write("\n")
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_num(v) if isinstance(v, (float, np.floating)) or v is None
                                 else v for v in row])
        return buf.getvalue()

    def write(self, stdout):
        text = self.render()
        if self.cfg.output_path:
            with open(self.cfg.output_path, "w", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)


def cmd_dim(cfg, out):
    report = solve_dimension(cfg.parameter(), n_max=cfg.n_max, tol=cfg.tol, threads=cfg.threads)
    out.table("roots", ["n", "s_n"], [(n, float(s)) for n, s in report.roots_by_n])
    out.table("summary", ["c_re", "c_im", "s_star", "beta", "ruelle", "residual"],
              [(report.c.real, report.c.imag, report.s_star, report.beta,
                report.ruelle_value, report.residual)])
    return EXIT_OK


def cmd_sweep(cfg, out, stderr):
    rows = []
    failed = 0
    for modulus in cfg.moduli:
        for k in range(cfg.args):
            arg = 2.0 * math.pi * k / cfg.args
            c = modulus * complex(math.cos(arg), math.sin(arg))
            p = Parameter(c, Regime.FORCED if cfg.force else Regime.QUASI_CIRCLE)
            try:
                rep = solve_dimension(p, n_max=cfg.n_max, tol=cfg.tol, threads=cfg.threads)
                s_star, ruelle = rep.s_star, rep.ruelle_value
            except (BracketFailure, NonMonotone, CriticalCollision, LogBranchViolation) as exc:
                stderr.write(f"row |c|={modulus!r} arg={arg!r} failed: {exc}\n")
                failed += 1
                s_star, ruelle = math.nan, 1.0 + modulus ** 2 / (4.0 * math.log(2.0))
            ratio = (s_star - 1.0) / modulus ** 2 if modulus > 0 else math.nan
            rows.append((float(modulus), arg, s_star, ruelle, ratio))
    out.table("rows", ["modulus", "argument", "s_star", "ruelle", "ratio"], rows)
    return EXIT_CONVERGENCE if failed else EXIT_OK


def cmd_pressure(cfg, out):
    sample = pressure_sample(cfg.parameter(), cfg.s, cfg.n, threads=cfg.threads)
    out.table("pressure", ["n", "s", "log_delta", "p_raw", "p_ratio"],
              [(sample.n, sample.s, sample.log_delta, sample.p_raw, sample.p_ratio)])
    return EXIT_OK


def cmd_identities(cfg, out):
    results = run_identity_suite(cfg.parameter(), cfg.n)
    out.table("identities", ["identity", "residual", "bound", "passed"],
              [(r.name, float(r.residual), float(r.bound), str(r.passed).lower())
               for r in results])
    return EXIT_OK if all(r.passed for r in results) else EXIT_IDENTITY


def cmd_sample(cfg, out):
    cloud = sample_julia(cfg.c, cfg.count, cfg.burn_in, cfg.seed)
    out.table("points", ["re", "im"], zip(cloud.points.real.tolist(), cloud.points.imag.tolist()))
    return EXIT_OK


def read_points(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        try:
            values = [complex(float(row["re"]), float(row["im"])) for row in reader]
        except (KeyError, ValueError) as exc:
            raise InputError(f"{path}: expected re,im columns ({exc})") from None
    return np.array(values, dtype=np.complex128)


def cmd_boxdim(cfg, out):
    if cfg.points:
        points = read_points(cfg.points)
    else:
        points = sample_julia(cfg.c, cfg.count, cfg.burn_in, cfg.seed).points
    est = box_dimension(points, cfg.scales)
    out.table("boxes", ["delta", "count"],
              [(float(d), int(n)) for d, n in zip(est.scales, est.counts)])
    out.table("fit", ["slope", "intercept", "r_squared"],
              [(est.slope, est.intercept, est.r_squared)])
    return EXIT_OK


def cmd_bounds(cfg, out):
    lower, upper = large_c_bounds(cfg.c)
    out.table("bounds", ["lower", "upper"], [(lower, upper)])
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        out = Emitter(cfg)
        handlers = {
            "dim": lambda: cmd_dim(cfg, out),
            "sweep": lambda: cmd_sweep(cfg, out, stderr),
            "pressure": lambda: cmd_pressure(cfg, out),
            "identities": lambda: cmd_identities(cfg, out),
            "sample": lambda: cmd_sample(cfg, out),
            "boxdim": lambda: cmd_boxdim(cfg, out),
            "bounds": lambda: cmd_bounds(cfg, out),
        }
        code = handlers[cfg.command]()
    except InputError as exc:
        stderr.write(f"quasidim: {exc}\n")
        return EXIT_INPUT
    except (BracketFailure, NonMonotone, NoConvergence) as exc:
        stderr.write(f"quasidim: solver did not converge: {exc}\n")
        return EXIT_CONVERGENCE
    except (QuasidimError, ValueError) as exc:
        stderr.write(f"quasidim: {exc}\n")
        return EXIT_INPUT
    out.write(stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
