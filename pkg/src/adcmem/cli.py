"""Command-line front end: capacity sweeps, figure presets and the oracle suite.

Exit codes: 0 success, 1 verification or consistency failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, capacity, oracle
from .capacity import OscillatorMemory
from .channels import DampingParams
from .errors import AdcMemError, ConsistencyError

ANGLE_LITERALS = {
    "pi/8": math.pi / 8,
    "pi/6": math.pi / 6,
    "pi/4": math.pi / 4,
    "pi/3": math.pi / 3,
    "pi/2": math.pi / 2,
    "0": 0.0,
}

FIG2_CURVES = [("pi/8", 0.465), ("pi/6", 0.447), ("pi/4", 0.389), ("pi/3", 0.312)]
FIG3_CURVES = [(0.225, 0.486), (0.464, 0.456)]
FIG3_TAU_D = (2.0, 20.0)
FIG4_USES = (2, 3, 4, 6, 10)


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    key = text.strip().lower().replace(" ", "")
    if key in ANGLE_LITERALS:
        return ANGLE_LITERALS[key]
    try:
        return float(key)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if lo > hi:
        raise UsageError("sweep minimum exceeds maximum")
    grid = np.linspace(lo, hi, steps)
    grid[-1] = hi
    return [float(x) for x in grid]


def worker_count() -> int:
    env = os.environ.get("ADCMEM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("ADCMEM_THREADS must be a positive integer") from None
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Map in a thread pool; results keep the input order."""
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --- row builders ---------------------------------------------------------

def _q_fields(q_value: float, uses: int) -> dict:
    q_value = max(q_value, 0.0)
    return {"q_value": q_value, "q_per_use": q_value / uses}


def two_use_row(chi: float, mu: float, p: float | None) -> dict:
    params = DampingParams(chi, mu)
    if p is None:
        res = capacity.capacity_two_use(params)
        return {"chi": chi, "mu": mu, "p_star": res.p_star, **_q_fields(res.q_value, 2)}
    return {"chi": chi, "mu": mu, "p": p, **_q_fields(capacity.two_use_ic_at(params, p), 2)}


def oscillator_row(chi: float, tau_d: float, tau: float, p: float | None) -> dict:
    mu = capacity.memory_from_oscillator(OscillatorMemory(tau, tau_d))
    row = two_use_row(chi, mu, p)
    return {"chi": chi, "tau_d": tau_d, "tau": tau, **{k: v for k, v in row.items() if k != "chi"}}


def n_use_row(n: int, memory: str, chi: float, p: float | None) -> dict:
    head = {"n": n, "memory": memory, "chi": chi}
    if p is None:
        res = capacity.capacity_n_use(n, chi, memory)
        return {**head, "p_star": res.p_star, **_q_fields(res.q_value, n)}
    return {**head, "p": p, **_q_fields(capacity.n_use_ic_at(n, chi, memory, p), n)}


def coherence_rows(chi: float, mu: float, p_steps: int, r2_steps: int) -> list[dict]:
    surface = capacity.capacity_coherent_surface(DampingParams(chi, mu), p_steps, r2_steps)
    return [{"chi": chi, "mu": mu, "p": p, "r2": r2, **_q_fields(ic, 2)} for p, r2, ic in surface]


# --- commands ---------------------------------------------------------------

def _mode_p(args) -> float | None:
    if args.mode == "fixed-p":
        if args.p is None:
            raise UsageError("--mode fixed-p requires --p")
        if not 0.0 <= args.p <= 1.0:
            raise UsageError("--p must lie in [0, 1]")
        return args.p
    return None


def cmd_two_use(args) -> list[dict]:
    if args.preset == "fig2":
        mus = linspace(0.0, 1.0, args.steps)
        jobs = [(ANGLE_LITERALS[c], mu, p) for c, p in FIG2_CURVES for mu in mus]
    else:
        if args.chi is None:
            raise UsageError("--chi is required unless --preset is given")
        p = _mode_p(args)
        jobs = [(args.chi, mu, p) for mu in linspace(args.mu_min, args.mu_max, args.steps)]
    return parallel_map(lambda j: two_use_row(*j), jobs)


def cmd_oscillator(args) -> list[dict]:
    if args.preset == "fig3":
        taus = linspace(0.0, args.tau_max, args.steps)
        jobs = [(chi, td, tau, p) for chi, p in FIG3_CURVES for td in FIG3_TAU_D for tau in taus]
    else:
        if args.chi is None or args.tau_d is None:
            raise UsageError("--chi and --tau-d are required unless --preset is given")
        if not args.tau_d > 0:
            raise UsageError("--tau-d must be positive")
        if args.tau_min < 0:
            raise UsageError("--tau-min must be non-negative")
        p = _mode_p(args)
        jobs = [(args.chi, args.tau_d, tau, p)
                for tau in linspace(args.tau_min, args.tau_max, args.steps)]
    return parallel_map(lambda j: oscillator_row(*j), jobs)


def cmd_n_use(args) -> list[dict]:
    if args.preset == "fig4":
        chis = linspace(0.0, math.pi / 2, args.steps)
        curves = [(1, "none")] + [(n, "perfect") for n in FIG4_USES]
        jobs = [(n, mem, chi, 0.5) for n, mem in curves for chi in chis]
    else:
        lo = 1 if args.memory == "none" else 2
        if args.n is None or not lo <= args.n <= 12:
            raise UsageError(f"--n must lie in [{lo}, 12] for memory={args.memory}")
        if args.p is not None and not 0.0 <= args.p <= 1.0:
            raise UsageError("--p must lie in [0, 1]")
        jobs = [(args.n, args.memory, chi, args.p)
                for chi in linspace(args.chi_min, args.chi_max, args.steps)]
    return parallel_map(lambda j: n_use_row(*j), jobs)


def cmd_coherence(args) -> list[dict]:
    if args.preset == "fig5":
        chi, mu = 0.685, 0.8
    else:
        if args.chi is None or args.mu is None:
            raise UsageError("--chi and --mu are required unless --preset is given")
        chi, mu = args.chi, args.mu
    if args.p_steps < 2 or args.r2_steps < 2:
        raise UsageError("--p-steps and --r2-steps must be at least 2")
    return coherence_rows(chi, mu, args.p_steps, args.r2_steps)


def cmd_verify(args) -> int:
    reports = oracle.run_all()
    for r in reports:
        print(r.line())
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


# --- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


def render(rows: list[dict], fmt: str, meta: dict) -> str:
    if fmt == "json":
        doc = {"meta": meta, "rows": [{k: _jsonable(v) for k, v in r.items()} for r in rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    fields = list(rows[0].keys()) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_fmt(r.get(f, "")) for f in fields])
    return buf.getvalue()


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(args) -> dict:
    skip = ("func", "out", "format", "command")
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {"command": args.command, "parameters": params, "version": __version__}


# --- parser -------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write to this path instead of stdout")


def _add_mode(p):
    p.add_argument("--mode", choices=("optimize", "fixed-p"), default="optimize")
    p.add_argument("--p", type=float, help="input occupation for --mode fixed-p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adcmem",
        description="Quantum capacity of the amplitude-damping channel with Markov memory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("two-use", help="two-use capacity versus the memory parameter mu")
    p.add_argument("--chi", type=parse_angle)
    p.add_argument("--mu-min", type=float, default=0.0)
    p.add_argument("--mu-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=51)
    _add_mode(p)
    p.add_argument("--preset", choices=("fig2",))
    _add_output(p)
    p.set_defaults(func=cmd_two_use)

    p = sub.add_parser("oscillator", help="two-use capacity versus qubit spacing tau")
    p.add_argument("--chi", type=parse_angle)
    p.add_argument("--tau-d", type=float)
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=50.0)
    p.add_argument("--steps", type=int, default=51)
    _add_mode(p)
    p.add_argument("--preset", choices=("fig3",))
    _add_output(p)
    p.set_defaults(func=cmd_oscillator)

    p = sub.add_parser("n-use", help="n-use capacity per use versus chi")
    p.add_argument("--n", type=int)
    p.add_argument("--memory", choices=capacity.MEMORY_KINDS, default="none")
    p.add_argument("--chi-min", type=parse_angle, default=0.0)
    p.add_argument("--chi-max", type=parse_angle, default=math.pi / 2)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--p", type=float, help="fix the input occupation instead of optimising")
    p.add_argument("--preset", choices=("fig4",))
    _add_output(p)
    p.set_defaults(func=cmd_n_use)

    p = sub.add_parser("coherence", help="I_c surface over occupation p and coherence r2")
    p.add_argument("--chi", type=parse_angle)
    p.add_argument("--mu", type=float)
    p.add_argument("--p-steps", type=int, default=51)
    p.add_argument("--r2-steps", type=int, default=51)
    p.add_argument("--preset", choices=("fig5",))
    _add_output(p)
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("verify", help="run the brute-force oracle checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.command == "verify":
            return cmd_verify(args)
        rows = args.func(args)
        emit(render(rows, args.format, _meta(args)), args.out)
    except UsageError as exc:
        print(f"adcmem: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"adcmem: consistency failure: {exc}", file=sys.stderr)
        return 1
    except AdcMemError as exc:
        print(f"adcmem: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
