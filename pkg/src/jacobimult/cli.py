"""Command-line front end.

Exit status: 0 on success, 1 for usage errors, 2 for numerical failures.
Settings resolve as: command-line flag, then ``--config`` file
(``key = value`` lines), then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from jacobimult import _backend
from jacobimult.experiments import (
    default_threads,
    run_boundedness_scan,
    run_convergence,
    run_divergence,
    run_l1_growth,
)
from jacobimult.jacobi import JacobiParams, orthonormal, orthonormal_derivative
from jacobimult.kernel import DiagonalCache, KernelSlice, kernel_quadrature, kernel_slice
from jacobimult.multiplier import MultiplierSpec, apply, default_n_out
from jacobimult.quadrature import DEFAULT_TOL, QuadratureError
from jacobimult.seq_ops import (
    ap_constant,
    hilbert_transform,
    parse_sequence,
    parse_weight,
    q_transform,
)

VERIFY_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CliConfig:
    alpha: float = 0.0
    beta: float = 0.0
    p: float = 2.0
    tol: float = DEFAULT_TOL
    n_trunc: int = 0
    format: str = "csv"
    output: str = ""
    threads: int = 1
    cache_dir: str = ""


def read_config_file(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def resolve_config(args) -> CliConfig:
    cfg = CliConfig(threads=default_threads())
    types = {f.name: f.type for f in fields(CliConfig)}
    casts = {"float": float, "int": int, "str": str}
    if args.config:
        for key, value in read_config_file(args.config).items():
            if key not in types:
                raise UsageError(f"unknown config key {key!r}")
            try:
                setattr(cfg, key, casts[types[key]](value))
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
    for name in types:
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {cfg.format!r}")
    return cfg


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _k_range(text):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return list(range(int(lo), int(hi) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k1..k2, got {text!r}")


def _intervals(text):
    out = []
    for item in text.split(","):
        a, sep, b = item.partition(":")
        try:
            if not sep:
                raise ValueError
            out.append((float(a), float(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a:b[,a:b...], got {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--output", "-o")
    common.add_argument("--threads", type=int)
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--config")

    parser = _Parser(prog="jacobimult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="orthonormal polynomial value")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--deriv", action="store_true")

    p = sub.add_parser("kernel", parents=[common], help="kernel entry or row")
    p.add_argument("--a", type=float, default=-1.0)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--row", type=int, metavar="N")
    p.add_argument("--method", choices=["closed", "quad"], default="closed")

    p = sub.add_parser("apply", parents=[common], help="apply T_[a,b] to a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--fast", action="store_true")
    p.add_argument("--verify", action="store_true", help="run both paths and compare")
    p.add_argument("--n-out", dest="n_trunc", type=int)

    p = sub.add_parser("converge", parents=[common], help="||T_r f - f||_p for r = 1 - 2^-k")
    p.add_argument("--seq", required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--r-grid", type=_k_range, required=True)
    p.add_argument("--n-out", dest="n_trunc", type=int)

    for name in ("diverge", "l1growth"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--m-list", type=_int_list, default=[16, 32, 64, 128, 256])

    p = sub.add_parser("scan", parents=[common], help="operator-norm quotient over intervals")
    p.add_argument("--p", type=float)
    p.add_argument("--grid", type=_intervals, required=True)
    p.add_argument("--seq", action="append")
    p.add_argument("--n-out", dest="n_trunc", type=int)

    p = sub.add_parser("apweight", parents=[common], help="discrete A_p constant")
    p.add_argument("--weight", required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("bench", parents=[common], help="fast vs naive timing table")
    p.add_argument("--op", choices=["hilbert", "q", "apply"], required=True)
    p.add_argument("--sizes", type=_int_list, default=[256, 1024, 4096])
    p.add_argument("--repeat", type=int, default=3)
    return parser


def _params(cfg):
    return JacobiParams(cfg.alpha, cfg.beta)


def _cache(cfg):
    return DiagonalCache(cfg.cache_dir) if cfg.cache_dir else None


def _emit(cfg, text):
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_sequence(cfg, seq, meta):
    if cfg.format == "json":
        _emit(cfg, json.dumps({**meta, "values": [float(v) for v in seq.values]}, indent=2) + "\n")
    else:
        head = "# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n"
        _emit(cfg, head + seq.to_csv())


def _emit_report(cfg, report):
    _emit(cfg, report.to_json() if cfg.format == "json" else report.to_csv())


def _timed(fn, repeat):
    best = float("inf")
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_eval(args, cfg):
    fn = orthonormal_derivative if args.deriv else orthonormal
    _emit(cfg, repr(fn(_params(cfg), args.n, args.x)) + "\n")


def cmd_kernel(args, cfg):
    params = _params(cfg)
    if args.n is not None:
        if args.method == "quad":
            value = kernel_quadrature(params, args.a, args.b, args.m, args.n, cfg.tol)
        else:
            value = kernel_slice(params, args.a, args.b, args.m, max(args.m, args.n) + 1,
                                 cfg.tol, _cache(cfg)).values[args.n]
        _emit(cfg, repr(float(value)) + "\n")
        return
    if args.method == "quad":
        values = np.array([kernel_quadrature(params, args.a, args.b, args.m, n, cfg.tol)
                           for n in range(args.row)])
        ks = KernelSlice(params, args.m, (args.a, args.b), values)
    else:
        ks = kernel_slice(params, args.a, args.b, args.m, args.row, cfg.tol, _cache(cfg))
    _emit(cfg, ks.to_csv())


def cmd_apply(args, cfg):
    params = _params(cfg)
    f = parse_sequence(args.seq)
    n_out = cfg.n_trunc or default_n_out(f)
    spec = MultiplierSpec(params, args.a, args.b, n_out, f.trunc)
    cache = _cache(cfg)
    out = apply(spec, f, args.fast, cfg.tol, cache)
    if args.verify:
        other = apply(spec, f, not args.fast, cfg.tol, cache)
        gap = float(np.max(np.abs(out.values - other.values)))
        if gap > VERIFY_TOL:
            raise FloatingPointError(f"fast and direct paths differ by {gap:.3e}")
    meta = {"alpha": params.alpha, "beta": params.beta, "a": args.a, "b": args.b,
            "n_in": f.trunc, "n_out": n_out, "method": "fast" if args.fast else "direct"}
    _emit_sequence(cfg, out, meta)


def cmd_converge(args, cfg):
    f = parse_sequence(args.seq)
    r_list = [1.0 - 2.0 ** -k for k in args.r_grid]
    report = run_convergence(_params(cfg), f, cfg.p, r_list, cfg.n_trunc or None,
                             tol=cfg.tol, threads=cfg.threads, cache=_cache(cfg))
    _emit_report(cfg, report)


def cmd_diverge(args, cfg):
    _emit_report(cfg, run_divergence(_params(cfg), args.m_list, threads=cfg.threads))


def cmd_l1growth(args, cfg):
    _emit_report(cfg, run_l1_growth(_params(cfg), args.m_list, cfg.tol, cfg.threads, _cache(cfg)))


def cmd_scan(args, cfg):
    specs = args.seq or [f"delta:{k}" for k in range(8)] + ["const:1:16"]
    family = [parse_sequence(s) for s in specs]
    report = run_boundedness_scan(_params(cfg), cfg.p, args.grid, family, cfg.n_trunc or None,
                                  tol=cfg.tol, threads=cfg.threads, cache=_cache(cfg))
    report.meta["family"] = ";".join(specs)
    _emit_report(cfg, report)


def cmd_apweight(args, cfg):
    w = parse_weight(args.weight, args.N)
    value = ap_constant(w, cfg.p, args.N)
    if cfg.format == "json":
        _emit(cfg, json.dumps({"weight": w.tag, "p": cfg.p, "N": args.N, "ap_constant": value}) + "\n")
    else:
        _emit(cfg, f"weight,p,N,ap_constant\n{w.tag},{cfg.p!r},{args.N},{value:.17g}\n")


def cmd_bench(args, cfg):
    rng = np.random.default_rng(0)
    rows = []
    params = _params(cfg)
    for n in args.sizes:
        f = rng.standard_normal(n)
        if args.op == "hilbert":
            naive = lambda: hilbert_transform(f, "naive")
            fast = lambda: hilbert_transform(f, "fast")
        elif args.op == "q":
            naive = lambda: q_transform(f, params.s, "naive")
            fast = lambda: q_transform(f, params.s, "fast")
        else:
            spec = MultiplierSpec(params, -1.0, 0.5, n, n)
            cache = DiagonalCache()
            apply(spec, f, True, cfg.tol, cache)  # warm the diagonal
            naive = lambda: apply(spec, f, False, cfg.tol, cache)
            fast = lambda: apply(spec, f, True, cfg.tol, cache)
        rows.append((n, _timed(naive, args.repeat), _timed(fast, args.repeat)))
    lines = [f"# op={args.op} backend={_backend.NAME} repeat={args.repeat}", "size,naive_s,fast_s,speedup"]
    lines += [f"{n},{a:.6g},{b:.6g},{a / b:.4g}" for n, a, b in rows]
    _emit(cfg, "\n".join(lines) + "\n")


COMMANDS = {
    "eval": cmd_eval, "kernel": cmd_kernel, "apply": cmd_apply, "converge": cmd_converge,
    "diverge": cmd_diverge, "l1growth": cmd_l1growth, "scan": cmd_scan,
    "apweight": cmd_apweight, "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError) as exc:
        print(f"jacobimult: error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"jacobimult: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
