"""Command line front end.

Every subcommand builds a JSON document first; the text printed to stdout is
rendered from that document.  Output files are written to a temporary name
and renamed into place.

Exit codes: 0 success, 1 a check found a violation, 2 malformed input,
3 a check was inconclusive.
"""
import argparse
import json
import sys

import numpy as np

from . import fock, metric, series, transforms
from .errors import CapExceeded, InputError, NcballError
from .opcore import matrix_from_json, matrix_to_json, tuple_from_json, tuple_to_json
from .verify import PROFILES, TrialConfig, check, check_ids, consolidated, env_seed, exit_code
from .verify.config import trial_rng
from .verify.generators import herglotz_series, matrix_contraction
from .verify.report import dumps
from .verify.runner import _write_atomic

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
EXPORT_CAP = 4096


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(doc, out, text):
    if out:
        _write_atomic(out, dumps(doc))
    print(text)


def _cplx(s):
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"cannot parse {s!r} as a complex number") from exc


def _vector(text):
    """Comma-separated complex numbers, or a JSON list of numbers / [re, im] pairs."""
    text = text.strip()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad vector {text!r}: {exc}") from exc
        return np.array([complex(*z) if isinstance(z, list) else complex(z) for z in raw])
    return np.array([_cplx(p) for p in text.split(",") if p])


def _fmt(z):
    z = complex(z)
    return f"{z.real:.6g}" if z.imag == 0 else f"{z.real:.6g}{z.imag:+.6g}j"


def _matrix_text(M):
    return "\n".join("  " + "  ".join(_fmt(z) for z in r) for r in np.asarray(M))


# check

def _check_config(args):
    seed = args.seed if args.seed is not None else env_seed()
    return TrialConfig.from_profile(
        args.profile, seed=seed, trials=args.trials, n=args.n, m=args.m, d_H=args.d_H,
        coeff_dim=args.coeff_dim, degree=args.degree, fock_degree=args.fock_degree,
        metric_degree=args.metric_degree, tolerance=args.tol, schur_mode=args.schur_mode,
        herglotz_mode=args.herglotz_mode, filter_samples=args.filter_samples)


def cmd_check(args):
    cfg = _check_config(args)
    if args.jobs < 1:
        raise InputError("--jobs must be >= 1")
    if args.id == "all":
        ids = check_ids()
    elif args.id in check_ids():
        ids = [args.id]
    else:
        raise InputError(f"unknown check {args.id!r}; known: all, {', '.join(check_ids())}")
    print("config: " + json.dumps(cfg.to_json(), sort_keys=True))
    reports = [check(c, cfg, args.jobs, args.artifacts) for c in ids]
    doc = consolidated(reports, cfg) if args.id == "all" else reports[0].to_json()
    lines = [r.line() for r in reports]
    if args.id == "all":
        lines.append(f"overall: {doc['status']}")
    _emit(doc, args.json, "\n".join(lines))
    return exit_code(reports)


# eval

def cmd_eval(args):
    F = series.FreeSeries.from_json(_load(args.series))
    X = tuple_from_json(_load(args.point))
    val = series.eval_point(F, X)
    doc = {"series": args.series, "point": args.point, "value": matrix_to_json(val)}
    _emit(doc, args.out, f"F(X) ({val.shape[0]} x {val.shape[1]}):\n" + _matrix_text(val))
    return EXIT_OK


# metric

def cmd_metric(args):
    X = tuple_from_json(_load(args.x))
    Y = tuple_from_json(_load(args.y))
    n = X.shape[0]
    D = args.degree if args.degree is not None else metric.default_metric_degree(n, args.method)
    if D < 0:
        raise InputError("--degree must be >= 0")
    omega, delta, d = metric.omega_delta_d(X, Y, D, method=args.method)
    if args.ladder:
        degrees = [int(s) for s in args.ladder.split(",") if s]
    else:
        degrees = sorted({max(D // 8, 1), max(D // 4, 1), max(D // 2, 1), D})
    ladder = [{"degree": k, "omega": o, "delta": de, "d": dd}
              for k, o, de, dd in metric.convergence_ladder(X, Y, degrees, args.method)]
    doc = {"config": {"x": args.x, "y": args.y, "degree": D, "method": args.method},
           "omega": omega, "delta": delta, "d": d, "ladder": ladder}
    lines = [f"omega = {omega:.15g}", f"delta = {delta:.15g}", f"d = {d:.15g}",
             "ladder (degree, d):"]
    lines += [f"  {r['degree']:6d}  {r['d']:.15g}" for r in ladder]
    _emit(doc, args.out, "\n".join(lines))
    return EXIT_OK


# transform

def cmd_transform(args):
    if args.kind == "frac":
        if args.a is None:
            raise InputError("transform frac needs --a A.json")
        A = matrix_from_json(_load(args.a))
        B = matrix_from_json(_load(args.input))
        out = transforms.frac_point(A, B)
        doc = {"kind": "frac", "A": matrix_to_json(A), "value": matrix_to_json(out)}
        text = "Psi_A(B):\n" + _matrix_text(out)
    else:
        if args.spec is not None:
            spec = transforms.AutomorphismSpec.from_json(_load(args.spec))
        elif args.lam is not None:
            U = matrix_from_json(_load(args.unitary)) if args.unitary else None
            spec = transforms.AutomorphismSpec.make(_vector(args.lam), U)
        else:
            raise InputError("transform auto needs --lambda or --spec")
        X = tuple_from_json(_load(args.input))
        out = transforms.auto_point(spec, X)
        doc = {"kind": "auto", "spec": spec.to_json(), "value": tuple_to_json(out)}
        text = "\n".join(f"Phi(X)_{i + 1}:\n" + _matrix_text(B) for i, B in enumerate(out))
    _emit(doc, args.out, text)
    return EXIT_OK


# synth

def cmd_synth(args):
    seed = args.seed if args.seed is not None else env_seed()
    if seed < 0:
        raise InputError("--seed must be >= 0")
    if min(args.n, args.e, args.degree) < 1:
        raise InputError("--n, --e and --degree must be >= 1")
    rng = trial_rng(seed, f"synth_{args.kind}", 0)
    G = herglotz_series(rng, args.n, args.e, args.degree, mode=args.mode)
    if args.kind == "herglotz":
        S = G
    else:
        if not 0.0 <= args.a0_norm < 1.0:
            raise InputError("--a0-norm must lie in [0, 1)")
        A0 = matrix_contraction(rng, args.e, args.e, args.a0_norm)
        S = series.synth_schur(A0, G, args.d_cap if args.d_cap is not None else 2 * args.degree)
    doc = dict(S.to_json(), config={"kind": args.kind, "seed": seed, "n": args.n, "e": args.e,
                                    "degree": args.degree, "mode": args.mode})
    text = (f"{args.kind} series: n={S.n} shape={S.rows}x{S.cols} terms={len(S.terms)} "
            f"degree={S.degree} seed={seed}")
    if not args.out:
        text += "\n" + dumps(doc).rstrip()
    _emit(doc, args.out, text)
    return EXIT_OK


# fock

def cmd_fock(args):
    if args.n < 1 or args.degree < 0:
        raise InputError("--n must be >= 1 and --degree >= 0")
    model = fock.build_model(args.n, args.degree, cap=args.cap)
    mem = model.memory_estimate()
    doc = {"n": model.n, "d": model.d, "dim": model.dim, "memory": mem}
    if args.export:
        if model.dim > EXPORT_CAP:
            raise CapExceeded(f"dim {model.dim} exceeds the export cap {EXPORT_CAP}")
        ops = model.R if args.right else model.S
        _write_atomic(args.export, dumps(tuple_to_json(np.stack([M.toarray() for M in ops]))))
        doc["export"] = args.export
    text = (f"n = {model.n}\nd = {model.d}\ndim = {model.dim}\n"
            f"memory: sparse {mem['sparse_bytes']} bytes, dense {mem['dense_bytes']} bytes")
    _emit(doc, args.out, text)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="ncball", description="Free holomorphic functions on the "
                                           "noncommutative unit ball.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run seeded checks")
    c.add_argument("id", help="check id or 'all'")
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int, help="default: NCBALL_SEED or the built-in seed")
    c.add_argument("--tol", type=float)
    c.add_argument("--json", metavar="PATH", help="write the JSON report here")
    c.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--artifacts", metavar="DIR", help="save counterexample instances here")
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--d-H", dest="d_H", type=int)
    c.add_argument("--coeff-dim", type=int)
    c.add_argument("--degree", type=int)
    c.add_argument("--fock-degree", type=int)
    c.add_argument("--metric-degree", type=int)
    c.add_argument("--schur-mode", choices=["certified", "estimated"])
    c.add_argument("--herglotz-mode", choices=["structure", "cayley", "filter"])
    c.add_argument("--filter-samples", type=int)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("eval", help="evaluate a series at a tuple")
    e.add_argument("--series", required=True)
    e.add_argument("--point", required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("metric", help="pseudohyperbolic distance of two strict row contractions")
    m.add_argument("--x", required=True)
    m.add_argument("--y", required=True)
    m.add_argument("--degree", type=int)
    m.add_argument("--method", choices=list(metric.METHODS), default="tree")
    m.add_argument("--ladder", help="comma-separated degrees")
    m.add_argument("--out")
    m.set_defaults(func=cmd_metric)

    t = sub.add_parser("transform", help="fractional transform or ball automorphism")
    t.add_argument("kind", choices=["frac", "auto"])
    t.add_argument("--input", required=True)
    t.add_argument("--a", help="matrix JSON for frac")
    t.add_argument("--lambda", dest="lam", help="e.g. '0.3,0.1+0.2j'")
    t.add_argument("--unitary", help="matrix JSON")
    t.add_argument("--spec", help="automorphism JSON {lambda, U}")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    s = sub.add_parser("synth", help="random Herglotz or Schur series from the structure theorems")
    s.add_argument("kind", choices=["herglotz", "schur"])
    s.add_argument("--seed", type=int)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--e", type=int, default=1, help="coefficient dimension")
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--mode", choices=["structure", "cayley"], default="structure")
    s.add_argument("--a0-norm", type=float, default=0.5)
    s.add_argument("--d-cap", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    f = sub.add_parser("fock", help="truncated Fock model sizes and matrices")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--degree", type=int, required=True)
    f.add_argument("--cap", type=int, default=fock.DEFAULT_CAP)
    f.add_argument("--export", metavar="PATH", help="write S_1..S_n as tuple JSON")
    f.add_argument("--right", action="store_true", help="export R_i instead of S_i")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fock)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NcballError as exc:
        # numerical preconditions on user-supplied data (e.g. not a strict contraction)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
