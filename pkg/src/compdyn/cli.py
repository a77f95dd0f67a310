"""Command-line front end.

Results go to standard output (or the --out file); logs go to standard error.
Exit status: 0 on success or a converged enclosure, 2 when an entropy budget
ran out before convergence, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .core.oracles import ComplexOracle, RealOracle, affine_oracle, named_real, oracle_from_rational
from .errors import CompDynError

log = logging.getLogger("compdyn")

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


# ---------------------------------------------------------------- value parsing

def parse_real(text: str) -> RealOracle:
    """A rational ("1/3", "-0.25", "1e-3") or a named constant ("golden", "-sqrt2")."""
    text = text.strip()
    try:
        return oracle_from_rational(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    neg = text.startswith("-")
    x = named_real(text.lstrip("+-"))
    return affine_oracle(x, -1, 0) if neg else x


def parse_complex(text: str) -> ComplexOracle:
    """``re`` or ``re,im`` with each part as in parse_real."""
    parts = text.split(",")
    if len(parts) > 2:
        raise ValueError(f"bad complex value {text!r}; use re or re,im")
    re = parse_real(parts[0])
    im = parse_real(parts[1]) if len(parts) == 2 else oracle_from_rational(0)
    return ComplexOracle.from_reals(re, im)


def parse_point(text: str) -> complex:
    x, y = parse_complex(text)(60)
    return complex(float(x), float(y))


def build_poly(args):
    from .julia import PolySpec

    terms = {}
    if args.c is not None:
        terms[0] = parse_complex(args.c)
    for item in args.coeff or []:
        k, _, v = item.partition(":")
        if not _:
            raise ValueError(f"--coeff expects power:value, got {item!r}")
        terms[int(k)] = parse_complex(v)
    return PolySpec.from_dict(args.degree, terms)


# ---------------------------------------------------------------- output

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(args, text: str | bytes, suffix: str = ""):
    out = getattr(args, "out", None)
    if out:
        path = Path(out + suffix) if suffix else Path(out)
        if isinstance(text, bytes):
            path.write_bytes(text)
        else:
            path.write_text(text)
        log.info("wrote %s", path)
    else:
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
        else:
            sys.stdout.write(text)


def _p(args, default: int) -> int:
    p = args.p if args.p is not None else default
    if not 1 <= p <= 60:
        raise ValueError("--p must lie in 1..60")
    return p


def _positive(name: str, value):
    if value is None or value <= 0:
        raise ValueError(f"{name} must be positive")
    return value


# ---------------------------------------------------------------- commands

def cmd_entropy(args) -> int:
    from .shifts import (CONVERGED, ForbiddenSetSFT, GeneratingSet, LabeledGraph, TransitionMatrix,
                         coded_sofic_approximation, entropy_coded, entropy_sft, entropy_sofic,
                         presentation_from_json, sofic_word_counter)

    text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"{args.input}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    X = presentation_from_json(data)
    p = _p(args, 20)
    if isinstance(X, (ForbiddenSetSFT, TransitionMatrix)):
        res = entropy_sft(X, p)
    elif isinstance(X, LabeledGraph):
        res = entropy_sofic(X, p)
    elif isinstance(X, GeneratingSet):
        L = sofic_word_counter(coded_sofic_approximation(X, len(X.generators)))
        res = entropy_coded(X, L, p, _positive("--max-m", args.max_m), _positive("--max-n", args.max_n))
    else:                                     # pragma: no cover - presentation_from_json is exhaustive
        raise ValueError("unsupported presentation")
    if args.bits:
        res = res.in_bits()
    out = res.to_json()
    out["nats"] = not args.bits
    _emit(args, _dump(out))
    unit = "bits" if args.bits else "nats"
    print(f"h_top in [{float(res.lo):.10f}, {float(res.hi):.10f}] {unit} ({res.status})", file=sys.stderr)
    return EXIT_OK if res.status == CONVERGED else EXIT_BUDGET


def cmd_julia(args) -> int:
    from .julia import filled_julia_approx

    f = build_poly(args)
    grid = filled_julia_approx(f, args.resolution, _positive("--max-iter", args.max_iter))
    prefix = args.out or "julia"
    Path(prefix + ".pgm").write_bytes(grid.to_pgm())
    Path(prefix + ".json").write_text(grid.sidecar_json())
    log.info("wrote %s.pgm and %s.json", prefix, prefix)
    c = grid.counts()
    print(f"{grid.size}x{grid.size} boxes: {c['escaping']} escaping, {c['unknown']} unknown, "
          f"{c['interior']} interior", file=sys.stderr)
    return EXIT_OK


def _load_measure(spec: str, p: int):
    from .measures import DiscreteMeasure, parse_reference

    path = Path(spec)
    if path.exists():
        return DiscreteMeasure.from_json(path.read_text())
    return parse_reference(spec, p)


def cmd_blmeasure(args) -> int:
    from .julia import bl_measure_approx
    from .measures import wasserstein1

    f = build_poly(args)
    z0 = parse_point(args.z0) if args.z0 is not None else None
    sampling = "monte_carlo" if args.sampling in ("monte_carlo", "mc") else args.sampling
    res = bl_measure_approx(f, z0, _positive("--depth", args.depth), args.tol, sampling,
                            _positive("--paths", args.paths), args.seed)
    out = res.to_json()
    if args.compare:
        p = _p(args, 53)
        ref = _load_measure(args.compare, p)
        plan = wasserstein1(res.measure, ref.with_metric(res.measure.metric), p=p)
        out["compare"] = {"reference": args.compare, "w1": float(plan.cost), "w1_exact": str(plan.cost),
                          "error": str(plan.error), "method": plan.method}
        print(f"W1 = {float(plan.cost):.6g} (+- {float(plan.error):.3g})", file=sys.stderr)
    _emit(args, _dump(out))
    return EXIT_OK


def _make_map(args):
    from .metric import make_map

    alpha = parse_real(args.alpha) if args.alpha is not None else None
    table = None
    if args.map == "table":
        if not args.table:
            raise ValueError("--table FILE is required for the table map")
        table = [Fraction(v) for v in json.loads(Path(args.table).read_text())]
    return make_map(args.map, alpha=alpha, table=table)


def _start(args) -> Fraction:
    """--x0, or a seeded point with N + 64 random binary digits (its doubling orbit
    stays aperiodic for the whole run)."""
    from .metric import pseudo_random_point

    if args.x0 is not None:
        return Fraction(args.x0)
    return pseudo_random_point(args.seed, getattr(args, "N", 0) + 64)


def cmd_orbit(args) -> int:
    f = _make_map(args)
    orb = f.orbit(_start(args), _positive("-N", args.N))
    _emit(args, orb.to_csv())
    return EXIT_OK


def cmd_separated(args) -> int:
    from .metric import entropy_from_separation, separated_count

    f = _make_map(args)
    eps = Fraction(args.eps)
    rep = separated_count(f, _positive("-n", args.n), eps, args.grid, args.method)
    out = rep.to_json()
    if args.entropy:
        out["entropy"] = entropy_from_separation(f, eps, args.n, args.grid).to_json()
    _emit(args, _dump(out))
    print(f"(n={args.n}, eps={eps})-separated: {rep.count} points", file=sys.stderr)
    return EXIT_OK


def cmd_katok(args) -> int:
    from .errors import ZeroHits
    from .metric import katok_brin_estimate

    f = _make_map(args)
    x0 = _start(args)
    orb = f.orbit(x0, _positive("-N", args.N))
    try:
        est = katok_brin_estimate(orb, Fraction(args.eps), args.n, args.method)
        out = est.to_json()
    except ZeroHits as e:
        out = {"value": None, "lower_bound": e.bound, "hits_n": 0, "n": args.n, "method": args.method}
    if args.x0 is not None:
        out["x0"] = str(x0)
    else:
        out["x0"] = {"seed": args.seed, "random_bits": args.N + 64, "approx": float(x0)}
    out["eps"] = str(Fraction(args.eps))
    out["N"] = args.N
    if args.bits and out.get("value") is not None:
        import math
        out["value"] = out["value"] / math.log(2)
    out["nats"] = not args.bits
    _emit(args, _dump(out))
    return EXIT_OK


def cmd_wasserstein(args) -> int:
    from .measures import wasserstein1

    p = _p(args, 53)
    mu = _load_measure(args.mu, p)
    nu = _load_measure(args.nu, p)
    metric = args.metric or mu.metric
    plan = wasserstein1(mu.with_metric(metric), nu.with_metric(metric), metric, p=p, method=args.method)
    out = plan.to_json()
    out["metric"] = metric
    _emit(args, _dump(out))
    print(f"W1 = {float(plan.cost):.10g} (+- {float(plan.error):.3g}, {plan.method})", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .julia import classify_periodic

    f = build_poly(args)
    reps = classify_periodic(f, _positive("-k", args.k), args.tol, args.prec)
    _emit(args, _dump({"polynomial": f.to_json(), "period": args.k, "points": [r.to_json() for r in reps]}))
    for r in reps:
        print(f"{r.center:.12g}  multiplier {r.multiplier.mid_complex():.6g}  {r.cls}", file=sys.stderr)
    return EXIT_OK


def cmd_bryuno(args) -> int:
    from .julia import bryuno_partial_sums

    res = bryuno_partial_sums(parse_real(args.theta), _positive("-m", args.m))
    _emit(args, _dump(res.to_json()))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _poly_args(sp):
    sp.add_argument("--c", help="constant term: re or re,im; rationals or named constants")
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--coeff", action="append", metavar="K:VALUE", help="coefficient of z^K (repeatable)")


def _map_args(sp):
    sp.add_argument("--map", choices=["doubling", "rotation", "table"], default="doubling")
    sp.add_argument("--alpha", help="rotation number (rational or named constant)")
    sp.add_argument("--table", help="JSON list of K+1 node values for the table map")
    sp.add_argument("--x0", help="starting point (rational); default: pseudo-random from --seed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="precision exponent (target width 2^-p)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")
    common.add_argument("--bits", action="store_true", help="report entropies in bits instead of nats")
    common.add_argument("--out", help="output file (julia: file prefix)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="compdyn", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("entropy", parents=[common], help="topological entropy of a shift presentation")
    sp.add_argument("input", help="presentation JSON file ('-' for stdin)")
    sp.add_argument("--max-m", type=int, default=64)
    sp.add_argument("--max-n", type=int, default=4096)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("julia", parents=[common], help="box approximation of a filled Julia set (PGM + JSON)")
    _poly_args(sp)
    sp.add_argument("-r", "--resolution", type=int, default=8)
    sp.add_argument("--max-iter", type=int, default=64)
    sp.set_defaults(func=cmd_julia)

    sp = sub.add_parser("blmeasure", parents=[common], help="backward-orbit approximation of the balanced measure")
    _poly_args(sp)
    sp.add_argument("--z0", help="root of the preimage tree (default R + 1)")
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--sampling", choices=["full", "monte_carlo", "mc"], default="full")
    sp.add_argument("--paths", type=int, default=1 << 14)
    sp.add_argument("--compare", help="reference measure: JSON file or e.g. uniform-circle(4096)")
    sp.set_defaults(func=cmd_blmeasure)

    sp = sub.add_parser("orbit", parents=[common], help="orbit CSV with columns index,point")
    _map_args(sp)
    sp.add_argument("-N", type=int, default=1000)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("separated", parents=[common], help="greedy (n, eps)-separated set on a dyadic grid")
    _map_args(sp)
    sp.add_argument("-n", type=int, default=4)
    sp.add_argument("--eps", default="1/4")
    sp.add_argument("--grid", type=int, default=12, help="grid exponent: points j / 2^grid")
    sp.add_argument("--method", choices=["auto", "generic"], default="auto")
    sp.add_argument("--entropy", action="store_true", help="also report h_k = min_j log F_j / j for k <= n")
    sp.set_defaults(func=cmd_separated)

    sp = sub.add_parser("katok", parents=[common], help="Katok-Brin local entropy estimate along an orbit")
    _map_args(sp)
    sp.add_argument("-N", type=int, default=1_000_000)
    sp.add_argument("-n", type=int, default=12)
    sp.add_argument("--eps", default="1/64")
    sp.add_argument("--method", choices=["ratio", "direct"], default="ratio")
    sp.set_defaults(func=cmd_katok)

    sp = sub.add_parser("wasserstein", parents=[common], help="W1 distance between two discrete measures")
    sp.add_argument("mu", help="measure JSON file or reference such as uniform-circle(64)")
    sp.add_argument("nu")
    sp.add_argument("--metric", choices=["planar", "spherical", "circle"])
    sp.add_argument("--method", choices=["auto", "exact", "circle", "assignment", "lp"], default="auto")
    sp.set_defaults(func=cmd_wasserstein)

    sp = sub.add_parser("classify-periodic", parents=[common], help="periodic points and multipliers")
    _poly_args(sp)
    sp.add_argument("-k", type=int, default=1, help="period")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--prec", type=int, default=53, help="working precision in bits")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("bryuno", parents=[common], help="continued-fraction denominators and Bryuno partial sums")
    sp.add_argument("theta", help="rotation number in (0, 1): rational or named constant")
    sp.add_argument("-m", type=int, default=10)
    sp.set_defaults(func=cmd_bryuno)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (CompDynError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
