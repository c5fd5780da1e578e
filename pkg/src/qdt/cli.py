"""Command-line entry point: ``qdt compute ...`` and ``qdt verify ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or an
infeasible request (budget exceeded, undefined invariant).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import abelian, wallcross
from .abelian import DEFAULT_BUDGET, BudgetExceeded
from .exactalg import RatFunc
from .qtorus import RaySymmetryError, stack_invariant
from .quiver import Quiver, covering_quiver
from .stability import DeformationError, Stability

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv_ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _load_quiver(path: Optional[str]) -> Quiver:
    if path is None:
        raise UsageError("--quiver is required")
    try:
        with open(path) as fh:
            return Quiver.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read quiver {path}: {exc}") from None


def _load_stability(source: str, Q: Quiver) -> Stability:
    if source == "trivial":
        return Stability.trivial(Q.n)
    try:
        with open(source) as fh:
            return Stability.from_json(json.load(fh), Q)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read stability {source}: {exc}") from None


def _alpha(args, Q: Quiver, required: bool = True) -> Optional[tuple]:
    if args.alpha is None:
        if required:
            raise UsageError("--alpha is required")
        return None
    try:
        alpha = Q.dim(args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(a < 0 for a in alpha) or not any(alpha):
        raise UsageError("--alpha must be a nonzero vector of nonnegative integers")
    return alpha


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


# --- compute -------------------------------------------------------------------------

def cmd_compute(args) -> int:
    Q = _load_quiver(args.quiver)
    Z = _load_stability(args.stability, Q)
    kind = args.kind
    alpha = _alpha(args, Q, required=kind in ("f", "g", "stack", "b-tree"))
    if kind == "f":
        value = abelian.f_enum(Q, alpha, Z, budget=args.budget)
    elif kind == "g":
        value = wallcross.abelian_g(Q, Z, alpha, budget=args.budget)
    elif kind == "stack":
        value = stack_invariant(Q, alpha)
    elif kind == "b-tree":
        if not Q.is_symmetric():
            raise UsageError("b-tree needs a symmetric quiver")
        value = abelian.b_tree_formula(Q.r, alpha)
    elif kind in ("a", "tutte"):
        target, Zt = Q, Z
        if alpha is not None:
            target, proj = covering_quiver(Q, alpha)
            Zt = Z.pullback(Q.unit(i) for i in proj)
        if kind == "a":
            value = RatFunc(abelian.a_direct(target, Zt, budget=args.budget))
        else:
            use_z = None if args.stability == "trivial" else Zt
            poly = abelian.tutte(target, use_z, budget=args.budget)
            text = abelian.format_bivariate(poly)
            payload = {"kind": kind, "value": text, "coefficients": {f"{i},{j}": c for (i, j), c in poly.items()}}
            _emit(args, payload, text)
            return EXIT_OK
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown invariant {kind}")
    payload = {"kind": kind, "value": str(value)}
    if alpha is not None:
        payload["alpha"] = list(alpha)
    _emit(args, payload, str(value))
    return EXIT_OK


# --- verify --------------------------------------------------------------------------

def _report_exit(args, reports) -> int:
    ok = all(r.ok for r in reports)
    if args.format == "json":
        print(json.dumps({"ok": ok, "reports": [r.to_json(args.timing) for r in reports]}, sort_keys=True))
    else:
        for r in reports:
            print(r.summary(args.timing))
        print("pass" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def _gw_report(n: int) -> wallcross.VerificationReport:
    start = time.perf_counter()
    report = wallcross.VerificationReport(f"Gessel-Wang bijection on {n} nodes")
    graphs = abelian.connected_graphs(n)
    for G in graphs:
        T, J = abelian.gessel_wang_forward(n, G)
        report.record(("graph", tuple(sorted(G))), abelian.gessel_wang_backward(T, J), G)
    total = 0
    for T in abelian.labeled_trees(n):
        inv = abelian.inversions(T)
        total += 2 ** len(inv)
        for bits in range(1 << len(inv)):
            J = tuple(p for k, p in enumerate(inv) if bits >> k & 1)
            G = abelian.gessel_wang_backward(T, J)
            report.record(("tree", T.parent, J), abelian.gessel_wang_forward(n, G), (T, J))
    report.record("count", len(graphs), total)
    report.details["connected graphs"] = len(graphs)
    report.seconds = time.perf_counter() - start
    return report


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "gw":
        return _report_exit(args, [_gw_report(args.nodes)])
    if suite == "mps-ks":
        trunc = args.trunc or (2, 2)
        if len(trunc) != 2:
            raise UsageError("--trunc takes two bounds A,B")
        res = wallcross.ks_to_mps_rank2(args.k, {(1, 0): 1, (0, 1): 1}, trunc, budget=args.budget)
        return _report_exit(args, [res.report])
    Q = _load_quiver(args.quiver)
    Z = _load_stability(args.stability, Q)
    if suite == "wallcross":
        return _report_exit(args, [wallcross.verify_abelian_wallcross(Q, Z, args.max_total, args.budget)])
    if suite == "exp-formula":
        reports = [wallcross.verify_exponential_formula(Q, Z, q0, args.max_total, args.budget) for q0 in args.primes]
        return _report_exit(args, reports)
    alpha = _alpha(args, Q)
    if suite == "geometric":
        rep = wallcross.verify_geometricity(Q, Z, alpha, args.primes, args.seed, args.budget)
        return _report_exit(args, [rep])
    if suite == "degeneration":
        rep = wallcross.verify_mps_degeneration(Q, Z, alpha, not args.no_sign_twist, args.budget)
        return _report_exit(args, [rep])
    raise UsageError(f"unknown suite {suite}")  # pragma: no cover


# --- parser --------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quiver", help="quiver JSON file")
    p.add_argument("--stability", default="trivial", help="stability JSON file or 'trivial'")
    p.add_argument("--alpha", type=_csv_ints, help="dimension vector in vertex order, e.g. 2,1")
    p.add_argument("--seed", type=int, default=0, help="seed for the generic deformation")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="maximum enumeration size")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdt", description="Exact abelian quiver invariants and wall-crossing checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="compute an invariant")
    pc.add_argument("kind", choices=("f", "g", "a", "tutte", "stack", "b-tree"))
    _common(pc)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=("wallcross", "geometric", "mps-ks", "degeneration", "gw", "exp-formula"))
    _common(pv)
    pv.add_argument("--max-total", type=_positive, default=4, help="total-degree truncation")
    pv.add_argument("--trunc", type=_csv_ints, help="box truncation A,B for mps-ks")
    pv.add_argument("--k", type=int, default=1, help="skew pairing <e1,e2> for mps-ks")
    pv.add_argument("--nodes", type=_positive, default=4, help="node count for gw")
    pv.add_argument("--primes", type=_csv_ints, default=(2, 3, 4, 5), help="field sizes q0")
    pv.add_argument("--timing", action="store_true", help="include wall-clock times in the report")
    pv.add_argument("--no-sign-twist", action="store_true", help="use the level factors without (-1)^(l-1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_verify(args)
    except RaySymmetryError as exc:
        a, b = exc.pair
        print(f"error: ray symmetry fails for the pair alpha={a}, beta={b}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}; raise --budget to proceed", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DeformationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
