"""Command-line front end.

Every subcommand prints a JSON summary on stdout and, with ``--out DIR``,
writes its artifacts there.  Exit status is 0 when every check passed, 1 when
a check failed and 2 on an error (bad input, I/O, caps).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import serialize as ser
from .bounds import bounds_report, face_count_lower_bound, ngon_face_count, permutahedron_face_count
from .errors import InvalidInput, PolyextError
from .extension import build_extension, check_projection_inclusion, lift_vertex
from .folding import build_polygon_factorization, fold_count
from .network import batcher_network
from .permfold import build_permutahedron_factorization
from .polytope import (
    Permutahedron,
    make_grid_parabola_polygon,
    make_regular_ngon,
    permutahedron_hrep,
    permutahedron_vertices,
    polygon_to_hrep,
)
from .rounding import (
    bounding_box,
    check_coefficient_bounds,
    compute_delta,
    prepare_rounded_system,
    rounding_error_ok,
    verify_recovery,
)
from .scalars import RATIONAL
from .slack import (
    NonnegFactorization,
    SlackMatrix,
    check_norm_bound,
    normalize_pair,
    prune_zero_components,
    slack_matrix,
    trivial_factorization,
    verify_factorization,
)

FULL_CHECK_CAP = 2 * 10**7


class Run:
    """Collects artifacts and check outcomes for one subcommand."""

    def __init__(self, out: str | None):
        self.out = Path(out) if out else None
        self.summary: dict = {}
        self.checks: dict[str, bool] = {}

    def write(self, name: str, obj):
        if self.out is not None:
            self.out.mkdir(parents=True, exist_ok=True)
            (self.out / name).write_text(ser.dumps(obj))

    def check(self, name: str, ok: bool):
        self.checks[name] = bool(ok)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def finish(self) -> dict:
        return {**self.summary, "checks": self.checks, "pass": self.ok}


def _verify(run: Run, S, F, args):
    m, n = S.shape
    sample = args.sample
    if sample is None and S.mode != RATIONAL and m * n > FULL_CHECK_CAP:
        sample = 10**6
    rep = verify_factorization(S, F, args.tol, sample=sample, seed=args.seed)
    run.write("verification.json", rep.to_json())
    run.check("factorization", rep.passed)
    run.summary["max_residual"] = rep.to_json()["max_residual"]
    run.summary["entries_checked"] = rep.entries_checked
    run.check("norm_bound", check_norm_bound(normalize_pair(prune_zero_components(F))))
    return rep


def _extension(run: Run, H, F, vertices, limit: int, n: int):
    if n > limit:
        run.summary["projection"] = "skipped"
        return
    Q = build_extension(H, F)
    run.write("extension.json", ser.extension_to_json(Q))
    for j in range(len(vertices)):
        lift_vertex(j, F, H, vertices)
    run.check("lifts", True)
    rep = check_projection_inclusion(Q, H)
    run.write("projection.json", rep.to_json())
    run.check("projection", rep.passed)


def cmd_ngon(args) -> Run:
    run = Run(args.out)
    n = args.n
    S, F = build_polygon_factorization(n)
    P = make_regular_ngon(n)
    H = polygon_to_hrep(P)
    q = fold_count(n)
    run.summary.update(n=n, q=q, rank=F.r, shape=list(S.shape))
    if run.out is not None:
        run.write("polygon.json", ser.polygon_to_json(P))
        run.write("hrep.json", ser.hrep_to_json(H))
    rep = _verify(run, S, F, args)
    if run.out is not None:
        ser.write_bundle(
            run.out, S, F, {"n": n, "q": q, "residual": rep.to_json()["max_residual"]}
        )
    run.check("rank", F.r == 2 * q)
    _extension(run, H, F, P.vertices, args.projection_limit, n)
    fb = face_count_lower_bound(ngon_face_count(n))
    run.summary["face_count_bound"] = fb
    run.check("bounds", fb <= F.r)
    return run


def cmd_permutahedron(args) -> Run:
    run = Run(args.out)
    n = args.n
    net = batcher_network(n)
    S, F = build_permutahedron_factorization(n, network=net)
    K = Permutahedron(n)
    H = permutahedron_hrep(K)
    V = list(permutahedron_vertices(K))
    run.summary.update(n=n, rank=F.r, shape=list(S.shape), network_size=net.size)
    if run.out is not None:
        run.write("hrep.json", ser.hrep_to_json(H))
    rep = _verify(run, S, F, args)
    if run.out is not None:
        ser.write_bundle(
            run.out,
            S,
            F,
            {
                "n": n,
                "network_size": net.size,
                "comparators": [list(c) for c in net.comparators],
                "residual": rep.to_json()["max_residual"],
            },
        )
    run.check("rank", F.r == 2 * net.size)
    _extension(run, H, F, V, args.projection_limit, n)
    br = bounds_report(S, permutahedron_face_count(n), F.r)
    run.write("bounds.json", br.to_json())
    run.check("bounds", br.consistent)
    return run


def _parse_subset(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise InvalidInput(f"--subset expects comma-separated integers, got {text!r}") from e


def cmd_gridgon(args) -> Run:
    run = Run(args.out)
    subset = _parse_subset(args.subset) if args.subset else None
    P = make_grid_parabola_polygon(args.n, subset=subset, seed=args.seed if subset is None else None)
    H = polygon_to_hrep(P)
    S = slack_matrix(H, P.vertices)
    F = trivial_factorization(S)
    run.summary.update(n=args.n, vertices=[[int(c) for c in v] for v in P.vertices])
    run.write("polygon.json", ser.polygon_to_json(P))
    run.write("hrep.json", ser.hrep_to_json(H))
    if run.out is not None:
        ser.write_bundle(run.out, S, F, {"n": args.n, "factorization": "trivial"})
    run.check("factorization", verify_factorization(S, F).passed)
    return run


def _parse_box(text: str, d: int) -> list[tuple[int, int]]:
    try:
        box = [tuple(int(v) for v in part.split(":")) for part in text.split(",")]
    except ValueError as e:
        raise InvalidInput(f"--box expects lo:hi,lo:hi, got {text!r}") from e
    if len(box) != d or any(len(b) != 2 for b in box):
        raise InvalidInput(f"--box needs {d} ranges lo:hi")
    return box  # type: ignore[return-value]


def cmd_round(args) -> Run:
    run = Run(args.out)
    P = ser.polygon_from_json(ser.read_json(args.polygon), str(args.polygon))
    if P.mode != RATIONAL:
        raise InvalidInput("rounding needs an integral polygon")
    H = polygon_to_hrep(P)
    S = slack_matrix(H, P.vertices)
    if args.factorization:
        _, F, _ = ser.read_bundle(args.factorization)
        if not verify_factorization(S, F).passed:
            raise InvalidInput(f"{args.factorization}: factorization does not reproduce the slack matrix")
    else:
        F = trivial_factorization(S)
    N = args.N or max(2, max(abs(int(c)) for v in P.vertices for c in v))
    delta = compute_delta(H.d, N)
    run.summary.update(N=N, Delta=delta, r=F.r)
    run.check("coefficient_bounds", check_coefficient_bounds(H, delta, S))
    R, sel, Fn = prepare_rounded_system(H, F, delta)
    run.summary["rows"] = list(sel.rows)
    run.check("invariants", all(R.invariants().values()))
    run.check("rounding_error", rounding_error_ok(R, Fn))
    run.write("rounded.json", ser.rounded_to_json(R))
    box = _parse_box(args.box, H.d) if args.box else bounding_box(P)
    rep = verify_recovery(R, H, box)
    run.write("recovery.json", rep.to_json())
    run.summary.update(points_checked=rep.points_checked, disagreements=len(rep.disagreements))
    run.check("recovery", rep.passed)
    return run


def cmd_bounds(args) -> Run:
    run = Run(args.out)
    M, mode = ser.read_matrix(args.slack, args.mode)
    S = SlackMatrix(M, mode)
    m, n = S.shape
    # without a face count, facets + vertices + the polytope + the empty face is a safe undercount
    faces = args.faces if args.faces is not None else m + n + 2
    br = bounds_report(S, faces, args.rank)
    run.summary.update(br.to_json())
    run.write("bounds.json", br.to_json())
    run.check("bounds", br.consistent)
    return run


def cmd_verify(args) -> Run:
    run = Run(args.out)
    if args.bundle:
        S, F, _ = ser.read_bundle(args.bundle)
        if args.slack:
            S = SlackMatrix(ser.read_matrix(args.slack, F.mode)[0], F.mode)
        if S is None:
            raise InvalidInput("the bundle has no slack matrix; pass --slack")
    else:
        if not (args.slack and args.t and args.u):
            raise InvalidInput("give --bundle or all of --slack, --t, --u")
        M, mode = ser.read_matrix(args.slack, args.mode)
        T, _ = ser.read_matrix(args.t, mode)
        U, _ = ser.read_matrix(args.u, mode)
        S, F = SlackMatrix(M, mode), NonnegFactorization(T, U, mode)
    run.summary.update(rank=F.r, shape=list(S.shape), mode=F.mode)
    rep = verify_factorization(S, F, args.tol, sample=args.sample, seed=args.seed)
    run.write("verification.json", rep.to_json())
    run.summary.update(rep.to_json())
    run.check("factorization", rep.passed)
    return run


def _tolerance(text: str) -> float:
    v = float(text)
    # overrides may only loosen the float checks
    if not 1e-9 <= v < 1:
        raise argparse.ArgumentTypeError("tolerance must lie in [1e-9, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyext", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, verify=True):
        sp.add_argument("--out", help="directory for output files")
        if verify:
            sp.add_argument("--tol", type=_tolerance, default=1e-9, help="relative tolerance (float mode)")
            sp.add_argument("--sample", type=int, help="check this many random entries only")
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("ngon", help="regular n-gon factorization and extension")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--projection-limit", type=int, default=64, help="skip LP checks above this n")
    common(sp)
    sp.set_defaults(func=cmd_ngon)

    sp = sub.add_parser("permutahedron", help="permutahedron factorization (exact)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--projection-limit", type=int, default=5)
    common(sp)
    sp.set_defaults(func=cmd_permutahedron)

    sp = sub.add_parser("gridgon", help="polygon on the parabola grid")
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--subset", help="comma-separated values from 1..2n")
    common(sp, verify=False)
    sp.set_defaults(func=cmd_gridgon)

    sp = sub.add_parser("round", help="round an extension and check lattice recovery")
    sp.add_argument("--polygon", required=True)
    sp.add_argument("--factorization", help="bundle.json; defaults to T = S, U = I")
    sp.add_argument("--N", type=int, help="coordinate bound; defaults to the largest |coordinate|")
    sp.add_argument("--box", help="lattice box lo:hi,lo:hi; defaults to the bounding box")
    common(sp, verify=False)
    sp.set_defaults(func=cmd_round)

    sp = sub.add_parser("bounds", help="lower bounds from a slack matrix")
    sp.add_argument("--slack", required=True)
    sp.add_argument("--mode", default="auto", choices=["auto", "rational", "float64"])
    sp.add_argument("--faces", type=int, help="number of faces, including the empty face")
    sp.add_argument("--rank", type=int, help="rank of a known factorization")
    common(sp, verify=False)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="check S = T U")
    sp.add_argument("--bundle")
    sp.add_argument("--slack")
    sp.add_argument("--t")
    sp.add_argument("--u")
    sp.add_argument("--mode", default="auto", choices=["auto", "rational", "float64"])
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = args.func(args)
    except PolyextError as e:
        out = {"pass": False, "error": {"code": e.code, "type": type(e).__name__, "message": str(e)}}
        sys.stdout.write(ser.dumps(out))
        return 2
    result = run.finish()
    if run.out is not None:
        run.write("summary.json", result)
    sys.stdout.write(ser.dumps(result))
    return 0 if run.ok else 1
