"""Command-line interface.

    koszul-cones homology N 0 0 0
    koszul-cones homology N 2 2 3 --e 5 --g 5 --strand 1,1,1,1,1 1,1,1,1,1
    koszul-cones verify split --all --e 3 --g 3
    koszul-cones verify complex --r 1 --s 1 --negate-M
    koszul-cones betti --ell 0 --field q
    koszul-cones chessboard 1,1,1,1,1 1,1,1,1,1 --dim 2

Exit codes: 0 success, 1 a check failed, 2 bad arguments, 3 internal
invariant broken (d o d != 0 while computing homology).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from . import __version__
from .betti import (
    betti_table,
    bh_rr_bridge_check,
    cor62_grid,
    cor62_report,
    cor63_hypothesis,
    cor63_report,
    thm61_sweep,
)
from .charzero import cauchy_identity_check, oracle_agreement
from .complexes import C_complex, build_psi, realize, verify_complex
from .errors import CompositionNotZero, DegreeMismatch, HypothesisViolation, NotPrime, OutOfRange
from .exact_linalg import ZZ, parse_ring
from .homology import (
    DEFAULT_STRAND_THRESHOLD,
    homology,
    in_duality_band,
    split_exact_report,
    strand_homology,
    zeta_report,
    check_duality,
)
from .multilinear import Dims
from .strands import MultiDegree, chessboard_complex, iter_strands

log = logging.getLogger("koszul_cones")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
WORKERS_ENV = "KOSZUL_CONES_WORKERS"

VERIFY_TARGETS = ("complex", "psi", "duality", "split", "zeta", "thm61", "cor62", "cor63", "bridge", "cauchy", "oracle")


class UsageError(Exception):
    pass


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise UsageError(f"malformed vector {text!r}; expected comma-separated integers")
    if any(x < 0 for x in out):
        raise UsageError(f"vector entries must be non-negative: {text!r}")
    return out


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# output


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def envelope(command: str, params: dict, dims: Dims | None, ring, result) -> dict:
    return {
        "command": command,
        "params": params,
        "e": dims.e if dims else None,
        "g": dims.g if dims else None,
        "ring": str(ring) if ring is not None else None,
        "result": result,
        "version": __version__,
    }


def to_csv(header: list[str], rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit(args, payload: dict, header: list[str], rows: list) -> None:
    if args.format == "csv":
        sys.stdout.write(to_csv(header, rows))
    else:
        sys.stdout.write(canonical_json(payload) + "\n")


def _torsion_text(torsion) -> str:
    return ";".join(str(t) for t in torsion)


# ---------------------------------------------------------------------------
# commands


def cmd_homology(args, dims: Dims) -> int:
    ring = parse_ring(args.ring)
    params = {"side": args.side, "m": args.m, "n": args.n, "p": args.p}
    if args.strand:
        gamma, delta = (parse_vector(x) for x in args.strand)
        key = MultiDegree(gamma, delta)
        if len(gamma) != dims.e or len(delta) != dims.g:
            raise UsageError("strand multidegree must have e and g entries")
        inv = strand_homology(dims, args.side, args.m, args.n, args.p, key, ring)
        params["strand"] = [list(gamma), list(delta)]
        result = {"side": args.side, "m": args.m, "n": args.n, "p": args.p, "ring": str(ring), **inv.to_json()}
    else:
        strands = True if args.strands else None
        res = homology(dims, args.side, args.m, args.n, args.p, ring, strands=strands, threshold=args.threshold)
        result = res.to_json()
    emit(
        args,
        envelope("homology", params, dims, ring, result),
        ["side", "m", "n", "p", "ring", "free_rank", "torsion"],
        [[args.side, args.m, args.n, args.p, str(ring), result["free_rank"], _torsion_text(result["torsion"])]],
    )
    return EXIT_OK


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def _s_range(dims: Dims):
    return range(-2, dims.alpha + 3)


def _verify_complex(args, dims):
    cases = []
    if args.all:
        cases = [(r, s) for r in range(dims.e + dims.g + 1) for s in _s_range(dims)]
    else:
        _require(args, "r", "s")
        cases = [(args.r, args.s)]
    checks = []
    for r, s in cases:
        if not 0 <= r <= dims.e + dims.g:
            raise OutOfRange(f"r={r} outside 0..{dims.e + dims.g}")
        spec = C_complex(dims, r, s, negate_M=args.negate_M)
        if args.strands:
            bad = []
            for key, _, cx in iter_strands(spec):
                bad.extend(i for i in verify_complex(cx) if i not in bad)
        else:
            bad = verify_complex(realize(spec))
        log.info("complex r=%d s=%d: %s", r, s, "ok" if not bad else f"d^2 != 0 at {bad}")
        checks.append({"r": r, "s": s, "passed": not bad, "failures": sorted(bad)})
    return checks


def _verify_psi(args, dims):
    cases = []
    if args.all:
        cases = [(r, s) for r in range(1, dims.e + dims.g) for s in _s_range(dims)]
    else:
        _require(args, "r", "s")
        cases = [(args.r, args.s)]
    checks = []
    for r, s in cases:
        if not 1 <= r <= dims.e + dims.g - 1:
            raise OutOfRange(f"psi needs 1 <= r <= {dims.e + dims.g - 1}")
        _, bad, signs = build_psi(dims, r, s)
        log.info("psi r=%d s=%d: %s", r, s, "ok" if not bad else bad)
        checks.append({"r": r, "s": s, "passed": not bad, "failures": sorted(bad), "signs": signs})
    return checks


def _verify_duality(args, dims):
    if args.all:
        cases = [
            (m, n, p) for m in range(4) for n in range(4) for p in range(6) if in_duality_band(dims, m, n)
        ]
    else:
        _require(args, "m", "n", "p")
        cases = [(args.m, args.n, args.p)]
    checks = []
    for m, n, p in cases:
        ok = check_duality(dims, m, n, p, force=args.force)
        checks.append({"m": m, "n": n, "p": p, "passed": ok, "in_band": in_duality_band(dims, m, n)})
    return checks


def _verify_split(args, dims):
    if args.all:
        cases = [(r, s) for r in range(dims.e + dims.g + 1) for s in _s_range(dims)]
    else:
        _require(args, "r", "s")
        cases = [(args.r, args.s)]
    checks = []
    for r, s in cases:
        bad = split_exact_report(dims, r, s)
        log.info("split r=%d s=%d: %s", r, s, "exact" if not bad else f"{len(bad)} failures")
        failures = [{"strand": [list(k.gamma), list(k.delta)], "position": i, "homology": str(h)} for k, i, h in bad]
        checks.append({"r": r, "s": s, "passed": not bad, "failures": failures})
    return checks


def _verify_zeta(args, dims):
    rep = zeta_report(dims)
    return [{**rep, "passed": rep["is_cycle"] and rep["maps_to_unit"]}]


def _verify_thm61(args, dims):
    if args.all:
        cases = [(m, n, p) for m in range(3) for n in range(3) for p in range(5) if in_duality_band(dims, m, n)]
    else:
        _require(args, "m", "n", "p")
        cases = [(args.m, args.n, args.p)]
    checks = []
    for m, n, p in cases:
        bad = thm61_sweep(dims, m, n, p, force=args.force)
        checks.append({"m": m, "n": n, "p": p, "passed": not bad, "failures": [[list(k.gamma), list(k.delta)] for k in bad]})
    return checks


def _verify_cor62(args, dims):
    side = args.side or "e3"
    if args.all:
        cases = list(cor62_grid(dims, side, args.total))
        if not cases:
            raise HypothesisViolation(f"no (P,Q) satisfy the hypothesis for side {side} at e={dims.e}, g={dims.g}")
    else:
        _require(args, "P", "Q")
        cases = [(args.P, args.Q)]
    checks = []
    for P, Q in cases:
        bad = cor62_report(dims, P, Q, side)
        checks.append({"P": P, "Q": Q, "side": side, "passed": not bad, "failures": [list(map(str, b)) for b in bad]})
    return checks


def _verify_cor63(args, dims):
    side = args.side or "e3"
    ring = parse_ring(args.ring) if args.ring not in ("int", "z", "zz") else parse_ring("q")
    if args.all:
        cases = [
            (ell, q)
            for q in range(0, args.total + 1)
            for ell in range(-dims.e - 2, dims.g + 3)
            if cor63_hypothesis(dims, ell, q, side)
        ]
        if not cases:
            raise HypothesisViolation(f"no (ell,q) satisfy the hypothesis for side {side} at e={dims.e}, g={dims.g}")
    else:
        _require(args, "ell", "q")
        cases = [(args.ell, args.q)]
    checks = []
    for ell, q in cases:
        bad = cor63_report(dims, ell, q, side, ring)
        checks.append({"ell": ell, "q": q, "side": side, "passed": not bad, "failures": [list(b) for b in bad]})
    return checks


def _verify_bridge(args, dims):
    _require(args, "gamma", "delta", "p")
    gamma, delta = parse_vector(args.gamma), parse_vector(args.delta)
    ell = args.ell if args.ell is not None else sum(gamma) - sum(delta)
    ok = bh_rr_bridge_check(dims, MultiDegree(gamma, delta), ell, args.p)
    return [{"gamma": list(gamma), "delta": list(delta), "ell": ell, "p": args.p, "passed": ok}]


def _verify_cauchy(args, dims):
    top = dims.e * dims.g - dims.e - dims.g
    ps = [args.p] if args.p is not None else list(range(0, top + 1))
    return [{"p": p, "passed": cauchy_identity_check(dims, p)} for p in ps]


def _verify_oracle(args, dims):
    ells = [args.ell] if args.ell is not None else list(range(-dims.e, dims.g))
    checks = []
    for ell in ells:
        rep = oracle_agreement(dims, ell)
        checks.append({"ell": ell, "passed": not rep["mismatches"], "checked": rep["checked"], "failures": [list(x) for x in rep["mismatches"]]})
    return checks


VERIFIERS = {
    "complex": _verify_complex,
    "psi": _verify_psi,
    "duality": _verify_duality,
    "split": _verify_split,
    "zeta": _verify_zeta,
    "thm61": _verify_thm61,
    "cor62": _verify_cor62,
    "cor63": _verify_cor63,
    "bridge": _verify_bridge,
    "cauchy": _verify_cauchy,
    "oracle": _verify_oracle,
}


def cmd_verify(args, dims: Dims) -> int:
    checks = VERIFIERS[args.target](args, dims)
    passed = all(c["passed"] for c in checks)
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func", "format", "verbose", "e", "g", "ring", "command") and v is not None and v is not False
    }
    result = {"target": args.target, "passed": passed, "checks": checks}
    rows = [[args.target, json.dumps({k: v for k, v in c.items() if k not in ("passed", "failures")}, sort_keys=True), c["passed"], json.dumps(c.get("failures", []))] for c in checks]
    emit(args, envelope("verify", params, dims, ZZ, result), ["target", "case", "passed", "failures"], rows)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_betti(args, dims: Dims) -> int:
    try:
        field = parse_ring(args.field)
    except (ValueError, NotPrime) as exc:
        raise UsageError(str(exc))
    if not field.is_field:
        raise UsageError(f"betti needs a field, got {args.field!r}")
    table = betti_table(dims, args.ell, field, args.p_max, args.extra)
    rows = [[p, q, b] for (p, q), b in table.items()]
    params = {"ell": args.ell, "field": str(field), "p_max": args.p_max, "extra": args.extra}
    result = [{"p": p, "q": q, "beta": b} for p, q, b in rows]
    emit(args, envelope("betti", params, dims, field, result), ["p", "q", "beta"], rows)
    return EXIT_OK


def cmd_chessboard(args, dims: Dims | None) -> int:
    ring = parse_ring(args.ring)
    gamma, delta = parse_vector(args.gamma), parse_vector(args.delta)
    if not gamma or not delta:
        raise UsageError("chessboard needs non-empty row and column bounds")
    sc = chessboard_complex(gamma, delta)
    fvec = sc.f_vector()
    if args.dim is not None:
        dims_range = [args.dim]
    else:
        dims_range = list(range(-1, len(fvec)))
    rows = []
    result = {"f_vector": fvec, "homology": []}
    for k in dims_range:
        h = sc.reduced_homology(k, ring)
        result["homology"].append({"dim": k, **h.to_json()})
        rows.append([k, h.free_rank, _torsion_text(h.torsion)])
    params = {"gamma": list(gamma), "delta": list(delta), "dim": args.dim}
    emit(args, envelope("chessboard", params, Dims(len(gamma), len(delta)), ring, result), ["dim", "free_rank", "torsion"], rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--e", type=int, default=3, help="rank of E (default 3)")
    common.add_argument("--g", type=int, default=3, help="rank of G (default 3)")
    common.add_argument("--ring", default="int", help="int, q, or gfP (default int)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--workers", type=int, default=default_workers(), help=f"worker count (default from {WORKERS_ENV})")
    common.add_argument("--threshold", type=int, default=DEFAULT_STRAND_THRESHOLD, help="module size above which strands are used")
    common.add_argument("--strands", action="store_true", help="always split into strands")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    parser = argparse.ArgumentParser(prog="koszul-cones", description="Homology of the complexes N(P,Q), M(P,Q) and C^{r,s}.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", parents=[common], help="H_N(m,n,p) or H_M(m,n,p)")
    h.add_argument("side", choices=("N", "M"))
    h.add_argument("m", type=int)
    h.add_argument("n", type=int)
    h.add_argument("p", type=int)
    h.add_argument("--strand", nargs=2, metavar=("GAMMA", "DELTA"), help="restrict to one strand, e.g. 1,1 1,1")
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", parents=[common], help="run a check")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--all", action="store_true", help="sweep the default range for this target")
    v.add_argument("--r", type=int)
    v.add_argument("--s", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--p", type=int)
    v.add_argument("--P", type=int)
    v.add_argument("--Q", type=int)
    v.add_argument("--ell", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--side", choices=("e3", "g3"))
    v.add_argument("--gamma")
    v.add_argument("--delta")
    v.add_argument("--total", type=int, default=8, help="bound on P+Q (cor62) or q (cor63) for --all")
    v.add_argument("--negate-M", dest="negate_M", action="store_true", help="negative control for complex")
    v.add_argument("--force", action="store_true", help="allow parameters outside the duality band")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("betti", parents=[common], help="graded Betti numbers of M_ell")
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--field", default="q")
    b.add_argument("--p-max", dest="p_max", type=int)
    b.add_argument("--extra", type=int, default=2, help="search q-p up to max(0,-ell)+extra")
    b.set_defaults(func=cmd_betti)

    c = sub.add_parser("chessboard", parents=[common], help="reduced homology of a chessboard complex")
    c.add_argument("gamma")
    c.add_argument("delta")
    c.add_argument("--dim", type=int)
    c.set_defaults(func=cmd_chessboard)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(message)s",
    )
    start = time.time()
    try:
        dims = Dims(args.e, args.g)
        code = args.func(args, dims)
    except (UsageError, HypothesisViolation, OutOfRange, DegreeMismatch, NotPrime, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompositionNotZero as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    log.info("done in %.1fs", time.time() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
