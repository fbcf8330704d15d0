"""Command-line front end.

Exit codes: 0 success, 1 a checked property is false, 2 malformed input,
3 a command that needs a retraction sequence got a polytope without one.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import cohomology, retraction, singularity
from .io import FormatError, load_element, load_polytope, point_str
from .linalg import read_int_matrix, snf
from .polytope import is_simple


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _parse_order(text):
    if text is None:
        return None
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _Exit(2, f"malformed --order {text!r}") from None


def _retraction(P, order):
    try:
        return retraction.find_retraction(P, order)
    except retraction.InvalidHint as exc:
        raise _Exit(2, f"invalid order: {exc}") from None


# ---------------------------------------------------------------------------
# commands; each returns (payload, text lines, exit code)


def cmd_classify(args):
    P = load_polytope(args.polytope)
    simple = is_simple(P)
    payload = {"name": P.name, "simple": simple}
    try:
        verdict = singularity.is_divisive(P)
    except retraction.NotAlmostSimple as exc:
        payload.update(almost_simple=False, divisive=None, certificate={"exhaustive": True, "explored": exc.explored})
        line = f"simple={_yn(simple)} almost_simple=no divisive=n/a certificate=exhaustive explored={exc.explored}"
        holds = {"simple": simple, "almost": False, "divisive": False}
    else:
        payload.update(almost_simple=True, divisive=verdict.divisive)
        line = f"simple={_yn(simple)} almost_simple=yes divisive={_yn(verdict.divisive)}"
        if verdict.witness is not None:
            payload["witness"] = list(verdict.witness.order)
            line += " witness=" + ",".join(str(v) for v in verdict.witness.order)
        else:
            payload["certificate"] = {"exhaustive": True, "explored": verdict.explored}
            line += f" certificate=exhaustive explored={verdict.explored}"
        holds = {"simple": simple, "almost": True, "divisive": verdict.divisive}
    code = 0
    if args.expect is not None:
        payload["expect"] = args.expect
        payload["expect_met"] = holds[args.expect]
        if not holds[args.expect]:
            code = 1
            line += f" expect={args.expect}:FAILED"
    return payload, [line], code


def cmd_retract(args):
    P = load_polytope(args.polytope)
    if args.all is not None:
        if args.all < 1:
            raise _Exit(2, "--all needs a positive count")
        seqs = retraction.enumerate_retractions(P, args.all)
        if not seqs:
            raise retraction.NotAlmostSimple("no retraction sequence exists")
        lines = [
            "order=" + ",".join(map(str, s.order)) + " k=" + ",".join(map(str, s.k_sequence)) for s in seqs
        ]
        return {"sequences": [s.to_json() for s in seqs]}, lines, 0
    seq = _retraction(P, _parse_order(args.order))
    L = P.face_lattice
    lines = []
    ell = len(seq.steps)
    for pos, s in enumerate(seq.steps):
        lines.append(
            f"j={ell - pos} v={point_str(P.vertices[s.vertex])} k={s.k} "
            f"E=[{','.join(map(str, sorted(L.faces[s.max_face].vertex_set)))}] "
            f"edges_to=[{','.join(str(w) for _, w in s.edges)}]"
        )
    lines.append("k_sequence=" + ",".join(map(str, seq.k_sequence)))
    return {"steps": seq.to_json(), "k_sequence": list(seq.k_sequence)}, lines, 0


def cmd_orbifold(args):
    P = load_polytope(args.polytope)
    seq = _retraction(P, _parse_order(args.order))
    report = singularity.is_divisive_sequence(P, seq)
    lines, steps = [], []
    for d in report.steps:
        factors = list(d.group.invariant_factors)
        lines.append(
            f"j={d.j} v={point_str(P.vertices[d.vertex])} k={len(d.mus)} K=[{','.join(map(str, factors))}]"
        )
        steps.append({"j": d.j, "vertex": d.vertex, "k": len(d.mus), "mus": [list(m) for m in d.mus],
                      "cutting_facets": list(d.cutting_facets), "K": factors})
    lines.append(f"divisive(sequence)={_yn(report.divisive_for_sequence)}")
    payload = {"order": list(seq.order), "steps": steps, "divisive_for_sequence": report.divisive_for_sequence}
    return payload, lines, 0


def cmd_gkm(args):
    P = load_polytope(args.polytope)
    G = cohomology.gkm_graph(P)
    lines = [f"edge ({e.v},{e.w}) weight={_vec(e.weight)}" for e in G.edges]
    payload = {"vertices": list(G.vertices), "edges": [{"v": e.v, "w": e.w, "weight": list(e.weight)} for e in G.edges]}
    return payload, lines, 0


def cmd_betti(args):
    P = load_polytope(args.polytope)
    b = retraction.betti_numbers(retraction.find_retraction(P))
    return {"betti": list(b.b)}, [str(b)], 0


def cmd_check(args):
    P = load_polytope(args.polytope)
    x = load_element(args.element, P.num_vertices)
    if x.assignments and x.assignments[0].num_vars != P.ambient_dim:
        raise _Exit(2, "element variable count differs from the polytope dimension")
    ring = args.ring or x.ring
    G = cohomology.gkm_graph(P)
    if x.theory == "K":
        if args.mode != "gkm":
            raise _Exit(2, "K-theory elements support --mode gkm only")
        if args.ring == "Z":
            raise _Exit(2, "K-theory membership is implemented over Q only")
        violations = cohomology.gkm_check_K(G, x)
    elif args.mode == "gkm":
        violations = cohomology.gkm_check_H(G, x, ring)
    else:
        if ring == "Z":
            # walls/all compare restrictions, which is ring independent; add the integrality test
            violations = cohomology.pp_check(P, x, args.mode) or cohomology.gkm_check_H(G, x, "Z")
        else:
            violations = cohomology.pp_check(P, x, args.mode)
    lines = ["PASS"] if not violations else [str(v) for v in violations]
    payload = {
        "theory": x.theory,
        "ring": ring,
        "mode": args.mode,
        "pass": not violations,
        "violations": [
            {"edge": list(v.edge), "weight": list(v.weight), "difference": str(v.difference), "reason": v.reason}
            for v in violations
        ],
    }
    return payload, lines, 0 if not violations else 1


def cmd_hilbert(args):
    P = load_polytope(args.polytope)
    if args.max_deg < 0:
        raise _Exit(2, "--max-deg must be nonnegative")
    dims = cohomology.hilbert_function(P, args.max_deg)
    payload = {"dims": dims}
    lines = ["dims=" + ",".join(map(str, dims))]
    if args.max_deg >= P.ambient_dim:
        b = cohomology.poincare_from_hilbert(P, dims)
        payload["betti"] = list(b.b)
        lines.append(str(b))
    return payload, lines, 0


def cmd_snf(args):
    try:
        A = read_int_matrix(Path(args.matrix).read_text())
    except ValueError as exc:
        raise _Exit(2, str(exc)) from None
    U, D, V = snf(A)
    invariants = [d for d in D.diagonal()]
    lines = ["invariants=" + ",".join(map(str, invariants)), "D:", str(D), "U:", str(U), "V:", str(V)]
    payload = {"D": D.tolist(), "U": U.tolist(), "V": V.tolist(), "invariants": invariants}
    return payload, [ln for ln in lines if ln != ""], 0


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Exit(2, message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toricstrata", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="simple / almost simple / divisive")
    p.add_argument("polytope")
    p.add_argument("--expect", choices=["simple", "almost", "divisive"])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("retract", help="find, replay or enumerate retraction sequences")
    p.add_argument("polytope")
    p.add_argument("--order", help="comma-separated vertex indices to replay")
    p.add_argument("--all", type=int, metavar="N", help="enumerate up to N sequences")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("orbifold", help="orbifold groups along a retraction sequence")
    p.add_argument("polytope")
    p.add_argument("--order")
    p.set_defaults(func=cmd_orbifold)

    p = sub.add_parser("gkm", help="GKM graph")
    p.add_argument("polytope")
    p.set_defaults(func=cmd_gkm)

    p = sub.add_parser("betti", help="Betti numbers from a retraction sequence")
    p.add_argument("polytope")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("check", help="membership of a piecewise element")
    p.add_argument("polytope")
    p.add_argument("element")
    p.add_argument("--mode", choices=["walls", "all", "all_faces", "gkm"], default="gkm")
    p.add_argument("--ring", choices=["Q", "Z"], help="override the element file's ring")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hilbert", help="graded dimensions of the piecewise algebra")
    p.add_argument("polytope")
    p.add_argument("--max-deg", type=int, required=True)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("snf", help="Smith normal form of an integer matrix file")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_snf)
    return parser


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Exit as exc:
        print(f"error: {exc}", file=stderr)
        return exc.code
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 2
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            payload, lines, code = args.func(args)
        except _Exit as exc:
            print(f"error: {exc}", file=stderr)
            return exc.code
        except retraction.NotAlmostSimple as exc:
            print(f"error: not almost simple: {exc}", file=stderr)
            return 3
        except (FormatError, OSError, ValueError) as exc:
            print(f"error: {exc}", file=stderr)
            return 2
    notes = [str(w.message) for w in caught]
    if args.json:
        report = {"command": args.command, "result": payload, "warnings": notes, "exit_code": code}
        print(json.dumps(report, indent=2, sort_keys=True), file=stdout)
    else:
        for note in notes:
            print(f"warning: {note}", file=stderr)
        for line in lines:
            print(line, file=stdout)
    return code


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
