"""Command-line driver.  Exit codes: 0 done/verified, 1 property violated, 2 usage or input error."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .arrangement import check_hypotheses
from .complexes import ChainComplex, homology, order_complex
from .fileformat import ArrangementParseError, load_arrangement, serialize_arrangement
from .ground import CellCapExceeded, IndexSet, default_labels
from .intervals import KunnethMismatch, kunneth_compare
from .poset import avoiding_count, build_poset
from .products import (Claim1Contradiction, HypothesisNotSatisfied, decomposition, default_split,
                       find_ideal_violation, labels_from, product_embedding, support, verify_claim1)
from .report import Report, inputs_digest
from .search import SearchBounds, counterexample_search

# argument names that only say where output goes
_OUTPUT_ARGS = {"format", "dot", "export_matrices", "fixtures", "arrangement", "func", "jobs"}


class UsageError(ValueError):
    pass


def _groups(gs) -> list[str]:
    return [f"H{g.degree}: {g}" for g in gs if not g.is_zero()] or ["all zero"]


def _violation(v) -> dict:
    out = {"below": v.below, "above": v.above, "preimage": list(v.preimage)}
    if v.generator is not None:
        piece, j = v.generator.sources[0]
        out["generator"] = {"piece": piece, "injection": str(j)}
    return out


def _coords(size: int | None, labels: str | None) -> IndexSet:
    if labels is not None:
        return labels_from(labels)
    if size is None:
        raise UsageError("give a size or explicit labels")
    return IndexSet(default_labels(size))


def cmd_check_hypotheses(arr, args):
    rep = check_hypotheses(arr)
    pieces = []
    for p in rep.pieces:
        d = {"index": p.index, "axis_free": p.axis_free, "pullback_free": p.pullback_free, "empty": p.empty}
        if p.axis_witness is not None:
            w = p.axis_witness
            d["axis_witness"] = {"coordinate": w.coord, "base": list(w.base)}
        if p.free_coord is not None:
            d["free_coordinate"] = p.free_coord
        pieces.append(d)
    res = {"axis_free": rep.axis_free, "pullback_free": rep.pullback_free, "pieces": pieces}
    return (0 if rep.axis_free else 1), res


def cmd_build_poset(arr, args):
    T = _coords(args.t_size, args.t)
    P = build_poset(arr, T, include_empty=args.include_empty)
    if args.dot:
        Path(args.dot).write_text(P.to_dot())
    res = {"coords": list(T.labels), "elements": len(P), "covers": len(P.hasse_edges()),
           "cardinalities": [m.bit_count() for m in P.masks],
           "generators": len(P.generators)}
    if len(P) > 1:
        res["mobius_bottom_to_elements"] = [v for _, v in sorted(P.mobius_from(0).items())]
    return 0, res


def cmd_verify_claim1(arr, args):
    S = IndexSet(default_labels(args.s_size))
    try:
        rep = verify_claim1(arr, S)
    except HypothesisNotSatisfied as e:
        w = e.witness
        return 1, {"hypothesis": "not satisfied",
                   "axis_witness": {"piece": w.piece, "coordinate": w.coord, "base": list(w.base)}}
    except Claim1Contradiction as e:
        r = e.report
        res = {"order_ideal": r.violation is None}
        if r.violation is not None:
            res["violation"] = _violation(r.violation)
        return 1, res
    return 0, {"S": list(rep.S.labels), "T": list(rep.T.labels), "order_ideal": True,
               "image_size": len(rep.embedding.image), "target_size": len(rep.embedding.target),
               "factorizations_checked": len(rep.factorizations)}


def cmd_order_ideal(arr, args):
    S, T = labels_from(args.s), labels_from(args.t)
    E = product_embedding(arr, S, T, zero_slice=args.zero_slice)
    v = find_ideal_violation(E)
    res = {"S": list(S.labels), "T": list(T.labels), "zero_slice": args.zero_slice,
           "image_size": len(E.image), "target_size": len(E.target), "order_ideal": v is None}
    if v is not None:
        res["violation"] = _violation(v)
    return (0 if v is None else 1), res


def cmd_decomposables(arr, args):
    S = IndexSet(default_labels(args.s_size))
    P = build_poset(arr, S)
    cache: dict = {}
    rows = []
    for b in range(len(P)):
        d = decomposition(P, b, cache)
        row = {"element": b, "support": list(support(P, b).labels), "decomposable": d is not None}
        if d is not None:
            row["factor_coords"], row["factor_element"] = list(d[0].labels), d[1]
        rows.append(row)
    return 0, {"coords": list(S.labels), "indecomposable": [r["element"] for r in rows if not r["decomposable"]],
               "elements": rows}


def cmd_homology(arr, args):
    T = _coords(args.t_size, args.t)
    P = build_poset(arr, T)
    lo, hi = args.interval
    if not (0 <= lo < len(P) and 0 <= hi < len(P)):
        raise UsageError(f"interval endpoints must lie in 0..{len(P) - 1}")
    iv = P.open_interval(lo, hi)
    K = order_complex(iv)
    H = homology(K)
    if args.export_matrices:
        out = Path(args.export_matrices)
        out.mkdir(parents=True, exist_ok=True)
        C = ChainComplex.of(K)
        for d, M in sorted(C.boundaries.items()):
            (out / f"boundary_{d}.txt").write_text(M.to_text())
    return 0, {"coords": list(T.labels), "interval": [lo, hi], "vertices": len(iv),
               "f_vector": K.f_vector(), "mobius": P.mobius(lo, hi), "homology": _groups(H)}


def cmd_kunneth(arr, args):
    S, T = default_split(args.s_size, args.t_size)
    E = product_embedding(arr, S, T)
    for name, val, side in (("beta", args.beta, E.left), ("beta-prime", args.beta_prime, E.right)):
        if not 0 < val < len(side):
            raise UsageError(f"--{name} must be a non-bottom element, 1..{len(side) - 1}")
    try:
        rep = kunneth_compare(E, args.beta, args.beta_prime)
    except KunnethMismatch as e:
        return 1, {"agree": False, "error": str(e)}
    return 0, {"S": list(S.labels), "T": list(T.labels), "top": rep.top, "isomorphic": rep.isomorphic,
               "direct": _groups(rep.direct), "model": _groups(rep.model), "agree": rep.agree}


def cmd_avoiding_count(arr, args):
    T = IndexSet(default_labels(args.t_size))
    return 0, {"coords": list(T.labels), "avoiding_count": avoiding_count(arr, T)}


def cmd_search(args):
    b = SearchBounds(args.max_ground, args.max_arity, args.max_pieces, args.max_tuples,
                     args.max_s, args.t_size, args.min_ground)
    r = counterexample_search(b, "exhaustive" if args.exhaustive else "random", seed=args.seed,
                              samples=args.samples, axis_free_only=args.axis_free_only,
                              symmetry_reduce=args.symmetry_reduce, zero_slice=not args.full_product,
                              jobs=args.jobs)
    res = {"mode": r.mode, "zero_slice": r.zero_slice, "arrangements": r.arrangements,
           "embeddings": r.checks, "violations": len(r.counterexamples),
           "axis_free_violations": len(r.axis_free_violations()), "summary": r.summary()}
    if r.found:
        c = r.counterexamples[0]
        res["first"] = {"arrangement": serialize_arrangement(c.arrangement).strip().splitlines(),
                        "S": list(c.S.labels), "T": list(c.T.labels), "axis_free": c.axis_free,
                        "violation": _violation(c.violation)}
        if args.fixtures:
            out = Path(args.fixtures)
            out.mkdir(parents=True, exist_ok=True)
            head = f"# S = {' '.join(c.S.labels)}; T = {' '.join(c.T.labels)}\n"
            (out / "counterexample.txt").write_text(head + serialize_arrangement(c.arrangement))
    return (1 if r.found else 0), res


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stratposet", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("arrangement", help="arrangement file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    with_file("check-hypotheses", cmd_check_hypotheses, "axis-freeness and pullback-freeness per piece")
    p = with_file("build-poset", cmd_build_poset, "build P_A(T)")
    p.add_argument("--t-size", type=int)
    p.add_argument("--t", help="explicit labels, e.g. 'a,b'")
    p.add_argument("--include-empty", action="store_true")
    p.add_argument("--dot", help="write the Hasse diagram here")
    p = with_file("verify-claim1", cmd_verify_claim1, "certify the 0-slice order ideal for axis-free input")
    p.add_argument("--s-size", type=int, required=True)
    p = with_file("order-ideal", cmd_order_ideal, "is the product image an order ideal")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--zero-slice", action="store_true", help="only the bottom element on the T side")
    p = with_file("decomposables", cmd_decomposables, "support and decomposability of every element")
    p.add_argument("--s-size", type=int, required=True)
    p = with_file("homology", cmd_homology, "reduced homology of an open interval")
    p.add_argument("--t-size", type=int)
    p.add_argument("--t")
    p.add_argument("--interval", type=int, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--export-matrices", metavar="DIR")
    p = with_file("kunneth", cmd_kunneth, "compare interval homology with the join model")
    p.add_argument("--s-size", type=int, required=True)
    p.add_argument("--t-size", type=int, default=1)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--beta-prime", type=int, required=True)
    p = with_file("avoiding-count", cmd_avoiding_count, "points of X^T avoiding every generator")
    p.add_argument("--t-size", type=int, required=True)

    p = sub.add_parser("search", help="look for product maps that are not order ideals")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--min-ground", type=int, default=1)
    p.add_argument("--max-ground", type=int, required=True)
    p.add_argument("--max-arity", type=int, required=True)
    p.add_argument("--max-pieces", type=int, required=True)
    p.add_argument("--max-tuples", type=int, default=4)
    p.add_argument("--max-s", type=int, default=3)
    p.add_argument("--t-size", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--axis-free-only", action="store_true")
    p.add_argument("--symmetry-reduce", action="store_true")
    p.add_argument("--full-product", action="store_true", help="use all of P_A(T), not just its bottom")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--fixtures", metavar="DIR", help="write the first counterexample here")
    p.set_defaults(func=None)
    return ap


@dataclass
class Outcome:
    code: int
    report: Report | None = None
    error: str = ""
    fmt: str = "text"

    def render(self) -> str:
        if self.report is None:
            return ""
        return self.report.to_json() if self.fmt == "json" else self.report.to_text()


def run_command(argv) -> Outcome:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return Outcome(2 if e.code else 0)
    opts = sorted((k, repr(v)) for k, v in vars(args).items() if k not in _OUTPUT_ARGS)
    opt_text = ";".join(f"{k}={v}" for k, v in opts)
    try:
        if args.func is None:
            code, res = cmd_search(args)
            digest = inputs_digest(args.command, opt_text)
        else:
            arr = load_arrangement(args.arrangement)
            code, res = args.func(arr, args)
            digest = inputs_digest(args.command, serialize_arrangement(arr), opt_text)
    except (ArrangementParseError, UsageError, CellCapExceeded, OSError, ValueError) as e:
        return Outcome(2, error=f"error: {e}")
    return Outcome(code, Report(args.command, digest, res), fmt=args.format)


def main(argv=None) -> int:
    out = run_command(sys.argv[1:] if argv is None else argv)
    if out.error:
        print(out.error, file=sys.stderr)
    sys.stdout.write(out.render())
    return out.code


if __name__ == "__main__":
    sys.exit(main())
