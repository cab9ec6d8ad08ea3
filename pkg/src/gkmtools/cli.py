"""Command-line interface: ``gkmtools <subcommand> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 semantic failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from .chase import ChaseProblem, chase_tower, entails
from .classify import UNRECOGNIZED, classify
from .cohomology import EquivariantClass, betti_report
from .errors import GKMError, Inconsistent
from .graph import GKMGraph, check_gkm_k, two_skeleton_components, validate
from .localization import integrate, modp_divisibility, module_coordinates
from .models import ModelSpec, generic_weights

EXIT_OK, EXIT_USAGE, EXIT_SEMANTIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str, stdin: TextIO):
    try:
        return json.loads(_read(path, stdin))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def _load_graph(path: str, stdin: TextIO) -> GKMGraph:
    data = _load_json(path, stdin)
    try:
        return GKMGraph.from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_class(path: str, g: GKMGraph, stdin: TextIO) -> EquivariantClass:
    data = _load_json(path, stdin)
    try:
        return EquivariantClass.from_dict(data, g.torus_rank)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gkmtools", description="Exact computations on GKM graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="emit a model graph")
    c.add_argument("--family", required=True, choices=["sphere", "cpn", "hpn"])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--weights", help="JSON file with a list of integer weight vectors")

    v = sub.add_parser("validate", help="check valence, labels and optionally GKM_k")
    v.add_argument("graph")
    v.add_argument("--gkm", type=int, metavar="K")

    b = sub.add_parser("betti", help="equivariant dimensions and Betti numbers")
    b.add_argument("graph")

    s = sub.add_parser("skeleton", help="two-skeleton components")
    s.add_argument("graph")
    s.add_argument("--dim", type=int, choices=[2], default=2)

    i = sub.add_parser("integrate", help="integrate a class over the fiber")
    i.add_argument("graph")
    i.add_argument("cls", metavar="class")

    k = sub.add_parser("coords", help="coordinates over 1, x, ..., x^n on a complex projective model")
    k.add_argument("graph")
    k.add_argument("cls", metavar="class")
    k.add_argument("--mod-p", type=int, dest="mod_p")

    h = sub.add_parser("chase", help="quotient Betti numbers from Gysin data")
    h.add_argument("problem")
    h.add_argument("--entails", action="append", default=[], metavar="REL")
    h.add_argument("--steps", type=int, default=3)

    f = sub.add_parser("classify", help="sphere-type or CP-type per component")
    f.add_argument("graph")
    return p


def _cmd_catalog(args, out, err, stdin) -> int:
    if args.weights:
        data = _load_json(args.weights, stdin)
        if not isinstance(data, list) or not all(isinstance(w, list) for w in data):
            raise UsageError("weights file must hold a list of integer lists")
        params = [tuple(int(x) for x in w) for w in data]
    else:
        if args.n < 1 or args.rank < 1:
            raise UsageError("--n and --rank must be positive")
        params = generic_weights(args.family, args.n, args.rank)
    try:
        g = ModelSpec(args.family, tuple(params), args.rank).build()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out.write(g.to_json())
    return EXIT_OK


def _cmd_validate(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    problems = validate(g)
    for p in problems:
        out.write(f"violation: {p}\n")
    status = EXIT_SEMANTIC if problems else EXIT_OK
    if args.gkm is not None:
        try:
            res = check_gkm_k(g, args.gkm)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if res:
            out.write(f"GKM_{args.gkm}: pass\n")
        else:
            out.write(f"GKM_{args.gkm}: fail at {res.vertex}, edges {list(res.edge_ids)}\n")
            status = EXIT_SEMANTIC
    if not problems:
        out.write("valid\n")
    return status


def _cmd_betti(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    problems = validate(g)
    if problems:
        err.write("invalid graph: " + "; ".join(map(str, problems)) + "\n")
        return EXIT_SEMANTIC
    rep = betti_report(g)
    out.write("equivariant dims: " + " ".join(str(x) for x in rep.equivariant_dims) + "\n")
    out.write(f"euler characteristic: {rep.euler_characteristic}\n")
    out.write(f"hypothesis: {rep.hypothesis}\n")
    if rep.betti is None:
        err.write(f"not formal: {rep.failure}\n")
        return EXIT_SEMANTIC
    out.write(f"betti: {rep.betti.line()}\n")
    return EXIT_OK


def _cmd_skeleton(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    pieces = two_skeleton_components(g)
    out.write(f"lattices: {len(pieces)}\n")
    for piece in pieces:
        lat = " ".join(str(list(v)) for v in piece.lattice)
        for comp in piece.components:
            out.write(f"{lat}: vertices {' '.join(comp.vertices)}; edges {len(comp.edge_ids)}\n")
    return EXIT_OK


def _cmd_integrate(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    f = _load_class(args.cls, g, stdin)
    out.write(integrate(g, f).to_text() + "\n")
    return EXIT_OK


def _cmd_coords(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    f = _load_class(args.cls, g, stdin)
    mc = module_coordinates(g, f)
    for i, c in enumerate(mc.coefficients):
        out.write(f"c{i}: {c.to_text()}\n")
    if args.mod_p is not None:
        try:
            flags = modp_divisibility(mc, args.mod_p)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        out.write(f"divisible by {args.mod_p}: " + " ".join("yes" if x else "no" for x in flags) + "\n")
    return EXIT_OK


def _cmd_chase(args, out, err, stdin) -> int:
    data = _load_json(args.problem, stdin)
    try:
        problem = ChaseProblem.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{args.problem}: {exc}") from exc
    if problem.cutoffs is not None:
        cutoffs = problem.cutoffs
    else:
        cutoffs = problem.default_cutoffs(args.steps)
    try:
        results = chase_tower(problem, cutoffs)
    except Inconsistent as exc:
        err.write(f"inconsistent: {exc}\n")
        return EXIT_SEMANTIC
    for r in results:
        out.write(r.report() + "\n")
    status = EXIT_OK
    for rel in args.entails:
        try:
            ok = entails(results[-1], rel)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        out.write(f"{rel}: {'ENTAILED' if ok else 'NOT ENTAILED'}\n")
        if not ok:
            status = EXIT_SEMANTIC
    return status


def _cmd_classify(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    verdicts = classify(g)
    for v in verdicts:
        out.write(v.summary() + "\n")
    return EXIT_SEMANTIC if any(v.tag == UNRECOGNIZED for v in verdicts) else EXIT_OK


_COMMANDS = {
    "catalog": _cmd_catalog,
    "validate": _cmd_validate,
    "betti": _cmd_betti,
    "skeleton": _cmd_skeleton,
    "integrate": _cmd_integrate,
    "coords": _cmd_coords,
    "chase": _cmd_chase,
    "classify": _cmd_classify,
}


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
        stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
        return _COMMANDS[args.command](args, out, err, stdin)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except GKMError as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_SEMANTIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
