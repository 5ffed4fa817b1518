#!/usr/bin/env python3
"""
pseudoform command line

Every subcommand reads JSON complex (or trace) files and writes JSON to stdout
or to the file named by -o. Exit codes: 0 on success, 1 on a domain error
(reported as {"error": ..., "message": ...} on stderr), 2 on a usage error or
an unreadable input file.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ValidationError

from . import __version__
from .catalog import GENERATORS, golden_by_name
from .core.analysis import (
    SurfaceClass,
    is_normal,
    is_pseudomanifold,
    is_stacked_sphere,
    singularity_multiset,
    surface_classify,
)
from .core.complex import SimplicialComplex, face_vectors, fresh_labels, is_isomorphic
from .core.rigidity import stress_basis, stress_dimension
from .operations.constructions import (
    BijectionKind,
    ConstructionRecord,
    FacetBijection,
    apply_record,
    connected_sum_relabeling,
)
from .operations.decomposition import (
    build_pseudocompression,
    decompose_relmin,
    pcb_multiset_admissible,
    relatively_minimal_witnesses,
    replay,
)
from .operations.recognition import classify_all
from .utils.config import RIGIDITY_TRIALS
from .utils.errors import PseudoformError
from .utils.io import ComplexFile, load_complex, load_trace, save_complex, write_model

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
DOMAIN_ERROR = 1


class UsageError(Exception):
    """Bad flag values found after argument parsing."""


def _emit(payload: Any, out: Optional[str] = None) -> None:
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json()
    else:
        text = json.dumps(payload, default=str)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        print(text)


def _parse_json_flag(flag: str, value: Optional[str]):
    if value is None:
        return None
    try:
        return json.loads(value)
    except json.JSONDecodeError as e:
        raise UsageError(f"{flag}: invalid JSON ({e.msg})") from e


# ----------------------------------------------------------------------
# Subcommands


def _pseudomanifold(K: SimplicialComplex) -> bool:
    # a non-pure complex is reported, not rejected
    return K.is_pure and is_pseudomanifold(K)


def cmd_info(args) -> int:
    K = load_complex(args.file)
    report = face_vectors(K)
    payload: Dict[str, Any] = {"name": K.name, "dim": report.dim, "f": report.f, "h": report.h, "g2": report.g2, "euler": report.euler}
    payload["pure"] = K.is_pure
    payload["pseudomanifold"] = _pseudomanifold(K)
    payload["normal"] = payload["pseudomanifold"] and is_normal(K)
    if payload["normal"] and K.dim == 2:
        payload["class"] = surface_classify(K).model_dump()
    if payload["normal"] and K.dim == 3:
        payload["singularities"] = [c.model_dump() for c in singularity_multiset(K)]
    _emit(payload)
    return 0


def cmd_check(args) -> int:
    K = load_complex(args.file)
    payload: Dict[str, Any] = {"property": args.property}
    if args.property == "pseudomanifold":
        payload["holds"] = _pseudomanifold(K)
    elif args.property == "normal":
        payload["holds"] = _pseudomanifold(K) and is_normal(K)
    elif args.property == "stacked":
        payload["holds"] = is_stacked_sphere(K)
    else:
        witnesses = relatively_minimal_witnesses(K)
        payload["holds"] = bool(witnesses)
        payload["witnesses"] = [w.model_dump() for w in witnesses]
    _emit(payload)
    return 0


APPLY_OPS = {
    "suspension": "one_vertex_suspension",
    "subdivide": "facet_subdivide",
    "sum": "connected_sum",
    "handle": "handle_addition",
    "vertex_fold": "vertex_fold",
    "edge_fold": "edge_fold",
}


def _apply_record(args, K: SimplicialComplex, other: Optional[SimplicialComplex]) -> ConstructionRecord:
    op = APPLY_OPS[args.op]
    if op == "one_vertex_suspension":
        if args.vertex is None:
            raise UsageError("--vertex is required for suspension")
        x, y = fresh_labels(K, 2)
        return ConstructionRecord(op=op, vertex=args.vertex, fresh={"x": x, "y": y})
    if op == "facet_subdivide":
        face = _parse_json_flag("--face", args.face)
        if face is None:
            raise UsageError("--face is required for subdivide")
        return ConstructionRecord(op=op, face=face, fresh={"apex": fresh_labels(K, 1)[0]})

    pairs = _parse_json_flag("--bijection", args.bijection)
    if not pairs:
        raise UsageError(f"--bijection is required for {args.op}")
    kind = {"vertex_fold": BijectionKind.VERTEX_FOLDING, "edge_fold": BijectionKind.EDGE_FOLDING}.get(
        op, BijectionKind.PLAIN
    )
    edge = _parse_json_flag("--edge", args.edge)
    try:
        psi = FacetBijection.from_mapping({int(a): int(b) for a, b in pairs}, kind=kind, apex=args.apex, edge=edge)
    except (ValidationError, TypeError, ValueError) as e:
        raise UsageError(f"--bijection: {e}") from e
    if op == "connected_sum":
        if other is None:
            raise UsageError("--other is required for sum")
        return ConstructionRecord.for_bijection(op, psi, relabel=connected_sum_relabeling(K, other, psi))
    return ConstructionRecord.for_bijection(op, psi)


def cmd_apply(args) -> int:
    K = load_complex(args.file)
    other = load_complex(args.other) if args.other else None
    record = _apply_record(args, K, other)
    inputs = [K, other] if other is not None else [K]
    result = apply_record(record, inputs)
    save_complex(args.output, result)
    _emit({"record": record.model_dump(mode="json"), "f": list(result.f_vector), "g2": face_vectors(result).g2})
    return 0


def cmd_decompose(args) -> int:
    K = load_complex(args.file)
    u = args.vertex
    if u is None:
        witnesses = [w for w in relatively_minimal_witnesses(K) if len(w.face) == 1]
        if not witnesses:
            raise UsageError("No vertex is a relatively minimal witness; pass --vertex")
        u = witnesses[0].face[0]
    if args.explain:
        for classification in classify_all(K):
            print(classification.explain(), file=sys.stderr)
    trace = decompose_relmin(K, u)
    _emit(trace, args.output)
    return 0


def cmd_replay(args) -> int:
    K = replay(load_trace(args.trace))
    if args.output:
        save_complex(args.output, K)
    else:
        _emit(ComplexFile.from_complex(K))
    return 0


def cmd_rigidity(args) -> int:
    K = load_complex(args.file)
    ambient = args.ambient if args.ambient is not None else K.dim + 1
    report = stress_dimension(K, ambient, trials=args.trials, seed=args.seed)
    payload = {"rank": report.matrix_rank, **report.model_dump()}
    if args.stress_basis:
        edges, basis, _ = stress_basis(K, ambient, seed=args.seed)
        payload["edges"] = [list(e) for e in edges]
        payload["basis"] = [[str(x) for x in vector] for vector in basis]
    _emit(payload)
    return 0


def _gen_params(values: List[str]) -> Dict[str, str]:
    params = {}
    for item in values:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key] = value
    return params


def cmd_gen(args) -> int:
    params = _gen_params(args.param)
    if args.seed is not None:
        params["seed"] = args.seed
    if args.name in GENERATORS:
        K = GENERATORS[args.name](params)
    else:
        golden = golden_by_name()
        if args.name not in golden:
            raise UsageError(f"Unknown catalog entry {args.name!r}; known: {sorted(GENERATORS) + sorted(golden)}")
        K = golden[args.name].complex
    save_complex(args.output, K, name=args.name)
    _emit({"name": args.name, "f": list(K.f_vector)})
    return 0


def cmd_iso(args) -> int:
    mapping = is_isomorphic(load_complex(args.file1), load_complex(args.file2))
    _emit({"isomorphic": mapping is not None, "mapping": mapping})
    return 0


def cmd_pcb(args) -> int:
    raw = _parse_json_flag("--multiset", args.multiset)
    if not isinstance(raw, list):
        raise UsageError("--multiset expects a JSON list of {b1, orientable} objects")
    try:
        M = [SurfaceClass.model_validate(entry) for entry in raw]
    except ValidationError as e:
        raise UsageError(f"--multiset: {e}") from e
    verdict = pcb_multiset_admissible(M)
    payload: Dict[str, Any] = {"verdict": verdict.model_dump()}
    if args.build:
        if not args.output:
            raise UsageError("--build needs -o")
        built = build_pseudocompression(M, seed=args.seed)
        save_complex(args.output, built.complex, name="pseudocompression")
        if args.trace:
            write_model(args.trace, built.trace)
        payload.update({"f": list(built.complex.f_vector), "g2": face_vectors(built.complex).g2, "top": built.top, "gamma": list(built.gamma)})
    _emit(payload)
    return 0


# ----------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudoform", description="Normal 3-pseudomanifolds: constructions, recognition, rigidity")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="face vectors, normality and singularities")
    p.add_argument("file")
    p.set_defaults(handler=cmd_info)

    p = sub.add_parser("check", help="test one property")
    p.add_argument("file")
    p.add_argument("--property", required=True, choices=["pseudomanifold", "normal", "stacked", "relmin"])
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("apply", help="apply one construction")
    p.add_argument("file")
    p.add_argument("--op", required=True, choices=sorted(APPLY_OPS))
    p.add_argument("--bijection", help="JSON list of [source, target] pairs")
    p.add_argument("--face", help="JSON list of vertices")
    p.add_argument("--vertex", type=int)
    p.add_argument("--apex", type=int)
    p.add_argument("--edge", help="JSON pair of vertices")
    p.add_argument("--other", help="second complex for sum")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("decompose", help="decompose a relatively minimal complex")
    p.add_argument("file")
    p.add_argument("--vertex", type=int, help="witness vertex (default: first vertex witness)")
    p.add_argument("--explain", action="store_true", help="narrate the missing tetrahedra on stderr")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("replay", help="rebuild a complex from a trace")
    p.add_argument("trace")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_replay)

    p = sub.add_parser("rigidity", help="generic rank and stress dimension")
    p.add_argument("file")
    p.add_argument("--ambient", type=int)
    p.add_argument("--trials", type=int, default=RIGIDITY_TRIALS)
    p.add_argument("--seed", type=int)
    p.add_argument("--stress-basis", action="store_true")
    p.set_defaults(handler=cmd_rigidity)

    p = sub.add_parser("gen", help="write a catalog complex")
    p.add_argument("name")
    p.add_argument("--seed", type=int)
    p.add_argument("--param", action="append", default=[], help="generator parameter key=value")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("iso", help="test two complexes for isomorphism")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(handler=cmd_iso)

    p = sub.add_parser("pcb", help="pseudocompression-body multisets")
    p.add_argument("--multiset", required=True, help='JSON list, e.g. [{"b1": 1, "orientable": false}]')
    p.add_argument("--build", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", help="write the construction trace here")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_pcb)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.handler(args)
    except UsageError as e:
        print(f"pseudoform {args.command}: {e}", file=sys.stderr)
        return USAGE_ERROR
    except PseudoformError as e:
        logger.error(f"{args.command} failed: {e}")
        print(json.dumps({"error": type(e).__name__, "message": e.message}), file=sys.stderr)
        return DOMAIN_ERROR
    except (OSError, ValueError) as e:
        # ValueError covers malformed JSON and pydantic validation of input files
        print(f"pseudoform {args.command}: invalid input: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
