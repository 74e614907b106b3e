"""Command-line interface.

Subcommands mirror the library: ``validate``, ``build``, ``pic``,
``stabilizer``, ``rigidify``, ``split``, ``classify``, ``canonicalize`` and
``morphism``.  Reports go to stdout as text or, with ``--json``, as a JSON
object that validates against the shipped report schema.  Exit codes: 0 for
success or a true verdict, 1 for invalid input, 2 for a false verdict, 3 for
an unknown verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import documents
from .errors import (DocumentError, TooLargeError, ToricError)
from .fans import maximal_cones
from .gerbes import canonicalize, gerbe_class, is_isomorphic_banded, picard_group
from .lattice import divisible_in_quotient
from .morphisms import (DEFAULT_SAMPLE_BUDGET, check_condition_a,
                        check_condition_b, check_two_isomorphic)
from .oracle import oracle_divisibility, oracle_stabilizer_order
from .stacky import (build_matrices, dm_torus, generic_stabilizer,
                     point_stabilizer, psi_exponents, quotient_group, rigidify,
                     split_nonspanning, stacky_fan, validate_data)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FALSE = 2
EXIT_UNKNOWN = 3


def _report(command, inputs, **payload):
    report = {"schema_version": documents.SCHEMA_VERSION, "command": command,
              "inputs": [{"path": path, "hash": digest} for path, digest in inputs]}
    report.update(payload)
    return report


def _error_report(command, inputs, exc: ToricError):
    error = {"code": exc.code, "message": str(exc)}
    location = getattr(exc, "location", "")
    if location:
        error["location"] = location
    return _report(command, inputs, error=error)


def _violations_payload(report):
    return [{"code": v.code, "message": v.message,
             "witness": _jsonable(v.witness)} for v in report.violations]


def _jsonable(value):
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    return value


def _group_payload(group):
    return [documents.encode_int(f) for f in group.invariant_factors]


def _load_valid(path, inputs):
    """Load and semantically validate one stack-data file."""
    data, digest = documents.load_stacky_file(path)
    inputs.append((str(path), digest))
    report = validate_data(data)
    if not report.valid:
        first = report.first()
        raise DocumentError(f"invalid data: {first.message}", first.code)
    return data


# ---------------------------------------------------------------------------
# Command handlers: each returns (exit_code, report dict)
# ---------------------------------------------------------------------------

def _cmd_validate(args):
    inputs = []
    data, digest = documents.load_stacky_file(args.path)
    inputs.append((str(args.path), digest))
    result = validate_data(data)
    code = EXIT_OK if result.valid else EXIT_INVALID
    return code, _report("validate", inputs, valid=result.valid,
                         violations=_violations_payload(result))


def _cmd_build(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    b_matrix, q_matrix = build_matrices(data)
    qg = quotient_group(data)
    dim, band = dm_torus(data)
    payload = {
        "matrices": {"b": documents.encode_grid(b_matrix),
                     "q": documents.encode_grid(q_matrix),
                     "bq": documents.encode_grid(psi_exponents(data))},
        "quotient_group": {"torus_rank": documents.encode_int(qg.torus_rank),
                           "invariant_factors": _group_payload(qg.finite_part)},
        "generic_stabilizer": _group_payload(generic_stabilizer(data)),
        "dm_torus": {"dimension": documents.encode_int(dim),
                     "band": _group_payload(band)},
    }
    split_data, torus_factor = split_nonspanning(data)
    payload["rays_span"] = torus_factor == 0
    if torus_factor == 0:
        sf = stacky_fan(data)
        payload["stacky_fan"] = {
            "extended_group": {
                "free_rank": documents.encode_int(sf.extended_group.free_rank),
                "invariant_factors": _group_payload(sf.extended_group)},
            "lifted_rays": [[documents.encode_int(x) for x in ray]
                            for ray in sf.lifted_rays]}
    else:
        payload["split"] = {"torus_factor_rank": documents.encode_int(torus_factor),
                            "data": documents.serialize_stacky_data(split_data)}
    if args.verify:
        payload["verify"] = _verify_build(data)
    return EXIT_OK, _report("build", inputs, **payload)


def _verify_build(data):
    checks = []
    for cone in maximal_cones(data.fan):
        if len(cone) != data.lattice_rank:
            continue
        main_order = point_stabilizer(data, cone).order()
        try:
            oracle_order = oracle_stabilizer_order(data, cone)
        except TooLargeError:
            checks.append({"cone": sorted(cone), "skipped": "too large"})
            continue
        checks.append({"cone": sorted(cone),
                       "order": documents.encode_int(main_order),
                       "agrees": main_order == oracle_order})
    return {"stabilizer_orders": checks,
            "all_agree": all(c.get("agrees", True) for c in checks)}


def _cmd_pic(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    presentation = picard_group(rigidify(data))
    classes = [gerbe_class(data, i + 1).representative for i in range(data.root_count)]
    payload = {
        "picard": {
            "free_rank": documents.encode_int(presentation.group.free_rank),
            "invariant_factors": _group_payload(presentation.group),
            "relation_matrix": documents.encode_grid(presentation.relation_matrix)},
        "gerbe_classes": [[documents.encode_int(x) for x in rep] for rep in classes],
    }
    return EXIT_OK, _report("pic", inputs, **payload)


def _parse_cone(text):
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(part) for part in text.split(","))
    except ValueError:
        raise DocumentError(f"bad cone argument {text!r}; expected i,j,k") from None


def _cmd_stabilizer(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    cone = _parse_cone(args.cone)
    group = point_stabilizer(data, cone)
    payload = {
        "cone": sorted(cone),
        "stabilizer": {"invariant_factors": _group_payload(group),
                       "order": documents.encode_int(group.order())},
    }
    if args.verify:
        try:
            oracle_order = oracle_stabilizer_order(data, cone)
            payload["verify"] = {"oracle_order": documents.encode_int(oracle_order),
                                 "agrees": oracle_order == group.order()}
        except TooLargeError as exc:
            payload["verify"] = {"skipped": str(exc)}
    return EXIT_OK, _report("stabilizer", inputs, **payload)


def _cmd_rigidify(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    return EXIT_OK, _report("rigidify", inputs,
                            data=documents.serialize_stacky_data(rigidify(data)))


def _cmd_split(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    split_data, torus_factor = split_nonspanning(data)
    return EXIT_OK, _report(
        "split", inputs,
        torus_factor_rank=documents.encode_int(torus_factor),
        data=documents.serialize_stacky_data(split_data))


def _cmd_canonicalize(args):
    inputs = []
    data = _load_valid(args.path, inputs)
    canonical, certificate = canonicalize(data)
    return EXIT_OK, _report(
        "canonicalize", inputs,
        data=documents.serialize_stacky_data(canonical),
        certificate=documents.encode_grid(certificate),
        chain=[documents.encode_int(x) for x in canonical.r])


def _classify_pair(base, base_canonical, other, verify):
    other_canonical, _ = canonicalize(other)
    result = {"chains": [[documents.encode_int(x) for x in base_canonical.r],
                         [documents.encode_int(x) for x in other_canonical.r]]}
    verdict = is_isomorphic_banded(base_canonical, other_canonical)
    result["isomorphic"] = verdict
    if base_canonical.r == other_canonical.r:
        presentation = picard_group(rigidify(base))
        divisibility = []
        for i, r in enumerate(base_canonical.r):
            diff = tuple(a - b for a, b in
                         zip(base_canonical.b.row(i), other_canonical.b.row(i)))
            divisibility.append(divisible_in_quotient(diff, r, presentation.relation_matrix))
        result["divisibility"] = divisibility
        if verify:
            agreement = []
            for i, r in enumerate(base_canonical.r):
                diff = tuple(a - b for a, b in
                             zip(base_canonical.b.row(i), other_canonical.b.row(i)))
                try:
                    agreement.append(
                        oracle_divisibility(diff, r, presentation.relation_matrix)
                        == divisibility[i])
                except TooLargeError:
                    agreement.append(None)
            result["oracle_agrees"] = agreement
    return result


def _cmd_classify(args):
    inputs = []
    base = _load_valid(args.paths[0], inputs)
    others = [_load_valid(path, inputs) for path in args.paths[1:]]
    for other in others:
        if other.fan != base.fan:
            raise DocumentError("data sets do not share the same fan and rays",
                                "mismatched_underlying_data")
    base_canonical, _ = canonicalize(base)
    if args.jobs > 1 and len(others) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(
                lambda other: _classify_pair(base, base_canonical, other, args.verify),
                others))
    else:
        results = [_classify_pair(base, base_canonical, other, args.verify) for other in others]
    everything = all(r["isomorphic"] for r in results)
    code = EXIT_OK if everything else EXIT_FALSE
    return code, _report("classify", inputs, results=results, isomorphic=everything)


def _cmd_morphism(args):
    inputs = []
    md, digest = documents.load_morphism_file(args.paths[0])
    inputs.append((str(args.paths[0]), digest))
    if args.mode == "check":
        condition_a = check_condition_a(md)
        verdict = check_condition_b(md, sample_budget=args.sample_budget, seed=args.seed)
        payload = {"mode": "check", "condition_a": condition_a,
                   "condition_b": _condition_b_payload(verdict)}
        if not condition_a or verdict.is_refuted:
            code = EXIT_FALSE
        elif verdict.status == "unknown":
            code = EXIT_UNKNOWN
        else:
            code = EXIT_OK
        return code, _report("morphism", inputs, **payload)

    md2, digest2 = documents.load_morphism_file(args.paths[1])
    inputs.append((str(args.paths[1]), digest2))
    verdict = check_two_isomorphic(md, md2)
    payload = {"mode": "iso", "iso": {"status": verdict.status}}
    if verdict.ratios is not None:
        payload["iso"]["ratios"] = [str(ratio) for ratio in verdict.ratios]
    code = {"yes": EXIT_OK, "no": EXIT_FALSE, "unknown": EXIT_UNKNOWN}[verdict.status]
    return code, _report("morphism", inputs, **payload)


def _condition_b_payload(verdict):
    payload = {"status": verdict.status}
    if verdict.witness_pattern is not None:
        payload["witness_pattern"] = sorted(verdict.witness_pattern)
    if verdict.witness_point is not None:
        payload["witness_point"] = [str(x) for x in verdict.witness_point]
    return payload


# ---------------------------------------------------------------------------
# Rendering and entry point
# ---------------------------------------------------------------------------

def _render_text(report):
    lines = [f"command: {report['command']}"]
    for entry in report.get("inputs", []):
        lines.append(f"input: {entry['path']} ({entry['hash'][:12]})")

    def _is_flat(value):
        if isinstance(value, list):
            return all(not isinstance(v, (dict, list)) for v in value)
        return not isinstance(value, dict)

    def walk(value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            for key, sub in value.items():
                if _is_flat(sub) or not sub:
                    lines.append(f"{pad}{key}: {json.dumps(sub)}")
                else:
                    lines.append(f"{pad}{key}:")
                    walk(sub, indent + 1)
        elif isinstance(value, list):
            for sub in value:
                if _is_flat(sub):
                    lines.append(f"{pad}- {json.dumps(sub)}")
                else:
                    lines.append(f"{pad}-")
                    walk(sub, indent + 1)

    body = {k: v for k, v in report.items()
            if k not in ("schema_version", "command", "inputs")}
    walk(body, 0)
    return "\n".join(lines)


_HANDLERS = {
    "validate": _cmd_validate,
    "build": _cmd_build,
    "pic": _cmd_pic,
    "stabilizer": _cmd_stabilizer,
    "rigidify": _cmd_rigidify,
    "split": _cmd_split,
    "classify": _cmd_classify,
    "canonicalize": _cmd_canonicalize,
    "morphism": _cmd_morphism,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricdm",
        description="Exact computations with toric stack data given as JSON documents.")
    parser.add_argument("--json", action="store_true", help="emit the report as JSON")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker threads for batch classification")
    parser.add_argument("--sample-budget", type=int, default=DEFAULT_SAMPLE_BUDGET,
                        metavar="N", help="evaluation budget for refutation sampling")
    parser.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for refutation sampling")
    parser.add_argument("--verify", action="store_true",
                        help="cross-check results with the brute-force verifiers")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "build", "pic", "rigidify", "split", "canonicalize"):
        p = sub.add_parser(name)
        p.add_argument("path")
    p = sub.add_parser("stabilizer")
    p.add_argument("path")
    p.add_argument("--cone", default="", metavar="i,j,k",
                   help="ray indices of the cone (empty for the zero cone)")
    p = sub.add_parser("classify")
    p.add_argument("paths", nargs="+", metavar="PATH",
                   help="two or more documents; the first is compared to the rest")
    p = sub.add_parser("morphism")
    p.add_argument("mode", choices=("check", "iso"))
    p.add_argument("paths", nargs="+", metavar="PATH")
    return parser


def _execute(args) -> tuple[int, dict]:
    if args.command == "classify" and len(args.paths) < 2:
        return EXIT_INVALID, _error_report(
            "classify", [], DocumentError("classify needs at least two documents"))
    if args.command == "morphism":
        expected = 1 if args.mode == "check" else 2
        if len(args.paths) != expected:
            return EXIT_INVALID, _error_report(
                "morphism", [],
                DocumentError(f"morphism {args.mode} needs exactly {expected} document(s)"))
    try:
        return _HANDLERS[args.command](args)
    except ToricError as exc:
        return EXIT_INVALID, _error_report(args.command, [], exc)


def run(argv=None) -> tuple[int, dict]:
    """Parse arguments, run the command, return (exit code, report)."""
    return _execute(build_parser().parse_args(argv))


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    code, report = _execute(args)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        print(_render_text(report))
    sys.exit(code)


if __name__ == "__main__":
    main()
