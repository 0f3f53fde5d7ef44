"""Command-line surface: tables, certificates, and the self-verification suite.

Verbs
-----
primes     family prime lists with their verified conditions
forms      pairwise non-commensurability certificate matrix for a family
subgroups  enumeration against the recursion, with the growth floor
graphs     canonical tables, common-cover matrix, distinguishing words
assemble   read a decorated graph, print its closed descriptor document
count      volume-budget report, optionally emitting every descriptor
selftest   run all release criteria

Default output is a human table; --json switches to the structured document
{"status": ..., "payload": ...}.  Identical inputs produce byte-identical
output.  Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import isqrt

from .acceptance import run_all
from .assembler import (
    assemble,
    count_lower_bound,
    default_parcel,
    descriptor_to_json,
    emit_descriptors,
)
from .decorated_graphs import from_subgroup, graph_from_text, has_common_decorated_cover
from .form_families import (
    REFERENCE_ANISOTROPIC_PRIMES,
    REFERENCE_ISOTROPIC_PRIMES,
    make_q,
    make_r,
    noncommensurability_certificate,
    search_primes_anisotropic,
    search_primes_isotropic,
)
from .free_groups import MAX_INDEX, distinguishing_word, enumerate_subgroups, hall_count

# Pairwise subcommands (covers, distinguish) scan a_k^2 pairs; a_5^2 is
# already two hundred thousand fiber products, so the pairwise cap sits
# below the enumeration cap.
MAX_PAIRWISE_INDEX = 4
MAX_EMIT_INDEX = 5

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from error
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as error:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from error


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volcount",
        description="Certified counting of glued-block manifold descriptors.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    primes = verbs.add_parser("primes", help="list family primes with conditions")
    primes.add_argument("family", choices=("isotropic", "anisotropic"))
    primes.add_argument("count", type=_positive_int)
    primes.add_argument("--verify", action="store_true", help="assert the frozen reference lists")
    primes.add_argument("--json", action="store_true")

    forms = verbs.add_parser("forms", help="certificate matrix for a form family")
    forms.add_argument("family", choices=("isotropic", "anisotropic"))
    forms.add_argument("--n", type=_positive_int, default=4, help="dimension (rank n+1)")
    forms.add_argument("--count", type=_positive_int, default=6)
    forms.add_argument("--json", action="store_true")

    subgroups = verbs.add_parser("subgroups", help="index counts by two routes")
    subgroups.add_argument("k", type=_positive_int)
    subgroups.add_argument("--json", action="store_true")

    graphs = verbs.add_parser("graphs", help="decorated graph machinery at index k")
    graphs.add_argument("k", type=_positive_int)
    graphs.add_argument("subcommand", choices=("enumerate", "covers", "distinguish"))
    graphs.add_argument("--json", action="store_true")

    assemble_cmd = verbs.add_parser("assemble", help="descriptor for a graph file")
    assemble_cmd.add_argument("graph", nargs="?", default="-", help="graph text file, - for stdin")
    assemble_cmd.add_argument("--n", type=_positive_int, default=4)
    assemble_cmd.add_argument("--compact", action="store_true")
    assemble_cmd.add_argument("--json", action="store_true")

    count = verbs.add_parser("count", help="volume-budget descriptor count")
    count.add_argument("--v", type=_fraction, required=True, help="volume budget (rational)")
    count.add_argument("--n", type=_positive_int, default=4)
    count.add_argument("--compact", action="store_true")
    count.add_argument("--emit-descriptors", metavar="DIR", default=None)
    count.add_argument("--json", action="store_true")

    selftest = verbs.add_parser("selftest", help="run every release criterion")
    selftest.add_argument("--json", action="store_true")

    return parser


def _cmd_primes(args):
    search = search_primes_isotropic if args.family == "isotropic" else search_primes_anisotropic
    reference = (
        REFERENCE_ISOTROPIC_PRIMES
        if args.family == "isotropic"
        else REFERENCE_ANISOTROPIC_PRIMES
    )
    reports = search(args.count)
    if args.verify:
        primes = tuple(r.prime for r in reports)
        expected = reference[: min(args.count, len(reference))]
        if primes[: len(expected)] != expected:
            raise VerificationFailure(
                f"prime list {primes[:len(expected)]} differs from reference {expected}"
            )
    lines = []
    for report in reports:
        conditions = " ".join(f"{k}={v}" for k, v in sorted(report.conditions.items()))
        lines.append(f"{report.prime:6d}  {conditions}")
    payload = {
        "family": args.family,
        "reports": [
            {"prime": r.prime, "conditions": dict(sorted(r.conditions.items()))}
            for r in reports
        ],
    }
    return payload, lines


def _cmd_forms(args):
    if args.family == "isotropic":
        primes = [r.prime for r in search_primes_isotropic(args.count)]
        forms = [make_q(p, args.n) for p in primes]
    else:
        primes = [r.prime for r in search_primes_anisotropic(args.count)]
        forms = [make_r(p, args.n) for p in primes]
    matrix = []
    for f1 in forms:
        row = []
        for f2 in forms:
            row.append(noncommensurability_certificate(f1, f2))
        matrix.append(row)
    inconclusive = [
        (i, j)
        for i in range(len(forms))
        for j in range(len(forms))
        if i != j and matrix[i][j] is None
    ]
    lines = [f"family={args.family} n={args.n} parameters={' '.join(map(str, primes))}"]
    for i, row in enumerate(matrix):
        cells = []
        for j, certificate in enumerate(row):
            if i == j:
                cells.append("-")
            elif certificate is None:
                cells.append("??")
            elif certificate.method == "epsilon_at_prime":
                cells.append(f"eps@{certificate.witness_prime}")
            else:
                cells.append("disc")
        lines.append(" ".join(f"{cell:>8}" for cell in cells))
    payload = {
        "family": args.family,
        "n": args.n,
        "parameters": primes,
        "certificates": [
            [
                None
                if certificate is None
                else {
                    "method": certificate.method,
                    "witness_prime": certificate.witness_prime,
                    "detail": list(certificate.detail),
                }
                for certificate in row
            ]
            for row in matrix
        ],
    }
    if inconclusive:
        raise VerificationFailure(f"inconclusive pairs: {inconclusive}")
    return payload, lines


def _require_index(k: int, cap: int, what: str) -> None:
    if k > cap:
        raise UsageError(f"{what} is capped at index {cap} (got {k})")


def _cmd_subgroups(args):
    _require_index(args.k, MAX_INDEX, "enumeration")
    rows = []
    lines = []
    for k in range(1, args.k + 1):
        enumerated = len(enumerate_subgroups(k))
        recursion = hall_count(k)
        power = k**k
        root = isqrt(power)
        floor = root if root * root == power else root + 1
        if enumerated != recursion:
            raise VerificationFailure(
                f"k={k}: enumeration gives {enumerated}, recursion gives {recursion}"
            )
        rows.append({"k": k, "subgroups": enumerated, "floor": floor})
        lines.append(f"k={k}  subgroups={enumerated}  floor={floor}")
    return {"rows": rows}, lines


def _cmd_graphs(args):
    _require_index(args.k, MAX_INDEX, "enumeration")
    tables = enumerate_subgroups(args.k)
    if args.subcommand == "enumerate":
        lines = [f"k={args.k} tables={len(tables)}"]
        for i, table in enumerate(tables):
            lines.append(
                f"{i:5d}  a: {' '.join(map(str, table.perm_a))}"
                f"  b: {' '.join(map(str, table.perm_b))}"
            )
        payload = {
            "k": args.k,
            "tables": [
                {"perm_a": list(t.perm_a), "perm_b": list(t.perm_b)} for t in tables
            ],
        }
        return payload, lines

    _require_index(args.k, MAX_PAIRWISE_INDEX, "pairwise subcommands")
    graphs = [from_subgroup(t, frozenset({t.basepoint})) for t in tables]
    if args.subcommand == "covers":
        matrix = []
        shared = 0
        for i, g1 in enumerate(graphs):
            row = []
            for j, g2 in enumerate(graphs):
                has = has_common_decorated_cover(g1, g2).has_cover
                row.append(has)
                if i != j and has:
                    shared += 1
            matrix.append(row)
        lines = [f"k={args.k} graphs={len(graphs)} off_diagonal_with_cover={shared}"]
        for row in matrix:
            lines.append(" ".join("T" if value else "." for value in row))
        payload = {"k": args.k, "matrix": matrix, "off_diagonal_with_cover": shared}
        if shared:
            raise VerificationFailure(f"{shared} distinct pairs share a cover")
        if not all(matrix[i][i] for i in range(len(graphs))):
            raise VerificationFailure("some graph has no cover in common with itself")
        return payload, lines

    # distinguish
    words = []
    lines = [f"k={args.k} tables={len(tables)}"]
    for i in range(len(tables)):
        for j in range(i + 1, len(tables)):
            word = distinguishing_word(tables[i], tables[j])
            if word is None:
                raise VerificationFailure(f"tables {i} and {j} admit no distinguishing word")
            words.append({"i": i, "j": j, "word": str(word)})
            lines.append(f"{i:5d} {j:5d}  {word}")
    payload = {"k": args.k, "words": words}
    return payload, lines


def _cmd_assemble(args):
    if args.graph == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.graph, "r", encoding="ascii") as handle:
                text = handle.read()
        except OSError as error:
            raise UsageError(f"cannot read graph file: {error}") from error
    try:
        graph = graph_from_text(text)
    except ValueError as error:
        raise UsageError(str(error)) from error
    parcel = default_parcel(args.n, args.compact)
    try:
        descriptor = assemble(graph, parcel)
    except ValueError as error:
        raise UsageError(str(error)) from error
    document = descriptor_to_json(descriptor)
    payload = json.loads(document)
    return payload, [document.rstrip("\n")]


def _cmd_count(args):
    parcel = default_parcel(args.n, args.compact)
    try:
        report = count_lower_bound(args.v, parcel)
    except ValueError as error:
        raise UsageError(str(error)) from error
    lines = [
        f"volume_budget = {report.volume_budget}",
        f"max_block_volume = {report.max_block_volume}",
        f"k = {report.k}",
        f"descriptors = {report.descriptor_count}",
        f"floor_bound = {report.floor_bound}",
    ]
    payload = {
        "volume_budget": str(report.volume_budget),
        "max_block_volume": str(report.max_block_volume),
        "k": report.k,
        "descriptor_count": report.descriptor_count,
        "floor_bound": report.floor_bound,
    }
    if args.emit_descriptors is not None:
        _require_index(report.k, MAX_EMIT_INDEX, "descriptor emission")
        written = emit_descriptors(report.k, parcel, args.emit_descriptors)
        if written != report.descriptor_count:
            raise VerificationFailure(
                f"emitted {written} descriptors, expected {report.descriptor_count}"
            )
        lines.append(f"emitted = {written} -> {args.emit_descriptors}")
        payload["emitted"] = written
        payload["directory"] = args.emit_descriptors
    return payload, lines


def _cmd_selftest(args):
    results = run_all(stream=None if args.json else sys.stdout)
    payload = {
        "results": [
            {
                "number": r.number,
                "name": r.name,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "detail": r.detail,
            }
            for r in results
        ]
    }
    if not all(r.passed for r in results):
        failed = [r.number for r in results if not r.passed]
        raise VerificationFailure(f"criteria failed: {failed}")
    return payload, [f"{len(results)} criteria passed"]


_HANDLERS = {
    "primes": _cmd_primes,
    "forms": _cmd_forms,
    "subgroups": _cmd_subgroups,
    "graphs": _cmd_graphs,
    "assemble": _cmd_assemble,
    "count": _cmd_count,
    "selftest": _cmd_selftest,
}


def _emit(status: str, payload, lines, as_json: bool) -> None:
    if as_json:
        document = {"status": status, "payload": payload}
        print(json.dumps(document, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else USAGE_ERROR
    try:
        payload, lines = _HANDLERS[args.verb](args)
    except (UsageError, ValueError) as error:
        if args.json:
            _emit("error", {"error": str(error)}, [], True)
        else:
            print(f"usage error: {error}", file=sys.stderr)
        return USAGE_ERROR
    except VerificationFailure as error:
        if args.json:
            _emit("error", {"error": str(error)}, [], True)
        else:
            print(f"verification failure: {error}", file=sys.stderr)
        return VERIFICATION_FAILURE
    _emit("ok", payload, lines, args.json)
    return 0


if __name__ == "__main__":
    sys.exit(main())
