"""Command line front end.

    entropy-lab <command> --system SYSTEM.json [options]

Commands: validate, rate, compare, cnt, sample, sup, report.  Exit codes:
0 success, 1 usage or document error, 2 validation error, 3 a resource cap
truncated the computation, 4 an internal entropy inequality was violated.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from ._errors import (
    CapExceededError,
    DocumentError,
    InequalityViolationError,
    ValidationError,
)
from .decompositions import DEFAULT_ENUMERATION_CAP
from .documents import load_json, parse_partition, parse_system
from .dynamical import (
    DEFAULT_DIM_CAP,
    EntropyKind,
    cnt_search,
    entropy_sequence,
    rate_estimate,
    sup_over_sharp,
)
from .partitions import (
    DEFAULT_WORD_CAP,
    distribution,
    refine_afl,
    word_from_code,
    word_label,
)
from .reports import Report, convert_units
from .sampling import empirical_distribution, sample_words, tv_bound, tv_distance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_INEQUALITY = 4

ORDER_TOL = 1e-9
_KIND_NAMES = [k.value for k in EntropyKind]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route to exit code 1
        raise _UsageError(message)


def _threads_from_env() -> int:
    raw = os.environ.get("ENTROPY_LAB_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise _UsageError(f"ENTROPY_LAB_THREADS must be a positive integer, got {raw!r}")
    if threads < 1:
        raise _UsageError(f"ENTROPY_LAB_THREADS must be a positive integer, got {raw!r}")
    return threads


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entropy-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"entropy-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p, *, partitions=False):
        p.add_argument("--system", required=True, help="system document (JSON)")
        if partitions:
            p.add_argument(
                "--partition",
                action="append",
                default=[],
                help="partition document (JSON); repeatable where noted",
            )
        p.add_argument("--format", choices=("table", "csv", "json"), default="table")
        p.add_argument("--units", choices=("nats", "bits"), default="nats")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--word-cap", type=int, default=DEFAULT_WORD_CAP)
        p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)

    p = sub.add_parser("validate", help="parse and validate documents")
    common(p, partitions=True)

    p = sub.add_parser("rate", help="entropy sequence and rate estimate of one kind")
    common(p, partitions=True)
    p.add_argument("--kind", choices=_KIND_NAMES, required=True)
    p.add_argument("--nmax", type=int, default=8)

    p = sub.add_parser("compare", help="all entropy kinds side by side with ordering checks")
    common(p, partitions=True)
    p.add_argument("--nmax", type=int, default=4)

    p = sub.add_parser("cnt", help="decomposition-functional search over two times")
    common(p, partitions=True)
    p.add_argument("--budget", type=int, default=200, help="random decompositions to try")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)

    p = sub.add_parser("sample", help="Monte Carlo word sampling against the analytic law")
    common(p, partitions=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("sup", help="maximize the rate estimate over sharp partitions")
    common(p)
    p.add_argument("--kind", choices=_KIND_NAMES, required=True)
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--cell-budget", type=int, default=None)

    p = sub.add_parser("report", help="full document: summaries, sequences, estimates")
    common(p, partitions=True)
    p.add_argument("--nmax", type=int, default=4)

    return parser


def _load_system(args):
    return parse_system(load_json(args.system))


def _load_partitions(args, system, *, least: int, most: int):
    paths = list(args.partition)
    if not least <= len(paths) <= most:
        expected = str(least) if least == most else f"{least}..{most}"
        raise _UsageError(f"{args.command} takes {expected} --partition arguments")
    return [parse_partition(load_json(p), system) for p in paths]


def _config_doc(args, threads: int) -> dict:
    doc = {
        "version": __version__,
        "threads": threads,
        "word_cap": args.word_cap,
        "dim_cap": args.dim_cap,
        "units": args.units,
        "system": args.system,
    }
    if getattr(args, "partition", None):
        doc["partitions"] = list(args.partition)
    for key in ("kind", "nmax", "budget", "seed", "depth", "samples", "cell_budget", "cap"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    return doc


def _system_doc(system) -> dict:
    return {
        "states": list(system.states),
        "transition": [[float(v) for v in row] for row in system.transition],
        "stationary": [float(v) for v in system.stationary],
    }


def _partition_doc(part) -> dict:
    return {
        "labels": list(part.labels),
        "n_outcomes": part.n_outcomes,
        "sharp": part.is_sharp(),
        "response": [[float(v) for v in row] for row in part.response],
    }


def _sequence_doc(seq, units) -> dict:
    return {
        "kind": seq.kind.value,
        "n": list(range(1, seq.n_max + 1)),
        "values": [convert_units(float(v), units) for v in seq.values],
        "increments": [convert_units(float(v), units) for v in seq.increments],
        "ratios": [convert_units(float(v), units) for v in seq.ratios],
        "truncated_at": seq.truncated_at,
    }


def _estimate_doc(est, units) -> dict:
    return {
        "kind": est.kind.value,
        "depth": est.depth,
        "last_increment": convert_units(est.last_increment, units),
        "last_ratio": convert_units(est.last_ratio, units),
    }


def cmd_validate(args, threads):
    system = _load_system(args)
    parts = _load_partitions(args, system, least=0, most=8)
    doc = {
        "command": "validate",
        "config": _config_doc(args, threads),
        "system": _system_doc(system),
        "partitions": [_partition_doc(p) for p in parts],
    }
    rows = [(label, float(system.stationary[i])) for i, label in enumerate(system.states)]
    summary = [
        f"system: {len(system.states)} states, all documents valid",
        f"partitions: {len(parts)}",
    ]
    return Report(doc, ["state", "stationary"], rows, summary), EXIT_OK


def cmd_rate(args, threads):
    system = _load_system(args)
    (part,) = _load_partitions(args, system, least=1, most=1)
    kind = EntropyKind(args.kind)
    seq = entropy_sequence(
        system, part, kind, args.nmax, word_cap=args.word_cap, dim_cap=args.dim_cap
    )
    estimate = rate_estimate(seq) if seq.n_max >= 2 else None
    sdoc = _sequence_doc(seq, args.units)
    doc = {
        "command": "rate",
        "config": _config_doc(args, threads),
        "sequence": sdoc,
        "estimate": _estimate_doc(estimate, args.units) if estimate else None,
    }
    rows = list(zip(sdoc["n"], sdoc["values"], sdoc["increments"], sdoc["ratios"]))
    summary = [f"kind = {kind.value}", f"units = {args.units}"]
    if estimate:
        summary.append(f"rate (last increment) = {doc['estimate']['last_increment']!r}")
        summary.append(f"rate (last ratio) = {doc['estimate']['last_ratio']!r}")
    if seq.truncated_at is not None:
        summary.append(f"truncated: depth {seq.truncated_at} exceeded a cap")
    code = EXIT_CAP if seq.truncated_at is not None else EXIT_OK
    return Report(doc, ["N", "s_N", "increment", "ratio"], rows, summary), code


def _ordering_violations(seqs: dict, n: int) -> list:
    """Check hud <= mak and hud <= afl <= kow at 0-based depth index n."""
    hud = seqs[EntropyKind.HUD].values
    mak = seqs[EntropyKind.MAK].values
    afl = seqs[EntropyKind.AFL].values
    kow = seqs[EntropyKind.KOW].values
    out = []
    for name, low, high in (
        ("hud<=mak", hud[n], mak[n]),
        ("hud<=afl", hud[n], afl[n]),
        ("afl<=kow", afl[n], kow[n]),
    ):
        if low > high + ORDER_TOL:
            out.append({"depth": n + 1, "check": name, "low": float(low), "high": float(high)})
    return out


def _all_sequences(args, system, part):
    seqs = {
        kind: entropy_sequence(
            system, part, kind, args.nmax, word_cap=args.word_cap, dim_cap=args.dim_cap
        )
        for kind in EntropyKind
    }
    common_depth = min(s.n_max for s in seqs.values())
    violations = []
    for i in range(common_depth):
        violations.extend(_ordering_violations(seqs, i))
    truncated = any(s.truncated_at is not None for s in seqs.values())
    docs = {k.value: _sequence_doc(s, args.units) for k, s in seqs.items()}
    estimates = {
        k.value: _estimate_doc(rate_estimate(s), args.units)
        for k, s in seqs.items()
        if s.n_max >= 2
    }
    rows = []
    for i in range(common_depth):
        row = [i + 1]
        row += [docs[name]["values"][i] for name in _KIND_NAMES]
        row.append("VIOLATED" if any(v["depth"] == i + 1 for v in violations) else "ok")
        rows.append(tuple(row))
    return docs, estimates, violations, truncated, rows


def cmd_compare(args, threads):
    system = _load_system(args)
    (part,) = _load_partitions(args, system, least=1, most=1)
    docs, estimates, violations, truncated, rows = _all_sequences(args, system, part)
    doc = {
        "command": "compare",
        "config": _config_doc(args, threads),
        "sequences": docs,
        "estimates": estimates,
        "ordering_violations": violations,
    }
    summary = [
        f"units = {args.units}",
        "ordering hud<=mak, hud<=afl<=kow: "
        + ("all depths ok" if not violations else f"{len(violations)} VIOLATIONS"),
    ]
    if truncated:
        summary.append("truncated: at least one kind hit a cap")
    code = EXIT_INEQUALITY if violations else (EXIT_CAP if truncated else EXIT_OK)
    return Report(doc, ["N", *_KIND_NAMES, "ordering"], rows, summary), code


def cmd_cnt(args, threads):
    system = _load_system(args)
    parts = _load_partitions(args, system, least=1, most=2)
    result = cnt_search(
        system,
        parts[0],
        parts[1] if len(parts) > 1 else None,
        budget=args.budget,
        seed=args.seed,
        cap=args.cap,
    )
    witness = result.witness
    doc = {
        "command": "cnt",
        "config": _config_doc(args, threads),
        "best_value": convert_units(result.best_value, args.units),
        "witness": result.witness_label,
        "index_sizes": list(witness.index_sizes),
        "witness_weights": [float(w) for w in witness.weights],
        "negative_identifications": result.negative_identifications,
        "identifications": result.identifications,
        "random_trials": result.random_trials,
    }
    uniform_sizes = len(set(witness.index_sizes)) == 1
    rows = [
        (
            str(word_from_code(i, witness.index_sizes[0], witness.arity))
            if uniform_sizes
            else str(i),
            float(w),
        )
        for i, w in enumerate(witness.weights)
        if w > 0.0
    ]
    summary = [
        f"best value = {doc['best_value']!r} ({args.units})",
        f"witness = {result.witness_label}",
        f"negative identifications = {result.negative_identifications} "
        f"of {result.identifications}",
    ]
    return Report(doc, ["index", "weight"], rows, summary), EXIT_OK


def cmd_sample(args, threads):
    system = _load_system(args)
    (part,) = _load_partitions(args, system, least=1, most=1)
    counts = sample_words(
        system, part, args.depth, args.samples, args.seed, word_cap=args.word_cap
    )
    empirical = empirical_distribution(counts)
    refined = refine_afl(system, part, args.depth, word_cap=args.word_cap)
    analytic = distribution(system.stationary, refined)
    tv = tv_distance(empirical, analytic)
    bound = tv_bound(counts.shape[0], args.samples)
    doc = {
        "command": "sample",
        "config": _config_doc(args, threads),
        "n_words": int(counts.shape[0]),
        "tv_distance": tv,
        "tv_bound": bound,
        "within_bound": bool(tv <= bound),
    }
    if counts.shape[0] <= 1024:
        doc["counts"] = [int(c) for c in counts]
        doc["empirical"] = [float(v) for v in empirical]
        doc["analytic"] = [float(v) for v in analytic]
    top = np.argsort(-analytic, kind="stable")[:16]
    rows = [
        (
            word_label(part, word_from_code(int(i), part.n_outcomes, args.depth)),
            int(counts[i]),
            float(empirical[i]),
            float(analytic[i]),
        )
        for i in top
    ]
    summary = [
        f"samples = {args.samples}, words = {counts.shape[0]}",
        f"tv distance = {tv!r}",
        f"reference bound = {bound!r} ({'within' if tv <= bound else 'EXCEEDED'})",
    ]
    return Report(doc, ["word", "count", "empirical", "analytic"], rows, summary), EXIT_OK


def cmd_sup(args, threads):
    system = _load_system(args)
    kind = EntropyKind(args.kind)
    result = sup_over_sharp(
        system,
        kind,
        args.nmax,
        cell_budget=args.cell_budget,
        word_cap=args.word_cap,
        dim_cap=args.dim_cap,
    )
    cells_labeled = [[system.states[x] for x in cell] for cell in result.cells]
    doc = {
        "command": "sup",
        "config": _config_doc(args, threads),
        "cells": cells_labeled,
        "estimate": _estimate_doc(result.estimate, args.units),
        "candidates": result.candidates,
    }
    rows = [(i, "+".join(cell)) for i, cell in enumerate(cells_labeled)]
    summary = [
        f"kind = {kind.value}",
        f"candidates evaluated = {result.candidates}",
        f"best rate (last increment) = {doc['estimate']['last_increment']!r} ({args.units})",
    ]
    return Report(doc, ["cell", "states"], rows, summary), EXIT_OK


def cmd_report(args, threads):
    system = _load_system(args)
    (part,) = _load_partitions(args, system, least=1, most=1)
    docs, estimates, violations, truncated, rows = _all_sequences(args, system, part)
    doc = {
        "command": "report",
        "config": _config_doc(args, threads),
        "system": _system_doc(system),
        "partition": _partition_doc(part),
        "sequences": docs,
        "estimates": estimates,
        "ordering_violations": violations,
    }
    summary = [
        f"system of {system.n_states} states, partition with {part.n_outcomes} outcomes",
        f"units = {args.units}",
        "ordering: " + ("ok" if not violations else f"{len(violations)} VIOLATIONS"),
    ]
    if truncated:
        summary.append("truncated: at least one kind hit a cap")
    code = EXIT_INEQUALITY if violations else (EXIT_CAP if truncated else EXIT_OK)
    return Report(doc, ["N", *_KIND_NAMES, "ordering"], rows, summary), code


_COMMANDS = {
    "validate": cmd_validate,
    "rate": cmd_rate,
    "compare": cmd_compare,
    "cnt": cmd_cnt,
    "sample": cmd_sample,
    "sup": cmd_sup,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        threads = _threads_from_env()
        report, code = _COMMANDS[args.command](args, threads)
    except (_UsageError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InequalityViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INEQUALITY
    text = report.render(args.format)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
