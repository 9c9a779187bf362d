"""Command-line interface.

Exit codes: 0 success/accept, 2 rejected (verification failed or input
violates a precondition), 3 structured pipeline failure, 64 usage error,
65 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .connectivity import find_disjoint_path_fans, is_strongly_k_connected
from .digraph import format_digraph, read_digraph
from .dot import to_dot
from .engine.params import Parameters
from .engine.pipeline import try_pipeline
from .errors import DibipartError, NoSuchFan, ParseError
from .instances import gen_dense_digraph, gen_strong_tournament, gen_tournament
from .oracles import (
    brute_force_partition,
    oracle_disjoint_paths,
    oracle_pair_from,
    oracle_strongly_k_connected,
)
from .tournaments import cycle_through_vertex, disjoint_cycles
from .verify import PartitionCertificate, reverify, verify_partition

EXIT_OK, EXIT_REJECT, EXIT_FAILURE, EXIT_USAGE, EXIT_DATA = 0, 2, 3, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", line=exc.lineno) from exc


def _load_parts(path):
    data = _load_json(path)
    try:
        return [int(v) for v in data["V1"]], [int(v) for v in data["V2"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: expected an object with integer lists V1 and V2") from exc


# ---------------------------------------------------------------- commands
def cmd_generate(args):
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.model == "tournament":
        d = gen_tournament(args.n, args.seed)
    elif args.model == "dense":
        d = gen_dense_digraph(args.n, args.l, args.seed)
    else:
        d = gen_strong_tournament(args.n, args.seed)
    comment = f"model={args.model} n={args.n} l={args.l} seed={args.seed}"
    _emit(format_digraph(d, comment), args.out)
    return EXIT_OK


def cmd_partition(args):
    d = read_digraph(args.input)
    n1 = d.n // 2 if args.n1 is None else args.n1
    n2 = d.n - n1 if args.n2 is None else args.n2
    try:
        params = Parameters(
            k=args.k, l=args.l, n1=n1, n2=n2, mode=args.mode, scale=args.scale, c=args.c,
            heuristic=args.heuristic, jobs=args.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cert, log, failure = try_pipeline(d, params)
    text = log.text()
    if failure is not None:
        text += f"FAILURE phase={failure.phase} claim={failure.claim} {failure.message}\n"
    if args.log_out:
        _emit(text, args.log_out)
    if failure is not None:
        out = {"failure": {"phase": failure.phase, "claim": failure.claim, "message": failure.message,
                           "summary": failure.summary}}
        _emit(_dump(out), args.cert_out)
        print(f"pipeline failure: {failure}", file=sys.stderr)
        return EXIT_FAILURE
    _emit(cert.dumps(), args.cert_out)
    return EXIT_OK if cert.accepted else EXIT_REJECT


def cmd_verify(args):
    d = read_digraph(args.input)
    try:
        cert = PartitionCertificate.from_json(_load_json(args.cert))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{args.cert}: not a partition certificate") from exc
    try:
        fresh, problems = reverify(d, cert)
    except ValueError as exc:  # malformed parts: overlap or out-of-range vertices
        print(f"PROBLEM {exc}")
        print("REJECT")
        return EXIT_REJECT
    for check in fresh.checks:
        verdict = "PASS" if check["pass"] else "FAIL"
        print(f"CHECK {check['name']} bound={check['bound']} observed={check['observed']} {verdict}")
    for p in problems:
        print(f"PROBLEM {p}")
    ok = fresh.accepted and not problems
    print("ACCEPT" if ok else "REJECT")
    return EXIT_OK if ok else EXIT_REJECT


def cmd_cycles(args):
    d = read_digraph(args.input)
    if args.partition:
        c1, c2 = disjoint_cycles(d, args.v, args.t, _load_parts(args.partition))
        out = {"cycles": [c1.to_json(), c2.to_json()], "valid": c1.validate(d) and c2.validate(d)}
    else:
        c = cycle_through_vertex(d, args.v, args.t)
        out = {"cycles": [c.to_json()], "valid": c.validate(d)}
    _emit(_dump(out))
    return EXIT_OK if out["valid"] else EXIT_REJECT


def _guarded(fn, *a):
    try:
        return fn(*a)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_oracle(args):
    d = read_digraph(args.input)
    if args.oracle == "kconn":
        if args.source is not None:
            targets = [int(x) for x in args.targets.split(",")] if args.targets else []
            ok = _guarded(oracle_pair_from, d, args.source, targets, args.k)
            out = {"oracle": "pair-from", "k": args.k, "source": args.source, "targets": targets, "result": ok}
        else:
            ok = _guarded(oracle_strongly_k_connected, d, args.k)
            fast, _ = is_strongly_k_connected(d, args.k)
            out = {"oracle": "kconn", "k": args.k, "result": ok, "flow_result": fast}
    elif args.oracle == "partition":
        n1 = d.n // 2 if args.n1 is None else args.n1
        n2 = d.n - n1 if args.n2 is None else args.n2
        found = _guarded(brute_force_partition, d, args.k, n1, n2)
        out = {"oracle": "partition", "k": args.k, "n1": n1, "n2": n2, "found": found is not None}
        if found is not None:
            cert = verify_partition(d, args.k, found[0], found[1], provenance=["brute-force"])
            out["certificate"] = cert.to_json()
        ok = found is not None
    else:
        try:
            pairs = [tuple(int(x) for x in p.split(":")) for p in args.pairs.split(",")]
        except ValueError as exc:
            raise UsageError("--pairs expects x:y[,x:y...]") from exc
        found = _guarded(oracle_disjoint_paths, d, pairs, args.s)
        try:
            fan = find_disjoint_path_fans(d, pairs, args.s)
            search = True
            fan_ok = not fan.validate(d)
        except NoSuchFan:
            search, fan_ok = False, True
        out = {"oracle": "paths", "pairs": [list(p) for p in pairs], "s": args.s,
               "exists": found is not None, "search_exists": search, "search_valid": fan_ok,
               "paths": {str(i): [list(p) for p in ps] for i, ps in sorted(found.items())} if found else None}
        ok = found is not None
    _emit(_dump(out))
    return EXIT_OK if ok else EXIT_REJECT


def cmd_export_dot(args):
    d = read_digraph(args.input)
    v1 = v2 = None
    if args.cert:
        v1, v2 = _load_parts(args.cert)
    _emit(to_dot(d, v1, v2), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser
def build_parser():
    p = _Parser(prog="dibipart", description="Highly connected bipartitions of dense digraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded random digraph")
    g.add_argument("--model", choices=("tournament", "dense", "strong-tournament"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--l", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    q = sub.add_parser("partition", help="run the partition pipeline and emit a certificate")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--l", type=int, default=1)
    q.add_argument("--n1", type=int)
    q.add_argument("--n2", type=int)
    q.add_argument("--mode", choices=("strict", "scaled"), default="scaled")
    q.add_argument("--scale", type=float, default=0.01)
    q.add_argument("--c", type=int, help="spine cap (default: derived)")
    q.add_argument("--jobs", type=int, default=1, help="worker cap for safety sweeps")
    q.add_argument("--heuristic", action="store_true", help="greedy path-fan search")
    q.add_argument("--cert-out")
    q.add_argument("--log-out")
    q.set_defaults(func=cmd_partition)

    v = sub.add_parser("verify", help="re-verify a certificate against a graph")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--cert", required=True)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cycles", help="cycle through a vertex of a strong tournament")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--v", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--partition", help="JSON with V1/V2 (a certificate works) for two disjoint cycles")
    c.set_defaults(func=cmd_cycles)

    o = sub.add_parser("oracle", help="brute-force reference computations (small n)")
    osub = o.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    ok = osub.add_parser("kconn")
    ok.add_argument("--in", dest="input", required=True)
    ok.add_argument("--k", type=int, required=True)
    ok.add_argument("--source", type=int)
    ok.add_argument("--targets")
    op = osub.add_parser("partition")
    op.add_argument("--in", dest="input", required=True)
    op.add_argument("--k", type=int, default=1)
    op.add_argument("--n1", type=int)
    op.add_argument("--n2", type=int)
    oh = osub.add_parser("paths")
    oh.add_argument("--in", dest="input", required=True)
    oh.add_argument("--pairs", required=True)
    oh.add_argument("--s", type=int, default=1)
    for sp in (ok, op, oh):
        sp.set_defaults(func=cmd_oracle)

    e = sub.add_parser("export-dot", help="DOT text, optionally coloured by a partition")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--cert")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DibipartError as exc:
        print(f"rejected: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except (ValueError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
