"""Command-line interface.

Every subcommand prints a plain-text report and, with ``--json`` or
``--out``, a :class:`~blockcorr.io.ResultDocument`. Exit codes: 0 success,
1 usage error, 2 data error, 3 undefined criterion, 4 search limit
exceeded, 5 replication mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import replicate as rep
from .criteria import evaluate
from .errors import (BlockmodelError, DataError, NotApplicableError, SearchLimitExceeded,
                     UndefinedCriterionError)
from .fixtures import FIXTURES, load_fixture
from .io import (ResultDocument, fmt4, format_partition, network_digest, parse_blockimage,
                 parse_network, parse_partition, render_blockmodel, solution_record)
from .qap import qap_test
from .search import (SearchParams, enumerate_blockimages, exhaustive_search, local_search,
                     stirling)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_UNDEFINED, EXIT_LIMIT, EXIT_REPLICATE = range(6)

_CRITERIA = {"corr": "correlation", "correlation": "correlation", "penalty": "penalty"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _network(args):
    if args.network in FIXTURES:
        return load_fixture(args.network)
    return parse_network(Path(args.network), directed=not args.undirected,
                         self_ties=args.self_ties)


def _blocks(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _params_dict(args) -> dict:
    skip = {"func", "json", "out", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, doc: ResultDocument, text: str) -> None:
    if args.out:
        Path(args.out).write_text(doc.to_json() + "\n")
    sys.stdout.write(doc.to_json() + "\n" if args.json else text)


def _solution_lines(network, sols, criterion) -> list[str]:
    lines = []
    for idx, s in enumerate(sols, 1):
        pen = "" if s.penalty is None else f"  penalty {s.penalty}"
        lines.append(f"{idx:3d}. corr {fmt4(s.correlation)}{pen}  [{s.provenance}]")
        lines.append(f"     partition  {format_partition(network, s.partition)}")
        lines.append(f"     blockimage {s.blockimage}")
    return lines


# -- subcommands -------------------------------------------------------------

def cmd_evaluate(args) -> int:
    net = _network(args)
    part = parse_partition(args.partition, net)
    bi = parse_blockimage(args.blockimage)
    crit = args.criterion
    if crit == "penalty" and not net.is_binary:
        raise NotApplicableError("the penalty criterion needs a binary network")
    ev = evaluate(net, part, bi, strict=crit == "corr")
    rec = solution_record(net, part, bi, ev, "evaluate")
    lines = [f"network   {args.network} (n={net.n})",
             f"partition {format_partition(net, part)}",
             f"blockimage {bi}"]
    if crit != "penalty":
        lines.append(f"correlation {fmt4(ev.correlation)}" if ev.defined
                     else f"correlation undefined ({ev.undefined})")
    if ev.penalty is not None and crit != "corr":
        lines.append(f"penalty {ev.penalty}" + (" (dnc blocks excluded)" if ev.has_dnc else ""))
    doc = ResultDocument("evaluate", _params_dict(args), None, network_digest(net), [rec])
    _emit(args, doc, "\n".join(lines) + "\n")
    if crit == "both" and not ev.defined and ev.penalty is None:
        return EXIT_UNDEFINED
    return EXIT_OK


def cmd_fit(args) -> int:
    net = _network(args)
    criterion = _CRITERIA[args.criterion]
    fixed_bi = parse_blockimage(args.blockimage) if args.blockimage else None
    fixed_part = parse_partition(args.partition, net) if args.partition else None
    params = SearchParams(args.k, _blocks(args.blocks), criterion=criterion,
                          restarts=args.restarts, max_no_improve=args.max_no_improve,
                          seed=args.seed, epsilon_near=args.epsilon, pool_cap=args.pool_cap,
                          exhaustive_limit=args.exhaustive_limit)
    if args.exhaustive:
        if fixed_part is not None:
            raise DataError("--exhaustive searches partitions; drop --partition")
        pool = exhaustive_search(net, params, fixed_bi)
    else:
        pool = local_search(net, params, fixed_partition=fixed_part, fixed_blockimage=fixed_bi)
    recs = [solution_record(net, s.partition, s.blockimage,
                            evaluate(net, s.partition, s.blockimage, strict=False), s.provenance)
            for s in pool.solutions]
    head = (f"network {args.network} (n={net.n}), k={args.k}, blocks {','.join(params.allowed_types)}, "
            f"criterion {criterion}, {'exhaustive' if args.exhaustive else 'local search'}")
    proven = "proven optimal" if pool.optimum_is_proven else "best found"
    lines = [head, f"{len(pool)} solution(s) in pool ({proven})"]
    lines += _solution_lines(net, pool.solutions, criterion)
    doc = ResultDocument("fit", _params_dict(args), args.seed, network_digest(net), recs,
                         extra={"optimum_is_proven": pool.optimum_is_proven,
                                "partitions_in_space": stirling(net.n, args.k)})
    _emit(args, doc, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_blockimages(args) -> int:
    imgs = enumerate_blockimages(args.k, _blocks(args.blocks), dedupe_relabeling=args.dedupe,
                                 drop_trivial=args.drop_trivial,
                                 drop_degenerate=args.drop_degenerate, limit=args.limit)
    lines = [f"count {len(imgs)}"]
    if not args.count:
        lines += [str(b) for b in imgs]
    doc = ResultDocument("blockimages", _params_dict(args), None, None,
                         extra={"count": len(imgs),
                                "blockimages": [] if args.count else [b.codes() for b in imgs]})
    _emit(args, doc, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_qap(args) -> int:
    net = _network(args)
    part = parse_partition(args.partition, net)
    bi = parse_blockimage(args.blockimage)
    res = qap_test(net, part, bi, iterations=args.iterations, seed=args.seed,
                   exact=True if args.exact else None)
    ev = evaluate(net, part, bi)
    q = {"observed": res.observed, "iterations": res.iterations, "count_ge": res.count_ge,
         "p_value": res.p_value, "null": res.null_summary, "exact": res.exact, "seed": res.seed}
    lines = [f"observed corr {fmt4(res.observed)}",
             f"{'exact' if res.exact else 'random'} permutations: {res.iterations}",
             f"null mean {fmt4(res.null_mean)} sd {fmt4(res.null_sd)} "
             f"range [{fmt4(res.null_min)}, {fmt4(res.null_max)}]",
             f"draws >= observed: {res.count_ge}; undefined draws: {res.n_undefined}",
             f"p = {res.p_value:.4g}"]
    doc = ResultDocument("qap", _params_dict(args), args.seed, network_digest(net),
                         [solution_record(net, part, bi, ev, "qap")], qap=q)
    _emit(args, doc, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    net = _network(args)
    part = parse_partition(args.partition, net)
    bi = parse_blockimage(args.blockimage)
    text = render_blockmodel(net, part, bi)
    ev = evaluate(net, part, bi, strict=False)
    doc = ResultDocument("render", _params_dict(args), None, network_digest(net),
                         [solution_record(net, part, bi, ev, "render")], extra={"text": text})
    _emit(args, doc, text)
    return EXIT_OK


def cmd_replicate(args) -> int:
    results = rep.replicate(args.fixture, args.criterion, include_slow=args.slow or None)
    doc = ResultDocument("replicate", _params_dict(args), None, None,
                         extra={"cases": rep.results_to_dict(results)})
    _emit(args, doc, rep.report(results))
    bad = any(r.status in ("FAIL", "ERROR") for r in results)
    return EXIT_REPLICATE if bad else EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--json", action="store_true", help="print the result document instead of the report")
    p.add_argument("--out", help="also write the result document to this file")


def _add_network(p):
    p.add_argument("--network", required=True,
                   help=f"fixture name ({', '.join(FIXTURES)}) or matrix file")
    p.add_argument("--undirected", action="store_true", help="matrix file is symmetric")
    p.add_argument("--self-ties", action="store_true", help="diagonal cells carry data")


def _add_arrangement(p):
    p.add_argument("--partition", required=True,
                   help="file of label/position lines, or inline 'a,b;c,d'")
    p.add_argument("--blockimage", required=True, help="e.g. 'com nul; nul nul' or '[com,nul],[nul,nul]'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blockcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evaluate", help="fit of a given partition and blockimage")
    _add_network(p)
    _add_arrangement(p)
    p.add_argument("--criterion", choices=("corr", "penalty", "both"), default="both")
    _add_output(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("fit", help="search for optimal partitions and blockimages")
    _add_network(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--blocks", default="com,nul", help="allowed types in priority order")
    p.add_argument("--blockimage", help="fixed blockimage or ensemble ('com|reg' cells)")
    p.add_argument("--partition", help="fixed partition; search blockimages only")
    p.add_argument("--criterion", choices=("corr", "correlation", "penalty"), default="corr")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--max-no-improve", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.01, help="relative near-optimal band")
    p.add_argument("--pool-cap", type=int, default=100)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--exhaustive-limit", type=int, default=5_000_000)
    _add_output(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("blockimages", help="enumerate or count blockimages")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--blocks", default="com,nul")
    p.add_argument("--dedupe", action="store_true", help="one image per relabeling orbit")
    p.add_argument("--drop-trivial", action="store_true")
    p.add_argument("--drop-degenerate", action="store_true")
    p.add_argument("--count", action="store_true", help="print only the count")
    p.add_argument("--limit", type=int, default=1_000_000)
    _add_output(p)
    p.set_defaults(func=cmd_blockimages)

    p = sub.add_parser("qap", help="permutation test of a given arrangement")
    _add_network(p)
    _add_arrangement(p)
    p.add_argument("--iterations", type=int, default=9999)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="enumerate all permutations (n <= 8)")
    _add_output(p)
    p.set_defaults(func=cmd_qap)

    p = sub.add_parser("render", help="text blockmodel of a given arrangement")
    _add_network(p)
    _add_arrangement(p)
    _add_output(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("replicate", help="recompute published reference values")
    p.add_argument("--fixture", default="all", help="fixture name, 'arithmetic' or 'all'")
    p.add_argument("--criterion", type=int, help="restrict to one acceptance criterion")
    p.add_argument("--slow", action="store_true", help="include expensive checks")
    _add_output(p)
    p.set_defaults(func=cmd_replicate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UndefinedCriterionError as exc:
        print(f"error: correlation undefined ({exc.which}): {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except SearchLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (DataError, NotApplicableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BlockmodelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
