"""Command-line front end.

Subcommands: ``score`` (the coupled iteration), ``baseline`` (classical
metrics), ``detect`` (citation-ring report), ``validate`` (structural
checks), ``gen`` (synthetic corpus).  Exit codes: 0 success, 1 input or
usage error, 2 analysis warning (non-convergence, or a citation cycle
under --strict-dag).

All outputs are deterministic: identical corpus and flags give
byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .anomaly import (
    CYCLE_REPORT_CAP,
    build_author_citation_graph,
    mutual_citation_cycles,
)
from .baselines import (
    author_citation_counts,
    author_citation_profiles,
    e_from_citations,
    g_from_citations,
    h_from_citations,
    impact_factor,
    pagerank,
    paper_citation_counts,
)
from .corpus import (
    CorpusFormatError,
    RankedEntry,
    generate_synthetic,
    parse_corpus_file,
    write_corpus,
    write_rank_table,
    years_by_paper,
)
from .graphs import (
    CorpusStructureError,
    MissingYearError,
    UnknownEntityError,
    build_bundle,
    check_upper_triangular,
    neighbor_sets,
    newest_first_order,
)
from .scoring import (
    DegenerateGraphError,
    SolveOptions,
    rank_entities,
    solve,
)

BASELINE_METHODS = (
    "citations",
    "hindex",
    "gindex",
    "eindex",
    "impact-factor",
    "pagerank",
)


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2; this tool reserves 2 for
    analysis warnings, so usage errors exit 1 instead."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Pin the help width so --help output is terminal-independent."""

    def __init__(self, prog: str) -> None:
        super().__init__(prog, width=80)


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="trirank",
        description="Rank authors, papers, and venues of a citation corpus.",
        formatter_class=_HelpFormatter,
    )
    subcommands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    score = subcommands.add_parser(
        "score",
        help="run the coupled score iteration and write rank tables",
        formatter_class=_HelpFormatter,
    )
    score.add_argument("--in", dest="input", required=True, help="corpus JSONL file")
    score.add_argument("--out", required=True, help="output directory")
    score.add_argument("--tol", type=float, default=1e-9, help="L1 convergence threshold")
    score.add_argument(
        "--max-iters", type=_positive_int, default=10000, help="iteration budget"
    )
    score.add_argument(
        "--damping", type=float, default=0.0, help="uniform mix-in weight in [0, 1)"
    )
    score.add_argument(
        "--top-k",
        type=_nonnegative_int,
        default=0,
        help="rows per rank table (0 = all)",
    )

    baseline = subcommands.add_parser(
        "baseline",
        help="compute a classical bibliometric score",
        formatter_class=_HelpFormatter,
    )
    baseline.add_argument("--in", dest="input", required=True, help="corpus JSONL file")
    baseline.add_argument("--out", required=True, help="output directory")
    baseline.add_argument(
        "--method", required=True, choices=BASELINE_METHODS, help="which score to compute"
    )
    baseline.add_argument(
        "--year",
        type=int,
        default=None,
        help="census year for impact-factor (default: latest year in corpus)",
    )
    baseline.add_argument(
        "--alpha", type=float, default=0.85, help="pagerank walk-continuation weight"
    )
    baseline.add_argument(
        "--top-k",
        type=_nonnegative_int,
        default=0,
        help="rows per rank table (0 = all)",
    )

    detect = subcommands.add_parser(
        "detect",
        help="report self-citation rates and mutual-citation cycles",
        formatter_class=_HelpFormatter,
    )
    detect.add_argument("--in", dest="input", required=True, help="corpus JSONL file")
    detect.add_argument("--out", required=True, help="output directory")
    detect.add_argument(
        "--max-cycle-len",
        type=int,
        default=4,
        help="longest author cycle to search for (at least 2)",
    )

    validate = subcommands.add_parser(
        "validate",
        help="check corpus structure and report dropped data",
        formatter_class=_HelpFormatter,
    )
    validate.add_argument("--in", dest="input", required=True, help="corpus JSONL file")
    validate.add_argument(
        "--out", default=None, help="directory for validation.txt (default: stdout only)"
    )
    validate.add_argument(
        "--strict-dag",
        action="store_true",
        help="exit 2 when the citation graph has a cycle",
    )

    gen = subcommands.add_parser(
        "gen",
        help="write a synthetic corpus",
        formatter_class=_HelpFormatter,
    )
    gen.add_argument("--out", required=True, help="destination JSONL file")
    gen.add_argument("--seed", type=int, default=0, help="random seed")
    gen.add_argument("--authors", type=_positive_int, default=100, help="author pool size")
    gen.add_argument("--papers", type=_positive_int, default=500, help="paper count")
    gen.add_argument("--venues", type=_positive_int, default=10, help="venue pool size")
    gen.add_argument(
        "--attachment-exponent",
        type=float,
        default=1.0,
        help="bias toward already-cited papers when drawing references",
    )
    return parser


def _write_summary(path: Path, items: list[tuple[str, str]]) -> None:
    path.write_text("".join(f"{key}={value}\n" for key, value in items), encoding="utf-8")


def _number(value: float) -> str:
    return format(value, ".12g")


def _ranked(scores, ids, entity_class: str, top_k: int) -> list[RankedEntry]:
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    if top_k:
        order = order[:top_k]
    return [
        RankedEntry(
            entity_type=entity_class,
            entity_id=ids[i],
            score=float(scores[i]),
            rank=position + 1,
        )
        for position, i in enumerate(order)
    ]


def _load(input_path: str):
    records = parse_corpus_file(input_path)
    bundle, index, report = build_bundle(records)
    return records, bundle, index, report


def cmd_score(args: argparse.Namespace) -> int:
    records, bundle, index, report = _load(args.input)
    sets = neighbor_sets(bundle)
    options = SolveOptions(
        tolerance=args.tol, max_iterations=args.max_iters, damping=args.damping
    )
    result = solve(bundle, sets, options, index=index)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    top_k = args.top_k if args.top_k else None
    for entity_class, file_name in (
        ("author", "authors.csv"),
        ("paper", "papers.csv"),
        ("venue", "venues.csv"),
    ):
        write_rank_table(
            rank_entities(result, index, entity_class, top_k), out_dir / file_name
        )

    summary: list[tuple[str, str]] = [
        ("command", "score"),
        ("authors", str(index.num_authors)),
        ("papers", str(index.num_papers)),
        ("venues", str(index.num_venues)),
        ("tolerance", _number(options.tolerance)),
        ("max_iterations", str(options.max_iterations)),
        ("damping", _number(options.damping)),
        ("top_k", str(args.top_k)),
        ("iterations", str(result.iterations)),
        ("residual", _number(result.residual)),
        ("converged", "true" if result.converged else "false"),
        ("self_citation_edges_dropped", str(len(report.self_citation_edges))),
        ("dangling_references", str(report.dangling_references)),
        ("citation_cycle_found", "true" if report.cycle_found else "false"),
    ]
    if result.diagnostic:
        summary.append(("diagnostic", result.diagnostic))
    _write_summary(out_dir / "summary.txt", summary)
    return 0 if result.converged else 2


def cmd_baseline(args: argparse.Namespace) -> int:
    records, bundle, index, report = _load(args.input)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = args.method
    extras: list[tuple[str, str]] = []
    tables: list[str] = []

    if method == "citations":
        paper_scores = paper_citation_counts(bundle)
        author_scores = author_citation_counts(bundle)
        for entity_class, ids, scores, file_name in (
            ("author", index.authors, author_scores, "citations_authors.csv"),
            ("paper", index.papers, paper_scores, "citations_papers.csv"),
        ):
            write_rank_table(
                _ranked(scores, ids, entity_class, args.top_k), out_dir / file_name
            )
            tables.append(file_name)
    elif method in ("hindex", "gindex", "eindex"):
        score_of = {
            "hindex": h_from_citations,
            "gindex": g_from_citations,
            "eindex": e_from_citations,
        }[method]
        values = [float(score_of(profile)) for profile in author_citation_profiles(bundle)]
        file_name = f"{method}_authors.csv"
        write_rank_table(
            _ranked(values, index.authors, "author", args.top_k), out_dir / file_name
        )
        tables.append(file_name)
    elif method == "impact-factor":
        years = years_by_paper(records)
        if args.year is not None:
            census_year = args.year
        else:
            known = [year for year in years.values() if year is not None]
            if not known:
                raise MissingYearError(
                    f"paper {index.papers[0]!r} has no year metadata"
                )
            census_year = max(known)
        values = [
            impact_factor(bundle, index, years, venue_id, census_year)
            for venue_id in index.venues
        ]
        file_name = "impact_factor_venues.csv"
        write_rank_table(
            _ranked(values, index.venues, "venue", args.top_k), out_dir / file_name
        )
        tables.append(file_name)
        extras.append(("year", str(census_year)))
    else:  # pagerank
        values = pagerank(bundle.C, alpha=args.alpha, paper_ids=index.papers)
        file_name = "pagerank_papers.csv"
        write_rank_table(
            _ranked(values, index.papers, "paper", args.top_k), out_dir / file_name
        )
        tables.append(file_name)
        extras.append(("alpha", _number(args.alpha)))

    summary = [
        ("command", "baseline"),
        ("method", method),
        ("authors", str(index.num_authors)),
        ("papers", str(index.num_papers)),
        ("venues", str(index.num_venues)),
        ("top_k", str(args.top_k)),
        *extras,
        ("tables", ",".join(tables)),
    ]
    _write_summary(out_dir / "summary.txt", summary)
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    if args.max_cycle_len < 2:
        raise ValueError(f"--max-cycle-len must be at least 2, got {args.max_cycle_len}")
    records, bundle, index, report = _load(args.input)
    sets = neighbor_sets(bundle)
    graph = build_author_citation_graph(bundle, index, sets)
    cycles = mutual_citation_cycles(graph, args.max_cycle_len)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "cycles.txt").write_text(
        "".join(",".join(cycle) + "\n" for cycle in cycles), encoding="utf-8"
    )

    order = sorted(range(index.num_authors), key=index.authors.__getitem__)
    lines = ["author_id,self_citations,outgoing_citations,rate\n"]
    for i in order:
        self_cites = graph.self_citations[i]
        total = graph.outgoing_cites[i]
        rate = self_cites / total if total > 0 else 0.0
        lines.append(f"{index.authors[i]},{self_cites},{total},{_number(rate)}\n")
    (out_dir / "self_citations.csv").write_text("".join(lines), encoding="utf-8")

    _write_summary(
        out_dir / "summary.txt",
        [
            ("command", "detect"),
            ("max_cycle_len", str(args.max_cycle_len)),
            ("cycles_found", str(len(cycles))),
            ("cycle_cap_reached", "true" if len(cycles) >= CYCLE_REPORT_CAP else "false"),
            (
                "authors_with_self_citations",
                str(sum(1 for count in graph.self_citations if count > 0)),
            ),
        ],
    )
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    records, bundle, index, report = _load(args.input)
    years = years_by_paper(records)
    if all(years.get(paper_id) is not None for paper_id in index.papers):
        order = newest_first_order(index, years)
        upper = "true" if check_upper_triangular(bundle.C, order) else "false"
    else:
        upper = "unknown"

    lines = [
        ("authors", str(index.num_authors)),
        ("papers", str(index.num_papers)),
        ("venues", str(index.num_venues)),
        ("self_citation_edges", ",".join(report.self_citation_edges)),
        ("dangling_references", str(report.dangling_references)),
        ("citation_cycle_found", "true" if report.cycle_found else "false"),
        (
            "witness_cycle",
            "->".join(report.witness_cycle) if report.witness_cycle else "",
        ),
        (
            "orphan_entities",
            ",".join(f"{kind}:{entity}" for kind, entity in report.orphan_entities),
        ),
        ("upper_triangular", upper),
    ]
    text = "".join(f"{key}={value}\n" for key, value in lines)
    sys.stdout.write(text)
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "validation.txt").write_text(text, encoding="utf-8")
    if args.strict_dag and report.cycle_found:
        return 2
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    records = generate_synthetic(
        seed=args.seed,
        num_authors=args.authors,
        num_papers=args.papers,
        num_venues=args.venues,
        attachment_exponent=args.attachment_exponent,
    )
    destination = Path(args.out)
    if destination.parent != Path(""):
        destination.parent.mkdir(parents=True, exist_ok=True)
    write_corpus(records, destination)
    sys.stdout.write(f"records={len(records)}\n")
    return 0


_HANDLERS = {
    "score": cmd_score,
    "baseline": cmd_baseline,
    "detect": cmd_detect,
    "validate": cmd_validate,
    "gen": cmd_gen,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (
        CorpusFormatError,
        CorpusStructureError,
        DegenerateGraphError,
        MissingYearError,
        UnknownEntityError,
        ValueError,
        OSError,
    ) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
