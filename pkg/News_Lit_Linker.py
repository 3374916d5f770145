"""News Literature Linker: command-line entry point.

Subcommands: index, link, serve, evaluate, gridsearch, extraction, generate.
Every flag can also be set through a NEWSLINK_<FLAG> environment variable.
Exit codes: 0 success, 1 input error, 2 internal error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from Linker import __version__
from Linker.Config import KINDS, configure_logging, env_default, load_search_config
from Linker.Corpus import expand_journal_aliases, load_alias_table, load_papers
from Linker.Engine import BACKENDS, LinkEngine, LinkRequest, LinkResponse
from Linker.Errors import ConfigError, InputError, LinkerError
from Linker.Evaluation import (
    DEFAULT_KS,
    AblationRow,
    Dataset,
    evaluate_extraction,
    grid_search_weights,
    load_ablation_spec,
    load_grid,
    run_ablation,
    write_extraction_report,
    write_grid_report,
    write_report,
)
from Linker.Extraction import JournalGazetteer, RuleExtractor
from Linker.Index import build_index, save_snapshot
from Linker.Output import render_index_stats, render_machine, render_text
from Linker.Synthetic import DEFAULT_N_NEWS, DEFAULT_N_PAPERS, DEFAULT_SEED, generate_benchmark

logger = logging.getLogger("newslink")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2


def _kinds(value: str) -> List[str]:
    kinds = [k.strip() for k in value.split(",") if k.strip()]
    unknown = [k for k in kinds if k not in KINDS]
    if unknown or not kinds:
        raise argparse.ArgumentTypeError(f"kinds must be a comma-separated subset of {','.join(KINDS)}")
    return kinds


def _ks(value: str) -> List[int]:
    try:
        ks = sorted({int(k) for k in value.split(",") if k.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError("ks must be comma-separated positive integers") from None
    if not ks or ks[0] < 1:
        raise argparse.ArgumentTypeError("ks must be comma-separated positive integers")
    return ks


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    value = env_default(name)
    return int(value) if value not in (None, "") else default


def _env_float(name: str, default: Optional[float]) -> Optional[float]:
    value = env_default(name)
    return float(value) if value not in (None, "") else default


def _dataset_args(p: argparse.ArgumentParser, ranking: bool = True) -> None:
    p.add_argument("--papers", default=env_default("papers"), required=env_default("papers") is None,
                   help="paper records (JSON Lines)")
    p.add_argument("--news", default=env_default("news"), required=env_default("news") is None,
                   help="news articles with gold_paper_id (JSON Lines)")
    p.add_argument("--aliases", default=env_default("aliases"), help="journal alias table (TSV)")
    if ranking:
        p.add_argument("--config", default=env_default("config"), help="search config (JSON)")
        p.add_argument("--ks", type=_ks, default=_ks(env_default("ks", ",".join(map(str, DEFAULT_KS))) or "1"),
                       help="comma-separated k values for top-k accuracy")
    p.add_argument("--out", default=env_default("out", "reports"), help="report directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newslink",
        description="Link news articles to the research papers they report on.",
    )
    parser.add_argument("--version", action="version", version=f"News Literature Linker v{__version__}")
    parser.add_argument("--log-level", default=None,
                        help="DEBUG, INFO, WARNING or ERROR (default INFO, or NEWSLINK_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index snapshot from paper records")
    p.add_argument("--papers", default=env_default("papers"), required=env_default("papers") is None)
    p.add_argument("--aliases", default=env_default("aliases"), help="journal alias table (TSV)")
    p.add_argument("--snapshot", default=env_default("snapshot"), required=env_default("snapshot") is None,
                   help="snapshot file to write")
    p.set_defaults(handler=cmd_index)

    p = sub.add_parser("link", help="link one news article")
    p.add_argument("--snapshot", default=env_default("snapshot"))
    p.add_argument("--server", default=env_default("server"), help="URL of a running link service")
    p.add_argument("--config", default=env_default("config"))
    p.add_argument("--gazetteer", default=env_default("gazetteer"), help="supplemental journal names")
    p.add_argument("--backend", choices=BACKENDS, default=env_default("backend", "main"))
    p.add_argument("--kinds", type=_kinds, default=_kinds(env_default("kinds", ",".join(KINDS)) or ""))
    p.add_argument("--top-k", type=int, default=_env_int("top-k", 3))
    p.add_argument("--threshold", type=float, default=_env_float("threshold", None),
                   help="minimum final score; overrides the config file")
    p.add_argument("--format", choices=("text", "machine"), default=env_default("format", "text"))
    p.add_argument("--article", help="JSON file with title, body and release_date")
    p.add_argument("--title", default="")
    p.add_argument("--body")
    p.add_argument("--date", help="release date (YYYY-MM-DD)")
    p.set_defaults(handler=cmd_link)

    p = sub.add_parser("serve", help="serve POST /link over HTTP")
    p.add_argument("--snapshot", default=env_default("snapshot"), required=env_default("snapshot") is None)
    p.add_argument("--config", default=env_default("config"))
    p.add_argument("--gazetteer", default=env_default("gazetteer"))
    p.add_argument("--backend", choices=BACKENDS, default=env_default("backend", "main"))
    p.add_argument("--host", default=env_default("host", "127.0.0.1"))
    p.add_argument("--port", type=int, default=_env_int("port", 8000))
    p.set_defaults(handler=cmd_serve)

    p = sub.add_parser("evaluate", help="run an ablation over a paired dataset")
    _dataset_args(p)
    p.add_argument("--spec", default=env_default("spec", "metadata"),
                   help="ablation preset (features, metadata, backends) or JSON file")
    p.add_argument("--processes", type=int, default=_env_int("processes", 1))
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("gridsearch", help="grid-search subquery weights")
    _dataset_args(p)
    p.add_argument("--grid", default=env_default("grid"), help="JSON mapping kind -> candidate weights")
    p.add_argument("--kinds", type=_kinds, default=_kinds(env_default("kinds", ",".join(KINDS)) or ""))
    p.set_defaults(handler=cmd_gridsearch)

    p = sub.add_parser("extraction", help="score the metadata extractors against gold papers")
    _dataset_args(p, ranking=False)
    p.add_argument("--gazetteer", default=env_default("gazetteer"), help="supplemental journal names")
    p.set_defaults(handler=cmd_extraction)

    p = sub.add_parser("generate", help="write the seeded synthetic benchmark")
    p.add_argument("--seed", type=int, default=_env_int("seed", DEFAULT_SEED))
    p.add_argument("--n-papers", type=int, default=_env_int("n-papers", DEFAULT_N_PAPERS))
    p.add_argument("--n-news", type=int, default=_env_int("n-news", DEFAULT_N_NEWS))
    p.add_argument("--out", default=env_default("out", "benchmark"))
    p.set_defaults(handler=cmd_generate)
    return parser


def cmd_index(args: argparse.Namespace) -> int:
    records = load_papers(args.papers)
    if args.aliases and Path(args.aliases).exists():
        table = load_alias_table(args.aliases)
        records = [expand_journal_aliases(r, table) for r in records]
    elif args.aliases:
        print(f"Warning: alias file '{args.aliases}' not found; indexing without alias expansion", file=sys.stderr)
    index = build_index(records)
    save_snapshot(index, args.snapshot)
    print(f"Indexed {len(index)} papers into {args.snapshot}")
    print(render_index_stats(index), end="")
    return EXIT_OK


def _link_request(args: argparse.Namespace) -> LinkRequest:
    if args.article:
        with open(args.article, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise InputError(f"'{args.article}' must contain a JSON object")
        fields = {k: data[k] for k in ("title", "body", "release_date") if k in data}
    else:
        if not args.body or not args.date:
            raise InputError("either --article or both --body and --date are required")
        fields = {"title": args.title, "body": args.body, "release_date": args.date}
    try:
        return LinkRequest(**fields, enabled_kinds=args.kinds, top_k=args.top_k)
    except ValueError as e:
        raise InputError(f"invalid article: {e}") from e


def cmd_link(args: argparse.Namespace) -> int:
    request = _link_request(args)
    if args.server:
        from Linker.Client import LinkClient

        raw = LinkClient(args.server).link_raw(request)
        if args.format == "machine":
            print(raw, end="")
        else:
            print(render_text(LinkResponse.model_validate_json(raw)), end="")
        return EXIT_OK
    if not args.snapshot:
        raise ConfigError("--snapshot (or NEWSLINK_SNAPSHOT) is required without --server")
    engine = LinkEngine.from_files(args.snapshot, args.config, args.gazetteer, backend=args.backend)
    if args.threshold is not None:
        engine = engine.with_config(min_score_threshold=args.threshold)
    response = engine.link(request)
    print(render_machine(response) if args.format == "machine" else render_text(response), end="")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from link_api.main import create_app

    engine = LinkEngine.from_files(args.snapshot, args.config, args.gazetteer, backend=args.backend)
    uvicorn.run(create_app(engine), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    dataset = Dataset.load(args.papers, args.news, args.aliases)
    spec = load_ablation_spec(args.spec)
    results = run_ablation(dataset, spec, args.ks, load_search_config(args.config), args.processes)
    print(write_report(results, args.out, args.ks), end="")
    return EXIT_OK


def cmd_gridsearch(args: argparse.Namespace) -> int:
    dataset = Dataset.load(args.papers, args.news, args.aliases)
    grid = load_grid(args.grid) if args.grid else None
    row = AblationRow(label="grid search", enabled_kinds=args.kinds)
    result = grid_search_weights(dataset, grid, row, args.ks, load_search_config(args.config))
    print(write_grid_report(result, args.out), end="")
    return EXIT_OK


def cmd_extraction(args: argparse.Namespace) -> int:
    dataset = Dataset.load(args.papers, args.news, args.aliases)
    plugin = None
    if args.gazetteer:
        extra = JournalGazetteer.load_supplement(args.gazetteer)
        plugin = RuleExtractor(JournalGazetteer.from_records(dataset.papers, dataset.aliases, extra))
    result = evaluate_extraction(dataset, plugin)
    print(write_extraction_report(result, args.out), end="")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    benchmark = generate_benchmark(args.seed, args.n_papers, args.n_news)
    paths = benchmark.write(args.out)
    print(f"Wrote {len(benchmark.papers)} papers, {len(benchmark.news)} news articles (seed {args.seed})")
    for name, path in paths.items():
        print(f"  {name.ljust(8)} {path}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
        return args.handler(args)
    except FileNotFoundError as e:
        print(f"Error: File '{e.filename}' not found.", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except json.JSONDecodeError as e:
        print(f"Error: Invalid JSON: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except InputError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except LinkerError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"Internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
