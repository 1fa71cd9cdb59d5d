"""Command-line entry point: ``fundscape <subcommand> --config cfg.json``.

Exit codes: 0 success, 1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigError, FundscapeError
from .pipeline import (
    PATH_KEYS,
    PipelineConfig,
    PipelineError,
    compute,
    report_from_classification,
    run_pipeline,
    validate_inputs,
    write_atomically,
)

log = logging.getLogger("fundscape")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="pipeline configuration (JSON)")
    p.add_argument("--corpus")
    p.add_argument("--lexicon")
    p.add_argument("--funders", help="funder registry")
    p.add_argument("--reference", dest="reference_corpus", help="reference (world) corpus")
    p.add_argument("--whitelist", dest="category_whitelist", help="subject-category whitelist")
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-year", type=int)
    p.add_argument("--focal", dest="focal_countries", nargs="+", metavar="CC")
    p.add_argument("--census-year", type=int)
    p.add_argument("--match-policy", choices=["PreferredOnly", "PreferredPlusVettedSynonyms"])
    p.add_argument("--embo-as-european", action="store_true", default=None)
    p.add_argument("--token-subset", action="store_true", default=None,
                   help="allow token-subset funder alias resolution")
    p.add_argument("--workers", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fundscape",
        description="Rare-disease publication retrieval, funding typology and MNCS indicators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check configuration and inputs without running")
    _common(p)

    for name, what in (("match", "matched publications (JSON-lines)"),
                       ("classify", "funding classification (JSON-lines)"),
                       ("indicators", "indicator table (CSV)")):
        p = sub.add_parser(name, help=f"write {what}")
        _common(p)
        p.add_argument("--out", help="output file (default: standard output)")
        if name == "indicators":
            p.add_argument("--plot-data", help="also write chart series (JSON) to this file")

    p = sub.add_parser("run", help="run the whole pipeline")
    _common(p)
    p.add_argument("--out", dest="output_dir", help="output directory")

    p = sub.add_parser("report", help="plot data from a prior classification.jsonl")
    p.add_argument("--classified", required=True)
    p.add_argument("--config")
    p.add_argument("--start-year", type=int)
    p.add_argument("--end-year", type=int)
    p.add_argument("--focal", dest="focal_countries", nargs="+", metavar="CC")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


_OVERRIDES = ("corpus", "lexicon", "funders", "reference_corpus", "category_whitelist",
              "start_year", "end_year", "focal_countries", "census_year", "match_policy",
              "embo_as_european", "token_subset", "workers", "output_dir")


def load_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    flags = {k: getattr(args, k, None) for k in _OVERRIDES}
    # command-line paths are relative to the working directory, not the config file
    for k in PATH_KEYS:
        if flags.get(k) is not None:
            flags[k] = str(Path(flags[k]).resolve())
    return config.override(**flags)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        write_atomically(path.parent if str(path.parent) else Path("."), {path.name: text})


def _invalid(diags) -> int:
    for d in diags:
        print(d, file=sys.stderr)
    log.error("stage=validate problems=%d", len(diags))
    return EXIT_INVALID


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s %(message)s", stream=sys.stderr)
    try:
        if args.command == "report":
            config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
            config = config.override(start_year=args.start_year, end_year=args.end_year,
                                     focal_countries=args.focal_countries)
            problems = [p for p in config.problems() if "path is not configured" not in p]
            if problems:
                return _invalid(problems)
            data = report_from_classification(args.classified, config.focal_countries,
                                              config.years)
            _emit(json.dumps(data, indent=1) + "\n", args.out)
            return EXIT_OK

        config = load_config(args)
        diags = validate_inputs(config)
        if args.command == "validate":
            if diags:
                return _invalid(diags)
            log.info("stage=validate problems=0")
            return EXIT_OK
        if diags:
            return _invalid(diags)
        if args.command == "run":
            if config.output_dir is None:
                return _invalid(["output directory not configured (use --out)"])
            result = run_pipeline(config)
            for name, path in result.files.items():
                log.info("wrote %s", path)
            return EXIT_OK
        result = compute(config)
        key = {"match": "matched.jsonl", "classify": "classification.jsonl",
               "indicators": "indicators.csv"}[args.command]
        _emit(result.files[key], args.out)
        if getattr(args, "plot_data", None):
            _emit(result.files["plot_data.json"], args.plot_data)
        return EXIT_OK
    except ConfigError as exc:
        print(f"stage=config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PipelineError, FundscapeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
