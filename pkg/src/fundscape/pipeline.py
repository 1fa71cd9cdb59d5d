"""End-to-end orchestration: load, filter, match, classify, score, report.

A run writes five files into the output directory:

``matched.jsonl``
    ``{record_id, disease_ids[], spans[]}`` per matched publication.
``classification.jsonl``
    ``{record_id, focal_country, category, classes[], year, ncs}`` per
    (matched publication, focal country) pair.
``indicators.csv``
    ``country,year,category,p,mncs`` over the full grid of focal countries,
    period years and categories; ``mncs`` is empty when undefined.
``plot_data.json``
    Chart series, see :func:`fundscape.indicators.plot_data`.
``manifest.json``
    Configuration echo, stage counts and tool version.

Files are written to temporaries and renamed only after every output has
been produced.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .corpus import (
    Corpus,
    CorpusFilter,
    DocType,
    IngestionOptions,
    filter_corpus,
    load_corpus,
    load_whitelist,
)
from .errors import (
    ConfigError,
    FundscapeError,
    MissingReferenceCell,
    ZeroExpected,
)
from .funders import (
    FunderRegistry,
    FundingCategory,
    classify_publication,
    load_funder_registry,
)
from .indicators import (
    EXPECTED_RULES,
    ReferenceStats,
    aggregate,
    aggregate_values,
    compute_reference_stats,
    indicators_csv,
    normalized_score,
    plot_data,
    plot_data_json,
)
from .lexicon import MatchPolicy, effective_terms, load_lexicon
from .matcher import MatchedPublication, MatcherOptions, compile_matcher, tag_corpus

log = logging.getLogger(__name__)

OUTPUT_FILES = ("matched.jsonl", "classification.jsonl", "indicators.csv", "plot_data.json",
                "manifest.json")
PATH_KEYS = ("corpus", "lexicon", "funders", "reference_corpus", "category_whitelist",
             "output_dir")


@dataclass(frozen=True)
class PipelineConfig:
    corpus: str | None = None
    lexicon: str | None = None
    funders: str | None = None
    reference_corpus: str | None = None
    output_dir: str | None = None
    category_whitelist: str | None = None
    start_year: int = 2009
    end_year: int = 2015
    focal_countries: tuple[str, ...] = ("FR", "GB", "NL", "ES")
    census_year: int | None = None
    doc_types: tuple[str, ...] = ("Article", "Review")
    case_fold: bool = True
    diacritic_fold: bool = True
    match_policy: str = MatchPolicy.PREFERRED_ONLY.value
    embo_as_european: bool = False
    token_subset: bool = False
    expected_rule: str = "mean_of_expected"
    by_doc_type: bool = True
    workers: int = 1
    base_dir: str = field(default=".", compare=False)

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path = ".") -> "PipelineConfig":
        known = {f.name for f in fields(cls)} - {"base_dir"}
        unknown = set(data) - known - {"matcher"}
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
        values = {k: v for k, v in data.items() if k in known}
        matcher = data.get("matcher") or {}
        for k in ("case_fold", "diacritic_fold"):
            if k in matcher:
                values[k] = matcher[k]
        for k in ("focal_countries", "doc_types"):
            if k in values and values[k] is not None:
                values[k] = tuple(values[k])
        return cls(**values, base_dir=str(base_dir))

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data, path.parent)

    def override(self, **flags: Any) -> "PipelineConfig":
        """Apply command-line overrides; ``None`` values are ignored."""
        changes = {k: (tuple(v) if isinstance(v, list) else v)
                   for k, v in flags.items() if v is not None}
        return replace(self, **changes)

    def path(self, key: str) -> Path | None:
        value = getattr(self, key)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("base_dir")
        d["focal_countries"] = list(self.focal_countries)
        d["doc_types"] = list(self.doc_types)
        return d

    @property
    def years(self) -> list[int]:
        return list(range(self.start_year, self.end_year + 1))

    def matcher_options(self) -> MatcherOptions:
        return MatcherOptions(case_fold=self.case_fold, diacritic_fold=self.diacritic_fold)

    def problems(self) -> list[str]:
        """Invariant violations of the configuration itself."""
        out = []
        if not isinstance(self.start_year, int) or not isinstance(self.end_year, int):
            out.append("start_year and end_year must be integers")
        elif self.start_year > self.end_year:
            out.append(f"start_year {self.start_year} is after end_year {self.end_year}")
        if not self.focal_countries:
            out.append("focal_countries is empty")
        if not isinstance(self.workers, int) or self.workers < 1:
            out.append("workers must be an integer >= 1")
        if self.expected_rule not in EXPECTED_RULES:
            out.append(f"expected_rule must be one of {', '.join(EXPECTED_RULES)}")
        if self.match_policy not in {m.value for m in MatchPolicy}:
            out.append(f"unknown match_policy {self.match_policy!r}")
        for dt in self.doc_types:
            try:
                DocType.parse(dt)
            except ValueError:
                out.append(f"unknown doc type {dt!r}")
        for key in ("corpus", "lexicon", "funders"):
            if getattr(self, key) is None:
                out.append(f"{key} path is not configured")
        return out


@dataclass(frozen=True)
class Diagnostic:
    stage: str
    message: str
    path: str | None = None

    def __str__(self) -> str:
        where = f" [{self.path}]" if self.path else ""
        return f"stage={self.stage}{where}: {self.message}"


class PipelineError(FundscapeError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage={stage}: {cause}")


def _check_file(config: PipelineConfig, key: str, stage: str) -> Diagnostic | None:
    p = config.path(key)
    if p is not None and not p.is_file():
        return Diagnostic(stage, f"file not found: {p}", str(p))
    return None


def validate_inputs(config: PipelineConfig) -> list[Diagnostic]:
    """Every problem that would stop :func:`run_pipeline` while loading."""
    diags = [Diagnostic("config", m) for m in config.problems()]
    if diags:
        return diags
    stages = [("corpus", "corpus"), ("reference_corpus", "reference"), ("lexicon", "lexicon"),
              ("funders", "registry"), ("category_whitelist", "whitelist")]
    missing = set()
    for key, stage in stages:
        d = _check_file(config, key, stage)
        if d is not None:
            diags.append(d)
            missing.add(key)
    opts = IngestionOptions(census_year=config.census_year, on_error="skip")
    for key, stage in (("corpus", "corpus"), ("reference_corpus", "reference")):
        p = config.path(key)
        if p is None or key in missing:
            continue
        try:
            corpus = load_corpus(p, opts)
        except FundscapeError as exc:
            diags.append(Diagnostic(stage, str(exc), str(p)))
            continue
        except (OSError, UnicodeDecodeError) as exc:
            diags.append(Diagnostic(stage, f"cannot read: {exc}", str(p)))
            continue
        diags += [Diagnostic(stage, f"line {r.line}: {r.error}", str(p)) for r in corpus.rejected]
    if "lexicon" not in missing:
        p = config.path("lexicon")
        try:
            lexicon = load_lexicon(p, match_policy=MatchPolicy(config.match_policy))
            compile_matcher(effective_terms(lexicon), config.matcher_options())
        except FundscapeError as exc:
            diags.append(Diagnostic("lexicon", str(exc), str(p)))
        except (OSError, UnicodeDecodeError) as exc:
            diags.append(Diagnostic("lexicon", f"cannot read: {exc}", str(p)))
    if "funders" not in missing:
        p = config.path("funders")
        try:
            load_funder_registry(p)
        except (FundscapeError, ValueError, OSError) as exc:
            diags.append(Diagnostic("registry", str(exc), str(p)))
    if config.category_whitelist is not None and "category_whitelist" not in missing:
        p = config.path("category_whitelist")
        try:
            if not load_whitelist(p):
                diags.append(Diagnostic("whitelist", "category whitelist is empty", str(p)))
        except (OSError, UnicodeDecodeError) as exc:
            diags.append(Diagnostic("whitelist", f"cannot read: {exc}", str(p)))
    out = config.path("output_dir")
    if out is not None and out.exists() and not out.is_dir():
        diags.append(Diagnostic("output", "output path exists and is not a directory", str(out)))
    return diags


@dataclass
class RunResult:
    matched: list
    classifications: list
    report: Any
    files: dict[str, str]
    counts: dict


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except FundscapeError as exc:
        raise PipelineError(name, exc) from exc
    except (OSError, UnicodeDecodeError, ValueError) as exc:
        raise PipelineError(name, exc) from exc


def _dump_lines(objs) -> str:
    return "".join(json.dumps(o, ensure_ascii=False) + "\n" for o in objs)


def analyze(matched: Sequence[MatchedPublication], registry: FunderRegistry,
            stats: ReferenceStats, config: PipelineConfig):
    """Score, classify and aggregate matched publications.

    Returns ``(classifications, report, n_undefined)`` where each
    classification is a ``(Classification, year, score or None)`` triple.
    """
    classifications = []
    tuples = []
    undefined = 0
    for m in matched:
        rec = m.record
        try:
            score = normalized_score(rec, stats, config.expected_rule)
        except (MissingReferenceCell, ZeroExpected) as exc:
            log.debug("ncs undefined: %s", exc)
            score = None
            undefined += 1
        for country in config.focal_countries:
            if country not in rec.countries:
                continue
            cls = classify_publication(rec, registry, country, token_subset=config.token_subset,
                                       embo_as_european=config.embo_as_european)
            classifications.append((cls, rec.pub_year, score))
            tuples.append((m, country, cls.category, score))
    return classifications, aggregate(tuples), undefined


def compute(config: PipelineConfig) -> RunResult:
    """Run every stage in memory and render the output files as strings."""
    problems = config.problems()
    if problems:
        raise ConfigError("; ".join(problems))
    focal = tuple(config.focal_countries)
    corpus = _stage("corpus", load_corpus, config.path("corpus"),
                    IngestionOptions(census_year=config.census_year))
    whitelist = None
    if config.category_whitelist is not None:
        whitelist = _stage("whitelist", load_whitelist, config.path("category_whitelist"))
    flt = CorpusFilter(
        years=(config.start_year, config.end_year),
        countries=frozenset(focal),
        subject_category_whitelist=whitelist,
        doc_types=frozenset(DocType.parse(d) for d in config.doc_types),
    )
    filtered = _stage("filter", filter_corpus, corpus, flt)
    lexicon = _stage("lexicon", load_lexicon, config.path("lexicon"),
                     match_policy=MatchPolicy(config.match_policy))
    matcher = _stage("lexicon", compile_matcher, effective_terms(lexicon),
                     config.matcher_options())
    tagged = tag_corpus(filtered.records, matcher, workers=config.workers)
    matched = [m for m in tagged if m is not None]
    log.info("stage=match records=%d matched=%d terms=%d states=%d workers=%d",
             len(filtered), len(matched), len(matcher.terms), matcher.n_states, config.workers)

    registry = _stage("registry", load_funder_registry, config.path("funders"))
    reference: Corpus = corpus
    if config.reference_corpus is not None:
        reference = _stage("reference", load_corpus, config.path("reference_corpus"),
                           IngestionOptions(census_year=config.census_year))
    stats = _stage("reference", compute_reference_stats, reference, config.by_doc_type)

    classifications, report, undefined = analyze(matched, registry, stats, config)
    log.info("stage=classify pairs=%d ncs_undefined=%d", len(classifications), undefined)

    grid = report.full_grid(focal, config.years)
    by_cy: dict = {}
    for r in grid:
        cell = by_cy.setdefault(r.country, {}).setdefault(str(r.year), {"p": 0, "categories": {}})
        cell["p"] += r.p
        cell["categories"][r.category.value] = r.p
    counts = {
        "loaded": len(corpus),
        "rejected": len(corpus.rejected),
        "filtered": len(filtered),
        "matched": len(matched),
        "classified": len(classifications),
        "ncs_undefined": undefined,
        "reference_cells": len(stats),
        "by_country_year": by_cy,
    }
    manifest = {"tool": "fundscape", "version": __version__, "config": config.to_dict(),
                "counts": counts, "outputs": list(OUTPUT_FILES[:-1])}
    files = {
        "matched.jsonl": _dump_lines(m.to_json() for m in matched),
        "classification.jsonl": _dump_lines(
            {"record_id": c.record_id, "focal_country": c.focal_country,
             "category": c.category.value, "classes": [fc.to_json() for fc in c.classes],
             "year": year, "ncs": None if score is None else score.ncs}
            for c, year, score in classifications),
        "indicators.csv": indicators_csv(grid),
        "plot_data.json": plot_data_json(plot_data(report, focal, config.years)),
        "manifest.json": json.dumps(manifest, indent=1) + "\n",
    }
    return RunResult(matched, classifications, report, files, counts)


def write_atomically(out_dir: Path, files: dict[str, str]) -> dict[str, str]:
    """Write every file to a temporary first; rename only once all succeeded."""
    out_dir.mkdir(parents=True, exist_ok=True)
    temps: list[tuple[str, Path]] = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=out_dir)
            temps.append((name, Path(tmp)))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for name, tmp in temps:
            os.replace(tmp, out_dir / name)
    except BaseException:
        for _, tmp in temps:
            tmp.unlink(missing_ok=True)
        raise
    return {name: str(out_dir / name) for name in files}


def run_pipeline(config: PipelineConfig) -> RunResult:
    """Compute everything, then write the outputs into ``config.output_dir``."""
    out = config.path("output_dir")
    if out is None:
        raise ConfigError("output_dir is not configured")
    result = compute(config)
    result.files = _stage("output", write_atomically, out, result.files)
    log.info("stage=write out=%s files=%d", out, len(result.files))
    return result


def report_from_classification(path: str | Path, countries, years) -> dict:
    """Plot data rebuilt from a prior ``classification.jsonl``."""
    items = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            obj = json.loads(line)
            items.append((obj["focal_country"], obj["year"], FundingCategory(obj["category"]),
                          obj.get("ncs")))
    return plot_data(aggregate_values(items), list(countries), list(years))
