"""Publication records and corpus ingestion.

Two on-disk formats are read.  JSON-lines is the primary one: an optional
header object ``{"census_year": N}`` on the first line, then one record
object per line with the keys::

    id, title, abstract, keywords[], doc_type, year, categories[],
    countries[], citations, funding: [{org, grants[]}] | null, fa_text?

The CSV variant uses the same column names.  Multi-valued cells are
``;``-separated; in the ``funding`` cell each mention is written as
``org|grant|grant``.  A first line ``# census_year=N`` plays the role of
the JSON header.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from .errors import (
    CensusYearBeforePubYear,
    DuplicateId,
    EmptyWhitelist,
    InputError,
    MalformedRecord,
    UnknownDocType,
)

log = logging.getLogger(__name__)

_COUNTRY = re.compile(r"[A-Z]{2}")
CSV_COLUMNS = ("id", "title", "abstract", "keywords", "doc_type", "year", "categories",
               "countries", "citations", "funding", "fa_text")


class DocType(str, Enum):
    ARTICLE = "Article"
    REVIEW = "Review"

    @classmethod
    def parse(cls, value) -> "DocType":
        if isinstance(value, str):
            for member in cls:
                if member.value.lower() == value.strip().lower():
                    return member
        raise ValueError(value)


@dataclass(frozen=True)
class FunderMention:
    org_text: str
    grant_numbers: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.org_text, str) or not self.org_text.strip():
            raise ValueError("funder mention with empty organisation text")
        object.__setattr__(self, "grant_numbers", tuple(self.grant_numbers))


@dataclass(frozen=True)
class PublicationRecord:
    record_id: str
    title: str
    abstract: str
    keywords: tuple[str, ...]
    doc_type: DocType
    pub_year: int
    subject_categories: frozenset[str]
    countries: frozenset[str]
    citation_count: int
    fa_present: bool = False
    funder_mentions: tuple[FunderMention, ...] = ()
    fa_raw_text: str | None = None

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "keywords", tuple(self.keywords))
        set_(self, "subject_categories", frozenset(self.subject_categories))
        set_(self, "countries", frozenset(self.countries))
        set_(self, "funder_mentions", tuple(self.funder_mentions))
        if not self.record_id:
            raise ValueError("empty record id")
        if not isinstance(self.doc_type, DocType):
            raise ValueError(f"doc_type must be a DocType, got {self.doc_type!r}")
        if self.citation_count < 0:
            raise ValueError("negative citation count")
        if not self.fa_present and (self.funder_mentions or self.fa_raw_text is not None):
            raise ValueError("funding data present on a record without acknowledgement")
        for c in self.countries:
            if not _COUNTRY.fullmatch(c):
                raise ValueError(f"country {c!r} is not an ISO 3166 alpha-2 code")

    def to_json(self) -> dict:
        obj = {
            "id": self.record_id,
            "title": self.title,
            "abstract": self.abstract,
            "keywords": list(self.keywords),
            "doc_type": self.doc_type.value,
            "year": self.pub_year,
            "categories": sorted(self.subject_categories),
            "countries": sorted(self.countries),
            "citations": self.citation_count,
            "funding": [
                {"org": m.org_text, "grants": list(m.grant_numbers)}
                for m in self.funder_mentions
            ] if self.fa_present else None,
        }
        if self.fa_raw_text is not None:
            obj["fa_text"] = self.fa_raw_text
        return obj


@dataclass(frozen=True)
class Rejection:
    line: int
    error: str


@dataclass(frozen=True)
class Corpus:
    records: tuple[PublicationRecord, ...]
    census_year: int
    rejected: tuple[Rejection, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if self.records and self.census_year < max(r.pub_year for r in self.records):
            raise CensusYearBeforePubYear(
                f"census year {self.census_year} precedes latest publication year")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PublicationRecord]:
        return iter(self.records)


@dataclass(frozen=True)
class IngestionOptions:
    """How to read a corpus file.

    ``census_year`` overrides any header in the file.  ``on_error`` is
    ``"raise"`` (stop at the first bad line) or ``"skip"`` (log the line,
    keep going, list it in ``Corpus.rejected``).
    """

    census_year: int | None = None
    min_year: int | None = None
    max_year: int | None = None
    on_error: str = "raise"
    format: str = "auto"


@dataclass(frozen=True)
class CorpusFilter:
    years: tuple[int, int] | None = None
    countries: frozenset[str] | None = None
    subject_category_whitelist: frozenset[str] | None = None
    doc_types: frozenset[DocType] | None = None


# ---------------------------------------------------------------- parsing

def _str_list(value, name: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValueError(f"{name} must be a list of strings")
    return value


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer")
    return value


def record_from_json(obj: dict) -> PublicationRecord:
    """Build a record from one decoded JSON object.

    Raises ``ValueError`` on schema problems and ``UnknownDocType`` for
    document types other than Article and Review.
    """
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    missing = [k for k in ("id", "title", "doc_type", "year", "citations") if k not in obj]
    if missing:
        raise ValueError(f"missing field(s): {', '.join(missing)}")
    try:
        doc_type = DocType.parse(obj["doc_type"])
    except ValueError:
        raise UnknownDocType(f"document type {obj['doc_type']!r} is not Article or Review")
    rid = obj["id"]
    if not isinstance(rid, str):
        raise ValueError("id must be a string")
    title = obj["title"]
    abstract = obj.get("abstract") or ""
    if not isinstance(title, str) or not isinstance(abstract, str):
        raise ValueError("title and abstract must be strings")
    funding = obj.get("funding")
    fa_text = obj.get("fa_text")
    if fa_text is not None and not isinstance(fa_text, str):
        raise ValueError("fa_text must be a string")
    mentions = []
    if funding is not None:
        if not isinstance(funding, list):
            raise ValueError("funding must be a list or null")
        for m in funding:
            if not isinstance(m, dict) or not isinstance(m.get("org"), str):
                raise ValueError("funding entries need an 'org' string")
            mentions.append(FunderMention(m["org"], tuple(_str_list(m.get("grants", []), "grants"))))
    return PublicationRecord(
        record_id=rid,
        title=title,
        abstract=abstract,
        keywords=tuple(_str_list(obj.get("keywords", []), "keywords")),
        doc_type=doc_type,
        pub_year=_int(obj["year"], "year"),
        subject_categories=frozenset(_str_list(obj.get("categories", []), "categories")),
        countries=frozenset(_str_list(obj.get("countries", []), "countries")),
        citation_count=_int(obj["citations"], "citations"),
        fa_present=funding is not None or fa_text is not None,
        funder_mentions=tuple(mentions),
        fa_raw_text=fa_text,
    )


def _split_multi(cell: str) -> list[str]:
    return [p.strip() for p in cell.split(";") if p.strip()] if cell else []


def _csv_row_to_json(row: dict) -> dict:
    obj: dict = {k: row.get(k) or "" for k in CSV_COLUMNS}
    for k in ("keywords", "categories", "countries"):
        obj[k] = _split_multi(obj[k])
    for k in ("year", "citations"):
        try:
            obj[k] = int(obj[k])
        except ValueError:
            raise ValueError(f"{k} must be an integer, got {obj[k]!r}")
    funding = _split_multi(obj["funding"])
    obj["funding"] = [
        {"org": parts[0].strip(), "grants": [g.strip() for g in parts[1:] if g.strip()]}
        for parts in (m.split("|") for m in funding)
    ] if funding or obj["fa_text"] else None
    if not obj["fa_text"]:
        obj.pop("fa_text")
    return obj


def _iter_jsonl(text: str) -> Iterator[tuple[int, dict | None, str | None]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line), None
        except json.JSONDecodeError as exc:
            yield lineno, None, f"invalid JSON: {exc.msg} at column {exc.colno}"


def _iter_csv(text: str) -> Iterator[tuple[int, dict | None, str | None]]:
    lines = text.splitlines(keepends=True)
    offset = 0
    if lines and lines[0].startswith("#"):
        m = re.match(r"#\s*census_year\s*=\s*(\d+)", lines[0])
        if m:
            yield 1, {"census_year": int(m.group(1))}, None
        lines = lines[1:]
        offset = 1
    reader = csv.DictReader(io.StringIO("".join(lines)))
    missing = [c for c in ("id", "title", "doc_type", "year", "citations")
               if c not in (reader.fieldnames or [])]
    if missing:
        yield offset + 1, None, f"CSV header lacks column(s): {', '.join(missing)}"
        return
    for row in reader:
        lineno = offset + reader.line_num
        try:
            yield lineno, _csv_row_to_json(row), None
        except ValueError as exc:
            yield lineno, None, str(exc)


def _detect_format(path: Path, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    return "csv" if path.suffix.lower() in (".csv", ".tsv") else "jsonl"


def load_corpus(path: str | Path, options: IngestionOptions | None = None) -> Corpus:
    """Read and validate a corpus file."""
    options = options or IngestionOptions()
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    fmt = _detect_format(path, options.format)
    rows = _iter_csv(text) if fmt == "csv" else _iter_jsonl(text)

    records: list[PublicationRecord] = []
    seen: dict[str, int] = {}
    rejected: list[Rejection] = []
    header_year: int | None = None
    first = True

    def reject(err: InputError):
        if options.on_error == "raise":
            raise err
        log.warning("rejected %s", err)
        rejected.append(Rejection(err.line or 0, err.detail))

    for lineno, obj, problem in rows:
        if first and isinstance(obj, dict) and "census_year" in obj and "id" not in obj:
            first = False
            try:
                header_year = _int(obj["census_year"], "census_year")
            except ValueError as exc:
                reject(MalformedRecord(str(exc), path=str(path), line=lineno))
            continue
        first = False
        if problem is not None:
            reject(MalformedRecord(problem, path=str(path), line=lineno))
            continue
        try:
            rec = record_from_json(obj)
        except UnknownDocType as exc:
            reject(UnknownDocType(str(exc), path=str(path), line=lineno))
            continue
        except (ValueError, TypeError) as exc:
            reject(MalformedRecord(str(exc), path=str(path), line=lineno))
            continue
        if rec.record_id in seen:
            reject(DuplicateId(f"id {rec.record_id!r} already used on line {seen[rec.record_id]}",
                               path=str(path), line=lineno))
            continue
        lo, hi = options.min_year, options.max_year
        if (lo is not None and rec.pub_year < lo) or (hi is not None and rec.pub_year > hi):
            reject(MalformedRecord(f"year {rec.pub_year} outside [{lo}, {hi}]",
                                   path=str(path), line=lineno))
            continue
        seen[rec.record_id] = lineno
        records.append(rec)

    census = options.census_year if options.census_year is not None else header_year
    if census is None:
        census = max((r.pub_year for r in records), default=0)
    for r in records:
        if r.pub_year > census:
            raise CensusYearBeforePubYear(
                f"record {r.record_id!r} published {r.pub_year}, after census year {census}",
                path=str(path), line=seen[r.record_id])
    log.info("stage=load path=%s records=%d rejected=%d census_year=%d",
             path, len(records), len(rejected), census)
    return Corpus(tuple(records), census, tuple(rejected))


def dumps_corpus(corpus: Corpus) -> str:
    """Canonical JSON-lines serialization."""
    lines = [json.dumps({"census_year": corpus.census_year})]
    lines += [json.dumps(r.to_json(), ensure_ascii=False) for r in corpus.records]
    return "\n".join(lines) + "\n"


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    if _detect_format(path, "auto") == "csv":
        buf = io.StringIO()
        buf.write(f"# census_year={corpus.census_year}\n")
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in corpus.records:
            obj = r.to_json()
            row = {k: obj.get(k, "") for k in CSV_COLUMNS}
            for k in ("keywords", "categories", "countries"):
                row[k] = ";".join(obj[k])
            row["funding"] = ";".join(
                "|".join([m["org"], *m["grants"]]) for m in obj["funding"] or [])
            row["fa_text"] = obj.get("fa_text") or ""
            writer.writerow(row)
        path.write_text(buf.getvalue(), encoding="utf-8")
    else:
        path.write_text(dumps_corpus(corpus), encoding="utf-8")


def keep_record(rec: PublicationRecord, flt: CorpusFilter) -> bool:
    if flt.years is not None and not flt.years[0] <= rec.pub_year <= flt.years[1]:
        return False
    if flt.countries is not None and not rec.countries & flt.countries:
        return False
    wl = flt.subject_category_whitelist
    if wl is not None and not rec.subject_categories & wl:
        return False
    if flt.doc_types is not None and rec.doc_type not in flt.doc_types:
        return False
    return True


def filter_corpus(corpus: Corpus, flt: CorpusFilter) -> Corpus:
    """Keep records passing every configured criterion, in input order."""
    if flt.subject_category_whitelist is not None and not flt.subject_category_whitelist:
        raise EmptyWhitelist("category filtering requested with an empty whitelist")
    kept = tuple(r for r in corpus.records if keep_record(r, flt))
    log.info("stage=filter records_in=%d records_out=%d", len(corpus), len(kept))
    return Corpus(kept, corpus.census_year, corpus.rejected)


def load_whitelist(path: str | Path) -> frozenset[str]:
    """One subject-category code per line; ``#`` starts a comment."""
    codes = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            codes.add(line)
    return frozenset(codes)

