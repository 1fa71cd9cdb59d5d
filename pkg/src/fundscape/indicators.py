"""Field-normalized citation scores and grouped output/impact indicators.

A publication's normalized citation score (NCS) is its citation count
divided by the expected count, the mean citations of reference
publications from the same subject category, publication year and
(optionally) document type.  A publication in several categories uses the
arithmetic mean of its cells' means as the expected value
(``"mean_of_expected"``); ``"mean_of_ratios"`` instead averages the
per-category ratios.  MNCS is the mean NCS of a group; 1.0 is the
reference-set average.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Corpus, DocType, PublicationRecord
from .errors import EmptyCorpus, EmptyGroup, MissingReferenceCell, ZeroExpected
from .funders import FundingCategory

EXPECTED_RULES = ("mean_of_expected", "mean_of_ratios")
CATEGORY_ORDER = tuple(FundingCategory)
CSV_HEADER = ("country", "year", "category", "p", "mncs")

Cell = tuple  # (subject category, year, doc type or None)


@dataclass(frozen=True)
class ReferenceStats:
    sums: dict
    counts: dict
    by_doc_type: bool = True

    def cell(self, category: str, year: int, doc_type: DocType | None) -> Cell:
        return (category, year, doc_type if self.by_doc_type else None)

    def mean(self, cell: Cell) -> float:
        return self.sums[cell] / self.counts[cell]

    def __contains__(self, cell) -> bool:
        return cell in self.counts

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class NormalizedScore:
    record_id: str
    raw_citations: int
    expected: float
    ncs: float


def compute_reference_stats(reference: Corpus | Iterable[PublicationRecord],
                            by_doc_type: bool = True) -> ReferenceStats:
    """Citation sums and counts per (category, year, doc type) cell.

    Whole counting: a record in several categories adds its full citation
    count to each of their cells.
    """
    records = reference.records if isinstance(reference, Corpus) else tuple(reference)
    if not records:
        raise EmptyCorpus("reference corpus has no records")
    sums: dict = defaultdict(int)
    counts: dict = defaultdict(int)
    for r in records:
        dt = r.doc_type if by_doc_type else None
        for cat in r.subject_categories:
            key = (cat, r.pub_year, dt)
            sums[key] += r.citation_count
            counts[key] += 1
    return ReferenceStats(dict(sums), dict(counts), by_doc_type)


def normalized_score(record: PublicationRecord, stats: ReferenceStats,
                     rule: str = "mean_of_expected") -> NormalizedScore:
    if rule not in EXPECTED_RULES:
        raise ValueError(f"unknown expected-value rule {rule!r}")
    cells = [stats.cell(c, record.pub_year, record.doc_type)
             for c in sorted(record.subject_categories)]
    if not cells:
        raise MissingReferenceCell(f"{record.record_id}: record has no subject category")
    missing = [c for c in cells if c not in stats]
    if missing:
        raise MissingReferenceCell(f"{record.record_id}: no reference cell {missing[0]}")
    means = [stats.mean(c) for c in cells]
    c = record.citation_count
    if rule == "mean_of_expected":
        expected = math.fsum(means) / len(means)
        if expected <= 0:
            raise ZeroExpected(f"{record.record_id}: expected citations are zero")
        return NormalizedScore(record.record_id, c, expected, c / expected)
    positive = [m for m in means if m > 0]
    if not positive:
        raise ZeroExpected(f"{record.record_id}: expected citations are zero")
    # mean of c/m_i equals c divided by the harmonic mean of the m_i
    inv = math.fsum(1.0 / m for m in positive) / len(positive)
    return NormalizedScore(record.record_id, c, 1.0 / inv, c * inv)


def mncs(scores: Sequence[NormalizedScore | float]) -> float:
    values = [s.ncs if isinstance(s, NormalizedScore) else float(s) for s in scores]
    if not values:
        raise EmptyGroup("MNCS of an empty group is undefined")
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class IndicatorRow:
    country: str
    year: int
    category: FundingCategory
    p: int
    mncs: float | None


@dataclass(frozen=True)
class IndicatorReport:
    rows: tuple[IndicatorRow, ...]
    # (country, year) -> (P, MNCS) over all categories
    country_year: dict = field(default_factory=dict)
    # country -> (P, MNCS) over all years and categories
    country_total: dict = field(default_factory=dict)
    # (country, category) -> (P, MNCS) over all years
    country_category: dict = field(default_factory=dict)

    def row(self, country: str, year: int, category: FundingCategory) -> IndicatorRow | None:
        for r in self.rows:
            if (r.country, r.year, r.category) == (country, year, category):
                return r
        return None

    def full_grid(self, countries: Iterable[str], years: Iterable[int]) -> list[IndicatorRow]:
        """Every (country, year, category) combination; empty cells have P = 0
        and MNCS ``None``."""
        have = {(r.country, r.year, r.category): r for r in self.rows}
        out = []
        for c in countries:
            for y in years:
                for cat in FundingCategory:
                    out.append(have.get((c, y, cat)) or IndicatorRow(c, y, cat, 0, None))
        return sorted(out, key=_row_key)


def _row_key(r: IndicatorRow):
    return (r.country, r.year, r.category.value)


def _cell_mncs(values: list[float | None]) -> float | None:
    defined = [v for v in values if v is not None]
    return mncs(defined) if defined else None


def aggregate(tagged: Iterable[tuple]) -> IndicatorReport:
    """Group (publication, country, category, score) tuples.

    ``score`` may be ``None`` when the publication's NCS is undefined; such
    publications count toward P but not toward MNCS.
    """
    def values():
        for pub, country, category, score in tagged:
            record = getattr(pub, "record", pub)
            ncs = score.ncs if isinstance(score, NormalizedScore) else score
            yield country, record.pub_year, category, ncs
    return aggregate_values(values())


def aggregate_values(items: Iterable[tuple[str, int, FundingCategory, float | None]]
                     ) -> IndicatorReport:
    """Like :func:`aggregate` over plain (country, year, category, ncs) tuples."""
    cells: dict = defaultdict(list)
    by_cy: dict = defaultdict(list)
    by_c: dict = defaultdict(list)
    by_cc: dict = defaultdict(list)
    for country, year, category, ncs in items:
        value = None if ncs is None else float(ncs)
        cells[(country, year, FundingCategory(category))].append(value)
        by_cy[(country, year)].append(value)
        by_c[country].append(value)
        by_cc[(country, FundingCategory(category))].append(value)
    rows = sorted(
        (IndicatorRow(c, y, cat, len(v), _cell_mncs(v)) for (c, y, cat), v in cells.items()),
        key=_row_key,
    )
    return IndicatorReport(
        tuple(rows),
        {k: (len(v), _cell_mncs(v)) for k, v in sorted(by_cy.items())},
        {k: (len(v), _cell_mncs(v)) for k, v in sorted(by_c.items())},
        {k: (len(v), _cell_mncs(v))
         for k, v in sorted(by_cc.items(), key=lambda kv: (kv[0][0], kv[0][1].value))},
    )


def format_mncs(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def indicators_csv(rows: Iterable[IndicatorRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(rows, key=_row_key):
        w.writerow([r.country, r.year, r.category.value, r.p, format_mncs(r.mncs)])
    return buf.getvalue()


def _r6(x: float | None) -> float | None:
    return None if x is None else round(x, 6)


def plot_data(report: IndicatorReport, countries: Sequence[str], years: Sequence[int]) -> dict:
    """Series for the output, share and impact charts.

    ``output``/``impact``: per-country series over ``years``;
    ``category_shares``: each category's share of a country's output over
    the whole period; ``by_category``: per-country, per-category output and
    impact series.
    """
    grid = {(r.country, r.year, r.category): r for r in report.full_grid(countries, years)}
    cats = [c.value for c in CATEGORY_ORDER]
    data: dict = {"countries": list(countries), "years": list(years), "categories": cats,
                  "output": {}, "impact": {}, "category_shares": {}, "by_category": {}}
    for c in countries:
        data["output"][c] = [report.country_year.get((c, y), (0, None))[0] for y in years]
        data["impact"][c] = [_r6(report.country_year.get((c, y), (0, None))[1]) for y in years]
        total = sum(data["output"][c])
        data["category_shares"][c] = {
            cat.value: _r6(sum(grid[(c, y, cat)].p for y in years) / total) if total else None
            for cat in CATEGORY_ORDER
        }
        data["by_category"][c] = {
            "output": {cat.value: [grid[(c, y, cat)].p for y in years] for cat in CATEGORY_ORDER},
            "impact": {cat.value: [_r6(grid[(c, y, cat)].mncs) for y in years]
                       for cat in CATEGORY_ORDER},
        }
    return data


def plot_data_json(data: dict) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"
