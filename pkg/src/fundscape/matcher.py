"""Multi-pattern disease-name matching over publication text fields.

The effective lexicon terms are compiled into an Aho-Corasick automaton
whose transition function is stored as a dense table indexed by
(state, character class).  Texts are folded, collapsed and scanned by the
compiled kernels in ``_kernels``; many texts are scanned per kernel call.

A match is reported only when it is bounded on both sides by a
non-alphanumeric character or a string edge.  Among matches sharing a start
offset only the longest is kept; matches with different starts are all kept.
Offsets are in folded-text coordinates.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .corpus import PublicationRecord
from .errors import EmptyTerm, EmptyTermSet
from .normalize import codepoint_tables, fold_chars, fold_with_offsets, normalize_term

log = logging.getLogger(__name__)

# characters per kernel call
BATCH_CHARS = 1 << 22


class Field(str, Enum):
    TITLE = "Title"
    ABSTRACT = "Abstract"
    KEYWORD = "Keyword"


@dataclass(frozen=True)
class MatcherOptions:
    case_fold: bool = True
    diacritic_fold: bool = True
    boundary_rule: str = "WordBoundary"
    overlap_rule: str = "LongestMatchWins"

    def __post_init__(self):
        if self.boundary_rule != "WordBoundary":
            raise ValueError(f"unsupported boundary rule {self.boundary_rule!r}")
        if self.overlap_rule != "LongestMatchWins":
            raise ValueError(f"unsupported overlap rule {self.overlap_rule!r}")


@dataclass(frozen=True)
class MatchSpan:
    field: Field
    start: int
    end: int
    term: str
    disease_id: str
    index: int = 0  # keyword position; 0 for title and abstract
    orig_start: int | None = field(default=None, compare=False)
    orig_end: int | None = field(default=None, compare=False)

    def key(self) -> tuple:
        return (self.start, self.end, self.disease_id)

    def to_json(self) -> dict:
        return {
            "field": self.field.value,
            "index": self.index,
            "start": self.start,
            "end": self.end,
            "term": self.term,
            "disease_id": self.disease_id,
            "orig_start": self.orig_start,
            "orig_end": self.orig_end,
        }


@dataclass(frozen=True)
class MatchedPublication:
    record: PublicationRecord
    spans: tuple[MatchSpan, ...]
    disease_ids: frozenset[str] = field(init=False)

    def __post_init__(self):
        if not self.spans:
            raise ValueError("a matched publication needs at least one span")
        object.__setattr__(self, "disease_ids", frozenset(s.disease_id for s in self.spans))

    def to_json(self) -> dict:
        return {
            "record_id": self.record.record_id,
            "disease_ids": sorted(self.disease_ids),
            "spans": [s.to_json() for s in self.spans],
        }


@lru_cache(maxsize=1)
def _base_class_table() -> np.ndarray:
    alnum, space = codepoint_tables()
    table = alnum.astype(np.uint16)
    table[space] = _kernels.SPACE
    return table


class Matcher:
    """Compiled automaton.  Build with :func:`compile_matcher`."""

    def __init__(self, terms, term_ids, options, class_table, alnum, delta, term_of,
                 dict_link, term_len):
        self.terms: tuple[str, ...] = terms
        self.term_ids: tuple[tuple[str, ...], ...] = term_ids
        self.options: MatcherOptions = options
        self._class_table = class_table
        self._alnum = alnum
        self._delta = delta
        self._term_of = term_of
        self._dict_link = dict_link
        self._term_len = term_len

    @property
    def n_states(self) -> int:
        return self._delta.shape[0]

    @property
    def nbytes(self) -> int:
        arrays = (self._class_table, self._alnum, self._delta, self._term_of,
                  self._dict_link, self._term_len)
        return sum(a.nbytes for a in arrays)

    def __repr__(self) -> str:
        return f"Matcher(terms={len(self.terms)}, states={self.n_states})"

    def _scan(self, folded: Sequence[str]):
        lengths = np.fromiter((len(t) for t in folded), dtype=np.int64, count=len(folded))
        bounds = np.zeros(len(folded) + 1, dtype=np.int64)
        np.cumsum(lengths, out=bounds[1:])
        blob = "".join(folded).encode("utf-32-le", "surrogatepass")
        cps = np.frombuffer(blob, dtype=np.uint32)
        return _kernels.run(cps, bounds, self._class_table, self._delta, self._term_of,
                            self._dict_link, self._term_len, self._alnum)

    def find_many(self, texts: Sequence[str], field: Field = Field.ABSTRACT,
                  index: int = 0) -> list[list[MatchSpan]]:
        opts = self.options
        out: list[list[MatchSpan]] = [[] for _ in texts]
        start = 0
        while start < len(texts):
            chunk: list[str] = []
            size = 0
            stop = start
            while stop < len(texts) and (not chunk or size < BATCH_CHARS):
                f = fold_chars(texts[stop], opts.case_fold, opts.diacritic_fold)
                chunk.append(f)
                size += len(f)
                stop += 1
            seg, st, en, tm = self._scan(chunk)
            terms, ids = self.terms, self.term_ids
            for g, s, e, t in zip(seg.tolist(), st.tolist(), en.tolist(), tm.tolist()):
                spans = out[start + g]
                for did in ids[t]:
                    spans.append(MatchSpan(field, s, e, terms[t], did, index))
            start = stop
        return out


def compile_matcher(terms: Iterable[tuple[str, str]],
                    options: MatcherOptions | None = None) -> Matcher:
    """Compile (term, disease_id) pairs into a :class:`Matcher`.

    Terms are folded with the matcher's options; duplicate pairs collapse
    and a term shared by several diseases reports each of them.
    """
    options = options or MatcherOptions()
    by_term: dict[str, set[str]] = {}
    for term, disease_id in terms:
        norm = normalize_term(term, options.case_fold, options.diacritic_fold) if term else ""
        if not norm:
            raise EmptyTerm(f"empty term for disease {disease_id!r}")
        by_term.setdefault(norm, set()).add(disease_id)
    if not by_term:
        raise EmptyTermSet("no terms to compile")

    term_list = tuple(sorted(by_term))
    term_ids = tuple(tuple(sorted(by_term[t])) for t in term_list)

    alnum_cp, _ = codepoint_tables()
    class_table = _base_class_table().copy()
    chars = sorted(set("".join(term_list)) - {" "})
    alnum = np.zeros(len(chars) + 3, dtype=np.bool_)
    alnum[1] = True
    for k, ch in enumerate(chars, start=3):
        class_table[ord(ch)] = k
        alnum[k] = alnum_cp[ord(ch)]
    n_classes = len(chars) + 3

    goto: list[dict[int, int]] = [{}]
    term_of = [-1]
    for ti, term in enumerate(term_list):
        s = 0
        for ch in term:
            c = int(class_table[ord(ch)])
            nxt = goto[s].get(c)
            if nxt is None:
                nxt = len(goto)
                goto.append({})
                term_of.append(-1)
                goto[s][c] = nxt
            s = nxt
        term_of[s] = ti

    n_states = len(goto)
    delta = np.zeros((n_states, n_classes), dtype=np.int32)
    fail = np.zeros(n_states, dtype=np.int32)
    dict_link = np.zeros(n_states, dtype=np.int32)
    term_of_arr = np.asarray(term_of, dtype=np.int32)
    queue: deque[int] = deque()
    for c, t in goto[0].items():
        delta[0, c] = t
        queue.append(t)
    while queue:
        s = queue.popleft()
        f = fail[s]
        delta[s] = delta[f]
        for c, t in goto[s].items():
            fail[t] = delta[f, c] if s else 0
            delta[s, c] = t
            queue.append(t)
        dict_link[s] = f if term_of_arr[f] >= 0 else dict_link[f]
    term_len = np.array([len(t) for t in term_list], dtype=np.int32)
    log.debug("compiled %d terms into %d states x %d classes", len(term_list), n_states,
              n_classes)
    return Matcher(term_list, term_ids, options, class_table, alnum, delta, term_of_arr,
                   dict_link, term_len)


def find_matches(matcher: Matcher, text: str, field: Field = Field.ABSTRACT) -> list[MatchSpan]:
    """All word-bounded term occurrences in ``text``, sorted by (start, end)."""
    if not text:
        return []
    return matcher.find_many([text], field)[0]


def _with_original_offsets(text: str, spans: list[MatchSpan], options: MatcherOptions):
    if not spans:
        return spans
    _, offsets = fold_with_offsets(text, options.case_fold, options.diacritic_fold)
    return [
        MatchSpan(s.field, s.start, s.end, s.term, s.disease_id, s.index,
                  offsets[s.start], offsets[s.end])
        for s in spans
    ]


def _record_texts(record: PublicationRecord) -> list[tuple[Field, int, str]]:
    items = [(Field.TITLE, 0, record.title), (Field.ABSTRACT, 0, record.abstract)]
    items += [(Field.KEYWORD, i, kw) for i, kw in enumerate(record.keywords)]
    return items


def _tag_chunk(matcher: Matcher, records: Sequence[PublicationRecord]):
    items = []
    owners = []
    for r, rec in enumerate(records):
        for item in _record_texts(rec):
            items.append(item)
            owners.append(r)
    found = matcher.find_many([t for _, _, t in items])
    per_record: list[list[MatchSpan]] = [[] for _ in records]
    opts = matcher.options
    for (fld, idx, text), owner, spans in zip(items, owners, found):
        if spans:
            spans = [MatchSpan(fld, s.start, s.end, s.term, s.disease_id, idx) for s in spans]
            per_record[owner].extend(_with_original_offsets(text, spans, opts))
    return [
        MatchedPublication(rec, tuple(spans)) if spans else None
        for rec, spans in zip(records, per_record)
    ]


def tag_publication(record: PublicationRecord, matcher: Matcher) -> MatchedPublication | None:
    """Match title, abstract and each keyword; ``None`` when nothing matches."""
    return _tag_chunk(matcher, [record])[0]


def tag_corpus(records: Sequence[PublicationRecord], matcher: Matcher, workers: int = 1,
               chunk_size: int = 256) -> list[MatchedPublication | None]:
    """Tag every record, preserving input order regardless of ``workers``."""
    chunks = [records[i:i + chunk_size] for i in range(0, len(records), chunk_size)]
    if workers <= 1 or len(chunks) <= 1:
        results = [_tag_chunk(matcher, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _tag_chunk(matcher, c), chunks))
    return [m for part in results for m in part]
