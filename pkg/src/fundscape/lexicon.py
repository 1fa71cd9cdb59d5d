"""Rare-disease name registry with synonym ambiguity flags.

Registry files are CSV with columns ``disease_id, preferred_name,
synonyms[, ambiguous]`` (multi-valued cells ``|``-separated) or a JSON list
of objects with the same keys.  Terms are folded once on load; the folded
form is what the ambiguity flags and :func:`effective_terms` refer to.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import DuplicateDiseaseId, EmptyPreferredName, MalformedRow
from .normalize import normalize_term

log = logging.getLogger(__name__)


class MatchPolicy(str, Enum):
    PREFERRED_ONLY = "PreferredOnly"
    PREFERRED_PLUS_VETTED_SYNONYMS = "PreferredPlusVettedSynonyms"


@dataclass(frozen=True)
class DiseaseEntry:
    disease_id: str
    preferred_name: str
    synonyms: tuple[str, ...] = ()
    ambiguous_terms: frozenset[str] = frozenset()  # folded forms

    def __post_init__(self):
        if not self.preferred_name or not normalize_term(self.preferred_name):
            raise ValueError(f"{self.disease_id}: empty preferred name")
        object.__setattr__(self, "synonyms", tuple(self.synonyms))
        object.__setattr__(self, "ambiguous_terms", frozenset(self.ambiguous_terms))
        keys = [normalize_term(t) for t in self.surface_terms()]
        if len(set(keys)) != len(keys):
            raise ValueError(f"{self.disease_id}: repeated term after normalization")
        if not self.ambiguous_terms <= set(keys):
            raise ValueError(f"{self.disease_id}: ambiguous term not among the entry's terms")

    @property
    def preferred_key(self) -> str:
        return normalize_term(self.preferred_name)

    def surface_terms(self) -> list[str]:
        return [self.preferred_name, *self.synonyms]


@dataclass(frozen=True)
class DiseaseLexicon:
    entries: tuple[DiseaseEntry, ...]
    match_policy: MatchPolicy = MatchPolicy.PREFERRED_ONLY

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AmbiguityRules:
    """Heuristics deciding which terms are unsafe to match.

    A term is flagged when its folded form is shorter than ``min_length``,
    equals a common English word, or when the raw term is an all-caps
    single word of at most ``acronym_max_length`` letters that spells a
    dictionary word.
    """

    min_length: int = 4
    common_words: frozenset[str] = field(default_factory=frozenset)
    dictionary_words: frozenset[str] = field(default_factory=frozenset)
    acronym_max_length: int = 5

    def too_short(self, term: str) -> bool:
        return len(normalize_term(term)) < self.min_length

    def is_common(self, term: str) -> bool:
        return normalize_term(term) in self.common_words

    def is_word_acronym(self, term: str) -> bool:
        t = term.strip()
        return (t.isalpha() and t.isupper() and len(t) <= self.acronym_max_length
                and t.lower() in self.dictionary_words)

    def is_ambiguous(self, term: str) -> bool:
        return self.too_short(term) or self.is_common(term) or self.is_word_acronym(term)


def _read_words(name: str) -> frozenset[str]:
    text = resources.files("fundscape").joinpath("data", name).read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@lru_cache(maxsize=1)
def default_rules() -> AmbiguityRules:
    """L = 4, the bundled 3,000 most frequent English words, and a 30,000
    word dictionary for the acronym rule."""
    return AmbiguityRules(
        min_length=4,
        common_words=_read_words("common_words.txt"),
        dictionary_words=_read_words("english_words.txt"),
    )


def flag_ambiguous(lexicon: DiseaseLexicon, heuristics: AmbiguityRules) -> DiseaseLexicon:
    """Add ambiguity flags; existing flags are kept."""
    entries = []
    for e in lexicon.entries:
        flagged = set(e.ambiguous_terms)
        flagged.update(normalize_term(t) for t in e.surface_terms() if heuristics.is_ambiguous(t))
        entries.append(replace(e, ambiguous_terms=frozenset(flagged)))
    return replace(lexicon, entries=tuple(entries))


def effective_terms(lexicon: DiseaseLexicon) -> list[tuple[str, str]]:
    """(folded term, disease_id) pairs allowed to match under the lexicon's policy."""
    out = []
    for e in lexicon.entries:
        candidates = [e.preferred_name]
        if lexicon.match_policy is MatchPolicy.PREFERRED_PLUS_VETTED_SYNONYMS:
            candidates += e.synonyms
        for t in candidates:
            key = normalize_term(t)
            if key not in e.ambiguous_terms:
                out.append((key, e.disease_id))
    return out


# ------------------------------------------------------------------ files

def _dedupe_synonyms(disease_id: str, preferred: str, synonyms: list[str]) -> list[str]:
    seen = {normalize_term(preferred)}
    out = []
    for s in synonyms:
        key = normalize_term(s)
        if not key:
            continue
        if key in seen:
            log.debug("%s: dropping duplicate term %r", disease_id, s)
            continue
        seen.add(key)
        out.append(s)
    return out


def _split_bar(cell) -> list[str]:
    if cell is None:
        return []
    if isinstance(cell, list):
        return [str(c).strip() for c in cell if str(c).strip()]
    return [p.strip() for p in str(cell).split("|") if p.strip()]


def _rows(path: Path, text: str):
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("entries", [])
        for i, obj in enumerate(data, start=1):
            yield i, obj
    else:
        reader = csv.DictReader(io.StringIO(text))
        for row in reader:
            yield reader.line_num, row


def load_lexicon(path: str | Path, rules: AmbiguityRules | None = None,
                 match_policy: MatchPolicy = MatchPolicy.PREFERRED_ONLY,
                 auto_flag: bool = True) -> DiseaseLexicon:
    """Load a registry snapshot.

    Unless ``auto_flag`` is false the ambiguity heuristics (``rules``,
    default :func:`default_rules`) are applied after loading.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    entries: list[DiseaseEntry] = []
    seen: dict[str, int] = {}
    try:
        rows = list(_rows(path, text))
    except (json.JSONDecodeError, csv.Error) as exc:
        raise MalformedRow(f"cannot parse lexicon: {exc}", path=str(path))
    for line, row in rows:
        if not isinstance(row, dict) or "disease_id" not in row:
            raise MalformedRow("row lacks disease_id", path=str(path), line=line)
        did = str(row.get("disease_id") or "").strip()
        if not did:
            raise MalformedRow("empty disease_id", path=str(path), line=line)
        preferred = str(row.get("preferred_name") or "").strip()
        if not preferred or not normalize_term(preferred):
            raise EmptyPreferredName(f"{did} has no preferred name", path=str(path), line=line)
        if did in seen:
            raise DuplicateDiseaseId(f"{did} already defined on line {seen[did]}",
                                     path=str(path), line=line)
        seen[did] = line
        synonyms = _dedupe_synonyms(did, preferred, _split_bar(row.get("synonyms")))
        ambiguous = {normalize_term(t) for t in _split_bar(row.get("ambiguous"))}
        try:
            entries.append(DiseaseEntry(did, preferred, tuple(synonyms), frozenset(ambiguous)))
        except ValueError as exc:
            raise MalformedRow(str(exc), path=str(path), line=line)
    lexicon = DiseaseLexicon(tuple(entries), match_policy)
    if auto_flag:
        lexicon = flag_ambiguous(lexicon, rules or default_rules())
    log.info("stage=lexicon path=%s entries=%d", path, len(entries))
    return lexicon


def save_lexicon(lexicon: DiseaseLexicon, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = [
            {"disease_id": e.disease_id, "preferred_name": e.preferred_name,
             "synonyms": list(e.synonyms), "ambiguous": sorted(e.ambiguous_terms)}
            for e in lexicon.entries
        ]
        path.write_text(json.dumps(data, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["disease_id", "preferred_name", "synonyms", "ambiguous"])
    for e in lexicon.entries:
        w.writerow([e.disease_id, e.preferred_name, "|".join(e.synonyms),
                    "|".join(sorted(e.ambiguous_terms))])
    path.write_text(buf.getvalue(), encoding="utf-8")
