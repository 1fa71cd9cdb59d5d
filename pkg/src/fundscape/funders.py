"""Funding-acknowledgement parsing, funder resolution and the funding typology.

Every publication is labelled relative to a focal country with one of five
categories: European, National, NationalAndEuropean, Other, NonFunded.
The label follows from the scopes of the funders it acknowledges:

* ``European``: a European Commission Framework Programme instrument;
* ``NationalFocal``: a public body or charity from the focal country;
* ``ForeignPublic``: a public body from another known country;
* ``OtherOrUnknown``: companies, funders of unknown country, pan-European
  bodies outside the Commission, and unresolved names.

Registry CSV columns: ``funder_id, canonical_name, aliases, country,
org_type`` with ``|``-separated aliases.
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
from typing import Iterable, Sequence

from .corpus import FunderMention, PublicationRecord
from .errors import AliasCollision, DuplicateFunderId, MalformedRow
from .normalize import normalize_key, tokens

log = logging.getLogger(__name__)

UNKNOWN = "Unknown"


class OrgType(str, Enum):
    NATIONAL_AGENCY = "NationalAgency"
    CHARITY = "Charity"
    COMPANY = "Company"
    EC_FRAMEWORK_PROGRAM = "ECFrameworkProgram"
    PAN_EUROPEAN_NON_EC = "PanEuropeanNonEC"
    REGIONAL_PUBLIC = "RegionalPublic"
    OTHER_PUBLIC = "OtherPublic"
    UNKNOWN = "Unknown"


class Scope(str, Enum):
    EUROPEAN = "European"
    NATIONAL_FOCAL = "NationalFocal"
    FOREIGN_PUBLIC = "ForeignPublic"
    OTHER_OR_UNKNOWN = "OtherOrUnknown"


class FundingCategory(str, Enum):
    EUROPEAN = "European"
    NATIONAL = "National"
    NATIONAL_AND_EUROPEAN = "NationalAndEuropean"
    OTHER = "Other"
    NON_FUNDED = "NonFunded"


DOMESTIC_TYPES = frozenset({OrgType.NATIONAL_AGENCY, OrgType.CHARITY,
                            OrgType.REGIONAL_PUBLIC, OrgType.OTHER_PUBLIC})
PUBLIC_TYPES = frozenset({OrgType.NATIONAL_AGENCY, OrgType.REGIONAL_PUBLIC,
                          OrgType.OTHER_PUBLIC})


@dataclass(frozen=True)
class FunderEntry:
    funder_id: str
    canonical_name: str
    aliases: tuple[str, ...] = ()
    country: str = UNKNOWN
    org_type: OrgType = OrgType.UNKNOWN

    def __post_init__(self):
        object.__setattr__(self, "aliases", tuple(self.aliases))
        object.__setattr__(self, "country", self.country or UNKNOWN)


class FunderRegistry:
    """Funders indexed by normalized name and alias."""

    def __init__(self, entries: Iterable[FunderEntry]):
        self.entries: tuple[FunderEntry, ...] = tuple(entries)
        self.by_id: dict[str, FunderEntry] = {}
        self.alias_index: dict[str, str] = {}
        for e in self.entries:
            if e.funder_id in self.by_id:
                raise DuplicateFunderId(f"funder id {e.funder_id!r} defined twice")
            self.by_id[e.funder_id] = e
            for name in (e.canonical_name, *e.aliases):
                key = normalize_key(name)
                if not key:
                    continue
                owner = self.alias_index.setdefault(key, e.funder_id)
                if owner != e.funder_id:
                    raise AliasCollision(key, owner, e.funder_id)
        self._token_sets = [(frozenset(tokens(k)), fid) for k, fid in self.alias_index.items()]

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, FunderRegistry) and self.entries == other.entries

    def lookup(self, org_text: str) -> str | None:
        return self.alias_index.get(normalize_key(org_text))

    def lookup_tokens(self, org_text: str) -> str | None:
        """Funder whose alias tokens are all present in ``org_text``.

        The alias with the most tokens wins; a tie between different
        funders resolves to nothing.
        """
        have = set(tokens(normalize_key(org_text)))
        best: set[str] = set()
        best_len = 0
        for toks, fid in self._token_sets:
            if toks and toks <= have:
                if len(toks) > best_len:
                    best, best_len = {fid}, len(toks)
                elif len(toks) == best_len:
                    best.add(fid)
        return next(iter(best)) if len(best) == 1 else None


@dataclass(frozen=True)
class FunderClass:
    mention: FunderMention
    resolved: str | None
    org_type: OrgType
    country: str
    scope: Scope
    confidence: str | None = None  # "exact" | "token_subset" | None

    def to_json(self) -> dict:
        return {
            "org": self.mention.org_text,
            "grants": list(self.mention.grant_numbers),
            "resolved": self.resolved,
            "org_type": self.org_type.value,
            "country": self.country,
            "scope": self.scope.value,
            "confidence": self.confidence,
        }


# --------------------------------------------------------------- registry IO

def _parse_org_type(value: str) -> OrgType:
    value = (value or "").strip()
    if not value:
        return OrgType.UNKNOWN
    for t in OrgType:
        if t.value.lower() == value.lower():
            return t
    raise ValueError(f"unknown org_type {value!r}")


def load_funder_registry(path: str | Path) -> FunderRegistry:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        rows = list(enumerate(data.get("funders", []) if isinstance(data, dict) else data,
                              start=1))
    else:
        reader = csv.DictReader(io.StringIO(text))
        rows = [(reader.line_num, row) for row in reader]
    entries = []
    lines: dict[str, int] = {}
    for line, row in rows:
        fid = str(row.get("funder_id") or "").strip()
        name = str(row.get("canonical_name") or "").strip()
        if not fid or not name:
            raise MalformedRow("funder_id and canonical_name are required",
                               path=str(path), line=line)
        if fid in lines:
            raise DuplicateFunderId(f"funder id {fid!r} already defined on line {lines[fid]}",
                                    path=str(path), line=line)
        lines[fid] = line
        aliases = row.get("aliases") or []
        if isinstance(aliases, str):
            aliases = aliases.split("|")
        try:
            org_type = _parse_org_type(row.get("org_type"))
        except ValueError as exc:
            raise MalformedRow(str(exc), path=str(path), line=line)
        country = str(row.get("country") or "").strip() or UNKNOWN
        entries.append(FunderEntry(fid, name, tuple(a.strip() for a in aliases if a.strip()),
                                   country, org_type))
    try:
        registry = FunderRegistry(entries)
    except AliasCollision as exc:
        raise AliasCollision(exc.alias, *exc.funder_ids, path=str(path)) from None
    log.info("stage=registry path=%s funders=%d aliases=%d", path, len(registry),
             len(registry.alias_index))
    return registry


def save_funder_registry(registry: FunderRegistry, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = [{"funder_id": e.funder_id, "canonical_name": e.canonical_name,
                 "aliases": list(e.aliases), "country": e.country, "org_type": e.org_type.value}
                for e in registry.entries]
        path.write_text(json.dumps(data, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["funder_id", "canonical_name", "aliases", "country", "org_type"])
    for e in registry.entries:
        w.writerow([e.funder_id, e.canonical_name, "|".join(e.aliases), e.country,
                    e.org_type.value])
    path.write_text(buf.getvalue(), encoding="utf-8")


# ------------------------------------------------------------ FA text parsing

_GRANT = re.compile(r"[A-Za-z0-9/.\-]*[0-9][A-Za-z0-9/.\-]*")
_TRAILING_GROUP = re.compile(r"\s*(\(([^()\[\]]*)\)|\[([^()\[\]]*)\])\s*$")
# a comma or conjunction directly after a grant bracket separates two funders
_AFTER_GROUP = re.compile(
    r"(\(([^()\[\]]*)\)|\[([^()\[\]]*)\])\s*(?:,\s*(?:and\s+|&\s*)?|and\s+|&\s*)(?=\S)")


def _grant_tokens(body: str) -> list[str] | None:
    toks = [t for t in re.split(r"[,\s]+", body.strip()) if t]
    if toks and all(_GRANT.fullmatch(t) for t in toks):
        return toks
    return None


def _split_grants(piece: str) -> tuple[str, list[str]]:
    grants: list[str] = []
    org = piece
    while True:
        m = _TRAILING_GROUP.search(org)
        if not m:
            break
        toks = _grant_tokens(m.group(2) if m.group(2) is not None else m.group(3))
        if toks is None or not org[:m.start()].strip():
            break
        grants[:0] = toks
        org = org[:m.start()]
    return org.strip(), grants


def parse_funding_text(fa_text: str) -> list[FunderMention]:
    """Split free-text acknowledgements into funder mentions.

    Mentions are separated by semicolons, or by a comma or "and" that
    follows a bracketed grant list.  Trailing ``(...)``/``[...]`` groups whose
    tokens all look like grant numbers (contain a digit; letters, digits
    and ``/ - .`` only) become the mention's grant numbers.  Text that
    cannot be split comes back as one mention.
    """
    text = fa_text.strip()
    if not text:
        return []

    def cut(m: re.Match) -> str:
        body = m.group(2) if m.group(2) is not None else m.group(3)
        return m.group(1) + "\x00" if _grant_tokens(body) else m.group(0)

    pieces = []
    for part in text.split(";"):
        pieces.extend(_AFTER_GROUP.sub(cut, part).split("\x00"))
    mentions = []
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            continue
        org, grants = _split_grants(piece)
        mentions.append(FunderMention(org or piece, tuple(grants)))
    return mentions or [FunderMention(text)]


# ------------------------------------------------------------ classification

def funder_scope(org_type: OrgType, country: str, focal_country: str,
                 embo_as_european: bool = False) -> Scope:
    if org_type is OrgType.EC_FRAMEWORK_PROGRAM:
        return Scope.EUROPEAN
    if embo_as_european and org_type is OrgType.PAN_EUROPEAN_NON_EC:
        return Scope.EUROPEAN
    if country == focal_country and org_type in DOMESTIC_TYPES:
        return Scope.NATIONAL_FOCAL
    if country != UNKNOWN and country != focal_country and org_type in PUBLIC_TYPES:
        return Scope.FOREIGN_PUBLIC
    return Scope.OTHER_OR_UNKNOWN


def classify_funder(mention: FunderMention, registry: FunderRegistry, focal_country: str,
                    *, token_subset: bool = False, embo_as_european: bool = False) -> FunderClass:
    """Resolve one mention and compute its scope for ``focal_country``."""
    fid = registry.lookup(mention.org_text)
    confidence = "exact" if fid else None
    if fid is None and token_subset:
        fid = registry.lookup_tokens(mention.org_text)
        confidence = "token_subset" if fid else None
    if fid is None:
        return FunderClass(mention, None, OrgType.UNKNOWN, UNKNOWN, Scope.OTHER_OR_UNKNOWN)
    e = registry.by_id[fid]
    scope = funder_scope(e.org_type, e.country, focal_country, embo_as_european)
    return FunderClass(mention, fid, e.org_type, e.country, scope, confidence)


def assign_funding_category(classes: Sequence[FunderClass] | Iterable[Scope],
                            fa_present: bool) -> FundingCategory:
    """Publication-level category from the scopes of its funders."""
    scopes = {c.scope if isinstance(c, FunderClass) else Scope(c) for c in classes}
    if not fa_present or not scopes:
        return FundingCategory.NON_FUNDED
    european = Scope.EUROPEAN in scopes
    national = Scope.NATIONAL_FOCAL in scopes
    if european and national:
        return FundingCategory.NATIONAL_AND_EUROPEAN
    if european:
        return FundingCategory.EUROPEAN
    if national:
        return FundingCategory.NATIONAL
    return FundingCategory.OTHER


def record_mentions(record: PublicationRecord) -> list[FunderMention]:
    """Structured mentions, falling back to parsing the raw FA text."""
    if not record.fa_present:
        return []
    if record.funder_mentions:
        return list(record.funder_mentions)
    if record.fa_raw_text:
        return parse_funding_text(record.fa_raw_text)
    return []


@dataclass(frozen=True)
class Classification:
    record_id: str
    focal_country: str
    category: FundingCategory
    classes: tuple[FunderClass, ...] = field(default=())


def classify_publication(record: PublicationRecord, registry: FunderRegistry,
                         focal_country: str, *, token_subset: bool = False,
                         embo_as_european: bool = False) -> Classification:
    classes = tuple(
        classify_funder(m, registry, focal_country, token_subset=token_subset,
                        embo_as_european=embo_as_european)
        for m in record_mentions(record)
    )
    category = assign_funding_category(classes, record.fa_present)
    return Classification(record.record_id, focal_country, category, classes)
