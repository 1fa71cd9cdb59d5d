"""Synthetic corpora, lexicons and funder registries for tests and demos.

Nothing here models real publication data.  The generators are seeded and
deterministic so that bundled fixtures can be regenerated byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus, DocType, FunderMention, PublicationRecord
from .funders import FunderEntry, FunderRegistry, OrgType
from .lexicon import DiseaseEntry, DiseaseLexicon

FILLER = (
    "patients clinical study cohort analysis treatment outcome genetic mutation "
    "expression protein cells therapy diagnosis phenotype variant mice model "
    "response trial children adult onset severe mild chronic acute novel "
    "associated with in of the and for a an to by on we report describe "
    "results show observed significant increased reduced levels function "
    "gene sequencing family members case series review management"
).split()

# everyday English that must never trigger a disease match
DISTRACTORS = ("get", "GET", "gets", "sperm", "SPERM", "Sperm", "target", "forget")

DEMO_DISEASES = (
    ("DEMO:0001", "cystic fibrosis", ("mucoviscidosis", "CF")),
    ("DEMO:0002", "malaria", ()),
    ("DEMO:0003", "Fabry disease", ("alpha-galactosidase A deficiency",)),
    ("DEMO:0004", "Gaucher disease", ("glucocerebrosidase deficiency",)),
    ("DEMO:0005", "Pompe disease", ("glycogen storage disease type II", "GSD2")),
    ("DEMO:0006", "Duchenne muscular dystrophy", ("DMD",)),
    ("DEMO:0007", "Huntington disease", ("Huntington chorea",)),
    ("DEMO:0008", "Marfan syndrome", ()),
    ("DEMO:0009", "Rett syndrome", ()),
    ("DEMO:0010", "phenylketonuria", ("PKU",)),
    ("DEMO:0011", "Wilson disease", ("hepatolenticular degeneration",)),
    ("DEMO:0012", "amyotrophic lateral sclerosis", ("ALS", "Charcot disease")),
    ("DEMO:0013", "Prader-Willi syndrome", ()),
    ("DEMO:0014", "Angelman syndrome", ()),
    ("DEMO:0015", "neurofibromatosis type 1", ("von Recklinghausen disease", "NF1")),
    ("DEMO:0016", "Tay-Sachs disease", ("GM2 gangliosidosis type B",)),
    ("DEMO:0017", "Behçet disease", ("Adamantiades-Behçet disease",)),
    ("DEMO:0018", "Niemann-Pick disease type C", ()),
    ("DEMO:0019", "retinitis pigmentosa", ()),
    ("DEMO:0020", "myasthenia gravis", ()),
    ("DEMO:0021", "globozoospermia", ("SPERM", "round-headed sperm")),
    ("DEMO:0022", "geleophysic dysplasia", ("GET",)),
    ("DEMO:0023", "Ehlers-Danlos syndrome", ("EDS",)),
    ("DEMO:0024", "Kawasaki disease", ("mucocutaneous lymph node syndrome",)),
)

DEMO_FUNDERS = (
    ("MRC", "Medical Research Council", ("MRC", "UK Medical Research Council"), "GB",
     OrgType.NATIONAL_AGENCY),
    ("WT", "Wellcome Trust", ("Wellcome",), "GB", OrgType.CHARITY),
    ("CRUK", "Cancer Research UK", (), "GB", OrgType.CHARITY),
    ("NIHR", "National Institute for Health Research", ("NIHR",), "GB", OrgType.NATIONAL_AGENCY),
    ("INSERM", "Institut National de la Santé et de la Recherche Médicale", ("INSERM",), "FR",
     OrgType.NATIONAL_AGENCY),
    ("ANR", "Agence Nationale de la Recherche", ("ANR", "French National Research Agency"),
     "FR", OrgType.NATIONAL_AGENCY),
    ("AFM", "AFM-Téléthon", ("AFM Telethon", "Association Française contre les Myopathies"),
     "FR", OrgType.CHARITY),
    ("NWO", "Netherlands Organisation for Scientific Research", ("NWO",), "NL",
     OrgType.NATIONAL_AGENCY),
    ("ZONMW", "ZonMw", ("Netherlands Organisation for Health Research and Development",), "NL",
     OrgType.NATIONAL_AGENCY),
    ("DHF", "Dutch Heart Foundation", ("Hartstichting",), "NL", OrgType.CHARITY),
    ("ISCIII", "Instituto de Salud Carlos III", ("ISCIII",), "ES", OrgType.NATIONAL_AGENCY),
    ("MINECO", "Ministerio de Economía y Competitividad", ("MINECO",), "ES",
     OrgType.NATIONAL_AGENCY),
    ("FP7", "Seventh Framework Programme",
     ("FP7", "European Commission FP7", "European Union Seventh Framework Programme"), "EU",
     OrgType.EC_FRAMEWORK_PROGRAM),
    ("FP6", "Sixth Framework Programme", ("FP6", "European Commission FP6"), "EU",
     OrgType.EC_FRAMEWORK_PROGRAM),
    ("ERC", "European Research Council", ("ERC",), "EU", OrgType.EC_FRAMEWORK_PROGRAM),
    ("EMBO", "European Molecular Biology Organization", ("EMBO",), "Unknown",
     OrgType.PAN_EUROPEAN_NON_EC),
    ("ERDF", "European Regional Development Fund", ("ERDF", "FEDER"), "EU",
     OrgType.REGIONAL_PUBLIC),
    ("NIH", "National Institutes of Health", ("NIH",), "US", OrgType.NATIONAL_AGENCY),
    ("DFG", "Deutsche Forschungsgemeinschaft", ("DFG", "German Research Foundation"), "DE",
     OrgType.NATIONAL_AGENCY),
    ("PFIZER", "Pfizer", ("Pfizer Inc",), "Unknown", OrgType.COMPANY),
    ("GSK", "GlaxoSmithKline", ("GSK",), "Unknown", OrgType.COMPANY),
    ("GENZYME", "Genzyme", ("Genzyme Corporation",), "Unknown", OrgType.COMPANY),
)

UNREGISTERED_FUNDERS = ("Fondation Pierre Dupont", "Acme Biotech Ltd", "Rare Disease Parents Group")

DEMO_CATEGORIES = ("GENETICS", "PEDIATRICS", "NEUROLOGY", "HEMATOLOGY", "IMMUNOLOGY",
                   "ONCOLOGY", "ENDOCRINOLOGY", "CARDIOLOGY")
OFF_LIST_CATEGORIES = ("PHYSICS", "ECONOMICS")
DEMO_COUNTRIES = ("FR", "GB", "NL", "ES")
OTHER_COUNTRIES = ("DE", "US", "IT")


def demo_lexicon() -> DiseaseLexicon:
    return DiseaseLexicon(tuple(DiseaseEntry(d, p, s) for d, p, s in DEMO_DISEASES))


def demo_registry() -> FunderRegistry:
    return FunderRegistry(FunderEntry(*row) for row in DEMO_FUNDERS)


@dataclass(frozen=True)
class CorpusSpec:
    n: int = 500
    years: tuple[int, int] = (2008, 2016)
    match_rate: float = 0.7
    nonfunded_rate: float = 0.3
    fa_text_rate: float = 0.15
    funded_citation_mean: float = 14.0
    nonfunded_citation_mean: float = 6.0
    review_rate: float = 0.2
    dispersion: float = 2.0


_FILLER = np.array(FILLER)


def _sentence(rng: np.random.Generator, k: int) -> str:
    words = rng.choice(_FILLER, size=k)
    return " ".join(words.tolist()).capitalize() + "."


def _variant(rng: np.random.Generator, term: str) -> str:
    r = rng.random()
    if r < 0.2:
        return term.upper()
    if r < 0.4:
        return term.title()
    if r < 0.5:
        return term.replace(" ", "-")
    return term


def _citations(rng: np.random.Generator, mean: float, dispersion: float) -> int:
    # negative binomial with the given mean
    p = dispersion / (dispersion + mean)
    return int(rng.negative_binomial(dispersion, p))


def _fa_text(rng: np.random.Generator, names: Sequence[str]) -> str:
    parts = []
    for name in names:
        if rng.random() < 0.5:
            parts.append(f"{name} ({'G' + str(rng.integers(100000, 999999))})")
        else:
            parts.append(name)
    return "; ".join(parts)


def generate_corpus(spec: CorpusSpec = CorpusSpec(), seed: int = 0,
                    lexicon: DiseaseLexicon | None = None,
                    registry: FunderRegistry | None = None) -> Corpus:
    """Random records mixing disease mentions, funders and distractor words."""
    rng = np.random.default_rng(seed)
    lexicon = lexicon or demo_lexicon()
    registry = registry or demo_registry()
    names = [(e.preferred_name, e.synonyms) for e in lexicon.entries]
    funder_names = [n for e in registry.entries for n in (e.canonical_name, *e.aliases)]
    funder_names += list(UNREGISTERED_FUNDERS)
    records = []
    for i in range(spec.n):
        title = _sentence(rng, int(rng.integers(5, 10)))
        abstract = " ".join(_sentence(rng, int(rng.integers(8, 20)))
                            for _ in range(int(rng.integers(2, 6))))
        keywords = [str(w) for w in rng.choice(FILLER, size=int(rng.integers(0, 4)))]
        if rng.random() < 0.3:
            abstract += f" Patients {rng.choice(DISTRACTORS)} better."
        if rng.random() < spec.match_rate:
            pref, syns = names[int(rng.integers(len(names)))]
            term = pref if not syns or rng.random() < 0.7 else syns[int(rng.integers(len(syns)))]
            where = rng.random()
            if where < 0.3:
                title = f"{title[:-1]} in {_variant(rng, term)}."
            elif where < 0.85:
                abstract = f"{abstract} We studied {_variant(rng, term)} in detail."
            else:
                keywords.append(_variant(rng, term))
        n_countries = 1 + int(rng.random() < 0.25)
        countries = set(rng.choice(DEMO_COUNTRIES, size=n_countries, replace=False).tolist())
        if rng.random() < 0.1:
            countries.add(str(rng.choice(OTHER_COUNTRIES)))
        cats = set(rng.choice(DEMO_CATEGORIES, size=1 + int(rng.random() < 0.3),
                              replace=False).tolist())
        if rng.random() < 0.05:
            cats = {str(rng.choice(OFF_LIST_CATEGORIES))}
        funded = rng.random() >= spec.nonfunded_rate
        mentions: tuple[FunderMention, ...] = ()
        fa_text = None
        if funded:
            k = int(rng.integers(1, 4))
            chosen = [funder_names[int(j)] for j in rng.integers(len(funder_names), size=k)]
            if rng.random() < spec.fa_text_rate:
                fa_text = _fa_text(rng, chosen)
            else:
                mentions = tuple(
                    FunderMention(n, (f"G{int(rng.integers(1000, 9999))}",)
                                  if rng.random() < 0.4 else ())
                    for n in chosen)
        mean = spec.funded_citation_mean if funded else spec.nonfunded_citation_mean
        records.append(PublicationRecord(
            record_id=f"R{seed:04d}-{i:06d}",
            title=title,
            abstract=abstract,
            keywords=tuple(keywords),
            doc_type=DocType.REVIEW if rng.random() < spec.review_rate else DocType.ARTICLE,
            pub_year=int(rng.integers(spec.years[0], spec.years[1] + 1)),
            subject_categories=frozenset(cats),
            countries=frozenset(countries),
            citation_count=_citations(rng, mean, spec.dispersion),
            fa_present=funded,
            funder_mentions=mentions,
            fa_raw_text=fa_text,
        ))
    return Corpus(tuple(records), census_year=max(spec.years[1], 2016))


# ------------------------------------------------------------- throughput data

_SYLLABLES = ("ka", "lo", "tri", "mor", "vex", "an", "del", "ur", "pho", "sin", "gra", "tel",
              "mi", "zo", "ber", "cal", "ny", "rho", "ste", "qua", "dor", "lin", "fe", "xi")
_SUFFIXES = ("syndrome", "disease", "dysplasia", "deficiency", "dystrophy", "ataxia",
             "anemia", "myopathy", "neuropathy", "sclerosis")


def synthetic_terms(n: int, seed: int = 0) -> list[tuple[str, str]]:
    """``n`` distinct disease-like names with ids ``SYN:000001`` and up."""
    rng = np.random.default_rng(seed)
    seen: set[str] = set()
    out = []
    while len(out) < n:
        k = int(rng.integers(2, 5))
        stem = "".join(_SYLLABLES[int(j)] for j in rng.integers(len(_SYLLABLES), size=k))
        r = rng.random()
        if r < 0.6:
            name = f"{stem} {_SUFFIXES[int(rng.integers(len(_SUFFIXES)))]}"
        elif r < 0.8:
            name = f"{stem} {_SUFFIXES[int(rng.integers(len(_SUFFIXES)))]} type {int(rng.integers(1, 9))}"
        else:
            name = f"{stem}-{_SYLLABLES[int(rng.integers(len(_SYLLABLES)))]}osis"
        if name not in seen:
            seen.add(name)
            out.append((name, f"SYN:{len(out) + 1:06d}"))
    return out


def abstract_pool(terms: Sequence[str], size: int, length: int = 1000,
                  hit_rate: float = 0.5, seed: int = 0) -> list[str]:
    """``size`` abstracts of roughly ``length`` characters; about
    ``hit_rate`` of them mention one of ``terms``."""
    rng = np.random.default_rng(seed)
    pool = []
    for _ in range(size):
        parts: list[str] = []
        n = 0
        while n < length:
            s = _sentence(rng, int(rng.integers(8, 20)))
            parts.append(s)
            n += len(s) + 1
        if rng.random() < hit_rate:
            parts.insert(int(rng.integers(len(parts))), f"{terms[int(rng.integers(len(terms)))]}.")
        pool.append(" ".join(parts)[: length + 200])
    return pool
