"""Rare-disease publication retrieval, funding typology and impact indicators."""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    Corpus,
    CorpusFilter,
    DocType,
    FunderMention,
    IngestionOptions,
    PublicationRecord,
    filter_corpus,
    load_corpus,
    save_corpus,
)
from .funders import (  # noqa: E402
    FunderClass,
    FunderEntry,
    FunderRegistry,
    FundingCategory,
    OrgType,
    Scope,
    assign_funding_category,
    classify_funder,
    classify_publication,
    load_funder_registry,
    parse_funding_text,
)
from .indicators import (  # noqa: E402
    IndicatorReport,
    NormalizedScore,
    ReferenceStats,
    aggregate,
    compute_reference_stats,
    mncs,
    normalized_score,
)
from .lexicon import (  # noqa: E402
    AmbiguityRules,
    DiseaseEntry,
    DiseaseLexicon,
    MatchPolicy,
    effective_terms,
    flag_ambiguous,
    load_lexicon,
)
from .matcher import (  # noqa: E402
    Field,
    MatchedPublication,
    Matcher,
    MatcherOptions,
    MatchSpan,
    compile_matcher,
    find_matches,
    tag_publication,
)
