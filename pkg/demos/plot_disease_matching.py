"""
Finding rare-disease names in publication text
==============================================

Compile a small disease lexicon, apply the ambiguity rules and look at what
the matcher reports for a few sentences.
"""

from fundscape.lexicon import (DiseaseLexicon, MatchPolicy, default_rules,
                               effective_terms, flag_ambiguous)
from fundscape.matcher import compile_matcher, find_matches
from fundscape.synthetic import demo_lexicon

# flag synonyms that are too short, too common or read like an English word
lexicon = flag_ambiguous(demo_lexicon(), default_rules())
for entry in lexicon.entries:
    if entry.ambiguous_terms:
        print(entry.disease_id, entry.preferred_name, "->", sorted(entry.ambiguous_terms))

# by default only preferred names take part in matching
matcher = compile_matcher(effective_terms(lexicon))
print(matcher)

texts = [
    "Two siblings with Behcet-Disease and one with CYSTIC  FIBROSIS.",
    "We could not GET a SPERM sample from the globozoospermia patient.",
    "Antimalarial drugs do not count as malaria.",
]
for text in texts:
    print(text)
    for span in find_matches(matcher, text):
        print(f"   {span.start:3d}-{span.end:<3d} {span.term!r} {span.disease_id}")

# vetted synonyms widen recall; ambiguous ones stay out
vetted = DiseaseLexicon(lexicon.entries, MatchPolicy.PREFERRED_PLUS_VETTED_SYNONYMS)
wide = compile_matcher(effective_terms(vetted))
print(wide)
print([s.term for s in find_matches(wide, "Mucoviscidosis (CF) and ALS; get SPERM counts.")])
