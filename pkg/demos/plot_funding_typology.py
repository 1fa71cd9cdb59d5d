"""
Funding categories relative to a focal country
==============================================

The same acknowledgement can be National for one country and Other for
another.  This walk-through classifies a few records for each focal country.
"""

from fundscape.corpus import DocType, FunderMention, PublicationRecord
from fundscape.funders import classify_publication, parse_funding_text
from fundscape.synthetic import demo_registry

registry = demo_registry()

# free-text acknowledgements are split into mentions with grant numbers
text = "Medical Research Council (G0900747, G1001234); FP7 [HEALTH-F2-2010-241544] and Pfizer"
for m in parse_funding_text(text):
    print(m.org_text, m.grant_numbers)


def record(rid, countries, mentions=(), fa_text=None, funded=True):
    return PublicationRecord(rid, "t", "a", (), DocType.ARTICLE, 2012, frozenset({"GENETICS"}),
                             frozenset(countries), 5, funded, tuple(mentions), fa_text)


records = [
    record("uk-eu", {"GB", "FR"}, [FunderMention("MRC"), FunderMention("European Commission FP7")]),
    record("charity", {"GB", "NL"}, [FunderMention("Wellcome Trust")]),
    record("text-only", {"ES"}, fa_text=text),
    record("embo", {"FR"}, [FunderMention("EMBO")]),
    record("none", {"NL"}, funded=False),
]

for r in records:
    for focal in ("FR", "GB", "NL", "ES"):
        if focal in r.countries:
            c = classify_publication(r, registry, focal)
            print(f"{r.record_id:10s} {focal}  {c.category.value:20s}",
                  [fc.scope.value for fc in c.classes])

# the EMBO switch moves pan-European non-EC funders into the European scope
print(classify_publication(records[3], registry, "FR", embo_as_european=True).category.value)
