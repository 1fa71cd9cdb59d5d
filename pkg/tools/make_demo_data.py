"""Regenerate the bundled demo inputs under src/fundscape/data/."""

import json
from pathlib import Path

from fundscape.corpus import save_corpus
from fundscape.funders import save_funder_registry
from fundscape.lexicon import save_lexicon
from fundscape.synthetic import (
    DEMO_CATEGORIES,
    CorpusSpec,
    demo_lexicon,
    demo_registry,
    generate_corpus,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "fundscape" / "data"

CONFIG = {
    "corpus": "synthetic_corpus.jsonl",
    "lexicon": "lexicon.csv",
    "funders": "funders.csv",
    "category_whitelist": "categories.txt",
    "start_year": 2009,
    "end_year": 2015,
    "focal_countries": ["FR", "GB", "NL", "ES"],
    "workers": 1,
}


def main() -> None:
    save_lexicon(demo_lexicon(), DATA / "lexicon.csv")
    save_funder_registry(demo_registry(), DATA / "funders.csv")
    (DATA / "categories.txt").write_text(
        "# subject categories counted as biomedical\n" + "\n".join(DEMO_CATEGORIES) + "\n",
        encoding="utf-8")
    save_corpus(generate_corpus(CorpusSpec(n=500), seed=2016), DATA / "synthetic_corpus.jsonl")
    (DATA / "demo_config.json").write_text(json.dumps(CONFIG, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
