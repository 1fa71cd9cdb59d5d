"""Regenerate the bundled English word lists.

Requires the ``wordfreq`` package at build time only; the library reads the
generated text files and never imports wordfreq.
"""

import re
from pathlib import Path

from wordfreq import top_n_list

DATA = Path(__file__).resolve().parents[1] / "src" / "fundscape" / "data"


def main() -> None:
    words = [w for w in top_n_list("en", 80000) if re.fullmatch(r"[a-z]+", w)]
    (DATA / "common_words.txt").write_text("\n".join(words[:3000]) + "\n")
    (DATA / "english_words.txt").write_text("\n".join(words[:30000]) + "\n")


if __name__ == "__main__":
    main()
