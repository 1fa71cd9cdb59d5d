"""Text folding shared by the matcher, the lexicon and the funder registry.

Folding runs in three steps: compatibility decomposition with removal of
combining marks, Unicode case folding, and collapsing every run of
whitespace or hyphens into one space.  The first two steps act character by
character, so folding a concatenation equals concatenating the folded
parts.  The collapse step does not have that property and is applied last.
"""

from __future__ import annotations

import re
import sys
import unicodedata
from functools import lru_cache

import numpy as np

HYPHENS = "-‐‑"
_COLLAPSE = re.compile(r"[\s\-‐‑]+")
_TOKEN = re.compile(r"[^\W_]+")


def _is_mark(ch: str) -> bool:
    return unicodedata.combining(ch) != 0 or unicodedata.category(ch) == "Mn"


@lru_cache(maxsize=None)
def _mark_pattern() -> re.Pattern:
    marks = [cp for cp in range(sys.maxunicode + 1) if _is_mark(chr(cp))]
    ranges = []
    lo = prev = marks[0]
    for cp in marks[1:]:
        if cp != prev + 1:
            ranges.append((lo, prev))
            lo = cp
        prev = cp
    ranges.append((lo, prev))
    body = "".join(
        re.escape(chr(a)) if a == b else f"{re.escape(chr(a))}-{re.escape(chr(b))}"
        for a, b in ranges
    )
    return re.compile(f"[{body}]+")


def _strip_marks(text: str) -> str:
    if text.isascii():
        return text
    return _mark_pattern().sub("", unicodedata.normalize("NFKD", text))


def fold_chars(text: str, case_fold: bool = True, diacritic_fold: bool = True) -> str:
    """Per-character folding (no whitespace collapse)."""
    if diacritic_fold:
        text = _strip_marks(text)
    if case_fold:
        text = text.casefold()
        if diacritic_fold:
            # casefold can reintroduce marks, e.g. U+0130 -> "i" + U+0307
            text = _strip_marks(text)
    return text


def collapse(text: str) -> str:
    return _COLLAPSE.sub(" ", text)


def fold(text: str, case_fold: bool = True, diacritic_fold: bool = True) -> str:
    """Fold ``text`` into the coordinate system used for matching."""
    return collapse(fold_chars(text, case_fold, diacritic_fold))


def normalize_term(term: str, case_fold: bool = True, diacritic_fold: bool = True) -> str:
    """Fold a dictionary term and trim surrounding spaces."""
    return fold(term, case_fold, diacritic_fold).strip(" ")


def normalize_key(name: str) -> str:
    """Lookup key for organisation names and aliases."""
    return normalize_term(name).strip(" .,:;")


def tokens(text: str) -> list[str]:
    return _TOKEN.findall(text)


def fold_with_offsets(
    text: str, case_fold: bool = True, diacritic_fold: bool = True
) -> tuple[str, list[int]]:
    """Fold ``text`` and map every folded position back to the original.

    Returns ``(folded, offsets)`` where ``offsets[j]`` is the index in
    ``text`` of the character that produced ``folded[j]``.  ``offsets`` has
    one extra trailing entry equal to ``len(text)`` so that an exclusive end
    offset can be mapped with ``offsets[end]``.
    """
    if text.isascii():
        chars = text.lower() if case_fold else text
        source: list[int] = list(range(len(text)))
    else:
        pieces = [fold_chars(ch, case_fold, diacritic_fold) for ch in text]
        chars = "".join(pieces)
        source = [i for i, p in enumerate(pieces) for _ in p]
    out: list[str] = []
    offsets: list[int] = []
    pos = 0
    for m in _COLLAPSE.finditer(chars):
        out.append(chars[pos:m.start()])
        offsets.extend(source[pos:m.start()])
        out.append(" ")
        offsets.append(source[m.start()])
        pos = m.end()
    out.append(chars[pos:])
    offsets.extend(source[pos:])
    offsets.append(len(text))
    return "".join(out), offsets


@lru_cache(maxsize=None)
def codepoint_tables() -> tuple[np.ndarray, np.ndarray]:
    """Boolean tables over all code points: (is_alnum, is_collapsible)."""
    n = sys.maxunicode + 1
    chars = [chr(cp) for cp in range(n)]
    alnum = np.fromiter((c.isalnum() for c in chars), dtype=np.bool_, count=n)
    space = np.fromiter((c.isspace() for c in chars), dtype=np.bool_, count=n)
    for h in HYPHENS:
        space[ord(h)] = True
    return alnum, space
