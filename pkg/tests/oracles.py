"""Slow, obviously-correct reimplementations used as test oracles."""

from __future__ import annotations

import math
import unicodedata
from collections import defaultdict


def naive_fold(text: str) -> str:
    def strip(s):
        s = unicodedata.normalize("NFKD", s)
        return "".join(c for c in s
                       if not (unicodedata.combining(c) or unicodedata.category(c) == "Mn"))

    s = strip(strip(text).casefold())
    out = []
    for c in s:
        blank = c.isspace() or c in "-‐‑"
        if blank and out and out[-1] == " ":
            continue
        out.append(" " if blank else c)
    return "".join(out)


def naive_matches(folded: str, terms) -> set[tuple[int, int, str]]:
    """Every term at every position, word-bounded, longest per start."""
    best: dict[int, str] = {}
    for i in range(len(folded)):
        if i > 0 and folded[i - 1].isalnum():
            continue
        for t in terms:
            j = i + len(t)
            if folded.startswith(t, i) and (j == len(folded) or not folded[j].isalnum()):
                if len(t) > len(best.get(i, "")):
                    best[i] = t
    return {(i, i + len(t), t) for i, t in best.items()}


def naive_category(scopes, fa_present: bool) -> str:
    if not fa_present or not scopes:
        return "NonFunded"
    if "European" in scopes and "NationalFocal" in scopes:
        return "NationalAndEuropean"
    if "European" in scopes:
        return "European"
    if "NationalFocal" in scopes:
        return "National"
    return "Other"


def naive_group(items):
    """(country, year, category, ncs) -> {(c, y, k): (p, mncs)}."""
    cells = defaultdict(list)
    for c, y, k, v in items:
        cells[(c, y, k)].append(v)
    out = {}
    for key, vs in cells.items():
        defined = [v for v in vs if v is not None]
        out[key] = (len(vs), math.fsum(defined) / len(defined) if defined else None)
    return out


def naive_matches_find(folded: str, terms) -> set[tuple[int, int, str]]:
    """Same contract as :func:`naive_matches`, scanning each term with str.find."""
    best: dict[int, str] = {}
    for t in terms:
        i = folded.find(t)
        while i >= 0:
            j = i + len(t)
            if ((i == 0 or not folded[i - 1].isalnum())
                    and (j == len(folded) or not folded[j].isalnum())
                    and len(t) > len(best.get(i, ""))):
                best[i] = t
            i = folded.find(t, i + 1)
    return {(i, i + len(t), t) for i, t in best.items()}
