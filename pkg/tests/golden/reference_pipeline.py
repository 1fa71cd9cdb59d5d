"""Brute-force reference for the golden run; stdlib only, no fundscape imports.

usage: reference_pipeline.py DATA_DIR OUT_DIR
Reads synthetic_corpus.jsonl, lexicon.csv, funders.csv, categories.txt and the
word lists from DATA_DIR and writes indicators.csv and plot_data.json.
"""

import csv
import json
import math
import re
import sys
import unicodedata
from pathlib import Path

FOCAL = ["FR", "GB", "NL", "ES"]
YEARS = list(range(2009, 2016))
CATS = ["European", "National", "NationalAndEuropean", "Other", "NonFunded"]


def strip_marks(s):
    s = unicodedata.normalize("NFKD", s)
    return "".join(c for c in s if not (unicodedata.combining(c) or unicodedata.category(c) == "Mn"))


def fold(s):
    s = strip_marks(strip_marks(s).casefold())
    out, prev_space = [], False
    for c in s:
        if c.isspace() or c in "-‐‑":
            if not prev_space:
                out.append(" ")
            prev_space = True
        else:
            out.append(c)
            prev_space = False
    return "".join(out)


def contains_term(text, term):
    i = text.find(term)
    while i >= 0:
        j = i + len(term)
        if (i == 0 or not text[i - 1].isalnum()) and (j == len(text) or not text[j].isalnum()):
            return True
        i = text.find(term, i + 1)
    return False


def load_terms(data):
    common = set((data / "common_words.txt").read_text().split())
    words = set((data / "english_words.txt").read_text().split())
    terms = set()
    with open(data / "lexicon.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            raw = row["preferred_name"].strip()
            key = fold(raw).strip(" ")
            flagged = {fold(t).strip(" ") for t in row["ambiguous"].split("|") if t}
            acronym = raw.isalpha() and raw.isupper() and len(raw) <= 5 and raw.lower() in words
            if len(key) < 4 or key in common or acronym or key in flagged:
                continue
            terms.add(key)
    return terms


def load_funders(data):
    index = {}
    with open(data / "funders.csv", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            for name in [row["canonical_name"]] + [a for a in row["aliases"].split("|") if a]:
                index[fold(name).strip(" ").strip(" .,:;")] = (row["org_type"], row["country"])
    return index


def scope(org_type, country, focal):
    if org_type == "ECFrameworkProgram":
        return "E"
    if country == focal and org_type in ("NationalAgency", "Charity", "RegionalPublic", "OtherPublic"):
        return "N"
    return "O"


def category(rec, funders, focal):
    if rec["funding"]:
        orgs = [m["org"] for m in rec["funding"]]
    elif rec.get("fa_text"):
        orgs = [re.sub(r"\s*\([^()]*\)\s*$", "", p).strip() for p in rec["fa_text"].split(";")]
    else:
        orgs = []
    present = rec["funding"] is not None or rec.get("fa_text") is not None
    if not present or not orgs:
        return "NonFunded"
    scopes = set()
    for org in orgs:
        hit = funders.get(fold(org).strip(" ").strip(" .,:;"))
        scopes.add(scope(*hit, focal) if hit else "O")
    if {"E", "N"} <= scopes:
        return "NationalAndEuropean"
    return "European" if "E" in scopes else "National" if "N" in scopes else "Other"


def mean(xs):
    return math.fsum(xs) / len(xs) if xs else None


def r6(x):
    return None if x is None else round(x, 6)


def main(data, out):
    lines = (data / "synthetic_corpus.jsonl").read_text(encoding="utf-8").splitlines()
    records = [json.loads(line) for line in lines if line.strip()]
    records = [r for r in records if "id" in r]
    whitelist = {l.split("#")[0].strip() for l in (data / "categories.txt").read_text().splitlines()}
    whitelist.discard("")
    terms, funders = load_terms(data), load_funders(data)

    sums, counts = {}, {}
    for r in records:
        for c in r["categories"]:
            k = (c, r["year"], r["doc_type"])
            sums[k] = sums.get(k, 0) + r["citations"]
            counts[k] = counts.get(k, 0) + 1

    cells = {}  # (country, year, category) -> [ncs]
    for r in records:
        if not (2009 <= r["year"] <= 2015 and set(r["countries"]) & set(FOCAL)
                and set(r["categories"]) & whitelist):
            continue
        fields = [r["title"], r["abstract"]] + r["keywords"]
        if not any(contains_term(fold(f), t) for f in fields for t in terms):
            continue
        means = [sums[k] / counts[k] for k in ((c, r["year"], r["doc_type"]) for c in sorted(r["categories"]))]
        expected = math.fsum(means) / len(means)
        ncs = r["citations"] / expected if expected > 0 else None
        for country in FOCAL:
            if country in r["countries"]:
                cells.setdefault((country, r["year"], category(r, funders, country)), []).append(ncs)

    def vals(country, year=None, cat=None):
        return [v for (c, y, k), vs in cells.items() for v in vs
                if c == country and (year is None or y == year) and (cat is None or k == cat)]

    rows = ["country,year,category,p,mncs"]
    for c in sorted(FOCAL):
        for y in YEARS:
            for k in sorted(CATS):
                vs = vals(c, y, k)
                m = mean([v for v in vs if v is not None])
                rows.append(f"{c},{y},{k},{len(vs)},{'' if m is None else f'{m:.6f}'}")
    (out / "indicators.csv").write_text("\n".join(rows) + "\n")

    plot = {"countries": FOCAL, "years": YEARS, "categories": CATS, "output": {}, "impact": {},
            "category_shares": {}, "by_category": {}}
    for c in FOCAL:
        plot["output"][c] = [len(vals(c, y)) for y in YEARS]
        plot["impact"][c] = [r6(mean([v for v in vals(c, y) if v is not None])) for y in YEARS]
        total = sum(plot["output"][c])
        plot["category_shares"][c] = {
            k: r6(sum(len(vals(c, y, k)) for y in YEARS) / total) if total else None for k in CATS}
        plot["by_category"][c] = {
            "output": {k: [len(vals(c, y, k)) for y in YEARS] for k in CATS},
            "impact": {k: [r6(mean([v for v in vals(c, y, k) if v is not None])) for y in YEARS]
                       for k in CATS},
        }
    (out / "plot_data.json").write_text(json.dumps(plot, indent=1) + "\n")


if __name__ == "__main__":
    out = Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    main(Path(sys.argv[1]), out)
