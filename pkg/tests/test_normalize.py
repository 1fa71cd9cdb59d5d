import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from fundscape.normalize import (
    codepoint_tables,
    collapse,
    fold,
    fold_chars,
    fold_with_offsets,
    normalize_key,
    normalize_term,
    tokens,
)
from oracles import naive_fold

texty = st.text(alphabet=st.characters(codec="utf-8", exclude_categories=("Cs",)), max_size=60)


def test_examples():
    assert fold("Behçet  Disease") == "behcet disease"
    assert fold("Prader-Willi\tsyndrome") == "prader willi syndrome"
    assert fold("A ‐- B") == "a b"
    assert fold("İstanbul") == "istanbul"
    assert fold("STRASSE") == fold("straße")
    assert normalize_term("  Cystic Fibrosis ") == "cystic fibrosis"
    assert normalize_key("Wellcome Trust.") == "wellcome trust"
    assert tokens("nwo, zon_mw 2") == ["nwo", "zon", "mw", "2"]


def test_flags_turn_off_folding():
    assert fold("Éa", case_fold=False) == "Ea"
    assert fold("Éa", diacritic_fold=False) == "éa"


@given(texty)
def test_fold_matches_oracle(s):
    assert fold(s) == naive_fold(s)


@given(texty)
def test_fold_idempotent(s):
    assert fold(fold(s)) == fold(s)


@given(texty, texty)
def test_fold_chars_distributes_over_concatenation(a, b):
    assert fold_chars(a + b) == fold_chars(a) + fold_chars(b)


@given(texty)
def test_collapse_leaves_no_runs(s):
    out = collapse(fold_chars(s))
    assert "  " not in out and "-" not in out


@given(texty)
def test_offsets_map_back(s):
    folded, offsets = fold_with_offsets(s)
    assert folded == fold(s)
    assert len(offsets) == len(folded) + 1
    assert offsets[-1] == len(s)
    assert offsets == sorted(offsets)
    for j, ch in enumerate(folded):
        if ch != " ":
            assert ch in fold_chars(s[offsets[j]])


def test_codepoint_tables_agree_with_str_methods():
    alnum, space = codepoint_tables()
    rng = np.random.default_rng(0)
    for cp in rng.integers(0, 0x110000, size=20000).tolist() + [32, 45, 0x2010, 0xA0, 65, 0x663]:
        ch = chr(cp)
        assert alnum[cp] == ch.isalnum()
        assert space[cp] == (ch.isspace() or ch in "-‐‑")
