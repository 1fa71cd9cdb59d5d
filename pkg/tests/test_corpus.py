import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fundscape.corpus import (
    Corpus,
    CorpusFilter,
    DocType,
    FunderMention,
    IngestionOptions,
    PublicationRecord,
    dumps_corpus,
    filter_corpus,
    keep_record,
    load_corpus,
    load_whitelist,
    save_corpus,
)
from fundscape.errors import (
    CensusYearBeforePubYear,
    DuplicateId,
    EmptyWhitelist,
    MalformedRecord,
    UnknownDocType,
)
from fundscape.synthetic import CorpusSpec, generate_corpus


def rec(rid="r1", year=2010, countries=("FR",), cats=("GENETICS",), doc=DocType.ARTICLE, **kw):
    return PublicationRecord(rid, "t", "a", (), doc, year, frozenset(cats), frozenset(countries),
                             kw.pop("citations", 3), **kw)


def write_lines(path, objs):
    path.write_text("\n".join(json.dumps(o) for o in objs) + "\n", encoding="utf-8")
    return path


def raw(rid="r1", **kw):
    obj = {"id": rid, "title": "t", "abstract": "a", "keywords": [], "doc_type": "Article",
           "year": 2010, "categories": ["GENETICS"], "countries": ["FR"], "citations": 1,
           "funding": None}
    obj.update(kw)
    return obj


def test_doc_type_parse():
    assert DocType.parse("review") is DocType.REVIEW
    assert DocType.parse(" ARTICLE ") is DocType.ARTICLE
    with pytest.raises(ValueError):
        DocType.parse("Letter")


def test_record_invariants():
    with pytest.raises(ValueError):
        rec(citations=-1)
    with pytest.raises(ValueError):
        rec(countries=("France",))
    with pytest.raises(ValueError):
        rec(funder_mentions=(FunderMention("MRC"),))  # fa_present is false
    with pytest.raises(ValueError):
        FunderMention("  ")


@pytest.mark.parametrize("suffix", [".jsonl", ".csv"])
def test_round_trip(tmp_path, suffix):
    corpus = generate_corpus(CorpusSpec(n=60), seed=3)
    path = tmp_path / f"c{suffix}"
    save_corpus(corpus, path)
    back = load_corpus(path)
    assert back == corpus
    assert back.census_year == corpus.census_year


def test_dumps_is_canonical(tmp_path):
    corpus = generate_corpus(CorpusSpec(n=20), seed=5)
    path = tmp_path / "c.jsonl"
    path.write_text(dumps_corpus(corpus), encoding="utf-8")
    assert dumps_corpus(load_corpus(path)) == dumps_corpus(corpus)


def test_fa_present_is_derived(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [
        raw("a"), raw("b", funding=[]), raw("c", fa_text="Wellcome Trust"),
        raw("d", funding=[{"org": "MRC", "grants": ["G1"]}])])
    got = {r.record_id: r for r in load_corpus(path)}
    assert [got[k].fa_present for k in "abcd"] == [False, True, True, True]
    assert got["d"].funder_mentions == (FunderMention("MRC", ("G1",)),)


def test_unknown_doc_type_reports_line(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [{"census_year": 2016}, raw("a"),
                                               raw("b", doc_type="Letter")])
    with pytest.raises(UnknownDocType) as err:
        load_corpus(path)
    assert err.value.line == 3


def test_duplicate_and_malformed(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [raw("a"), raw("a")])
    with pytest.raises(DuplicateId):
        load_corpus(path)
    path.write_text(json.dumps(raw("a")) + "\n{not json\n", encoding="utf-8")
    with pytest.raises(MalformedRecord) as err:
        load_corpus(path)
    assert err.value.line == 2


def test_skip_mode_collects_rejections(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [raw("a"), raw("a"), raw("b", doc_type="Letter"),
                                               raw("c", citations=-4), raw("d")])
    corpus = load_corpus(path, IngestionOptions(on_error="skip"))
    assert [r.record_id for r in corpus] == ["a", "d"]
    assert [r.line for r in corpus.rejected] == [2, 3, 4]


def test_census_year(tmp_path):
    path = write_lines(tmp_path / "c.jsonl", [{"census_year": 2012}, raw("a", year=2011)])
    assert load_corpus(path).census_year == 2012
    assert load_corpus(path, IngestionOptions(census_year=2020)).census_year == 2020
    with pytest.raises(CensusYearBeforePubYear):
        load_corpus(path, IngestionOptions(census_year=2010))
    path = write_lines(tmp_path / "d.jsonl", [raw("a", year=2011), raw("b", year=2014)])
    assert load_corpus(path).census_year == 2014


def test_csv_header_comment(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text(
        "# census_year=2015\n"
        "id,title,abstract,keywords,doc_type,year,categories,countries,citations,funding,fa_text\n"
        "x,T,A,k1;k2,Review,2013,GENETICS;ONCOLOGY,FR;GB,4,MRC|G1|G2;Wellcome Trust,\n",
        encoding="utf-8")
    corpus = load_corpus(path)
    r = corpus.records[0]
    assert corpus.census_year == 2015
    assert r.keywords == ("k1", "k2") and r.countries == {"FR", "GB"}
    assert r.funder_mentions == (FunderMention("MRC", ("G1", "G2")), FunderMention("Wellcome Trust"))


def test_whitelist(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("# comment\nGENETICS\n\n ONCOLOGY # trailing\n", encoding="utf-8")
    assert load_whitelist(path) == {"GENETICS", "ONCOLOGY"}


def test_empty_whitelist_is_an_error():
    with pytest.raises(EmptyWhitelist):
        filter_corpus(Corpus((rec(),), 2016), CorpusFilter(subject_category_whitelist=frozenset()))


records_st = st.lists(
    st.builds(
        lambda i, y, cs, ks, d: rec(f"r{i}", y, cs, ks, DocType.REVIEW if d else DocType.ARTICLE),
        st.integers(0, 10**6), st.integers(2005, 2018),
        st.sets(st.sampled_from(["FR", "GB", "DE", "US"]), max_size=3),
        st.sets(st.sampled_from(["A", "B", "C"]), max_size=2), st.booleans()),
    max_size=30, unique_by=lambda r: r.record_id)

filters_st = st.builds(
    CorpusFilter,
    st.none() | st.tuples(st.integers(2005, 2012), st.integers(2010, 2018)),
    st.none() | st.frozensets(st.sampled_from(["FR", "GB", "NL"]), max_size=2),
    st.none() | st.frozensets(st.sampled_from(["A", "B", "D"]), min_size=1, max_size=2),
    st.none() | st.frozensets(st.sampled_from(list(DocType)), max_size=2))


@given(records_st, filters_st)
def test_filter_matches_oracle_and_is_idempotent(records, flt):
    corpus = Corpus(tuple(records), 2018)
    out = filter_corpus(corpus, flt)

    def oracle(r):
        return ((flt.years is None or flt.years[0] <= r.pub_year <= flt.years[1])
                and (flt.countries is None or any(c in flt.countries for c in r.countries))
                and (flt.subject_category_whitelist is None
                     or any(c in flt.subject_category_whitelist for c in r.subject_categories))
                and (flt.doc_types is None or r.doc_type in flt.doc_types))

    assert list(out.records) == [r for r in records if oracle(r)]
    assert filter_corpus(out, flt) == out
    assert all(keep_record(r, flt) for r in out)
