from __future__ import annotations

import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trirank.corpus import (
    CorpusFormatError,
    PaperRecord,
    RankedEntry,
    generate_synthetic,
    parse_corpus,
    parse_corpus_file,
    record_to_json,
    write_corpus,
    write_rank_table,
    years_by_paper,
)
from trirank.graphs import build_bundle, check_dag

from conftest import T1_ROWS, records_from


def _parse_lines(text: str):
    return parse_corpus(io.StringIO(text))


def test_minimal_record_line():
    records = _parse_lines('{"id":"p1","authors":["a1"],"venues":["v1"]}\n')
    assert records == [
        PaperRecord(paper_id="p1", author_ids=("a1",), venue_ids=("v1",))
    ]
    assert records[0].year is None
    assert records[0].reference_ids == ()


def test_duplicate_authors_dedup_silently():
    records = _parse_lines(
        '{"id":"p2","authors":["a1","a1"],"venues":["v1"],"refs":["p1"]}\n'
    )
    assert records[0].author_ids == ("a1",)
    assert records[0].reference_ids == ("p1",)


def test_t1_corpus_parses_field_by_field(tmp_path):
    text = (
        '{"id":"p1","authors":["a1"],"venues":["v1"],"year":2014}\n'
        '{"id":"p2","authors":["a1","a2"],"venues":["v1"],"year":2015,"refs":["p1"]}\n'
        '{"id":"p3","authors":["a2"],"venues":["v1"],"year":2016,"refs":["p1","p2"]}\n'
    )
    path = tmp_path / "t1.jsonl"
    path.write_text(text, encoding="utf-8")
    assert parse_corpus_file(path) == records_from(T1_ROWS)


def test_blank_lines_skipped():
    records = _parse_lines('\n{"id":"p1","authors":["a1"]}\n\n   \n')
    assert len(records) == 1


def test_unknown_keys_ignored():
    records = _parse_lines(
        '{"id":"p1","authors":["a1"],"affiliation":"x","note":[1,2]}\n'
    )
    assert records[0].paper_id == "p1"


def test_missing_venues_and_refs_mean_empty():
    records = _parse_lines('{"id":"p1","authors":["a1"]}\n')
    assert records[0].venue_ids == ()
    assert records[0].reference_ids == ()


def test_bytes_stream_accepted():
    records = parse_corpus(io.BytesIO(b'{"id":"p1","authors":["a1"]}\n'))
    assert records[0].paper_id == "p1"


@pytest.mark.parametrize(
    "line, fragment",
    [
        ('{"id":"p1","authors":["a1"]', "invalid JSON"),
        ("[1,2,3]", "expected a JSON object"),
        ('{"authors":["a1"]}', "missing or invalid 'id'"),
        ('{"id":"","authors":["a1"]}', "missing or invalid 'id'"),
        ('{"id":"p1"}', "missing 'authors'"),
        ('{"id":"p1","authors":[]}', "'authors' must be non-empty"),
        ('{"id":"p1","authors":"a1"}', "'authors' must be a list of strings"),
        ('{"id":"p1","authors":[1]}', "'authors' must be a list of strings"),
        ('{"id":"p1","authors":["a1"],"year":"2014"}', "'year' must be an integer"),
        ('{"id":"p1","authors":["a1"],"year":true}', "'year' must be an integer"),
    ],
)
def test_bad_line_reports_line_number(line, fragment):
    with pytest.raises(CorpusFormatError) as err:
        _parse_lines('{"id":"p0","authors":["a0"]}\n' + line + "\n")
    assert "line 2" in str(err.value)
    assert fragment in str(err.value)
    assert err.value.line_number == 2


def test_invalid_utf8_reports_line_number():
    with pytest.raises(CorpusFormatError) as err:
        parse_corpus(io.BytesIO(b'{"id":"p1","authors":["a1"]}\n\xff\xfe{"id"\n'))
    assert "line 2" in str(err.value)


def test_paper_record_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        PaperRecord(paper_id="", author_ids=("a1",))
    with pytest.raises(ValueError):
        PaperRecord(paper_id="p1", author_ids=())
    with pytest.raises(ValueError):
        PaperRecord(paper_id="p1", author_ids=("a1", "a1"))
    with pytest.raises(ValueError):
        PaperRecord(paper_id="p1", author_ids=("a1",), reference_ids=("q", "q"))


_id_text = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=0x2FA0, exclude_characters='"\\'),
    min_size=1,
    max_size=8,
)


@st.composite
def _record_lists(draw):
    count = draw(st.integers(min_value=1, max_value=6))
    paper_ids = draw(
        st.lists(_id_text, min_size=count, max_size=count, unique=True)
    )
    records = []
    for pid in paper_ids:
        authors = draw(st.lists(_id_text, min_size=1, max_size=3, unique=True))
        venues = draw(st.lists(_id_text, min_size=0, max_size=2, unique=True))
        year = draw(st.none() | st.integers(min_value=1900, max_value=2100))
        refs = draw(st.lists(st.sampled_from(paper_ids), min_size=0, max_size=3, unique=True))
        records.append(
            PaperRecord(
                paper_id=pid,
                author_ids=tuple(authors),
                venue_ids=tuple(venues),
                year=year,
                reference_ids=tuple(refs),
            )
        )
    return records


@settings(max_examples=60, deadline=None)
@given(_record_lists())
def test_round_trip_write_then_parse(tmp_path_factory, records):
    path = tmp_path_factory.mktemp("rt") / "corpus.jsonl"
    write_corpus(records, path)
    assert parse_corpus_file(path) == records


@settings(max_examples=120, deadline=None)
@given(st.binary(max_size=400))
def test_parser_never_panics_on_arbitrary_bytes(data):
    try:
        records = parse_corpus(io.BytesIO(data))
    except CorpusFormatError as err:
        assert "line" in str(err)
    else:
        assert isinstance(records, list)


def test_record_to_json_omits_empty_optional_fields():
    line = record_to_json(PaperRecord(paper_id="p1", author_ids=("a1",)))
    assert line == '{"id":"p1","authors":["a1"],"venues":[]}'
    full = record_to_json(
        PaperRecord("p2", ("a1",), ("v1",), 2014, ("p1",))
    )
    assert full == '{"id":"p2","authors":["a1"],"venues":["v1"],"year":2014,"refs":["p1"]}'


def test_rank_table_rows_and_ranks(tmp_path):
    path = tmp_path / "table.csv"
    write_rank_table(
        [
            RankedEntry("author", "a1", 0.5, 1),
            RankedEntry("author", "a2", 0.25, 2),
        ],
        path,
    )
    assert path.read_text(encoding="utf-8") == (
        "entity_type,id,score,rank\nauthor,a1,0.5,1\nauthor,a2,0.25,2\n"
    )


def test_rank_table_empty_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_rank_table([], path)
    assert path.read_text(encoding="utf-8") == "entity_type,id,score,rank\n"


def test_rank_table_prints_12_significant_digits(tmp_path):
    path = tmp_path / "digits.csv"
    write_rank_table([RankedEntry("paper", "p", 1 / 3, 1)], path)
    assert "0.333333333333" in path.read_text(encoding="utf-8")


def test_rank_table_write_error_names_path(tmp_path):
    missing = tmp_path / "no_such_dir" / "table.csv"
    with pytest.raises(OSError) as err:
        write_rank_table([], missing)
    assert str(missing) in str(err.value)


def test_years_by_paper(t1_records):
    years = years_by_paper(t1_records)
    assert years == {"p1": 2014, "p2": 2015, "p3": 2016}


def test_generate_minimal_corpus():
    records = generate_synthetic(seed=1, num_authors=1, num_papers=1, num_venues=1)
    assert len(records) == 1
    record = records[0]
    assert len(record.author_ids) >= 1
    assert len(record.venue_ids) == 1
    assert record.reference_ids == ()


def test_generate_same_seed_is_identical():
    a = generate_synthetic(seed=9, num_authors=20, num_papers=60, num_venues=4)
    b = generate_synthetic(seed=9, num_authors=20, num_papers=60, num_venues=4)
    assert a == b
    c = generate_synthetic(seed=10, num_authors=20, num_papers=60, num_venues=4)
    assert a != c


def test_generate_builds_clean_dag_corpus():
    records = generate_synthetic(seed=7, num_authors=50, num_papers=200, num_venues=5)
    bundle, index, report = build_bundle(records)
    assert index.num_papers == 200
    assert report.self_citation_edges == ()
    assert report.dangling_references == 0
    assert report.cycle_found is False
    is_dag, witness = check_dag(bundle.C, papers=index.papers)
    assert is_dag and witness is None


def test_generate_bounds_authors_and_venues():
    records = generate_synthetic(seed=3, num_authors=30, num_papers=100, num_venues=6)
    for record in records:
        assert 1 <= len(record.author_ids) <= 5
        assert len(record.venue_ids) == 1


def test_generate_reference_ids_point_to_earlier_years():
    records = generate_synthetic(seed=5, num_authors=20, num_papers=80, num_venues=3)
    years = years_by_paper(records)
    for record in records:
        for ref in record.reference_ids:
            assert years[ref] < record.year


def _shuffled_corpus_text(seed: int) -> str:
    rng = random.Random(seed)
    lines = [
        '{"id":"p1","authors":["a1"]}',
        '{"id":"p2","authors":["a2"]}',
        '{"id":"p3","authors":["a3"]}',
    ]
    rng.shuffle(lines)
    return "\n".join(lines) + "\n"


def test_parse_preserves_input_order():
    records = _parse_lines(_shuffled_corpus_text(4))
    text_order = [line.split('"')[3] for line in _shuffled_corpus_text(4).splitlines()]
    assert [record.paper_id for record in records] == text_order
