"""Shared fixtures and corpus builders for the test suite."""

from __future__ import annotations

import random

import pytest

from trirank.corpus import PaperRecord
from trirank.graphs import build_bundle, neighbor_sets


def records_from(rows):
    """Build PaperRecords from (id, authors, venues, year, refs) tuples."""
    return [
        PaperRecord(
            paper_id=pid,
            author_ids=tuple(authors),
            venue_ids=tuple(venues),
            year=year,
            reference_ids=tuple(refs),
        )
        for pid, authors, venues, year, refs in rows
    ]


T1_ROWS = [
    ("p1", ["a1"], ["v1"], 2014, []),
    ("p2", ["a1", "a2"], ["v1"], 2015, ["p1"]),
    ("p3", ["a2"], ["v1"], 2016, ["p1", "p2"]),
]


@pytest.fixture
def t1_records():
    return records_from(T1_ROWS)


@pytest.fixture
def t1(t1_records):
    bundle, index, report = build_bundle(t1_records)
    return bundle, index, report, neighbor_sets(bundle)


@pytest.fixture
def singleton_records():
    return records_from([("p1", ["a1"], ["v1"], None, [])])


@pytest.fixture
def mutual_pair_records():
    """Two authors whose papers cite each other across years (paper DAG)."""
    return records_from(
        [
            ("pa1", ["A"], ["v1"], 2013, []),
            ("pb1", ["B"], ["v1"], 2014, ["pa1"]),
            ("pa2", ["A"], ["v1"], 2015, ["pb1"]),
        ]
    )


@pytest.fixture
def clique3_records():
    """Three authors all citing each other through six papers."""
    rows = []
    for name in ("A", "B", "C"):
        rows.append((f"p{name}1", [name], ["v1"], 2010, []))
    refs = {"A": ["pB1", "pC1"], "B": ["pA1", "pC1"], "C": ["pA1", "pB1"]}
    for name in ("A", "B", "C"):
        rows.append((f"p{name}2", [name], ["v1"], 2011, refs[name]))
    return records_from(rows)


@pytest.fixture
def self_citing_author_records():
    """One author, two papers, the later citing the earlier."""
    return records_from(
        [
            ("s1", ["solo"], ["v1"], 2010, []),
            ("s2", ["solo"], ["v1"], 2011, ["s1"]),
        ]
    )


def small_random_records(rng: random.Random, max_entities: int = 20):
    """A valid random corpus with at most max_entities entities in total.

    Papers may cite in any direction (cycles allowed) and may carry zero
    venues, so the structural edge cases stay exercised.
    """
    num_papers = rng.randint(1, 8)
    author_pool = [f"a{i}" for i in range(1, rng.randint(2, 6))]
    venue_pool = [f"v{i}" for i in range(1, rng.randint(2, 5))]
    paper_ids = [f"p{i}" for i in range(1, num_papers + 1)]
    rows = []
    for pid in paper_ids:
        authors = rng.sample(author_pool, rng.randint(1, min(3, len(author_pool))))
        venues = rng.sample(venue_pool, rng.randint(0, min(2, len(venue_pool))))
        others = [q for q in paper_ids if q != pid]
        refs = rng.sample(others, rng.randint(0, min(3, len(others))))
        rows.append((pid, authors, venues, rng.randint(2000, 2010), refs))
    records = records_from(rows)
    bundle, index, _ = build_bundle(records)
    total = index.num_authors + index.num_papers + index.num_venues
    assert total <= max_entities
    return records


def fuzz_records(rng: random.Random):
    """Messier corpora: self-references, dangling references, duplicate
    field entries are left to the parser-level dedup so records stay valid,
    but graph-level noise is all present."""
    num_papers = rng.randint(1, 6)
    author_pool = [f"a{i}" for i in range(1, rng.randint(2, 5))]
    venue_pool = [f"v{i}" for i in range(1, rng.randint(2, 4))]
    paper_ids = [f"p{i}" for i in range(1, num_papers + 1)]
    rows = []
    for pid in paper_ids:
        authors = rng.sample(author_pool, rng.randint(1, min(3, len(author_pool))))
        venues = rng.sample(venue_pool, rng.randint(0, min(2, len(venue_pool))))
        refs = []
        for _ in range(rng.randint(0, 4)):
            bucket = rng.random()
            if bucket < 0.15:
                refs.append(pid)  # self-reference, must be dropped
            elif bucket < 0.3:
                refs.append(f"x{rng.randint(1, 5)}")  # dangling
            else:
                refs.append(rng.choice(paper_ids))
        refs = list(dict.fromkeys(refs))
        rows.append((pid, authors, venues, None, refs))
    return records_from(rows)
