"""Citation-manipulation detectors over the author level of the graph.

Collapses the paper citation graph onto authors: every citation edge
p -> q contributes one unit of weight from each author of p to each
author of q.  Pairs where the two authors coincide are tallied
separately as self-citations.  Detection reports what is there; no
score is adjusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .graphs import EntityIndex, GraphBundle, NeighborSets, UnknownEntityError, neighbor_sets

CYCLE_REPORT_CAP = 10**6


@dataclass(frozen=True)
class AuthorCitationGraph:
    """Directed author-to-author citation weights plus self-citation tallies.

    ``edge_weights`` maps (citing author ordinal, cited author ordinal)
    to the number of contributing paper citation pairs; the two ordinals
    always differ.  ``self_citations[i]`` counts citation edges whose
    citing and cited papers both list author i.  ``outgoing_cites[i]``
    counts citation edges made by papers of author i, each edge once.
    """

    author_ids: tuple[str, ...]
    edge_weights: Mapping[tuple[int, int], int]
    self_citations: tuple[int, ...]
    outgoing_cites: tuple[int, ...]


class SelfCitationStats(NamedTuple):
    self_cites: int
    total_outgoing_cites: int
    rate: float


def build_author_citation_graph(
    bundle: GraphBundle,
    index: EntityIndex,
    sets: NeighborSets | None = None,
) -> AuthorCitationGraph:
    if sets is None:
        sets = neighbor_sets(bundle)
    weights: dict[tuple[int, int], int] = {}
    self_cites = [0] * index.num_authors
    outgoing = [0] * index.num_authors

    for citing_paper in range(index.num_papers):
        citing_authors = sets.authors_of_paper[citing_paper]
        for cited_paper in sets.refs_of_paper[citing_paper]:
            cited_authors = sets.authors_of_paper[cited_paper]
            for a in citing_authors:
                outgoing[a] += 1
            for a in citing_authors:
                for b in cited_authors:
                    if a == b:
                        self_cites[a] += 1
                    else:
                        key = (a, b)
                        weights[key] = weights.get(key, 0) + 1

    return AuthorCitationGraph(
        author_ids=index.authors,
        edge_weights=weights,
        self_citations=tuple(self_cites),
        outgoing_cites=tuple(outgoing),
    )


def self_citation_stats(
    graph: AuthorCitationGraph, author_id: str
) -> SelfCitationStats:
    """How often an author's papers cite papers that author also wrote."""
    try:
        i = graph.author_ids.index(author_id)
    except ValueError:
        raise UnknownEntityError(f"unknown author id {author_id!r}") from None
    self_cites = graph.self_citations[i]
    total = graph.outgoing_cites[i]
    return SelfCitationStats(
        self_cites=self_cites,
        total_outgoing_cites=total,
        rate=self_cites / total if total > 0 else 0.0,
    )


def mutual_citation_cycles(
    graph: AuthorCitationGraph,
    max_len: int = 4,
    cap: int = CYCLE_REPORT_CAP,
) -> list[tuple[str, ...]]:
    """All simple directed cycles of length 2..max_len among authors.

    Cycles are reported once each, written starting from their smallest
    author id and following edge direction, sorted lexicographically.
    Enumeration stops after *cap* cycles; simple-cycle counts grow
    combinatorially.
    """
    if max_len < 2:
        raise ValueError(f"max_len must be at least 2, got {max_len}")

    successors: dict[str, list[str]] = {}
    for (a, b), weight in graph.edge_weights.items():
        if weight >= 1:
            successors.setdefault(graph.author_ids[a], []).append(graph.author_ids[b])
    for neighbor_list in successors.values():
        neighbor_list.sort()

    found: list[tuple[str, ...]] = []

    def extend(start: str, path: list[str], on_path: set[str]) -> bool:
        for target in successors.get(path[-1], ()):
            if target == start:
                if len(path) >= 2:
                    found.append(tuple(path))
                    if len(found) >= cap:
                        return False
            elif target > start and target not in on_path and len(path) < max_len:
                path.append(target)
                on_path.add(target)
                keep_going = extend(start, path, on_path)
                on_path.discard(target)
                path.pop()
                if not keep_going:
                    return False
        return True

    for start in sorted(successors):
        if not extend(start, [start], {start}):
            break
    return sorted(found)
