"""Classical bibliometric scores computed on the same graph bundle.

Citation counts, h/g/e-index, two-year impact factor, and PageRank over
the citation graph.  These are reference points to compare the coupled
iteration against, not inputs to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .graphs import EntityIndex, GraphBundle, MissingYearError


@dataclass(frozen=True)
class BaselineReport:
    """Scores of one method over one entity class, in index order."""

    method: str
    entity_class: str
    scores: dict[str, float]

    def __post_init__(self) -> None:
        for entity_id, value in self.scores.items():
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(
                    f"score for {entity_id!r} must be finite and non-negative, "
                    f"got {value}"
                )


def paper_citation_counts(bundle: GraphBundle) -> np.ndarray:
    """In-degree of every paper in the citation graph."""
    return np.asarray(bundle.C.sum(axis=0), dtype=np.int64).ravel()


def citation_count(bundle: GraphBundle, index: EntityIndex, paper_id: str) -> int:
    return int(paper_citation_counts(bundle)[index.paper_ordinal(paper_id)])


def author_citation_counts(bundle: GraphBundle) -> np.ndarray:
    """Total citations to each author's papers; co-authors each get full credit."""
    received = paper_citation_counts(bundle).astype(np.float64)
    return np.asarray(bundle.M @ received, dtype=np.int64).ravel()


def author_citation_count(
    bundle: GraphBundle, index: EntityIndex, author_id: str
) -> int:
    return int(author_citation_counts(bundle)[index.author_ordinal(author_id)])


def citation_profile(
    bundle: GraphBundle, index: EntityIndex, author_id: str
) -> tuple[int, ...]:
    """Citation counts of one author's papers, largest first."""
    i = index.author_ordinal(author_id)
    received = paper_citation_counts(bundle)
    row = bundle.M.indices[bundle.M.indptr[i] : bundle.M.indptr[i + 1]]
    return tuple(sorted((int(received[j]) for j in row), reverse=True))


def author_citation_profiles(bundle: GraphBundle) -> list[tuple[int, ...]]:
    """Largest-first citation profile for every author, by ordinal."""
    received = paper_citation_counts(bundle)
    M = bundle.M
    return [
        tuple(
            sorted((int(received[j]) for j in M.indices[M.indptr[i] : M.indptr[i + 1]]),
                   reverse=True)
        )
        for i in range(bundle.num_authors)
    ]


def h_from_citations(citations: Sequence[int]) -> int:
    """Largest h such that at least h values are >= h."""
    ranked = sorted(citations, reverse=True)
    h = 0
    for position, count in enumerate(ranked, start=1):
        if count >= position:
            h = position
        else:
            break
    return h


def g_from_citations(citations: Sequence[int]) -> int:
    """Largest g such that the g highest values sum to at least g^2."""
    ranked = sorted(citations, reverse=True)
    running = 0
    g = 0
    for position, count in enumerate(ranked, start=1):
        running += count
        if running >= position * position:
            g = position
    return g


def e_from_citations(citations: Sequence[int]) -> float:
    """Square root of the citations in the h-core beyond the h^2 floor."""
    ranked = sorted(citations, reverse=True)
    h = h_from_citations(ranked)
    return math.sqrt(sum(ranked[:h]) - h * h)


def h_index(bundle: GraphBundle, index: EntityIndex, author_id: str) -> int:
    return h_from_citations(citation_profile(bundle, index, author_id))


def g_index(bundle: GraphBundle, index: EntityIndex, author_id: str) -> int:
    return g_from_citations(citation_profile(bundle, index, author_id))


def e_index(bundle: GraphBundle, index: EntityIndex, author_id: str) -> float:
    return e_from_citations(citation_profile(bundle, index, author_id))


def impact_factor(
    bundle: GraphBundle,
    index: EntityIndex,
    years: Mapping[str, int | None],
    venue_id: str,
    year: int,
) -> float:
    """Citations from year-Y papers to the venue's Y-1/Y-2 papers, per paper.

    A citation's year is the citing paper's publication year.  Requires a
    year for every paper in the corpus; a venue with no papers in the
    window scores 0.
    """
    for paper_id in index.papers:
        if years.get(paper_id) is None:
            raise MissingYearError(f"paper {paper_id!r} has no year metadata")
    k = index.venue_ordinal(venue_id)

    year_of = np.fromiter(
        (years[paper_id] for paper_id in index.papers),
        dtype=np.int64,
        count=index.num_papers,
    )
    at_venue = np.zeros(index.num_papers, dtype=bool)
    at_venue[bundle.L.getcol(k).tocoo().row] = True
    in_window = at_venue & ((year_of == year - 1) | (year_of == year - 2))
    published = int(in_window.sum())
    if published == 0:
        return 0.0
    citing = np.nonzero(year_of == year)[0]
    cites = int(bundle.C[citing][:, np.nonzero(in_window)[0]].nnz)
    return cites / published


def pagerank(
    C: sp.spmatrix,
    alpha: float = 0.85,
    tolerance: float = 1e-12,
    max_iterations: int = 10000,
    paper_ids: Sequence[str] | None = None,
) -> np.ndarray:
    """Stationary walk distribution on the citation graph.

    The walk moves from a citing paper to a paper it cites; papers citing
    nothing spread their mass uniformly.  Result sums to 1.  When
    *paper_ids* is given, iteration runs in id-sorted order so relabeled
    inputs give bit-identical scores.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    C = C.tocsr()
    n = C.shape[0]
    if n == 0:
        return np.zeros(0)

    if paper_ids is not None:
        if len(paper_ids) != n:
            raise ValueError(f"{len(paper_ids)} ids for {n} papers")
        perm = np.array(sorted(range(n), key=paper_ids.__getitem__), dtype=np.int64)
    else:
        perm = np.arange(n)
    Cc = C[perm, :][:, perm].tocsr()

    out_degree = np.asarray(Cc.sum(axis=1), dtype=np.float64).ravel()
    dangling = out_degree == 0
    inv_out = np.zeros(n)
    np.divide(1.0, out_degree, out=inv_out, where=out_degree > 0)
    walk = sp.csr_matrix(Cc.multiply(inv_out[:, None]).T)
    walk.sort_indices()

    pi = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        dangling_mass = float(pi[dangling].sum())
        new_pi = alpha * (walk @ pi) + (alpha * dangling_mass + 1.0 - alpha) / n
        change = float(np.abs(new_pi - pi).sum())
        pi = new_pi
        if change <= tolerance:
            break
    pi = pi / pi.sum()

    out = np.empty(n)
    out[perm] = pi
    return out
