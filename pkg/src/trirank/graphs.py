"""Tripartite publication graph, collaboration graph, and citation graph.

Builds the five binary sparse matrices from a record list:

* ``M`` (authors x papers) and ``L`` (papers x venues) come straight from
  the records.
* ``C`` (papers x papers, directed: row cites column) comes from the
  reference lists, restricted to papers present in the corpus.
* ``Q`` (authors x authors, co-authorship) and ``N`` (authors x venues)
  are always derived from ``M`` and ``L``, never read from input, so the
  structural consistency invariants hold by construction.

All matrices are 0/1 CSR with float64 entries.  Entities are numbered by
first appearance in the record stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .corpus import PaperRecord


class CorpusStructureError(ValueError):
    """The record list cannot be turned into a graph bundle."""


class UnknownEntityError(LookupError):
    """An entity id was not found in the corpus."""


class MissingYearError(ValueError):
    """A paper needed year metadata it does not have; names the paper."""


@dataclass(frozen=True)
class EntityIndex:
    """Ordered author/paper/venue ids with reverse maps id -> ordinal."""

    authors: tuple[str, ...]
    papers: tuple[str, ...]
    venues: tuple[str, ...]
    author_pos: Mapping[str, int]
    paper_pos: Mapping[str, int]
    venue_pos: Mapping[str, int]

    @classmethod
    def from_lists(
        cls, authors: Sequence[str], papers: Sequence[str], venues: Sequence[str]
    ) -> "EntityIndex":
        return cls(
            authors=tuple(authors),
            papers=tuple(papers),
            venues=tuple(venues),
            author_pos={a: i for i, a in enumerate(authors)},
            paper_pos={p: j for j, p in enumerate(papers)},
            venue_pos={v: k for k, v in enumerate(venues)},
        )

    @property
    def num_authors(self) -> int:
        return len(self.authors)

    @property
    def num_papers(self) -> int:
        return len(self.papers)

    @property
    def num_venues(self) -> int:
        return len(self.venues)

    def author_ordinal(self, author_id: str) -> int:
        try:
            return self.author_pos[author_id]
        except KeyError:
            raise UnknownEntityError(f"unknown author id {author_id!r}") from None

    def paper_ordinal(self, paper_id: str) -> int:
        try:
            return self.paper_pos[paper_id]
        except KeyError:
            raise UnknownEntityError(f"unknown paper id {paper_id!r}") from None

    def venue_ordinal(self, venue_id: str) -> int:
        try:
            return self.venue_pos[venue_id]
        except KeyError:
            raise UnknownEntityError(f"unknown venue id {venue_id!r}") from None


@dataclass(frozen=True)
class GraphBundle:
    """The five 0/1 sparse matrices of the publication model.

    ``M``: authors x papers (wrote); ``N``: authors x venues (published at);
    ``L``: papers x venues (appeared at); ``Q``: authors x authors
    (co-authored, symmetric, zero diagonal); ``C``: papers x papers
    (row cites column, zero diagonal).
    """

    M: sp.csr_matrix
    N: sp.csr_matrix
    L: sp.csr_matrix
    Q: sp.csr_matrix
    C: sp.csr_matrix

    @property
    def num_authors(self) -> int:
        return self.M.shape[0]

    @property
    def num_papers(self) -> int:
        return self.M.shape[1]

    @property
    def num_venues(self) -> int:
        return self.L.shape[1]


@dataclass(frozen=True)
class NeighborSets:
    """The nine adjacency-list families, indexed by ordinal.

    Each entry is a sorted tuple of neighbor ordinals.  ``citers_of_paper``
    and ``refs_of_paper`` are exact transposes of each other, as are every
    matrix-derived pair (``papers_of_author`` vs ``authors_of_paper``, and
    so on).
    """

    coauthors_of_author: tuple[tuple[int, ...], ...]
    papers_of_author: tuple[tuple[int, ...], ...]
    venues_of_author: tuple[tuple[int, ...], ...]
    authors_of_paper: tuple[tuple[int, ...], ...]
    citers_of_paper: tuple[tuple[int, ...], ...]
    refs_of_paper: tuple[tuple[int, ...], ...]
    venues_of_paper: tuple[tuple[int, ...], ...]
    authors_of_venue: tuple[tuple[int, ...], ...]
    papers_of_venue: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ValidationReport:
    """What build_bundle dropped or flagged, with stable id ordering."""

    self_citation_edges: tuple[str, ...]
    dangling_references: int
    cycle_found: bool
    witness_cycle: tuple[str, ...] | None
    orphan_entities: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class DegreeProfile:
    """Per-entity edge counts mirroring the neighbor-set cardinalities."""

    papers_per_author: np.ndarray
    authors_per_paper: np.ndarray
    citations_received: np.ndarray
    references_made: np.ndarray


def _binary_csr(
    rows: Iterable[int], cols: Iterable[int], shape: tuple[int, int]
) -> sp.csr_matrix:
    row_idx = np.fromiter(rows, dtype=np.int64)
    col_idx = np.fromiter(cols, dtype=np.int64)
    data = np.ones(len(row_idx), dtype=np.float64)
    matrix = sp.csr_matrix((data, (row_idx, col_idx)), shape=shape)
    matrix.data[:] = 1.0  # collapse duplicate edges
    matrix.sort_indices()
    return matrix


def derive_collaboration(M: sp.csr_matrix) -> sp.csr_matrix:
    """Q from M: authors are linked iff they share at least one paper."""
    overlap = (M @ M.T).tocsr()
    overlap.setdiag(0)
    overlap.eliminate_zeros()
    Q = overlap
    Q.data[:] = 1.0
    Q.sort_indices()
    return Q

def derive_author_venue(M: sp.csr_matrix, L: sp.csr_matrix) -> sp.csr_matrix:
    """N from M and L: the boolean product (author wrote some paper at venue)."""
    if M.shape[1] != L.shape[0]:
        raise ValueError(f"shape mismatch: M is {M.shape}, L is {L.shape}")
    N = (M @ L).tocsr()
    N.eliminate_zeros()
    N.data[:] = 1.0
    N.sort_indices()
    return N


def build_bundle(
    records: Sequence[PaperRecord],
) -> tuple[GraphBundle, EntityIndex, ValidationReport]:
    """Build the matrix bundle, entity index, and validation report.

    Rejects an empty corpus and duplicate paper ids.  Self-references and
    references to papers outside the corpus are dropped (and reported);
    citation cycles are reported but do not abort the build.
    """
    if not records:
        raise CorpusStructureError("empty corpus")

    authors: list[str] = []
    papers: list[str] = []
    venues: list[str] = []
    author_pos: dict[str, int] = {}
    paper_pos: dict[str, int] = {}
    venue_pos: dict[str, int] = {}

    for record in records:
        if record.paper_id in paper_pos:
            raise CorpusStructureError(f"duplicate paper id {record.paper_id!r}")
        paper_pos[record.paper_id] = len(papers)
        papers.append(record.paper_id)
        for author_id in record.author_ids:
            if author_id not in author_pos:
                author_pos[author_id] = len(authors)
                authors.append(author_id)
        for venue_id in record.venue_ids:
            if venue_id not in venue_pos:
                venue_pos[venue_id] = len(venues)
                venues.append(venue_id)

    index = EntityIndex.from_lists(authors, papers, venues)
    m, n, r = len(authors), len(papers), len(venues)

    m_rows: list[int] = []
    m_cols: list[int] = []
    l_rows: list[int] = []
    l_cols: list[int] = []
    c_rows: list[int] = []
    c_cols: list[int] = []
    self_refs: list[str] = []
    dangling = 0

    for record in records:
        j = paper_pos[record.paper_id]
        for author_id in record.author_ids:
            m_rows.append(author_pos[author_id])
            m_cols.append(j)
        for venue_id in record.venue_ids:
            l_rows.append(j)
            l_cols.append(venue_pos[venue_id])
        for ref_id in record.reference_ids:
            if ref_id == record.paper_id:
                self_refs.append(record.paper_id)
                continue
            k = paper_pos.get(ref_id)
            if k is None:
                dangling += 1
                continue
            c_rows.append(j)
            c_cols.append(k)

    M = _binary_csr(m_rows, m_cols, (m, n))
    L = _binary_csr(l_rows, l_cols, (n, r))
    C = _binary_csr(c_rows, c_cols, (n, n))
    Q = derive_collaboration(M)
    N = derive_author_venue(M, L)
    bundle = GraphBundle(M=M, N=N, L=L, Q=Q, C=C)

    is_dag, witness = check_dag(C, papers=index.papers)

    orphans: list[tuple[str, str]] = []
    author_degree = np.asarray(M.sum(axis=1)).ravel() + np.asarray(Q.sum(axis=1)).ravel()
    paper_degree = (
        np.asarray(M.sum(axis=0)).ravel()
        + np.asarray(L.sum(axis=1)).ravel()
        + np.asarray(C.sum(axis=1)).ravel()
        + np.asarray(C.sum(axis=0)).ravel()
    )
    venue_degree = np.asarray(L.sum(axis=0)).ravel() + np.asarray(N.sum(axis=0)).ravel()
    for class_name, ids, degrees in (
        ("author", index.authors, author_degree),
        ("paper", index.papers, paper_degree),
        ("venue", index.venues, venue_degree),
    ):
        for entity_id in sorted(ids[i] for i in np.nonzero(degrees == 0)[0]):
            orphans.append((class_name, entity_id))

    report = ValidationReport(
        self_citation_edges=tuple(sorted(set(self_refs))),
        dangling_references=dangling,
        cycle_found=not is_dag,
        witness_cycle=witness,
        orphan_entities=tuple(sorted(orphans)),
    )
    return bundle, index, report


def _rows_as_tuples(matrix: sp.csr_matrix) -> tuple[tuple[int, ...], ...]:
    matrix.sort_indices()
    indptr, indices = matrix.indptr, matrix.indices
    return tuple(
        tuple(int(c) for c in indices[indptr[i] : indptr[i + 1]])
        for i in range(matrix.shape[0])
    )


def neighbor_sets(bundle: GraphBundle) -> NeighborSets:
    """Materialize the nine adjacency-list families from the bundle."""
    M, N, L, Q, C = bundle.M, bundle.N, bundle.L, bundle.Q, bundle.C
    return NeighborSets(
        coauthors_of_author=_rows_as_tuples(Q),
        papers_of_author=_rows_as_tuples(M),
        venues_of_author=_rows_as_tuples(N),
        authors_of_paper=_rows_as_tuples(M.T.tocsr()),
        citers_of_paper=_rows_as_tuples(C.T.tocsr()),
        refs_of_paper=_rows_as_tuples(C),
        venues_of_paper=_rows_as_tuples(L),
        authors_of_venue=_rows_as_tuples(N.T.tocsr()),
        papers_of_venue=_rows_as_tuples(L.T.tocsr()),
    )


def degree_profile(bundle: GraphBundle) -> DegreeProfile:
    """Row/column sums of M and C as integer count vectors."""
    return DegreeProfile(
        papers_per_author=np.asarray(bundle.M.sum(axis=1), dtype=np.int64).ravel(),
        authors_per_paper=np.asarray(bundle.M.sum(axis=0), dtype=np.int64).ravel(),
        citations_received=np.asarray(bundle.C.sum(axis=0), dtype=np.int64).ravel(),
        references_made=np.asarray(bundle.C.sum(axis=1), dtype=np.int64).ravel(),
    )


def check_dag(
    C: sp.spmatrix, papers: Sequence[str] | None = None
) -> tuple[bool, tuple | None]:
    """Check the citation graph for directed cycles.

    Returns ``(True, None)`` when acyclic.  Otherwise returns one witness
    cycle, chosen deterministically: the strongly connected component with
    the smallest member is walked along smallest-successor edges, and the
    cycle is rotated so its smallest member comes first.  Members are
    reported as paper ids when *papers* is given, as ordinals otherwise.
    """
    C = C.tocsr()
    n = C.shape[0]
    if n == 0 or C.nnz == 0:
        return True, None
    num_components, labels = connected_components(C, directed=True, connection="strong")
    if num_components == n:
        return True, None

    def key(node: int):
        return papers[node] if papers is not None else node

    component_sizes = np.bincount(labels, minlength=num_components)
    cyclic_nodes = [v for v in range(n) if component_sizes[labels[v]] > 1]
    start = min(cyclic_nodes, key=key)
    component = labels[start]

    walk: list[int] = []
    position: dict[int, int] = {}
    node = start
    while node not in position:
        position[node] = len(walk)
        walk.append(node)
        successors = [
            int(w) for w in C.indices[C.indptr[node] : C.indptr[node + 1]]
            if labels[w] == component
        ]
        unvisited = [w for w in successors if w not in position]
        node = min(unvisited, key=key) if unvisited else min(
            (w for w in successors if w in position), key=key
        )
    cycle = walk[position[node] :]
    pivot = min(range(len(cycle)), key=lambda i: key(cycle[i]))
    cycle = cycle[pivot:] + cycle[:pivot]
    witness = tuple(key(v) for v in cycle)
    return False, witness


def newest_first_order(
    index: EntityIndex, years: Mapping[str, int | None]
) -> list[int]:
    """Paper ordinals sorted newest-first by year, ties broken by id.

    Raises :class:`MissingYearError` naming the first paper (in ordinal
    order) whose year is absent.
    """
    for paper_id in index.papers:
        if years.get(paper_id) is None:
            raise MissingYearError(f"paper {paper_id!r} has no year metadata")
    return sorted(
        range(index.num_papers),
        key=lambda j: (-years[index.papers[j]], index.papers[j]),
    )


def check_upper_triangular(C: sp.spmatrix, order: Sequence[int]) -> bool:
    """True iff C permuted by *order* has all entries strictly above the diagonal.

    *order* lists paper ordinals newest-first; a 1 at (cites, cited) must land
    above the diagonal, i.e. every citation must point to an older paper.
    """
    n = C.shape[0]
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of all paper ordinals")
    position = np.empty(n, dtype=np.int64)
    position[np.asarray(order, dtype=np.int64)] = np.arange(n)
    coo = C.tocoo()
    return bool(np.all(position[coo.row] < position[coo.col]))
