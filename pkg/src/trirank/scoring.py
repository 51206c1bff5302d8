"""Coupled author/paper/venue score iteration.

Each entity donates its current score split evenly across its total
neighbor count, and absorbs the donations of its neighbors:

* an author collects from co-authors, own papers, and own venues;
* a paper collects from its authors, the papers citing it, and its venues;
* a venue collects from its authors and its papers.

One sweep evaluates all three families simultaneously from the old
state.  The solver renormalizes to unit L1 mass after every sweep and
stops when successive states differ by at most the tolerance, which is
power iteration on the combined operator.  Entities whose neighbor count
is zero donate nothing but can still receive.

The combined vector is ordered [authors; papers; venues] throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import RankedEntry
from .graphs import EntityIndex, GraphBundle, NeighborSets


class DegenerateGraphError(ValueError):
    """The graph cannot support the score iteration at all."""


@dataclass(frozen=True)
class ScoreState:
    """Author, paper, and venue score vectors (non-negative floats)."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y, self.z])

    def total_mass(self) -> float:
        return float(self.x.sum() + self.y.sum() + self.z.sum())

    @staticmethod
    def from_vector(vector: np.ndarray, m: int, n: int, r: int) -> "ScoreState":
        return ScoreState(
            x=vector[:m].copy(), y=vector[m : m + n].copy(), z=vector[m + n :].copy()
        )

    @staticmethod
    def ones(m: int, n: int, r: int) -> "ScoreState":
        return ScoreState(x=np.ones(m), y=np.ones(n), z=np.ones(r))


@dataclass(frozen=True)
class Normalizers:
    """Per-entity donation divisors: total neighbor counts.

    ``apv[i]``: co-authors + papers + venues of author i.
    ``acv[j]``: authors + citers + venues of paper j.
    ``ap[k]``: authors + papers of venue k.
    """

    apv: np.ndarray
    acv: np.ndarray
    ap: np.ndarray


@dataclass(frozen=True)
class SolveOptions:
    tolerance: float = 1e-9
    max_iterations: int = 10000
    damping: float = 0.0

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping must lie in [0, 1), got {self.damping}")


@dataclass(frozen=True)
class SolveResult:
    scores: ScoreState
    iterations: int
    residual: float
    converged: bool
    diagnostic: str | None = None


def compute_normalizers(sets: NeighborSets) -> Normalizers:
    apv = np.fromiter(
        (
            len(a) + len(p) + len(v)
            for a, p, v in zip(
                sets.coauthors_of_author, sets.papers_of_author, sets.venues_of_author
            )
        ),
        dtype=np.int64,
        count=len(sets.papers_of_author),
    )
    acv = np.fromiter(
        (
            len(a) + len(c) + len(v)
            for a, c, v in zip(
                sets.authors_of_paper, sets.citers_of_paper, sets.venues_of_paper
            )
        ),
        dtype=np.int64,
        count=len(sets.authors_of_paper),
    )
    ap = np.fromiter(
        (
            len(a) + len(p)
            for a, p in zip(sets.authors_of_venue, sets.papers_of_venue)
        ),
        dtype=np.int64,
        count=len(sets.papers_of_venue),
    )
    return Normalizers(apv=apv, acv=acv, ap=ap)


def _safe_divide(scores: np.ndarray, counts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(scores))
    np.divide(scores, counts, out=out, where=counts > 0)
    return out


def normalize_scores(state: ScoreState, normalizers: Normalizers) -> ScoreState:
    """Per-entity donation shares: score / neighbor count, 0 when count is 0."""
    return ScoreState(
        x=_safe_divide(state.x, normalizers.apv),
        y=_safe_divide(state.y, normalizers.acv),
        z=_safe_divide(state.z, normalizers.ap),
    )


def sweep(
    bundle: GraphBundle,
    sets: NeighborSets,
    state: ScoreState,
    normalizers: Normalizers,
) -> ScoreState:
    """One simultaneous update of all three score families (raw sums).

    Every new value is accumulated left to right over the neighbor lists
    in ordinal order; the result is not renormalized.
    """
    shares = normalize_scores(state, normalizers)
    xbar, ybar, zbar = shares.x, shares.y, shares.z

    new_x = np.zeros(bundle.num_authors)
    for i in range(bundle.num_authors):
        acc = 0.0
        for l in sets.coauthors_of_author[i]:
            acc += xbar[l]
        for j in sets.papers_of_author[i]:
            acc += ybar[j]
        for k in sets.venues_of_author[i]:
            acc += zbar[k]
        new_x[i] = acc

    new_y = np.zeros(bundle.num_papers)
    for j in range(bundle.num_papers):
        acc = 0.0
        for i in sets.authors_of_paper[j]:
            acc += xbar[i]
        for l in sets.citers_of_paper[j]:
            acc += ybar[l]
        for k in sets.venues_of_paper[j]:
            acc += zbar[k]
        new_y[j] = acc

    new_z = np.zeros(bundle.num_venues)
    for k in range(bundle.num_venues):
        acc = 0.0
        for i in sets.authors_of_venue[k]:
            acc += xbar[i]
        for j in sets.papers_of_venue[k]:
            acc += ybar[j]
        new_z[k] = acc

    return ScoreState(x=new_x, y=new_y, z=new_z)


def residual(
    bundle: GraphBundle,
    sets: NeighborSets,
    state: ScoreState,
    normalizers: Normalizers | None = None,
    damping: float = 0.0,
) -> float:
    """L1 distance between *state* and one more (damped) sweep of it.

    Zero exactly when the state is a fixed direction of the iteration.
    The state is expected to carry unit L1 mass already.
    """
    if normalizers is None:
        normalizers = compute_normalizers(sets)
    swept = sweep(bundle, sets, state, normalizers).as_vector()
    total_entities = len(swept)
    if damping:
        swept = (1.0 - damping) * swept + damping * np.full(
            total_entities, 1.0 / total_entities
        )
    mass = swept.sum()
    if not mass > 0:
        raise DegenerateGraphError("sweep produced no score mass to renormalize")
    swept /= mass
    return float(np.abs(swept - state.as_vector()).sum())


def _assemble_operator(bundle: GraphBundle) -> sp.csr_matrix:
    """The combined neighbor matrix over [authors; papers; venues].

    Row sums equal the donation normalizers; the citation block is
    transposed because papers collect from the papers citing them.
    """
    W = sp.bmat(
        [
            [bundle.Q, bundle.M, bundle.N],
            [bundle.M.T, bundle.C.T, bundle.L],
            [bundle.N.T, bundle.L.T, None],
        ],
        format="csr",
    )
    W.sort_indices()
    return W


def _canonical_permutation(index: EntityIndex) -> np.ndarray:
    """Combined-vector positions ordered by id within each entity class.

    Iterating in this order makes every float operation independent of
    the ordinal numbering the input happened to arrive with, so
    relabeled corpora produce bit-identical scores.
    """
    m, n = index.num_authors, index.num_papers
    parts = (
        sorted(range(m), key=index.authors.__getitem__),
        [m + j for j in sorted(range(n), key=index.papers.__getitem__)],
        [m + n + k for k in sorted(range(index.num_venues), key=index.venues.__getitem__)],
    )
    return np.array([p for part in parts for p in part], dtype=np.int64)


def solve(
    bundle: GraphBundle,
    sets: NeighborSets,
    options: SolveOptions | None = None,
    *,
    index: EntityIndex | None = None,
    initial_state: ScoreState | None = None,
) -> SolveResult:
    """Iterate the coupled updates to a unit-L1 fixed point.

    Starts from all-ones (or *initial_state*), renormalizes the combined
    vector after every sweep, and stops once the L1 change between
    successive states is at most the tolerance.  With damping d the sweep
    result is first mixed with the uniform vector as (1-d)*swept + d*u.

    When *index* is given, iteration runs in id-sorted entity order
    internally, making the result identical across input relabelings.
    Without damping, a residual that stops improving across a
    50-iteration window aborts with a diagnostic instead of burning the
    whole iteration budget on an oscillation.
    """
    opts = options if options is not None else SolveOptions()
    m, n, r = bundle.num_authors, bundle.num_papers, bundle.num_venues
    total = m + n + r
    if total == 0:
        raise DegenerateGraphError("graph has no entities")

    normalizers = compute_normalizers(sets)
    d = np.concatenate(
        [normalizers.apv, normalizers.acv, normalizers.ap]
    ).astype(np.float64)
    if not np.any(d > 0):
        raise DegenerateGraphError("degenerate graph: every entity is isolated")

    perm = _canonical_permutation(index) if index is not None else np.arange(total)
    W = _assemble_operator(bundle)[perm, :][:, perm].tocsr()
    W.sort_indices()
    d = d[perm]
    has_degree = d > 0

    if initial_state is None:
        s = np.ones(total)
    else:
        s = initial_state.as_vector().astype(np.float64)
        if s.shape != (total,):
            raise ValueError(
                f"initial state has {s.shape[0]} entries, graph has {total}"
            )
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("initial state must be finite and non-negative")
        s = s[perm]
    mass = s.sum()
    if not mass > 0:
        raise ValueError("initial state must carry positive total mass")
    s = s / mass

    uniform = np.full(total, 1.0 / total)
    damping = opts.damping
    residuals: list[float] = []
    iterations = 0
    change = float("inf")
    converged = False
    diagnostic = None

    for iterations in range(1, opts.max_iterations + 1):
        # Same share arithmetic as normalize_scores: true division, so the
        # matrix route and the per-entity sweep agree to the last bit.
        shares = np.zeros(total)
        np.divide(s, d, out=shares, where=has_degree)
        swept = W @ shares
        if damping:
            swept = (1.0 - damping) * swept + damping * uniform
        mass = swept.sum()
        if not mass > 0:
            raise DegenerateGraphError("score mass vanished during iteration")
        swept /= mass
        change = float(np.abs(swept - s).sum())
        s = swept
        residuals.append(change)
        if change <= opts.tolerance:
            converged = True
            break
        if (
            damping == 0.0
            and iterations >= 100
            and min(residuals[-50:]) >= min(residuals[-100:-50])
        ):
            diagnostic = (
                "residual stopped decreasing over the last 50 iterations; "
                "the iteration appears to oscillate between directions. "
                "Rerun with damping > 0 to force convergence"
            )
            break

    out = np.empty(total)
    out[perm] = s
    return SolveResult(
        scores=ScoreState.from_vector(out, m, n, r),
        iterations=iterations,
        residual=change,
        converged=converged,
        diagnostic=diagnostic,
    )


_CLASS_FIELDS = {
    "author": ("authors", "x"),
    "paper": ("papers", "y"),
    "venue": ("venues", "z"),
}


def rank_entities(
    result: SolveResult,
    index: EntityIndex,
    entity_class: str,
    top_k: int | None = None,
) -> list[RankedEntry]:
    """Ranked entries for one entity class, score descending, ties by id.

    ``top_k=None`` returns everything; ranks are sequential from 1 even
    for tied scores.
    """
    if entity_class not in _CLASS_FIELDS:
        raise ValueError(
            f"unknown entity class {entity_class!r}; expected one of "
            + ", ".join(sorted(_CLASS_FIELDS))
        )
    if top_k is not None and top_k < 0:
        raise ValueError(f"top_k must be non-negative, got {top_k}")
    ids_field, score_field = _CLASS_FIELDS[entity_class]
    ids: Sequence[str] = getattr(index, ids_field)
    scores: np.ndarray = getattr(result.scores, score_field)
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))
    if top_k is not None:
        order = order[:top_k]
    return [
        RankedEntry(
            entity_type=entity_class,
            entity_id=ids[i],
            score=float(scores[i]),
            rank=position + 1,
        )
        for position, i in enumerate(order)
    ]
