"""Author/paper/venue ranking over citation corpora.

Build the graph bundle from parsed records, then iterate the coupled
score updates to a fixed point; classical baselines and citation-ring
detection operate on the same bundle.
"""

from .anomaly import (
    AuthorCitationGraph,
    SelfCitationStats,
    build_author_citation_graph,
    mutual_citation_cycles,
    self_citation_stats,
)
from .baselines import (
    BaselineReport,
    author_citation_count,
    citation_count,
    e_index,
    g_index,
    h_index,
    impact_factor,
    pagerank,
)
from .corpus import (
    CorpusFormatError,
    PaperRecord,
    RankedEntry,
    generate_synthetic,
    parse_corpus,
    parse_corpus_file,
    write_corpus,
    write_rank_table,
    years_by_paper,
)
from .graphs import (
    CorpusStructureError,
    DegreeProfile,
    EntityIndex,
    GraphBundle,
    MissingYearError,
    NeighborSets,
    UnknownEntityError,
    ValidationReport,
    build_bundle,
    check_dag,
    check_upper_triangular,
    degree_profile,
    derive_author_venue,
    derive_collaboration,
    neighbor_sets,
    newest_first_order,
)
from .scoring import (
    DegenerateGraphError,
    Normalizers,
    ScoreState,
    SolveOptions,
    SolveResult,
    compute_normalizers,
    normalize_scores,
    rank_entities,
    residual,
    solve,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AuthorCitationGraph",
    "BaselineReport",
    "CorpusFormatError",
    "CorpusStructureError",
    "DegenerateGraphError",
    "DegreeProfile",
    "EntityIndex",
    "GraphBundle",
    "MissingYearError",
    "NeighborSets",
    "Normalizers",
    "PaperRecord",
    "RankedEntry",
    "ScoreState",
    "SelfCitationStats",
    "SolveOptions",
    "SolveResult",
    "UnknownEntityError",
    "ValidationReport",
    "author_citation_count",
    "build_author_citation_graph",
    "build_bundle",
    "check_dag",
    "check_upper_triangular",
    "citation_count",
    "compute_normalizers",
    "degree_profile",
    "derive_author_venue",
    "derive_collaboration",
    "e_index",
    "g_index",
    "generate_synthetic",
    "h_index",
    "impact_factor",
    "mutual_citation_cycles",
    "neighbor_sets",
    "newest_first_order",
    "normalize_scores",
    "pagerank",
    "parse_corpus",
    "parse_corpus_file",
    "rank_entities",
    "residual",
    "self_citation_stats",
    "solve",
    "sweep",
    "write_corpus",
    "write_rank_table",
    "years_by_paper",
]
