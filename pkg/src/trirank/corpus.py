"""Corpus file formats: JSONL paper records in, CSV rank tables out.

This is the only module that touches disk formats.  The corpus format is
UTF-8 JSON Lines, one object per line with keys ``id`` (string),
``authors`` (list of strings), ``venues`` (list of strings), and optional
``year`` (integer) and ``refs`` (list of strings).  Unknown keys are
ignored so enriched dumps parse unchanged.
"""

from __future__ import annotations

import csv
import json
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping


class CorpusFormatError(ValueError):
    """A corpus line failed to parse; the message names the line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class PaperRecord:
    """One corpus entry: a paper with its authors, venues, year, and references.

    Identifier lists must already be duplicate-free; :func:`parse_corpus`
    deduplicates silently before constructing records, while direct
    construction with duplicates raises ``ValueError``.
    """

    paper_id: str
    author_ids: tuple[str, ...]
    venue_ids: tuple[str, ...] = ()
    year: int | None = None
    reference_ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("paper_id must be non-empty")
        if not self.author_ids:
            raise ValueError(f"paper {self.paper_id!r}: author list must be non-empty")
        for name, ids in (
            ("author_ids", self.author_ids),
            ("venue_ids", self.venue_ids),
            ("reference_ids", self.reference_ids),
        ):
            if len(set(ids)) != len(ids):
                raise ValueError(f"paper {self.paper_id!r}: duplicate ids in {name}")


@dataclass(frozen=True)
class RankedEntry:
    """One row of a rank table."""

    entity_type: str
    entity_id: str
    score: float
    rank: int


def _dedup(values: Iterable[str]) -> tuple[str, ...]:
    """Drop repeated values, keeping first-occurrence order."""
    return tuple(dict.fromkeys(values))


def _string_list(obj: dict, key: str, line_number: int) -> list[str]:
    value = obj.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CorpusFormatError(line_number, f"{key!r} must be a list of strings")
    return value


def parse_corpus(stream: IO[bytes] | IO[str] | Iterable[bytes] | Iterable[str]) -> list[PaperRecord]:
    """Parse a JSONL corpus stream into records, preserving line order.

    Blank lines are skipped and within-field duplicates are deduplicated
    silently.  Any malformed line raises :class:`CorpusFormatError` carrying
    its 1-based line number: invalid UTF-8, invalid JSON, a non-object line,
    a missing or non-string ``id``, a missing/empty ``authors`` list, or a
    non-integer ``year``.
    """
    records: list[PaperRecord] = []
    for line_number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusFormatError(line_number, f"not valid UTF-8: {exc}") from exc
        else:
            line = raw
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(line_number, f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise CorpusFormatError(line_number, "expected a JSON object")

        paper_id = obj.get("id")
        if not isinstance(paper_id, str) or not paper_id:
            raise CorpusFormatError(line_number, "missing or invalid 'id'")
        if "authors" not in obj:
            raise CorpusFormatError(line_number, "missing 'authors'")
        authors = _dedup(_string_list(obj, "authors", line_number))
        if not authors:
            raise CorpusFormatError(line_number, "'authors' must be non-empty")
        venues = _dedup(_string_list(obj, "venues", line_number))
        refs = _dedup(_string_list(obj, "refs", line_number))

        year = obj.get("year")
        if year is not None and (isinstance(year, bool) or not isinstance(year, int)):
            raise CorpusFormatError(line_number, f"'year' must be an integer, got {year!r}")

        records.append(
            PaperRecord(
                paper_id=paper_id,
                author_ids=authors,
                venue_ids=venues,
                year=year,
                reference_ids=refs,
            )
        )
    return records


def parse_corpus_file(path: str | Path) -> list[PaperRecord]:
    """Open *path* and parse it as a JSONL corpus."""
    with open(path, "rb") as fh:
        return parse_corpus(fh)


def record_to_json(record: PaperRecord) -> str:
    """Serialize one record to its canonical single-line JSON form."""
    obj: dict = {
        "id": record.paper_id,
        "authors": list(record.author_ids),
        "venues": list(record.venue_ids),
    }
    if record.year is not None:
        obj["year"] = record.year
    if record.reference_ids:
        obj["refs"] = list(record.reference_ids)
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_corpus(records: Iterable[PaperRecord], destination: str | Path) -> None:
    """Write records to *destination* as JSONL; inverse of :func:`parse_corpus`."""
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for record in records:
                fh.write(record_to_json(record))
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write corpus to {path}: {exc}") from exc


def write_rank_table(entries: list[RankedEntry], destination: str | Path) -> None:
    """Write a rank table as CSV with header ``entity_type,id,score,rank``.

    Callers pass entries already sorted (score descending, id ascending);
    scores are printed with 12 significant digits so output files are
    byte-stable across runs.
    """
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["entity_type", "id", "score", "rank"])
            for entry in entries:
                writer.writerow(
                    [entry.entity_type, entry.entity_id, format(entry.score, ".12g"), entry.rank]
                )
    except OSError as exc:
        raise OSError(f"cannot write rank table to {path}: {exc}") from exc


def years_by_paper(records: Iterable[PaperRecord]) -> dict[str, int | None]:
    """Map paper id to its (possibly missing) publication year."""
    return {record.paper_id: record.year for record in records}


# ---------------------------------------------------------------------------
# Synthetic corpus generation
# ---------------------------------------------------------------------------


@dataclass
class _AttachmentSampler:
    """Weighted sampling of reference targets, frozen per year block.

    Weights are (1 + in_degree) ** exponent, recomputed from accumulated
    citation counts each time the candidate pool grows (at year-block
    boundaries).  Freezing within a block keeps generation O(n log n).
    """

    exponent: float
    cumulative: list[float] = field(default_factory=list)
    pool_size: int = 0

    def refresh(self, citation_counts: list[int], pool_size: int) -> None:
        total = 0.0
        cumulative = []
        for count in citation_counts[:pool_size]:
            total += (1.0 + count) ** self.exponent
            cumulative.append(total)
        self.cumulative = cumulative
        self.pool_size = pool_size

    def draw(self, rng: random.Random, exclude: set[int]) -> int | None:
        if not self.cumulative:
            return None
        total = self.cumulative[-1]
        for _ in range(32):  # rejection sampling; pools are never that saturated
            target = bisect_right(self.cumulative, rng.random() * total)
            target = min(target, self.pool_size - 1)
            if target not in exclude:
                return target
        for candidate in range(self.pool_size):  # fall back to a linear scan
            if candidate not in exclude:
                return candidate
        return None


def generate_synthetic(
    seed: int,
    num_authors: int,
    num_papers: int,
    num_venues: int,
    attachment_exponent: float = 1.0,
) -> list[PaperRecord]:
    """Generate a deterministic synthetic corpus of *num_papers* records.

    Papers are laid out in year blocks with increasing years; every paper
    cites only papers from strictly earlier years, which guarantees an
    acyclic citation graph that is upper-triangular under any newest-first
    ordering.  Reference targets are drawn preferentially, with probability
    proportional to (1 + citations) ** attachment_exponent, so early papers
    accumulate citations the way real corpora do.  Each paper has 1-5
    authors and exactly one venue.
    """
    if num_authors < 1 or num_papers < 1 or num_venues < 1:
        raise ValueError("num_authors, num_papers, and num_venues must all be >= 1")

    rng = random.Random(seed)
    width_a = len(str(num_authors))
    width_p = len(str(num_papers))
    width_v = len(str(num_venues))
    author_ids = [f"a{i:0{width_a}d}" for i in range(1, num_authors + 1)]
    paper_ids = [f"p{i:0{width_p}d}" for i in range(1, num_papers + 1)]
    venue_ids = [f"v{i:0{width_v}d}" for i in range(1, num_venues + 1)]

    num_years = max(1, min(20, num_papers // 10))
    per_year = -(-num_papers // num_years)  # ceil division
    base_year = 2000

    citation_counts = [0] * num_papers
    sampler = _AttachmentSampler(exponent=attachment_exponent)
    records: list[PaperRecord] = []

    for i in range(num_papers):
        block = i // per_year
        if i == block * per_year:
            sampler.refresh(citation_counts, pool_size=block * per_year)

        team_size = rng.randint(1, min(5, num_authors))
        authors = tuple(sorted(rng.sample(author_ids, team_size)))
        venue = rng.choice(venue_ids)

        available = block * per_year
        wanted = min(rng.randint(2, 10), available)
        chosen: set[int] = set()
        while len(chosen) < wanted:
            target = sampler.draw(rng, exclude=chosen)
            if target is None:
                break
            chosen.add(target)
        for target in chosen:
            citation_counts[target] += 1

        records.append(
            PaperRecord(
                paper_id=paper_ids[i],
                author_ids=authors,
                venue_ids=(venue,),
                year=base_year + block,
                reference_ids=tuple(paper_ids[j] for j in sorted(chosen)),
            )
        )
    return records
