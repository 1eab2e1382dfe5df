"""Ternary event matrices: loading, validation and summary statistics.

An event matrix records, for each observation (row), which binary events
were seen (1), not seen (0), or not covered at all (missing).  Columns are
labeled events; the column order of the source file is preserved and used
for deterministic tie-breaking throughout the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

MISSING = -1

__all__ = [
    "MISSING",
    "TokenSchema",
    "EventMatrix",
    "ContingencyTable",
    "MissingnessProfile",
    "UnknownTokenError",
    "load_reads",
    "save_reads",
    "contingency",
    "cooccurrence_counts",
    "missingness_profile",
    "exclude_events",
]


class UnknownTokenError(ValueError):
    """A cell token is outside the configured schema (reports row/column)."""


@dataclass(frozen=True)
class TokenSchema:
    """Mapping from file tokens to cell states.

    The three token sets must be disjoint.  The defaults mirror the raw
    table vocabulary: sequencing errors count as "event not observed" and
    are collapsed to 0 at load time, before any statistic is computed.
    """

    ones: frozenset[str] = frozenset({"True"})
    zeros: frozenset[str] = frozenset({"False", "Err"})
    missing: frozenset[str] = frozenset({"NaN", ""})

    def __post_init__(self) -> None:
        sets = [frozenset(self.ones), frozenset(self.zeros), frozenset(self.missing)]
        if sum(len(s) for s in sets) != len(sets[0] | sets[1] | sets[2]):
            raise ValueError("token sets must be disjoint")
        object.__setattr__(self, "ones", sets[0])
        object.__setattr__(self, "zeros", sets[1])
        object.__setattr__(self, "missing", sets[2])

    def decode(self, token: str) -> int:
        if token in self.ones:
            return 1
        if token in self.zeros:
            return 0
        if token in self.missing:
            return MISSING
        raise UnknownTokenError(token)


#: canonical tokens used on re-serialization (Err is an input-only alias of 0)
_CANONICAL = {1: "True", 0: "False", MISSING: "NaN"}


@dataclass(frozen=True)
class EventMatrix:
    """Immutable n_rows x n_cols matrix with cells in {0, 1, missing}.

    ``values`` is an int8 array using -1 for missing cells.
    """

    columns: tuple[str, ...]
    values: np.ndarray
    provenance: str = ""
    delimiter: str = ","

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.int8)
        if values.ndim != 2:
            raise ValueError("values must be 2-dimensional")
        n_rows, n_cols = values.shape
        if n_rows < 1 or n_cols < 1:
            raise ValueError("empty matrix: need at least one row and one column")
        if len(self.columns) != n_cols:
            raise ValueError("column count does not match values width")
        if any(not c for c in self.columns):
            raise ValueError("column labels must be non-empty")
        if len(set(self.columns)) != n_cols:
            raise ValueError("duplicate column label")
        if not np.isin(values, (0, 1, MISSING)).all():
            raise ValueError("cells must be 0, 1 or missing")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "values", values)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def is_complete(self) -> bool:
        return bool((self.values != MISSING).all())

    def column_index(self, label: str) -> int:
        try:
            return self.columns.index(label)
        except ValueError:
            raise KeyError(f"unknown column label: {label!r}") from None

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.column_index(label)]

    def replace_values(self, values: np.ndarray, provenance: str | None = None) -> "EventMatrix":
        return EventMatrix(
            self.columns,
            values,
            self.provenance if provenance is None else provenance,
            self.delimiter,
        )


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 joint counts over rows where both variables are observed."""

    a: str
    b: str
    n00: int
    n01: int
    n10: int
    n11: int

    def __post_init__(self) -> None:
        if min(self.n00, self.n01, self.n10, self.n11) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    def as_array(self) -> np.ndarray:
        return np.array([[self.n00, self.n01], [self.n10, self.n11]], dtype=np.int64)

    def swapped(self) -> "ContingencyTable":
        """Table for the pair (b, a); n01 and n10 trade places."""
        return ContingencyTable(self.b, self.a, self.n00, self.n10, self.n01, self.n11)


@dataclass(frozen=True)
class MissingnessProfile:
    """Per-column and per-row missing-data summary."""

    columns: tuple[str, ...]
    missing_fraction: tuple[float, ...]
    row_run_counts: tuple[int, ...]
    row_single_block: tuple[bool, ...]
    fully_observed_rows: int

    @property
    def rows_single_block_fraction(self) -> float:
        return sum(self.row_single_block) / len(self.row_single_block)

    def to_json(self) -> str:
        doc = {
            "columns": [
                {"label": label, "missing_fraction": frac}
                for label, frac in zip(self.columns, self.missing_fraction)
            ],
            "rows_fully_observed": self.fully_observed_rows,
            "rows_single_block_fraction": self.rows_single_block_fraction,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _detect_delimiter(header: str) -> str:
    return "\t" if "\t" in header else ","


def load_reads(path: str | Path, schema: TokenSchema | None = None) -> EventMatrix:
    """Parse a delimited text table of event observations.

    The first line holds the column labels; the delimiter (comma or tab) is
    auto-detected from it.  Cell tokens are decoded through ``schema``;
    anything outside the schema raises :class:`UnknownTokenError` with the
    offending row and column.
    """
    schema = schema or TokenSchema()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"unreadable file: {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    delimiter = _detect_delimiter(lines[0])
    columns = [c.strip() for c in lines[0].split(delimiter)]
    data_lines = [ln for ln in lines[1:] if ln.strip() != ""]
    if not data_lines:
        raise ValueError(f"{path}: no rows")
    values = np.empty((len(data_lines), len(columns)), dtype=np.int8)
    for i, line in enumerate(data_lines):
        cells = line.split(delimiter)
        if len(cells) != len(columns):
            raise ValueError(f"{path}: row {i + 1} has {len(cells)} cells, expected {len(columns)}")
        for j, cell in enumerate(cells):
            try:
                values[i, j] = schema.decode(cell.strip())
            except UnknownTokenError:
                raise UnknownTokenError(
                    f"{path}: unknown token {cell.strip()!r} at row {i + 1}, column {columns[j]!r}"
                ) from None
    return EventMatrix(tuple(columns), values, provenance=str(path), delimiter=delimiter)


def save_reads(m: EventMatrix, path: str | Path) -> None:
    """Write ``m`` using canonical tokens; inverse of :func:`load_reads`.

    A file containing only canonical tokens round-trips bit-exactly.
    """
    lines = [m.delimiter.join(m.columns)]
    for row in m.values:
        lines.append(m.delimiter.join(_CANONICAL[int(v)] for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def contingency(m: EventMatrix, a: str, b: str) -> ContingencyTable:
    """Joint 2x2 counts of (a, b) over rows where both are observed.

    Rows with a missing cell in either column are omitted.  A pair with no
    jointly observed rows yields an empty table (total 0) rather than an
    error so that batch pairwise scans can skip it.
    """
    if a == b:
        raise ValueError("contingency requires two distinct columns")
    col_a = m.column(a)
    col_b = m.column(b)
    both = (col_a != MISSING) & (col_b != MISSING)
    va = col_a[both].astype(np.int64)
    vb = col_b[both].astype(np.int64)
    counts = np.bincount(2 * va + vb, minlength=4)
    return ContingencyTable(a, b, int(counts[0]), int(counts[1]), int(counts[2]), int(counts[3]))


def cooccurrence_counts(m: EventMatrix, target: str) -> dict[frozenset[str], int]:
    """Count fully observed rows with target=1, keyed by which other events are 1.

    The empty frozenset keys rows where the target occurred alone.
    """
    t_idx = m.column_index(target)
    complete = (m.values != MISSING).all(axis=1)
    rows = m.values[complete & (m.values[:, t_idx] == 1)]
    others = [(j, label) for j, label in enumerate(m.columns) if j != t_idx]
    out: dict[frozenset[str], int] = {}
    for row in rows:
        key = frozenset(label for j, label in others if row[j] == 1)
        out[key] = out.get(key, 0) + 1
    return out


def _run_count(row: np.ndarray) -> int:
    miss = row == MISSING
    if not miss.any():
        return 0
    changes = np.diff(miss.astype(np.int8))
    return int((changes == 1).sum() + (1 if miss[0] else 0))


def missingness_profile(m: EventMatrix) -> MissingnessProfile:
    miss = m.values == MISSING
    fractions = tuple(float(f) for f in miss.mean(axis=0))
    runs = tuple(_run_count(row) for row in m.values)
    return MissingnessProfile(
        columns=m.columns,
        missing_fraction=fractions,
        row_run_counts=runs,
        row_single_block=tuple(r <= 1 for r in runs),
        fully_observed_rows=int((~miss.any(axis=1)).sum()),
    )


def exclude_events(m: EventMatrix, names: Iterable[str]) -> EventMatrix:
    """Drop the named columns (for instance an event known to distort the others)."""
    names = set(names)
    unknown = names - set(m.columns)
    if unknown:
        raise KeyError(f"unknown column label(s): {sorted(unknown)}")
    keep = [j for j, c in enumerate(m.columns) if c not in names]
    if not keep:
        raise ValueError("cannot drop all columns: empty matrix")
    if len(keep) == m.n_cols:
        return m
    return EventMatrix(
        tuple(m.columns[j] for j in keep),
        m.values[:, keep],
        provenance=m.provenance,
        delimiter=m.delimiter,
    )
