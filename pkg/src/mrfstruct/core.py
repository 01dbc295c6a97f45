"""Shared domain types: sample datasets with typed columns, and undirected edge sets.

Datasets hold N samples of D variables, each column tagged as discrete
(dense non-negative integer codes with a declared cardinality) or continuous
(finite float64). Edge sets are simple undirected graphs over column indices,
stored canonically so that iteration order, equality, and serialization are
all deterministic.

Everything here is immutable after construction: operations return new
values, and the backing numpy arrays are marked read-only, so instances can
be shared freely across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class ColumnKind(enum.Enum):
    DISCRETE = "d"
    CONTINUOUS = "c"


class SelfLoopError(ValueError):
    """Raised when an edge would connect a node to itself."""


@dataclass(frozen=True)
class Column:
    """One variable: a kind tag plus N observed values.

    Discrete columns hold integer codes in ``[0, cardinality)``; continuous
    columns hold finite floats. Missing values are rejected outright.
    """

    kind: ColumnKind
    values: np.ndarray
    cardinality: int | None = None

    def __post_init__(self) -> None:
        if self.kind is ColumnKind.DISCRETE:
            if self.cardinality is None or self.cardinality < 1:
                raise ValueError("discrete column needs a cardinality >= 1")
            vals = np.asarray(self.values)
            if not np.issubdtype(vals.dtype, np.integer):
                if not np.all(vals == np.floor(vals)):
                    raise ValueError("discrete column holds non-integer values")
                vals = vals.astype(np.int64)
            else:
                vals = vals.astype(np.int64)
            if vals.size and (vals.min() < 0 or vals.max() >= self.cardinality):
                raise ValueError(
                    f"discrete codes must lie in [0, {self.cardinality})"
                )
        else:
            if self.cardinality is not None:
                raise ValueError("continuous column must not declare a cardinality")
            vals = np.asarray(self.values, dtype=np.float64)
            if not np.all(np.isfinite(vals)):
                raise ValueError("continuous column holds NaN or infinite values")
        if vals.ndim != 1:
            raise ValueError("column values must be one-dimensional")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Dataset:
    """N samples of D typed variables, indexed 0..D-1."""

    columns: tuple[Column, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.columns:
            raise ValueError("dataset needs at least one column")
        self.columns[0].values.shape  # noqa: B018 - touch to fail fast on bad column
        n = len(self.columns[0].values)
        if n < 1:
            raise ValueError("dataset needs at least one sample")
        for c in self.columns:
            if len(c.values) != n:
                raise ValueError("all columns must have the same length")
        if self.names is not None and len(self.names) != len(self.columns):
            raise ValueError("names must match the number of columns")
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def n_samples(self) -> int:
        return len(self.columns[0].values)

    @property
    def n_vars(self) -> int:
        return len(self.columns)

    def column(self, i: int) -> Column:
        return self.columns[i]

    def kind(self, i: int) -> ColumnKind:
        return self.columns[i].kind

    def var_names(self) -> tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"x{i}" for i in range(self.n_vars))

    def group(self, ids: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Pack columns ``ids`` into a float64 matrix plus a discrete mask.

        Discrete codes become floats; the mask tells metric code to use the
        0/1 discrete metric on those coordinates.
        """
        ids = list(ids)
        out = np.empty((self.n_samples, len(ids)), dtype=np.float64)
        disc = np.zeros(len(ids), dtype=np.bool_)
        for pos, i in enumerate(ids):
            col = self.columns[i]
            out[:, pos] = col.values
            disc[pos] = col.kind is ColumnKind.DISCRETE
        return out, disc


def discrete_dataset(codes: np.ndarray, cardinalities: Sequence[int]) -> Dataset:
    """Build an all-discrete dataset from an (N, D) integer code matrix."""
    codes = np.asarray(codes)
    cols = tuple(
        Column(ColumnKind.DISCRETE, codes[:, j], int(cardinalities[j]))
        for j in range(codes.shape[1])
    )
    return Dataset(cols)


def continuous_dataset(values: np.ndarray) -> Dataset:
    """Build an all-continuous dataset from an (N, D) float matrix."""
    values = np.asarray(values, dtype=np.float64)
    cols = tuple(
        Column(ColumnKind.CONTINUOUS, values[:, j]) for j in range(values.shape[1])
    )
    return Dataset(cols)


def _canonical(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class EdgeSet:
    """Undirected simple graph over variable indices 0..d-1.

    Edges are stored as (i, j) pairs with i < j, so membership queries are
    symmetric by construction and iteration via :meth:`sorted_edges` is
    deterministic regardless of insertion order.
    """

    d: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("edge set needs d >= 1")
        canon = set()
        for i, j in self.edges:
            self._check_index(i)
            self._check_index(j)
            if i == j:
                raise SelfLoopError(f"self-loop on node {i}")
            canon.add(_canonical(i, j))
        object.__setattr__(self, "edges", frozenset(canon))

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.d:
            raise IndexError(f"node {i} out of range [0, {self.d})")

    @classmethod
    def empty(cls, d: int) -> EdgeSet:
        return cls(d)

    @classmethod
    def complete(cls, d: int) -> EdgeSet:
        return cls(d, frozenset((i, j) for i in range(d) for j in range(i + 1, d)))

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[tuple[int, int]]) -> EdgeSet:
        return cls(d, frozenset(_canonical(i, j) for i, j in pairs))

    def add_edge(self, i: int, j: int) -> EdgeSet:
        """Return a copy with edge {i, j}; idempotent if already present."""
        self._check_index(i)
        self._check_index(j)
        if i == j:
            raise SelfLoopError(f"self-loop on node {i}")
        return EdgeSet(self.d, self.edges | {_canonical(i, j)})

    def remove_edge(self, i: int, j: int) -> EdgeSet:
        """Return a copy without edge {i, j}; idempotent if absent."""
        self._check_index(i)
        self._check_index(j)
        return EdgeSet(self.d, self.edges - {_canonical(i, j)})

    def has_edge(self, i: int, j: int) -> bool:
        self._check_index(i)
        self._check_index(j)
        return _canonical(i, j) in self.edges

    @cached_property
    def _adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.d)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, i: int) -> frozenset[int]:
        """Open neighborhood: nodes adjacent to i, excluding i itself."""
        self._check_index(i)
        return self._adjacency[i]

    def closed_neighbors(self, i: int) -> frozenset[int]:
        """Closed neighborhood: the open neighborhood plus i."""
        self._check_index(i)
        return self._adjacency[i] | {i}

    def non_neighbors(self, i: int) -> frozenset[int]:
        """Nodes outside the closed neighborhood of i."""
        self._check_index(i)
        return frozenset(range(self.d)) - self.closed_neighbors(i)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return self.has_edge(i, j)

    def __iter__(self):
        return iter(self.sorted_edges())


@dataclass(frozen=True)
class GroundTruth:
    """The generating graph of a synthetic dataset, used as recovery target."""

    edge_set: EdgeSet
    label: str
