"""Exact representation and elementary operations on finite ordered sets.

A poset is stored through its strict order relation as a dense boolean
matrix.  All values are immutable after construction and every operation
returns a fresh object, so sharing across threads is safe.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class PosetError(Exception):
    pass


class CycleDetected(PosetError):
    pass


class UnknownLabel(PosetError):
    pass


class DuplicateLabel(PosetError):
    pass


@dataclass(frozen=True)
class RankProfile:
    """Per-element rank / dual rank data plus the overall height."""

    rank: dict
    dual_rank: dict
    height: int


def _transitive_closure(mat: np.ndarray) -> np.ndarray:
    out = mat.copy()
    n = out.shape[0]
    for k in range(n):
        col = out[:, k]
        if col.any():
            out[col] |= out[k]
    return out


class Poset:
    """Finite strict order on labelled elements.

    ``lt[x, y]`` is True iff x < y.  Labels are unique strings; ids are the
    dense range 0..n-1.  The constructor checks irreflexivity and
    transitivity (antisymmetry follows).
    """

    __slots__ = ("n", "lt", "labels", "_index", "_rank", "_dual_rank")

    def __init__(self, lt: np.ndarray, labels: Sequence[str], _validate: bool = True):
        lt = np.array(lt, dtype=bool)
        n = lt.shape[0]
        if lt.shape != (n, n):
            raise PosetError("relation matrix must be square")
        labels = list(labels)
        if len(labels) != n:
            raise PosetError("label count does not match matrix size")
        if len(set(labels)) != n:
            raise DuplicateLabel("labels must be pairwise distinct")
        if _validate and n:
            if lt.diagonal().any():
                raise PosetError("strict order must be irreflexive")
            if ((lt @ lt) & ~lt).any():
                raise PosetError("strict order must be transitive")
            if (lt & lt.T).any():
                raise PosetError("strict order must be antisymmetric")
        lt.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lt", lt)
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        object.__setattr__(self, "_rank", None)
        object.__setattr__(self, "_dual_rank", None)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Poset is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_covers(cls, labels: Sequence[str], covers: Iterable[tuple]) -> "Poset":
        """Build the transitive closure of a cover/edge list.

        Rejects cyclic input and unknown or duplicated labels.  The pairs
        need not be a transitive reduction; any generating relation works.
        """
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("labels must be pairwise distinct")
        idx = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        mat = np.zeros((n, n), dtype=bool)
        for lo, hi in covers:
            if lo not in idx or hi not in idx:
                raise UnknownLabel(f"cover pair ({lo!r}, {hi!r}) uses unknown label")
            mat[idx[lo], idx[hi]] = True
        closed = _transitive_closure(mat)
        if closed.diagonal().any():
            raise CycleDetected("cover relation contains a cycle")
        return cls(closed, labels, _validate=False)

    @classmethod
    def from_relation_pairs(cls, labels: Sequence[str], pairs: Iterable[tuple]) -> "Poset":
        return cls.from_covers(labels, pairs)

    # -- basic access ------------------------------------------------------

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def indices(self, labels: Iterable[str]) -> list:
        return [self.index(l) for l in labels]

    def leq(self, a: str, b: str) -> bool:
        if a == b:
            return a in self._index
        return bool(self.lt[self.index(a), self.index(b)])

    def less(self, a: str, b: str) -> bool:
        return bool(self.lt[self.index(a), self.index(b)])

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and self.labels == other.labels
            and np.array_equal(self.lt, other.lt)
        )

    def __hash__(self):
        return hash((self.labels, self.lt.tobytes()))

    def __repr__(self):
        return f"Poset(n={self.n})"

    # -- derived structure -------------------------------------------------

    def covers(self) -> list:
        """Pairs (x, y) with x < y and nothing strictly between."""
        strictly_between = self.lt @ self.lt
        cov = self.lt & ~strictly_between
        out = [
            (self.labels[i], self.labels[j])
            for i, j in zip(*np.nonzero(cov))
        ]
        out.sort()
        return out

    def cover_matrix(self) -> np.ndarray:
        return self.lt & ~(self.lt @ self.lt)

    def rank_array(self) -> np.ndarray:
        cached = self._rank
        if cached is None:
            cached = self._longest_path(self.lt)
            object.__setattr__(self, "_rank", cached)
        return cached

    def dual_rank_array(self) -> np.ndarray:
        cached = self._dual_rank
        if cached is None:
            cached = self._longest_path(self.lt.T)
            object.__setattr__(self, "_dual_rank", cached)
        return cached

    @staticmethod
    def _longest_path(lt: np.ndarray) -> np.ndarray:
        n = lt.shape[0]
        rank = np.zeros(n, dtype=int)
        cov = lt & ~(lt @ lt)
        order = np.argsort(lt.sum(axis=0), kind="stable")  # minimal first
        for v in order:
            below = np.nonzero(cov[:, v])[0]
            if below.size:
                rank[v] = rank[below].max() + 1
        rank.setflags(write=False)
        return rank

    def ranks(self) -> RankProfile:
        r = self.rank_array()
        d = self.dual_rank_array()
        height = int(r.max()) if self.n else 0
        return RankProfile(
            rank={lab: int(r[i]) for i, lab in enumerate(self.labels)},
            dual_rank={lab: int(d[i]) for i, lab in enumerate(self.labels)},
            height=height,
        )

    @property
    def height(self) -> int:
        return int(self.rank_array().max()) if self.n else 0

    def rank_of(self, label: str) -> int:
        return int(self.rank_array()[self.index(label)])

    def rank_level(self, k: int) -> list:
        r = self.rank_array()
        return [self.labels[i] for i in np.nonzero(r == k)[0]]

    def maximal_elements(self) -> list:
        return [self.labels[i] for i in range(self.n) if not self.lt[i].any()]

    def minimal_elements(self) -> list:
        return [self.labels[i] for i in range(self.n) if not self.lt[:, i].any()]

    # -- operations --------------------------------------------------------

    def dual(self) -> "Poset":
        return Poset(self.lt.T, self.labels, _validate=False)

    def restrict(self, keep: Iterable[str]) -> "Poset":
        ids = sorted(self.index(l) for l in keep)
        sub = self.lt[np.ix_(ids, ids)]
        return Poset(sub, [self.labels[i] for i in ids], _validate=False)

    def delete(self, *labels: str) -> "Poset":
        drop = set(labels)
        for l in drop:
            self.index(l)
        return self.restrict([l for l in self.labels if l not in drop])

    def up_set(self, x: str) -> "Poset":
        i = self.index(x)
        keep = [self.labels[j] for j in np.nonzero(self.lt[i])[0]]
        return self.restrict(keep + [x])

    def down_set(self, x: str) -> "Poset":
        i = self.index(x)
        keep = [self.labels[j] for j in np.nonzero(self.lt[:, i])[0]]
        return self.restrict(keep + [x])

    def neighborhood(self, x: str) -> "Poset":
        i = self.index(x)
        mask = self.lt[i] | self.lt[:, i]
        keep = [self.labels[j] for j in np.nonzero(mask)[0]]
        return self.restrict(keep + [x])

    def strict_up_labels(self, x: str) -> list:
        i = self.index(x)
        return [self.labels[j] for j in np.nonzero(self.lt[i])[0]]

    def strict_down_labels(self, x: str) -> list:
        i = self.index(x)
        return [self.labels[j] for j in np.nonzero(self.lt[:, i])[0]]

    def components(self) -> list:
        """Connected components of the comparability graph, as label sets."""
        adj = self.lt | self.lt.T
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            frontier = np.zeros(self.n, dtype=bool)
            frontier[start] = True
            comp = np.zeros(self.n, dtype=bool)
            while frontier.any():
                comp |= frontier
                frontier = adj[frontier].any(axis=0) & ~comp
            seen |= comp
            out.append({self.labels[i] for i in np.nonzero(comp)[0]})
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_antichain(self, members: Iterable[str]) -> bool:
        ids = [self.index(l) for l in members]
        sub = self.lt[np.ix_(ids, ids)]
        return not sub.any()

    def relabel(self, mapping: dict) -> "Poset":
        """Rename labels via ``mapping`` (missing labels kept as is)."""
        new = [mapping.get(l, l) for l in self.labels]
        return Poset(self.lt, new, _validate=False)

    def permuted(self, perm: Sequence[int]) -> "Poset":
        """Structurally permuted copy: element i moves to position perm[i]."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n)
        mat = self.lt[np.ix_(inv, inv)]
        return Poset(mat, [self.labels[i] for i in inv], _validate=False)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"labels": list(self.labels), "covers": [list(c) for c in self.covers()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Poset":
        return cls.from_covers(data["labels"], [tuple(c) for c in data["covers"]])

    @classmethod
    def from_json(cls, text: str) -> "Poset":
        return cls.from_json_dict(json.loads(text))


def disjoint_union(a: Poset, b: Poset) -> Poset:
    """Side-by-side union; labels must not clash."""
    if set(a.labels) & set(b.labels):
        raise DuplicateLabel("disjoint union requires disjoint label sets")
    n = a.n + b.n
    mat = np.zeros((n, n), dtype=bool)
    mat[: a.n, : a.n] = a.lt
    mat[a.n :, a.n :] = b.lt
    return Poset(mat, list(a.labels) + list(b.labels), _validate=False)


def chain(labels: Sequence[str]) -> Poset:
    return Poset.from_covers(labels, list(zip(labels, labels[1:])))


def antichain(labels: Sequence[str]) -> Poset:
    return Poset.from_covers(labels, [])
