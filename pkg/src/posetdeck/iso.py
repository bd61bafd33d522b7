"""Constrained isomorphism, automorphism and rigidity search.

The search is a backtracking over a colour refinement partition.  Colours
start from (rank, dual rank, up-degree, down-degree, marking, pin) and are
refined to a fixpoint with hashed neighbour multisets; refinement is exact
(wraparound uint64 sums are a function of the colour multiset), so pruning
never discards a genuine isomorphism and "None" answers are proofs of
absence.  Every map found is re-checked by an independent verification
pass before being returned.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .core import Poset, PosetError


class BudgetExceeded(PosetError):
    """Raised when a node budget is configured and exhausted."""


@dataclass(frozen=True)
class Constraint:
    """Pins and marking data an isomorphism must respect.

    ``pins`` maps source labels to target labels.  The markings, when both
    are given, are label -> int maps defined on (a subset of) the elements;
    the image of x must carry the same marking value as x.
    """

    pins: dict = field(default_factory=dict)
    source_marking: Optional[dict] = None
    target_marking: Optional[dict] = None


@dataclass(frozen=True)
class IsoMap:
    """A verified bijection source -> target, stored as a label map."""

    source: Poset
    target: Poset
    mapping: dict

    def __call__(self, label: str) -> str:
        return self.mapping[label]

    def as_array(self) -> np.ndarray:
        arr = np.empty(self.source.n, dtype=int)
        for s, t in self.mapping.items():
            arr[self.source.index(s)] = self.target.index(t)
        return arr

    def inverse(self) -> "IsoMap":
        return IsoMap(self.target, self.source, {t: s for s, t in self.mapping.items()})

    def compose(self, other: "IsoMap") -> "IsoMap":
        """self after other: other maps A->B, self maps B->C."""
        return IsoMap(other.source, self.target,
                      {s: self.mapping[t] for s, t in other.mapping.items()})

    def is_identity(self) -> bool:
        return all(s == t for s, t in self.mapping.items())


def verify_isomorphism(p: Poset, q: Poset, mapping: dict,
                       constraint: Optional[Constraint] = None) -> bool:
    """Full independent check: bijective, order-preserving both ways,
    pins honoured, markings carried over."""
    if p.n != q.n or set(mapping.keys()) != set(p.labels):
        return False
    if set(mapping.values()) != set(q.labels):
        return False
    perm = np.empty(p.n, dtype=int)
    for s, t in mapping.items():
        perm[p.index(s)] = q.index(t)
    if not np.array_equal(p.lt, q.lt[np.ix_(perm, perm)]):
        return False
    if constraint is not None:
        for s, t in constraint.pins.items():
            if mapping.get(s) != t:
                return False
        sm, tm = constraint.source_marking, constraint.target_marking
        if sm is not None and tm is not None:
            if len(sm) != len(tm):
                return False
            for lab, value in sm.items():
                img = mapping[lab]
                if img not in tm or tm[img] != value:
                    return False
    return True


# -- colour refinement ------------------------------------------------------

_SPLITMIX_INC = np.uint64(0x9E3779B97F4A7C15)


def _mix(vals: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer; deterministic weight per colour id."""
    z = (vals.astype(np.uint64) + _SPLITMIX_INC) * np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


class _Side:
    """Cached numeric views of one poset for the search."""

    def __init__(self, p: Poset):
        self.p = p
        self.lt_u = p.lt.astype(np.uint64)
        self.ltT_u = p.lt.T.astype(np.uint64)
        r = p.rank_array() if p.n else np.zeros(0, dtype=int)
        d = p.dual_rank_array() if p.n else np.zeros(0, dtype=int)
        self.base = np.stack(
            [r, d, p.lt.sum(axis=1), p.lt.sum(axis=0)], axis=1
        ) if p.n else np.zeros((0, 4), dtype=int)


def _initial_columns(side: _Side, marking: Optional[np.ndarray],
                     pin_col: np.ndarray) -> np.ndarray:
    cols = [side.base]
    if marking is not None:
        cols.append(marking.reshape(-1, 1))
    cols.append(pin_col.reshape(-1, 1))
    return np.concatenate(cols, axis=1)


def _refine_pair(a: _Side, b: _Side, cols_a: np.ndarray, cols_b: np.ndarray):
    """Refine both posets with a shared canonical colouring to a fixpoint.

    Returns (colors_a, colors_b, ncolors).  Colour ids are assigned by the
    lexicographic order of signature rows, so they are comparable across
    the two posets and invariant under relabelling.
    """
    na = cols_a.shape[0]
    both = np.concatenate([cols_a, cols_b], axis=0)
    _, colors = np.unique(both, axis=0, return_inverse=True)
    ncol = int(colors.max()) + 1 if colors.size else 0
    while True:
        w = _mix(np.arange(ncol, dtype=np.uint64))
        wa = w[colors[:na]]
        wb = w[colors[na:]]
        sig_a = np.stack([colors[:na].astype(np.uint64),
                          a.lt_u @ wa, a.ltT_u @ wa], axis=1)
        sig_b = np.stack([colors[na:].astype(np.uint64),
                          b.lt_u @ wb, b.ltT_u @ wb], axis=1)
        sig = np.concatenate([sig_a, sig_b], axis=0)
        _, new_colors = np.unique(sig, axis=0, return_inverse=True)
        new_ncol = int(new_colors.max()) + 1 if new_colors.size else 0
        if new_ncol == ncol:
            return colors[:na], colors[na:], ncol
        colors, ncol = new_colors, new_ncol


def _marking_array(p: Poset, marking: Optional[dict]) -> Optional[np.ndarray]:
    if marking is None:
        return None
    arr = np.full(p.n, -1, dtype=int)
    for lab, value in marking.items():
        arr[p.index(lab)] = int(value)
    return arr


class _Search:
    def __init__(self, p: Poset, q: Poset, constraint: Optional[Constraint],
                 budget: Optional[int]):
        self.p, self.q = p, q
        self.a, self.b = _Side(p), _Side(q)
        self.budget = budget
        self.nodes = 0
        constraint = constraint or Constraint()
        self.constraint = constraint
        self.mark_a = _marking_array(p, constraint.source_marking)
        self.mark_b = _marking_array(q, constraint.target_marking)
        self.base_pins = []
        for s, t in sorted(constraint.pins.items()):
            self.base_pins.append((p.index(s), q.index(t)))

    def _spend(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")

    def run(self, pins) -> Iterator[dict]:
        """Yield all isomorphisms extending ``pins`` (list of id pairs)."""
        self._spend()
        p, q = self.p, self.q
        pin_a = np.full(p.n, -1, dtype=int)
        pin_b = np.full(q.n, -1, dtype=int)
        for k, (i, j) in enumerate(pins):
            if pin_a[i] != -1 or pin_b[j] != -1:
                return  # conflicting pin
            pin_a[i] = k
            pin_b[j] = k
        cols_a = _initial_columns(self.a, self.mark_a, pin_a)
        cols_b = _initial_columns(self.b, self.mark_b, pin_b)
        ca, cb, ncol = _refine_pair(self.a, self.b, cols_a, cols_b)
        counts_a = np.bincount(ca, minlength=ncol)
        counts_b = np.bincount(cb, minlength=ncol)
        if not np.array_equal(counts_a, counts_b):
            return
        nontrivial = [c for c in range(ncol) if counts_a[c] > 1]
        if not nontrivial:
            mapping_arr = np.empty(p.n, dtype=int)
            pos_b = {}
            for j in range(q.n):
                pos_b[cb[j]] = j
            for i in range(p.n):
                mapping_arr[i] = pos_b[ca[i]]
            mapping = {p.labels[i]: q.labels[mapping_arr[i]] for i in range(p.n)}
            if verify_isomorphism(p, q, mapping, self.constraint):
                yield mapping
            return
        # smallest cell, then smallest minimum source id
        def cell_key(c):
            members = np.nonzero(ca == c)[0]
            return (counts_a[c], int(members.min()))

        cell = min(nontrivial, key=cell_key)
        src = int(np.nonzero(ca == cell)[0].min())
        for tgt in np.nonzero(cb == cell)[0]:
            yield from self.run(pins + [(src, int(tgt))])


def iter_isomorphisms(p: Poset, q: Poset, constraint: Optional[Constraint] = None,
                      budget: Optional[int] = None) -> Iterator[IsoMap]:
    if p.n != q.n:
        return
    if p.n == 0:
        yield IsoMap(p, q, {})
        return
    search = _Search(p, q, constraint, budget)
    seen = set()
    for mapping in search.run(list(search.base_pins)):
        key = tuple(sorted(mapping.items()))
        if key not in seen:
            seen.add(key)
            yield IsoMap(p, q, mapping)


def find_isomorphism(p: Poset, q: Poset, constraint: Optional[Constraint] = None,
                     budget: Optional[int] = None) -> Optional[IsoMap]:
    """First isomorphism satisfying the constraint, or None (proof of
    absence when no budget is set)."""
    for iso in iter_isomorphisms(p, q, constraint, budget):
        return iso
    return None


def count_isomorphisms(p: Poset, q: Poset, constraint: Optional[Constraint] = None,
                       limit: Optional[int] = None) -> int:
    n = 0
    for _ in iter_isomorphisms(p, q, constraint):
        n += 1
        if limit is not None and n >= limit:
            break
    return n


def all_isomorphisms(p: Poset, q: Poset,
                     constraint: Optional[Constraint] = None) -> list:
    return list(iter_isomorphisms(p, q, constraint))


def all_automorphisms(p: Poset) -> list:
    """The full automorphism group as a list, identity first."""
    maps = all_isomorphisms(p, p)
    maps.sort(key=lambda m: tuple(m.mapping[l] for l in p.labels))
    identity = [m for m in maps if m.is_identity()]
    rest = [m for m in maps if not m.is_identity()]
    return identity + rest


def is_rigid(p: Poset) -> bool:
    found = 0
    for _ in iter_isomorphisms(p, p):
        found += 1
        if found > 1:
            return False
    return found == 1 or p.n == 0


def invariant_fingerprint(p: Poset, marking: Optional[dict] = None) -> str:
    """Isomorphism-invariant digest of a poset (optionally marked).

    Equal for isomorphic inputs; inequality is a certificate of
    nonisomorphism, equality is only a hint.
    """
    side = _Side(p)
    pin = np.full(p.n, -1, dtype=int)
    cols = _initial_columns(side, _marking_array(p, marking), pin)
    ca, _, ncol = _refine_pair(side, side, cols, cols)
    hist = np.bincount(ca, minlength=ncol)
    payload = repr((p.n, int(p.lt.sum()), sorted(map(int, hist)), _chain_digest(side, ca)))
    return hashlib.blake2b(payload.encode(), digest_size=16).hexdigest()


def _chain_digest(side: _Side, colors: np.ndarray) -> int:
    """Mix final colours with one more neighbourhood round for a stronger,
    still canonical, summary."""
    if side.p.n == 0:
        return 0
    w = _mix(colors.astype(np.uint64))
    up = side.lt_u @ w
    down = side.ltT_u @ w
    total = _mix(up ^ (down >> np.uint64(1)) ^ w)
    return int(np.bitwise_xor.reduce(_mix(np.sort(total))))
