"""Cards, marked cards, decks, neighborhood decks and deck equality.

Deck equality is decided as a perfect matching in the bipartite graph of
pairwise (marked-)isomorphic cards; the equal card ratio is the size of a
maximum matching between two full decks divided by the ground set size.
Pairwise isomorphism tests are pre-filtered by the invariant fingerprint
and cached, since the n^2 card comparisons dominate runtime.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .core import Poset, PosetError
from .iso import Constraint, find_isomorphism, invariant_fingerprint

MARK_RANK = "rank-in-original"
MARK_MAX = "maximal-flag"
MARK_MIN = "minimal-flag"

DECK_KINDS = ("maximal", "minimal", "rank", "neighborhood", "full")


class SizeMismatch(PosetError):
    pass


@dataclass(frozen=True)
class Marking:
    """Label -> int values recorded from the original poset.

    ``kind`` says what the values mean: the element's original rank, or a
    0/1 flag for original maximality/minimality.  Values are defined
    exactly on the card's surviving elements.
    """

    kind: str
    values: dict


@dataclass(frozen=True)
class Card:
    """One-point-deleted induced subposet with provenance.

    For neighborhood decks the same container is reused: ``poset`` is then
    the neighborhood of the focus element (which stays inside the card)
    rather than a deletion.
    """

    poset: Poset
    removed_label: str
    removed_rank: int
    marking: Optional[Marking] = None

    @cached_property
    def fingerprint(self) -> str:
        values = self.marking.values if self.marking is not None else None
        return invariant_fingerprint(self.poset, values)


@dataclass(frozen=True)
class Deck:
    cards: tuple
    kind: str

    def __len__(self):
        return len(self.cards)


def _marking_for(p: Poset, survivors, kind: str) -> Marking:
    if kind == MARK_RANK:
        ranks = p.rank_array()
        values = {lab: int(ranks[p.index(lab)]) for lab in survivors}
    elif kind == MARK_MAX:
        maxima = set(p.maximal_elements())
        values = {lab: int(lab in maxima) for lab in survivors}
    elif kind == MARK_MIN:
        minima = set(p.minimal_elements())
        values = {lab: int(lab in minima) for lab in survivors}
    else:
        raise PosetError(f"unknown marking kind {kind!r}")
    return Marking(kind, values)


def card(p: Poset, x: str, mark: Optional[str] = None) -> Card:
    """The card of p at x; ``mark`` optionally records original data."""
    sub = p.delete(x)
    marking = _marking_for(p, sub.labels, mark) if mark else None
    return Card(sub, x, p.rank_of(x), marking)


def deck(p: Poset, kind: str, k: Optional[int] = None, marked: bool = False) -> Deck:
    """All cards of one kind: 'maximal', 'minimal', 'rank' (needs k) or
    'full'.  Marked decks carry the extremal flag for extremal kinds and
    the full original-rank marking for rank decks."""
    if kind == "maximal":
        removed = p.maximal_elements()
        mark = MARK_MAX if marked else None
    elif kind == "minimal":
        removed = p.minimal_elements()
        mark = MARK_MIN if marked else None
    elif kind == "rank":
        if k is None or not (0 <= k <= p.height):
            raise PosetError("rank deck needs 0 <= k <= height")
        removed = p.rank_level(k)
        mark = MARK_RANK if marked else None
    elif kind == "full":
        removed = list(p.labels)
        mark = MARK_RANK if marked else None
    else:
        raise PosetError(f"unknown deck kind {kind!r}")
    cards = tuple(card(p, x, mark) for x in sorted(removed))
    name = f"rank-{k}" if kind == "rank" else kind
    return Deck(cards, name)


def neighborhood_deck(p: Poset, k: int) -> Deck:
    """Multiset of neighborhoods of the rank-k elements."""
    if not (0 <= k <= p.height):
        raise PosetError("neighborhood deck needs 0 <= k <= height")
    cards = tuple(
        Card(p.neighborhood(x), x, k, None) for x in sorted(p.rank_level(k))
    )
    return Deck(cards, f"neighborhood-{k}")


class CardMatcher:
    """Cached pairwise card-isomorphism tests with fingerprint pre-filter."""

    def __init__(self):
        self._cache = {}

    def isomorphic(self, c1: Card, c2: Card) -> bool:
        if c1.poset.n != c2.poset.n:
            return False
        if c1.fingerprint != c2.fingerprint:
            return False
        key = (id(c1), id(c2))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        constraint = None
        if c1.marking is not None and c2.marking is not None:
            constraint = Constraint(source_marking=c1.marking.values,
                                    target_marking=c2.marking.values)
        ok = find_isomorphism(c1.poset, c2.poset, constraint) is not None
        self._cache[key] = ok
        self._cache[(id(c2), id(c1))] = ok
        return ok


def _max_matching(adj: list, n_right: int):
    """Maximum bipartite matching by augmenting paths.

    ``adj[i]`` lists right-neighbours of left vertex i.  Returns
    (size, match_left) with match_left[i] = j or -1.
    """
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right
    size = 0

    def augment(i, seen):
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_right[j] == -1 or augment(match_right[j], seen):
                match_left[i] = j
                match_right[j] = i
                return True
        return False

    for i in range(len(adj)):
        if augment(i, [False] * n_right):
            size += 1
    return size, match_left


def _match_decks(d1: Deck, d2: Deck, matcher: Optional[CardMatcher] = None):
    matcher = matcher or CardMatcher()
    cards1, cards2 = list(d1.cards), list(d2.cards)
    adj = []
    for c1 in cards1:
        adj.append([j for j, c2 in enumerate(cards2) if matcher.isomorphic(c1, c2)])
    size, match_left = _max_matching(adj, len(cards2))
    pairs = [
        (cards1[i].removed_label, cards2[j].removed_label)
        for i, j in enumerate(match_left)
        if j != -1
    ]
    return size, pairs


def decks_equal(d1: Deck, d2: Deck, matcher: Optional[CardMatcher] = None):
    """A perfect matching of pairwise (marked-)isomorphic cards, or None.

    The result pairs removed labels of d1 with removed labels of d2.
    """
    if d1.kind != d2.kind:
        raise PosetError(f"cannot compare decks of kinds {d1.kind!r} and {d2.kind!r}")
    if len(d1) != len(d2):
        return None
    size, pairs = _match_decks(d1, d2, matcher)
    if size != len(d1):
        return None
    return pairs


def matching_size(d1: Deck, d2: Deck, matcher: Optional[CardMatcher] = None) -> int:
    size, _ = _match_decks(d1, d2, matcher)
    return size


def ecr(p: Poset, q: Poset, matcher: Optional[CardMatcher] = None) -> Fraction:
    """Equal card ratio: maximum number of pairwise-isomorphic card pairs
    between the two full (unmarked) decks, divided by the size."""
    frac, _ = ecr_with_matching(p, q, matcher)
    return frac


def ecr_with_matching(p: Poset, q: Poset, matcher: Optional[CardMatcher] = None):
    if p.n != q.n:
        raise SizeMismatch(f"|p| = {p.n} but |q| = {q.n}")
    if p.n == 0:
        return Fraction(1), []
    d1 = deck(p, "full")
    d2 = deck(q, "full")
    size, pairs = _match_decks(d1, d2, matcher)
    return Fraction(size, p.n), pairs
