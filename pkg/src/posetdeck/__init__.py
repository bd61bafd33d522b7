"""posetdeck: finite ordered sets, deck equality, folding and rigidity."""

from .core import (
    CycleDetected,
    DuplicateLabel,
    Poset,
    PosetError,
    RankProfile,
    UnknownLabel,
    antichain,
    chain,
    disjoint_union,
)
from .iso import (
    BudgetExceeded,
    Constraint,
    IsoMap,
    all_automorphisms,
    all_isomorphisms,
    count_isomorphisms,
    find_isomorphism,
    invariant_fingerprint,
    is_rigid,
    iter_isomorphisms,
    verify_isomorphism,
)
from .decks import (
    Card,
    CardMatcher,
    Deck,
    Marking,
    SizeMismatch,
    card,
    deck,
    decks_equal,
    ecr,
    ecr_with_matching,
    matching_size,
    neighborhood_deck,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
