"""Builders for the symmetric middle gadget, the rigid bottom gadget, the
stack operator and the twisted tower pairs.

The 42-element middle gadget is encoded once as data (which maximal
elements of the middle block attach to which of the four corner elements,
and which attach to the two centre elements); the encoding is validated
exclusively through its stated symmetry properties, which the builders
re-verify by automorphism search before returning anything.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .core import Poset, PosetError, disjoint_union
from .iso import (
    Constraint,
    IsoMap,
    all_isomorphisms,
    find_isomorphism,
    is_rigid,
    iter_isomorphisms,
    verify_isomorphism,
)


class GadgetInvalid(PosetError):
    """A gadget encoding failed one of its defining property checks."""


class NotFound(PosetError):
    """Bounded search exhausted its budget without a valid gadget."""


class BadIdentification(PosetError):
    pass


# ---------------------------------------------------------------------------
# The symmetric middle gadget ("R"): 42 elements.
#
# Structure: top pair d, p; bottom pair db, pb; centre elements ct (a
# maximal element of the middle block) and cb (a minimal one); four fans of
# three 3-element wedges each.  Wedges on the A/D fans point up (two minima
# under one top), wedges on the B/C fans point down (one bottom under two
# tops).  The bottoms of the B fan lie below all tops of the A fan and the
# bottoms of the C fan below all tops of the D fan.
#
# Patterns: for A/D minima the triple is (above db?, above pb?, below ct?),
# for B/C maxima it is (below d?, below p?, above cb?).
# ---------------------------------------------------------------------------

_LOW_FANS = {  # wedge minima patterns, two per wedge
    "A1": [(1, 1, 0), (1, 0, 1)],
    "A2": [(0, 1, 0), (1, 1, 1)],
    "A12": [(1, 0, 0), (0, 1, 1)],
    "D12": [(1, 0, 1), (0, 1, 0)],
    "D1": [(0, 1, 1), (1, 1, 0)],
    "D2": [(1, 1, 1), (1, 0, 0)],
}

_HIGH_FANS = {  # wedge maxima patterns, two per wedge
    "B1": [(1, 1, 0), (1, 0, 1)],
    "B2": [(0, 1, 0), (1, 1, 1)],
    "B12": [(1, 0, 0), (0, 1, 1)],
    "C12": [(1, 0, 1), (0, 1, 0)],
    "C1": [(0, 1, 1), (1, 1, 0)],
    "C2": [(1, 1, 1), (1, 0, 0)],
}

R_GROUPS = ("A1", "A2", "A12", "B1", "B2", "B12", "C1", "C2", "C12", "D1", "D2", "D12")


@dataclass(frozen=True)
class GadgetR:
    """The middle gadget with its named parts and search witnesses."""

    poset: Poset
    named: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def height(self) -> int:
        return self.poset.height


@dataclass(frozen=True)
class GadgetQ:
    """The rigid bottom gadget: two minimal a, b; two maximal d, p."""

    poset: Poset
    named: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def height(self) -> int:
        return self.poset.height


def _r_covers():
    labels = ["d", "p", "db", "pb", "ct", "cb"]
    covers = [("db", "cb"), ("pb", "cb"), ("ct", "d"), ("ct", "p")]
    named = {k: labels[i] for i, k in enumerate(["d", "p", "dbar", "pbar", "ct", "cb"])}
    for g, pats in _LOW_FANS.items():
        top = f"{g}.t"
        m0, m1 = f"{g}.m0", f"{g}.m1"
        labels += [m0, m1, top]
        named[g] = {m0, m1, top}
        covers += [(m0, top), (m1, top), (top, "d"), (top, "p")]
        for lab, (above_db, above_pb, below_ct) in zip((m0, m1), pats):
            if above_db:
                covers.append(("db", lab))
            if above_pb:
                covers.append(("pb", lab))
            if below_ct:
                covers.append((lab, "ct"))
    for g, pats in _HIGH_FANS.items():
        bot = f"{g}.b"
        t0, t1 = f"{g}.t0", f"{g}.t1"
        labels += [bot, t0, t1]
        named[g] = {bot, t0, t1}
        covers += [(bot, t0), (bot, t1), ("db", bot), ("pb", bot)]
        for lab, (below_d, below_p, above_cb) in zip((t0, t1), pats):
            if below_d:
                covers.append((lab, "d"))
            if below_p:
                covers.append((lab, "p"))
            if above_cb:
                covers.append(("cb", lab))
    # cross links: B bottoms under all A tops, C bottoms under all D tops
    for bfan, afan in (("B", "A"), ("C", "D")):
        for i in ("1", "2", "12"):
            for j in ("1", "2", "12"):
                covers.append((f"{bfan}{i}.b", f"{afan}{j}.t"))
    return labels, covers, named


def _middle_labels(named: dict) -> set:
    mids = {named["ct"], named["cb"]}
    for g in R_GROUPS:
        mids |= named[g]
    return mids


def _group_of(named: dict, label: str) -> Optional[str]:
    for g in R_GROUPS:
        if label in named[g]:
            return g
    return None


def _check(ok: bool, what: str, errors: list):
    if not ok:
        errors.append(what)


def verify_r(gadget: GadgetR, collect: bool = False):
    """Check the defining properties of the middle gadget.

    Returns the witness dict on success.  With ``collect`` the function
    returns (errors, witnesses) instead of raising.
    """
    p = gadget.poset
    nm = gadget.named
    errors: list = []
    wit: dict = {}
    d, pp, db, pb, ct, cb = (nm[k] for k in ("d", "p", "dbar", "pbar", "ct", "cb"))

    _check(p.n == 42, "size is 42", errors)
    _check(set(p.maximal_elements()) == {d, pp}, "exactly two maximal elements", errors)
    _check(set(p.minimal_elements()) == {db, pb}, "exactly two minimal elements", errors)
    _check(p.rank_of(d) == p.rank_of(pp), "top pair has equal rank", errors)
    middle = _middle_labels(nm)
    _check(p.restrict(middle).height == 1, "middle block has height 1", errors)

    swap_top = {d: pp, pp: d}
    # card automorphism deleting pb, fixing db, swapping the top pair
    c = p.delete(pb)
    m = find_isomorphism(c, c, Constraint(pins={**swap_top, db: db}))
    _check(m is not None, "swap automorphism of card at pbar", errors)
    wit["psi_pbar"] = m
    c = p.delete(db)
    m = find_isomorphism(c, c, Constraint(pins={**swap_top, pb: pb}))
    _check(m is not None, "swap automorphism of card at dbar", errors)
    wit["psi_dbar"] = m
    m = find_isomorphism(p, p, Constraint(pins={**swap_top, db: pb, pb: db}))
    _check(m is not None, "global swap automorphism", errors)
    wit["phi"] = m

    # no automorphism fixes both minimal elements yet moves the top pair
    auts = all_isomorphisms(p, p)
    bad = [
        g for g in auts
        if g.mapping[db] == db and g.mapping[pb] == pb and g.mapping[d] != d
    ]
    _check(not bad, "no bottom-fixing top-moving automorphism", errors)
    wit["automorphisms"] = auts

    # structural facts used downstream
    a_side = set().union(*(nm[g] for g in ("A1", "A2", "A12"))) | {ct, db, pb}
    b_side = set().union(*(nm[g] for g in ("B1", "B2", "B12"))) | {cb, d, pp}
    c_side = set().union(*(nm[g] for g in ("C1", "C2", "C12"))) | {cb, d, pp}
    d_side = set().union(*(nm[g] for g in ("D1", "D2", "D12"))) | {ct, db, pb}
    _check(
        find_isomorphism(p.restrict(a_side), p.restrict(b_side).dual()) is not None,
        "A side dually isomorphic to B side", errors,
    )
    _check(
        find_isomorphism(p.restrict(d_side), p.restrict(c_side).dual()) is not None,
        "D side dually isomorphic to C side", errors,
    )
    _check(is_rigid(p.restrict(b_side)), "B side with top pair is rigid", errors)

    def unique_iso(src: set, dst: set, expect_ends: dict, expect_groups: dict, what: str):
        isos = all_isomorphisms(p.restrict(src), p.restrict(dst))
        _check(len(isos) == 1, f"{what}: exactly one isomorphism", errors)
        if len(isos) == 1:
            g = isos[0].mapping
            for s, t in expect_ends.items():
                _check(g[s] == t, f"{what}: maps {s} to {t}", errors)
            for grp, tgt in expect_groups.items():
                img = {g[l] for l in nm[grp]}
                _check(img == nm[tgt], f"{what}: maps {grp} onto {tgt}", errors)

    unique_iso(
        b_side, c_side, {d: pp, pp: d, cb: cb},
        {"B1": "C1", "B2": "C2", "B12": "C12"}, "B to C with both tops",
    )
    unique_iso(
        b_side - {pp}, c_side - {pp}, {d: d, cb: cb},
        {"B12": "C1", "B2": "C12", "B1": "C2"}, "B to C keeping d",
    )
    unique_iso(
        b_side - {d}, c_side - {d}, {pp: pp, cb: cb},
        {"B12": "C2", "B2": "C1", "B1": "C12"}, "B to C keeping p",
    )

    # cards at the centre elements admit the bottom-fixing top swap
    for centre in (ct, cb):
        c = p.delete(centre)
        m = find_isomorphism(c, c, Constraint(pins={**swap_top, db: db, pb: pb}))
        _check(m is not None, f"swap automorphism of card at {centre}", errors)
        wit[f"takeout_{centre}"] = m

    # strict upper bounds of cb: two 5-element zigzags sharing their tops
    up_cb = p.strict_up_labels(cb)
    expected = Poset.from_covers(
        ["m1", "m2", "m3", "w1", "w2", "w3", "D", "P"],
        [("m1", "D"), ("m2", "D"), ("m2", "P"), ("m3", "P"),
         ("w1", "D"), ("w2", "D"), ("w2", "P"), ("w3", "P")],
    )
    _check(
        find_isomorphism(p.restrict(up_cb), expected) is not None,
        "centre-bottom upper bounds form the glued double zigzag", errors,
    )

    if collect:
        return errors, wit
    if errors:
        raise GadgetInvalid("; ".join(errors))
    return wit


def build_r() -> GadgetR:
    """The 42-element middle gadget, verified against all its properties."""
    labels, covers, named = _r_covers()
    poset = Poset.from_covers(labels, covers)
    gadget = GadgetR(poset, named)
    wit = verify_r(gadget)
    return GadgetR(poset, named, wit)


# ---------------------------------------------------------------------------
# Adjacent-rank variant: same four fans, but all wedges point down, the
# bottom pair sits above the B/C fan tops, and the top pair forms a crown
# over the bottom pair while covering the A/D fan tops.
# ---------------------------------------------------------------------------

_ADJ_LOW = _HIGH_FANS  # B/C fan maxima: (below db?, below pb?, above cb?)
_ADJ_HIGH = {  # A/D fan maxima: (below d?, below p?, above ct?)
    "A1": [(1, 1, 0), (1, 0, 1)],
    "A2": [(0, 1, 0), (1, 1, 1)],
    "A12": [(1, 0, 0), (0, 1, 1)],
    "D12": [(1, 0, 1), (0, 1, 0)],
    "D1": [(0, 1, 1), (1, 1, 0)],
    "D2": [(1, 1, 1), (1, 0, 0)],
}


def _r_adjacent_covers():
    labels = ["d", "p", "db", "pb", "ct", "cb"]
    covers = [("db", "d"), ("db", "p"), ("pb", "d"), ("pb", "p")]
    named = {k: labels[i] for i, k in enumerate(["d", "p", "dbar", "pbar", "ct", "cb"])}
    for g, pats in _ADJ_HIGH.items():
        bot = f"{g}.b"
        t0, t1 = f"{g}.t0", f"{g}.t1"
        labels += [bot, t0, t1]
        named[g] = {bot, t0, t1}
        covers += [(bot, t0), (bot, t1)]
        for lab, (below_d, below_p, above_ct) in zip((t0, t1), pats):
            if below_d:
                covers.append((lab, "d"))
            if below_p:
                covers.append((lab, "p"))
            if above_ct:
                covers.append(("ct", lab))
    for g, pats in _ADJ_LOW.items():
        bot = f"{g}.b"
        t0, t1 = f"{g}.t0", f"{g}.t1"
        labels += [bot, t0, t1]
        named[g] = {bot, t0, t1}
        covers += [(bot, t0), (bot, t1)]
        for lab, (below_db, below_pb, above_cb) in zip((t0, t1), pats):
            if below_db:
                covers.append((lab, "db"))
            if below_pb:
                covers.append((lab, "pb"))
            if above_cb:
                covers.append(("cb", lab))
    for bfan, afan in (("B", "A"), ("C", "D")):
        for i in ("1", "2", "12"):
            for j in ("1", "2", "12"):
                covers.append((f"{bfan}{i}.b", f"{afan}{j}.t"))
    return labels, covers, named


def verify_r_adjacent(gadget: GadgetR, collect: bool = False):
    p = gadget.poset
    nm = gadget.named
    errors: list = []
    wit: dict = {}
    d, pp, db, pb = (nm[k] for k in ("d", "p", "dbar", "pbar"))

    _check(p.n == 42, "size is 42", errors)
    _check(set(p.maximal_elements()) == {d, pp}, "exactly two maximal elements", errors)
    _check(p.rank_of(d) == p.rank_of(pp), "top pair has equal rank", errors)
    _check(db not in p.minimal_elements() and pb not in p.minimal_elements(),
           "carrier pair is not minimal", errors)
    middle = _middle_labels(nm)
    _check(p.restrict(middle).height == 1, "middle block has height 1", errors)

    swap_top = {d: pp, pp: d}
    m = find_isomorphism(p, p, Constraint(pins={**swap_top, db: pb, pb: db}))
    _check(m is not None, "global swap automorphism", errors)
    wit["phi"] = m
    c = p.delete(pb)
    m = find_isomorphism(c, c, Constraint(pins={**swap_top, db: db}))
    _check(m is not None, "swap automorphism of card at pbar", errors)
    wit["psi_pbar"] = m
    c = p.delete(db)
    m = find_isomorphism(c, c, Constraint(pins={**swap_top, pb: pb}))
    _check(m is not None, "swap automorphism of card at dbar", errors)
    wit["psi_dbar"] = m

    # no automorphism fixes the carrier pair pointwise yet moves the tops
    bad = [
        g for g in all_isomorphisms(p, p)
        if g.mapping[db] == db and g.mapping[pb] == pb and g.mapping[d] != d
    ]
    _check(not bad, "no carrier-fixing top-moving automorphism", errors)

    if collect:
        return errors, wit
    if errors:
        raise GadgetInvalid("; ".join(errors))
    return wit


def build_r_adjacent() -> GadgetR:
    """Variant gadget whose designated pairs sit on adjacent ranks when
    stacked carrier-to-carrier."""
    labels, covers, named = _r_adjacent_covers()
    poset = Poset.from_covers(labels, covers)
    gadget = GadgetR(poset, named)
    wit = verify_r_adjacent(gadget)
    return GadgetR(poset, named, wit)


# ---------------------------------------------------------------------------
# Stacking
# ---------------------------------------------------------------------------

def stack(lower: Poset, upper: Poset, identify: Iterable[tuple]) -> Poset:
    """Glue ``upper`` on top of ``lower``.

    The identified pairs (maximal in lower, minimal in upper) are fused
    into single elements keeping the lower label; every non-maximal
    element of the lower part goes below every non-minimal element of the
    upper part, and the result is closed transitively.
    """
    identify = list(identify)
    lower_max = set(lower.maximal_elements())
    upper_min = set(upper.minimal_elements())
    lo_ids = [a for a, _ in identify]
    up_ids = [b for _, b in identify]
    if len(set(lo_ids)) != len(lo_ids) or len(set(up_ids)) != len(up_ids):
        raise BadIdentification("identification must be injective both ways")
    for a, b in identify:
        if a not in lower_max:
            raise BadIdentification(f"{a!r} is not maximal in the lower part")
        if b not in upper_min:
            raise BadIdentification(f"{b!r} is not minimal in the upper part")
    rename = {b: a for a, b in identify}
    kept_upper = [l for l in upper.labels if l not in rename]
    if set(lower.labels) & set(kept_upper):
        raise BadIdentification("label collision between the parts")
    labels = list(lower.labels) + kept_upper
    covers = list(lower.covers())
    for x, y in upper.covers():
        covers.append((rename.get(x, x), rename.get(y, y)))
    non_max_lower = [l for l in lower.labels if l not in lower_max]
    non_min_upper = [rename.get(l, l) for l in upper.labels if l not in upper_min]
    for x in non_max_lower:
        for y in non_min_upper:
            covers.append((x, y))
    return Poset.from_covers(labels, covers)


# ---------------------------------------------------------------------------
# Tower pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerSpec:
    q: GadgetQ
    r: GadgetR
    n: int
    twist: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise PosetError("tower needs n >= 1")


@dataclass(frozen=True)
class TowerPair:
    """The two towers (identical label sets, different top identification)
    plus naming helpers used by the verification harness."""

    q: GadgetQ
    r: GadgetR
    n: int
    p1: Poset
    p2: Poset
    ranks: tuple  # designated ranks k_0..k_n

    def spine(self, i: int) -> tuple:
        """Labels of the designated pair at rank k_i."""
        if i == 0:
            return ("Q.d", "Q.p")
        return (f"R{i}.d", f"R{i}.p")

    def block_of(self, label: str) -> str:
        return label.split(".", 1)[0]

    def top_label(self, variant: int, role: str) -> str:
        """Tower label of a top-block element for P1 (variant=1) or P2."""
        n = self.n
        qd, qp = self.q.named["d"], self.q.named["p"]
        if role not in (qd, qp):
            return f"T.{role}"
        if variant == 1:
            return f"R{n}.d" if role == qd else f"R{n}.p"
        return f"R{n}.p" if role == qd else f"R{n}.d"


def _prefixed(p: Poset, prefix: str) -> Poset:
    return p.relabel({l: f"{prefix}.{l}" for l in p.labels})


def build_tower(q: GadgetQ, r: GadgetR, n: int, twist: bool) -> Poset:
    qd, qp = q.named["d"], q.named["p"]
    rd, rp = r.named["d"], r.named["p"]
    rdb, rpb = r.named["dbar"], r.named["pbar"]
    tower = _prefixed(q.poset, "Q")
    lo_d, lo_p = f"Q.{qd}", f"Q.{qp}"
    for i in range(1, n + 1):
        ri = _prefixed(r.poset, f"R{i}")
        tower = stack(tower, ri, [(lo_d, f"R{i}.{rdb}"), (lo_p, f"R{i}.{rpb}")])
        lo_d, lo_p = f"R{i}.{rd}", f"R{i}.{rp}"
    top = _prefixed(q.poset.dual(), "T")
    if not twist:
        ident = [(lo_d, f"T.{qd}"), (lo_p, f"T.{qp}")]
    else:
        ident = [(lo_d, f"T.{qp}"), (lo_p, f"T.{qd}")]
    return stack(tower, top, ident)


def build_pair(spec: TowerSpec) -> TowerPair:
    """The untwisted / twisted tower pair plus its designated ranks."""
    q, r, n = spec.q, spec.r, spec.n
    hq, hr = q.poset.height, r.poset.height
    p1 = build_tower(q, r, n, twist=False)
    p2 = build_tower(q, r, n, twist=True)
    ranks = tuple(hq + i * hr for i in range(n + 1))
    pair = TowerPair(q, r, n, p1, p2, ranks)
    for i in range(n + 1):
        ds, ps = pair.spine(i)
        for tower in (p1, p2):
            if tower.rank_of(ds) != ranks[i] or tower.rank_of(ps) != ranks[i]:
                raise GadgetInvalid(f"designated pair {i} is not at rank {ranks[i]}")
    return pair


# ---------------------------------------------------------------------------
# Explicit card isomorphisms for the tower pair
# ---------------------------------------------------------------------------

def _gadget_map_for_block(pair: TowerPair, variant_from: int, variant_to: int,
                          block: str, gmap: dict) -> dict:
    """Translate a gadget-level label map on ``block`` to tower labels."""
    q, r, n = pair.q, pair.r, pair.n
    out = {}
    if block == "Q":
        roles = q.poset.labels
        qd, qp = q.named["d"], q.named["p"]
        spine_d, spine_p = pair.spine(0)

        def tower_label(role):
            if role == qd:
                return spine_d
            if role == qp:
                return spine_p
            return f"Q.{role}"

    elif block == "T":
        roles = q.poset.labels

        def tower_label(role, _variant=[None]):
            raise RuntimeError  # replaced below
    elif block.startswith("R"):
        i = int(block[1:])
        roles = r.poset.labels
        rd, rp = r.named["d"], r.named["p"]
        rdb, rpb = r.named["dbar"], r.named["pbar"]
        dlo, plo = pair.spine(i - 1)
        dhi, phi_ = pair.spine(i)

        def tower_label(role):
            if role == rdb:
                return dlo
            if role == rpb:
                return plo
            if role == rd:
                return dhi
            if role == rp:
                return phi_
            return f"{block}.{role}"

    else:
        raise PosetError(f"unknown block {block!r}")

    if block == "T":
        def src_label(role):
            return pair.top_label(variant_from, role)

        def dst_label(role):
            return pair.top_label(variant_to, role)
    else:
        src_label = dst_label = tower_label

    for role, image in gmap.items():
        out[src_label(role)] = dst_label(image)
    return out


def explicit_card_isomorphisms(pair: TowerPair) -> dict:
    """The case-defined isomorphisms between matching cards of the two
    towers: one verified label map per extremal element and per designated
    pair element.  Raises if any constructed map fails verification."""
    q, r, n = pair.q, pair.r, pair.n
    qn, rn = q.named, r.named
    wit_q, wit_r = q.witnesses, r.witnesses
    qd, qp, qa, qb = qn["d"], qn["p"], qn["a"], qn["b"]

    def identity_on(block):
        if block == "T":
            return {l: l for l in q.poset.labels}
        if block == "Q":
            return {l: l for l in q.poset.labels}
        return {l: l for l in r.poset.labels}

    phi = wit_r["phi"].mapping
    psi_pbar = wit_r["psi_pbar"].mapping
    psi_dbar = wit_r["psi_dbar"].mapping
    psi_a = wit_q["psi_a"].mapping
    psi_b = wit_q["psi_b"].mapping
    psi = wit_q["psi"].mapping              # card at d -> card at p, p -> d
    psi_inv = {v: k for k, v in psi.items()}

    out = {}

    def assemble(removed: str, block_maps: dict) -> dict:
        mapping = {}
        for block, gmap in block_maps.items():
            part = _gadget_map_for_block(pair, 1, 2, block, gmap)
            for s, t in part.items():
                if s in mapping and mapping[s] != t:
                    raise GadgetInvalid(
                        f"inconsistent explicit map at {s!r} for card {removed!r}")
                mapping[s] = t
        mapping.pop(removed, None)
        mapping = {s: t for s, t in mapping.items() if s != removed and t != removed}
        return mapping

    # bottom extremal cards
    for removed, qmap in (("Q." + qa, psi_a), ("Q." + qb, psi_b)):
        blocks = {"Q": qmap, "T": identity_on("T")}
        for i in range(1, n + 1):
            blocks[f"R{i}"] = phi
        out[removed] = assemble(removed, blocks)

    # top extremal cards (dual gadget automorphisms have the same label map)
    for removed, qmap in (("T." + qa, psi_a), ("T." + qb, psi_b)):
        blocks = {"Q": identity_on("Q"), "T": qmap}
        for i in range(1, n + 1):
            blocks[f"R{i}"] = identity_on("R1")
        out[removed] = assemble(removed, blocks)

    # designated pairs below the top
    for i in range(n):
        d_i, p_i = pair.spine(i)
        for removed, rmap in ((p_i, psi_pbar), (d_i, psi_dbar)):
            blocks = {"Q": identity_on("Q"), "T": identity_on("T"),
                      f"R{i + 1}": rmap}
            for j in range(1, n + 1):
                if j == i + 1:
                    continue
                blocks[f"R{j}"] = identity_on("R1") if j <= i else phi
            out[removed] = assemble(removed, blocks)

    # the top designated pair, via the dual of the bottom gadget's card map
    d_n, p_n = pair.spine(n)
    blocks = {"Q": identity_on("Q"), "T": psi}
    for j in range(1, n + 1):
        blocks[f"R{j}"] = identity_on("R1")
    out[d_n] = assemble(d_n, blocks)
    blocks = {"Q": identity_on("Q"), "T": psi_inv}
    for j in range(1, n + 1):
        blocks[f"R{j}"] = identity_on("R1")
    out[p_n] = assemble(p_n, blocks)

    # verify everything, including rank preservation
    r1 = pair.p1.rank_array()
    for removed, mapping in out.items():
        c1 = pair.p1.delete(removed)
        c2 = pair.p2.delete(removed)
        if not verify_isomorphism(c1, c2, mapping):
            raise GadgetInvalid(f"explicit card map at {removed!r} failed verification")
        for s, t in mapping.items():
            if pair.p1.rank_of(s) != pair.p2.rank_of(t):
                raise GadgetInvalid(f"explicit card map at {removed!r} moves ranks")
    return out
