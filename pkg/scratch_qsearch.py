"""Exploratory search for a bottom gadget satisfying all required properties.

Candidate family: unsided middle-level designs.  Elements:
  a, b        minimal anchors
  d, p        maximal anchors
  cb0..cbH-1  optional hub minima (above both a and b), below flagged tops
  per V-group i: bottom gi.b (above a and/or b), tops gi.tj with
                 (below-d, below-p, hub flags)

Checks (staged):
  S1 exactly two maximal {d,p}, two minimal {a,b}, rank(d)==rank(p), height 3
  S2 psi_a: aut of Q\\{a} with d<->p, b fixed
  S3 psi_b
  S4 psi: Q\\{d} -> Q\\{p} with p->d
  S5 rigid
  S6 no non-extremal element with exact-N strict upset
  S7 locks: no same-rank pair x,y of non-extremal elements admits an
     isomorphism Q\\{x} -> Q\\{y} with d->p, p->d
"""
import itertools, sys, time
import numpy as np
from posetdeck.core import Poset
from posetdeck.iso import Constraint, find_isomorphism, is_rigid, iter_isomorphisms

N_POSET = Poset.from_covers(["a","b","c","d"], [("a","c"),("b","c"),("b","d")])


def build(groups, nhub):
    """groups: list of (minpat(a,b), tuple of (d,p,flags...)) ."""
    labels = ["a", "b", "d", "p"] + [f"cb{k}" for k in range(nhub)]
    covers = [("a", f"cb{k}") for k in range(nhub)] + [("b", f"cb{k}") for k in range(nhub)]
    for i, (minpat, maxes) in enumerate(groups):
        bot = f"g{i}.b"
        labels.append(bot)
        if minpat[0]: covers.append(("a", bot))
        if minpat[1]: covers.append(("b", bot))
        for j, m in enumerate(maxes):
            top = f"g{i}.t{j}"
            labels.append(top)
            covers.append((bot, top))
            if m[0]: covers.append((top, "d"))
            if m[1]: covers.append((top, "p"))
            for k in range(nhub):
                if m[2 + k]: covers.append((f"cb{k}", top))
    return Poset.from_covers(labels, covers)


def stage1(q):
    if set(q.maximal_elements()) != {"d", "p"}: return False
    if set(q.minimal_elements()) != {"a", "b"}: return False
    if q.rank_of("d") != q.rank_of("p"): return False
    return q.height == 3


def stage_psi_a(q):
    c = q.delete("a")
    return find_isomorphism(c, c, Constraint(pins={"d": "p", "p": "d", "b": "b"})) is not None


def stage_psi_b(q):
    c = q.delete("b")
    return find_isomorphism(c, c, Constraint(pins={"d": "p", "p": "d", "a": "a"})) is not None


def stage_psi(q):
    return find_isomorphism(q.delete("d"), q.delete("p"), Constraint(pins={"p": "d"})) is not None


def stage_nfree(q):
    extremal = set(q.maximal_elements()) | set(q.minimal_elements())
    for x in q.labels:
        if x in extremal: continue
        ups = q.strict_up_labels(x)
        if len(ups) == 4:
            if find_isomorphism(q.restrict(ups), N_POSET) is not None:
                return False
    return True


def stage_locks(q):
    extremal = set(q.maximal_elements()) | set(q.minimal_elements())
    ranks = q.ranks().rank
    mids = [x for x in q.labels if x not in extremal]
    cards = {x: q.delete(x) for x in mids}
    for x in mids:
        for y in mids:
            if ranks[x] != ranks[y]: continue
            got = find_isomorphism(cards[x], cards[y], Constraint(pins={"d": "p", "p": "d"}))
            if got is not None:
                return False, (x, y)
    return True, None


def check(q, full=True):
    if not stage1(q): return "S1"
    if not stage_psi_a(q): return "S2"
    if not stage_psi_b(q): return "S3"
    if not stage_psi(q): return "S4"
    if not is_rigid(q): return "S5"
    if not stage_nfree(q): return "S6"
    if full:
        ok, why = stage_locks(q)
        if not ok: return f"S7:{why}"
    return "OK"


PATS = [(1, 1), (1, 0), (0, 1)]


def gen_candidates(nhub, ngroups, sizes, limit=None, seed=0):
    """Systematic enumeration: all multisets of group configs."""
    flagspace = list(itertools.product((0, 1), repeat=nhub))
    maxpats = [(d, p) + f for d in (0, 1) for p in (0, 1) if d or p for f in flagspace]
    cfgs = []
    for size in sizes:
        for combo in itertools.combinations(maxpats, size):
            for mp in PATS:
                cfgs.append((mp, combo))
    for groups in itertools.combinations(cfgs, ngroups):
        yield list(groups)


def run(nhub, ngroups, sizes, cap=None, report_every=20000):
    t0 = time.time()
    stats = {}
    n = 0
    for groups in gen_candidates(nhub, ngroups, sizes):
        n += 1
        if cap and n > cap:
            break
        q = build(groups, nhub)
        res = check(q)
        stats[res.split(":")[0]] = stats.get(res.split(":")[0], 0) + 1
        if res == "OK":
            print("WINNER", groups, flush=True)
            return groups
        if n % report_every == 0:
            print(f"  ..{n} candidates, {time.time()-t0:.0f}s, {stats}", flush=True)
    print(f"done: {n} candidates in {time.time()-t0:.0f}s: {stats}", flush=True)
    return None


def gen_triples(nhub, ngroups):
    """All groups have max-shape {yy, yn, ny} with free hub flags."""
    flagspace = list(itertools.product((0, 1), repeat=nhub))
    shapes = []
    for fy in flagspace:
        for fn in flagspace:
            for fn2 in flagspace:
                shapes.append(((1, 1) + fy, (1, 0) + fn, (0, 1) + fn2))
    cfgs = [(mp, shape) for shape in shapes for mp in PATS]
    for groups in itertools.combinations(cfgs, ngroups):
        yield list(groups)


def run_gen(gen, nhub, cap=None, report_every=20000, full=True):
    t0 = time.time()
    stats = {}
    n = 0
    winners = []
    for groups in gen:
        n += 1
        if cap and n > cap:
            break
        q = build(groups, nhub)
        res = check(q, full=full)
        stats[res.split(":")[0]] = stats.get(res.split(":")[0], 0) + 1
        if res == "OK":
            print("WINNER", groups, flush=True)
            winners.append(groups)
            if len(winners) >= 3:
                break
        if n % report_every == 0:
            print(f"  ..{n} candidates, {time.time()-t0:.0f}s, {stats}", flush=True)
    print(f"done: {n} candidates in {time.time()-t0:.0f}s: {stats}", flush=True)
    return winners


if __name__ == "__main__":
    mode = sys.argv[1] if len(sys.argv) > 1 else "small"
    if mode == "small":
        run(0, 3, (2,))
    elif mode == "h1g3":
        run(1, 3, (2, 3))
    elif mode == "t4h1":
        run_gen(gen_triples(1, 4), 1)
    elif mode == "t3h2":
        run_gen(gen_triples(2, 3), 2)
    elif mode == "t3h1":
        run_gen(gen_triples(1, 3), 1)
