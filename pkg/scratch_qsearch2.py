"""Involution-driven sampler for the bottom gadget.

Middle = bipartite layer: lows u0..u{m-1} (rank 1), highs v0..v{n-1}
(rank 2), edge set E.  We sample two involutions sigma (intended
automorphism of Q\\{a} swapping d,p) and tau (for Q\\{b}), force E and the
d/p wiring to be equivariant, keep the a-side wiring free on sigma-orbits
and the b-side free on tau-orbits, then run the full poset checker.
"""
import random, sys, time
import numpy as np
from posetdeck.core import Poset
from posetdeck.iso import Constraint, find_isomorphism, is_rigid
from scratch_qsearch import check  # staged checker incl. locks


def rand_involution(rng, n, fixed_frac=0.3):
    items = list(range(n))
    rng.shuffle(items)
    perm = list(range(n))
    i = 0
    while i + 1 < len(items):
        if rng.random() < fixed_frac:
            i += 1
            continue
        x, y = items[i], items[i + 1]
        perm[x], perm[y] = y, x
        i += 2
    return perm


def orbits(perms, n):
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(comp))
    return out


def sample(rng):
    m = rng.randint(4, 8)
    n = rng.randint(4, 8)
    su, sv = rand_involution(rng, m), rand_involution(rng, n)
    tu, tv = rand_involution(rng, m), rand_involution(rng, n)

    # E: union of random orbits under the group generated by (su,sv),(tu,tv)
    E = set()
    target = rng.randint(m + n - 2, 2 * m + n)
    guard = 0
    while len(E) < target and guard < 50:
        guard += 1
        seedpair = (rng.randrange(m), rng.randrange(n))
        stack = [seedpair]
        while stack:
            i, j = stack.pop()
            if (i, j) in E:
                continue
            E.add((i, j))
            stack.append((su[i], sv[j]))
            stack.append((tu[i], tv[j]))
    # every high needs a low below it, else it sits at rank 0
    for j in range(n):
        if not any((i, j) in E for i in range(m)):
            i = rng.randrange(m)
            stack = [(i, j)]
            while stack:
                x, y = stack.pop()
                if (x, y) in E:
                    continue
                E.add((x, y))
                stack.append((su[x], sv[y]))
                stack.append((tu[x], tv[y]))

    # d/p wiring on highs: swap-equivariant under both sv and tv.
    dp = [None] * n
    choices = [(1, 1), (1, 0), (0, 1)]
    for orb in orbits([sv, tv], n):
        root = orb[0]
        val = choices[rng.randrange(3)]
        dp[root] = val
        # BFS propagate with swap along either involution edge
        frontier = [root]
        ok = True
        while frontier:
            x = frontier.pop()
            for p in (sv, tv):
                y = p[x]
                want = (dp[x][1], dp[x][0])
                if dp[y] is None:
                    dp[y] = want
                    frontier.append(y)
                elif dp[y] != want:
                    ok = False
        if not ok:
            for x in orb:
                dp[x] = (1, 1)

    # a-side free on sigma-orbits but tau-invariant; b-side sigma-invariant
    ma = [None] * m
    for orb in orbits([tu], m):
        val = rng.randint(0, 1)
        for x in orb:
            ma[x] = val
    mb = [None] * m
    for orb in orbits([su], m):
        val = rng.randint(0, 1)
        for x in orb:
            mb[x] = val
    for x in range(m):
        if not ma[x] and not mb[x]:
            ma[x] = 1  # no third minimal element

    labels = ["a", "b", "d", "p"] + [f"u{i}" for i in range(m)] + [f"v{j}" for j in range(n)]
    covers = []
    for i in range(m):
        if ma[i]: covers.append(("a", f"u{i}"))
        if mb[i]: covers.append(("b", f"u{i}"))
    for j in range(n):
        if dp[j][0]: covers.append((f"v{j}", "d"))
        if dp[j][1]: covers.append((f"v{j}", "p"))
    for i, j in E:
        covers.append((f"u{i}", f"v{j}"))
    return Poset.from_covers(labels, covers)


def main(total, seed):
    rng = random.Random(seed)
    stats = {}
    t0 = time.time()
    for k in range(total):
        q = sample(rng)
        res = check(q)
        key = res.split(":")[0]
        stats[key] = stats.get(key, 0) + 1
        if res == "OK":
            print("WINNER seed-index", k, flush=True)
            print(q.to_json(), flush=True)
            with open(f"/tmp/q_winner_{seed}_{k}.json", "w") as fh:
                fh.write(q.to_json())
        if (k + 1) % 5000 == 0:
            print(f"  ..{k+1} samples {time.time()-t0:.0f}s {stats}", flush=True)
    print(f"done {total} in {time.time()-t0:.0f}s: {stats}", flush=True)


if __name__ == "__main__":
    total = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
    main(total, seed)
