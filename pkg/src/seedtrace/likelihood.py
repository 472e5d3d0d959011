"""Exact shape likelihoods for uniform-attachment trees.

For a presented unlabeled tree t and a candidate root u, the likelihood is
the probability that uniform attachment grown to |t| vertices produces the
shape of t with its start vertex sitting at position u (probability mass is
split evenly among positions indistinguishable from u).  In closed form:

    L_t(u) = ( n / R(u) ) * prod over all v of 1 / ( size_u(v) * a_u(v) )

where size_u(v) is the subtree size hanging at v when t is rooted at u,
a_u(v) is the product of factorials of the multiplicities of isomorphic
child subtrees of v in that rooting, and R(u) counts vertices w whose rooted
tree (t, w) is isomorphic to (t, u).

A candidate seed placement S factorizes: conditionally on the sizes of the
subtrees hanging at the seed vertices, each hanging subtree is an independent
uniform-attachment tree rooted at its seed vertex, so the placement's
log-likelihood is the sum of the rooted log-likelihoods of its hanging
subtrees.  (This conditional reading is pinned down against the sequence
enumeration oracle in oracle.py; see that module for the exact event.)

Everything here is iterative and runs in O(n log n) per tree: subtree shapes
are interned integer codes computed for both directions of every edge by a
down pass and an up pass, and the per-root terms follow by rerooting across
each edge.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort

from .tree import SeedPlacement, Tree, TreeError, _tree_unchecked, bfs_order


class PlacementBudgetError(RuntimeError):
    """Raised when placement enumeration exceeds the caller's budget."""


def canonical_codes(t: Tree, root: int) -> list[int]:
    """Interned canonical code of the subtree at each vertex, rooted at root.

    Two vertices get equal codes exactly when their rooted subtrees are
    isomorphic.  Code 0 is the single leaf.  Codes are only comparable within
    one call.
    """
    order, parent = bfs_order(t, root)
    intern: dict[tuple[int, ...], int] = {(): 0}
    children: list[list[int]] = [[] for _ in range(t.n)]
    for v in order[1:]:
        children[parent[v]].append(v)
    codes = [0] * t.n
    for v in reversed(order):
        ch = children[v]
        if ch:
            key = tuple(sorted(codes[c] for c in ch))
            code = intern.get(key)
            if code is None:
                code = len(intern)
                intern[key] = code
            codes[v] = code
    return codes


def rooted_code_key(t: Tree, root: int) -> tuple:
    """Hashable canonical key of (t, root); equal keys mean isomorphic."""
    order, parent = bfs_order(t, root)
    children: list[list[int]] = [[] for _ in range(t.n)]
    for v in order[1:]:
        children[parent[v]].append(v)
    keys: list[tuple] = [()] * t.n
    for v in reversed(order):
        ch = children[v]
        if ch:
            keys[v] = tuple(sorted(keys[c] for c in ch))
    return keys[root]


class _AllRoots:
    """Directed subtree codes plus per-root symmetry and size terms."""

    __slots__ = (
        "n", "order", "parent", "sizes", "down", "up", "aut_bar",
        "laut_root", "cnt", "log_phi",
    )

    def __init__(self, t: Tree):
        n = t.n
        self.n = n
        order, parent = bfs_order(t, 0)
        self.order = order
        self.parent = parent
        adj = t.adjacency

        children: list[list[int]] = [[] for _ in range(n)]
        for v in order[1:]:
            children[parent[v]].append(v)

        sizes = [1] * n
        for v in reversed(order[1:]):
            sizes[parent[v]] += sizes[v]
        self.sizes = sizes

        intern: dict[tuple[int, ...], int] = {(): 0}

        def get(key: tuple[int, ...]) -> int:
            code = intern.get(key)
            if code is None:
                code = len(intern)
                intern[key] = code
            return code

        # down pass: code of the subtree below each vertex (base rooting at 0)
        down = [0] * n
        for v in reversed(order):
            ch = children[v]
            if ch:
                down[v] = get(tuple(sorted(down[c] for c in ch)))
        self.down = down

        # up pass: code of the rest of the tree as seen across the parent edge
        up = [-1] * n
        for p in order:
            ch = children[p]
            if not ch:
                continue
            base = sorted(down[c] for c in ch)
            if parent[p] != -1:
                insort(base, up[p])
            if len(ch) == 1 and parent[p] == -1:
                # removing the only child leaves the bare root
                up[ch[0]] = 0
                continue
            for c in ch:
                rest = list(base)
                rest.pop(bisect_left(rest, down[c]))
                up[c] = get(tuple(rest))
        self.up = up

        # directed code from v toward neighbor x:
        #   down[x] when x is a child of v, else up[v] (x is v's parent)
        log = math.log
        max_deg = max(len(a) for a in adj)
        lfact = [0.0] * (max_deg + 1)
        for m in range(2, max_deg + 1):
            lfact[m] = lfact[m - 1] + log(m)

        cnt: list[dict[int, int]] = [dict() for _ in range(n)]
        laut_root = [0.0] * n
        full_keys: list[tuple[int, ...]] = [()] * n
        for v in range(n):
            c = cnt[v]
            pv = parent[v]
            uv = up[v]
            codes_v = []
            for x in adj[v]:
                code = uv if x == pv else down[x]
                codes_v.append(code)
                c[code] = c.get(code, 0) + 1
            laut_root[v] = sum(lfact[m] for m in c.values())
            codes_v.sort()
            full_keys[v] = tuple(codes_v)
        self.laut_root = laut_root
        self.cnt = cnt

        full_counts: dict[tuple[int, ...], int] = {}
        for key in full_keys:
            full_counts[key] = full_counts.get(key, 0) + 1
        self.aut_bar = [full_counts[full_keys[v]] for v in range(n)]

        # log phi by rerooting
        log_phi = [0.0] * n
        log_phi[0] = sum(log(sizes[v]) for v in order[1:])
        for v in order[1:]:
            s = sizes[v]
            log_phi[v] = log_phi[parent[v]] + log(n - s) - log(s)
        self.log_phi = log_phi

    def log_likelihoods(self) -> list[float]:
        n = self.n
        if n == 1:
            return [0.0]
        log = math.log
        order, parent = self.order, self.parent
        cnt, up, down = self.cnt, self.up, self.down
        laut = self.laut_root
        # symmetry-product term for the base rooting
        a = [0.0] * n
        a0 = laut[0]
        for v in order[1:]:
            a0 += laut[v] - log(cnt[v][up[v]])
        a[0] = a0
        for w in order[1:]:
            u = parent[w]
            a[w] = a[u] + log(cnt[w][up[w]]) - log(cnt[u][down[w]])
        phi = self.log_phi
        aut_bar = self.aut_bar
        return [-log(aut_bar[v]) - phi[v] - a[v] for v in range(n)]


def log_likelihood_all(t: Tree) -> list[float]:
    """Rooted log-likelihood (nats) for every root position at once."""
    if t.n == 1:
        return [0.0]
    return _AllRoots(t).log_likelihoods()


def log_likelihood_rooted(t: Tree, u: int) -> float:
    """log L_t(u) in nats; always <= 0."""
    if not (0 <= u < t.n):
        raise TreeError(f"root {u} outside 0..{t.n - 1}")
    return log_likelihood_all(t)[u]


def mle_root(t: Tree) -> tuple[int, float]:
    """The likelihood-maximizing root, ties broken by smallest vertex id."""
    scores = log_likelihood_all(t)
    best_v = 0
    best_s = scores[0]
    for v in range(1, t.n):
        s = scores[v]
        if s > best_s:
            best_v, best_s = v, s
    return best_v, best_s


def _hanging_decomposition(
    t: Tree, placement: SeedPlacement
) -> list[tuple[int, Tree]]:
    """Per seed vertex, the subtree hanging at it (seed vertex relabeled 0)."""
    members = set(placement.vertices)
    parent = [-2] * t.n
    comp = [-1] * t.n
    queue = list(placement.vertices)
    for v in queue:
        parent[v] = -1
        comp[v] = v
    groups: dict[int, list[int]] = {v: [v] for v in placement.vertices}
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for w in t.adjacency[u]:
            if parent[w] == -2:
                parent[w] = u
                comp[w] = comp[u]
                groups[comp[u]].append(w)
                queue.append(w)
    out = []
    for root, verts in groups.items():
        local = {v: i for i, v in enumerate(verts)}
        adj: list[list[int]] = [[] for _ in range(len(verts))]
        for v in verts:
            if v == root:
                continue
            a, b = local[v], local[parent[v]]
            adj[a].append(b)
            adj[b].append(a)
        out.append((root, _tree_unchecked(len(verts), adj)))
    return out


def log_likelihood_seed(t: Tree, placement: SeedPlacement | tuple[int, ...]) -> float:
    """Joint log-likelihood of a seed placement.

    Sum over the placement's vertices of the rooted log-likelihood of the
    subtree hanging at each one.
    """
    if not isinstance(placement, SeedPlacement):
        placement = SeedPlacement.from_vertices(t, placement)
    total = 0.0
    for root, sub in _hanging_decomposition(t, placement):
        if sub.n > 1:
            total += log_likelihood_all(sub)[0]
    return total


def _connected_ksubsets(t: Tree, k: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """All connected k-vertex subsets, each exactly once (ESU enumeration)."""
    adj = t.adjacency
    out: list[tuple[int, ...]] = []

    def note(sub: tuple[int, ...]) -> None:
        out.append(sub)
        if budget is not None and len(out) > budget:
            raise PlacementBudgetError(
                f"placement enumeration exceeded the budget of {budget}"
            )

    if k == 1:
        for v in range(t.n):
            note((v,))
        return out
    for v0 in range(t.n):
        ext0 = [u for u in adj[v0] if u > v0]
        if not ext0:
            continue
        blocked0 = {v0, *ext0}
        stack = [((v0,), ext0, blocked0)]
        while stack:
            sub, ext, blocked = stack.pop()
            if len(sub) + 1 == k:
                for w in ext:
                    note(tuple(sorted(sub + (w,))))
                continue
            for i, w in enumerate(ext):
                fresh = [u for u in adj[w] if u > v0 and u not in blocked]
                new_ext = ext[i + 1 :] + fresh
                new_blocked = blocked | set(fresh)
                stack.append((sub + (w,), new_ext, new_blocked))
    return out


def enumerate_placements(
    t: Tree, k: int, ell: int, budget: int | None = None
) -> list[SeedPlacement]:
    """Connected k-subsets whose induced subtree has exactly ell leaves.

    Sorted lexicographically by vertex tuple.  Valid (k, ell): k = 1 with
    ell = 0, k = 2 with ell = 2, else 2 <= ell <= k - 1.  A budget caps the
    number of connected subsets examined.
    """
    _validate_k_ell(k, ell)
    if k > t.n:
        return []
    placements = []
    for sub in _connected_ksubsets(t, k, budget=budget):
        members = set(sub)
        leaves = frozenset(
            v for v in sub if sum(1 for w in t.adjacency[v] if w in members) == 1
        )
        if len(leaves) == ell:
            placements.append(SeedPlacement(vertices=sub, leaf_ids=leaves))
    placements.sort(key=lambda p: p.vertices)
    return placements


def _validate_k_ell(k: int, ell: int) -> None:
    if k < 1:
        raise TreeError(f"seed size must be >= 1, got {k}")
    if k == 1:
        if ell != 0:
            raise TreeError("a single-vertex seed has 0 leaves; pass ell=0")
    elif k == 2:
        if ell != 2:
            raise TreeError("a two-vertex seed has exactly 2 leaves; pass ell=2")
    elif not (2 <= ell <= k - 1):
        raise TreeError(
            f"a seed on {k} >= 3 vertices needs 2 <= ell <= {k - 1}, got {ell}"
        )


def mle_seed(
    t: Tree, k: int, ell: int, budget: int | None = None
) -> tuple[SeedPlacement, float]:
    """The likelihood-maximizing placement among all (k, ell) candidates.

    Ties keep the lexicographically smallest vertex tuple.  Raises
    PlacementBudgetError if enumeration exceeds the budget and TreeError if
    no placement with the requested shape exists.
    """
    placements = enumerate_placements(t, k, ell, budget=budget)
    if not placements:
        raise TreeError(f"no placement with k={k}, ell={ell} exists in this tree")
    best = None
    best_ll = -math.inf
    for p in placements:
        ll = log_likelihood_seed(t, p)
        if ll > best_ll:
            best, best_ll = p, ll
    return best, best_ll
