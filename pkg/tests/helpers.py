"""Shared test utilities."""

from fractions import Fraction
from collections import Counter
import math

from seedtrace import generate, path_tree
from seedtrace.tree import Tree


def ua_tree(n: int, rng_seed: int, alpha: float = 0.0) -> Tree:
    """A random attachment tree grown from a single vertex."""
    t, _ = generate(path_tree(1), n, alpha=alpha, rng_seed=rng_seed)
    return t


def brute_psi(t: Tree, u: int) -> int:
    """Largest component of t minus u, by direct flood fill."""
    seen = {u}
    best = 0
    for start in t.adjacency[u]:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        count = 0
        while stack:
            v = stack.pop()
            count += 1
            for w in t.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        best = max(best, count)
    return best


def rational_rooted_likelihood(t: Tree, u: int) -> Fraction:
    """Exact-rational mirror of the rooted likelihood formula.

    Recursive nested-tuple canonical codes, exact per-vertex local
    automorphism factors, and exact subtree sizes.  Written independently of
    the production iterative algorithm so agreement is meaningful.
    """

    def code(v, par):
        return tuple(sorted(code(w, v) for w in t.adjacency[v] if w != par))

    def size(v, par):
        return 1 + sum(size(w, v) for w in t.adjacency[v] if w != par)

    root_code = code(u, -1)
    equivalent_roots = sum(1 for w in range(t.n) if code(w, -1) == root_code)
    value = Fraction(t.n, equivalent_roots)
    stack = [(u, -1)]
    while stack:
        v, par = stack.pop()
        kids = [w for w in t.adjacency[v] if w != par]
        mult = Counter(code(w, v) for w in kids)
        local_aut = 1
        for m in mult.values():
            local_aut *= math.factorial(m)
        value /= size(v, par) * local_aut
        stack.extend((w, v) for w in kids)
    return value
