"""Chordal graph machinery.

Maximum cardinality search, perfect elimination orderings, maximal clique
enumeration, perfect orderings of the maximal cliques with their histories,
residuals and separators, and clique-separator decompositions (A, C, B).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .graphs import is_connected


class NotChordalError(ValueError):
    """Raised for operations that require a chordal graph.

    Carries a chordless cycle (length >= 4) certifying the failure.
    """

    def __init__(self, cycle, hint=None):
        self.cycle = list(cycle) if cycle else None
        detail = f"chordless cycle {self.cycle}" if self.cycle else "no chordless cycle recorded"
        message = f"graph is not chordal ({detail})"
        if hint:
            message += f"; {hint}"
        super().__init__(message)


def mcs_order(g):
    """Elimination ordering from maximum cardinality search.

    Vertices are visited by descending count of already-visited neighbors,
    ties broken by smallest label; the returned order is the reversed visit
    order, which is a perfect elimination ordering iff the graph is chordal.
    """
    weight = {v: 0 for v in g.vertices}
    unvisited = set(g.vertices)
    visit = []
    for _ in range(g.n):
        z = min(unvisited, key=lambda v: (-weight[v], v))
        unvisited.remove(z)
        visit.append(z)
        for y in g.neighbors(z):
            if y in unvisited:
                weight[y] += 1
    return visit[::-1]


def is_perfect_elimination_order(g, order):
    """Check that each vertex's later neighbors form a clique."""
    if sorted(order) != list(g.vertices):
        raise ValueError("order must be a permutation of the vertices")
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        later = [u for u in g.neighbors(v) if pos[u] > pos[v]]
        for a, b in itertools.combinations(later, 2):
            if not g.has_edge(a, b):
                return False
    return True


@lru_cache(maxsize=4096)
def is_chordal(g):
    """True iff every cycle of length >= 4 has a chord."""
    return is_perfect_elimination_order(g, mcs_order(g))


def find_chordless_cycle(g):
    """Some chordless cycle of length >= 4, or None if the graph is chordal.

    For each vertex v with two non-adjacent neighbors x, y, a shortest x-y
    path avoiding the rest of N[v] closes up with v into a chordless cycle.
    """
    for v in g.vertices:
        nbrs = sorted(g.neighbors(v))
        for x, y in itertools.combinations(nbrs, 2):
            if g.has_edge(x, y):
                continue
            blocked = (g.neighbors(v) | {v}) - {x, y}
            path = _shortest_path_avoiding(g, x, y, blocked)
            if path is not None:
                return [v] + path
    return None


def _shortest_path_avoiding(g, source, target, blocked):
    prev = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u == target:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        for w in sorted(g.neighbors(u)):
            if w not in prev and w not in blocked:
                prev[w] = u
                queue.append(w)
    return None


def _require_chordal(g):
    if not is_chordal(g):
        raise NotChordalError(find_chordless_cycle(g))


def maximal_cliques_chordal(g):
    """Maximal cliques of a chordal graph (at most n of them), sorted."""
    _require_chordal(g)
    order = mcs_order(g)
    pos = {v: k for k, v in enumerate(order)}
    candidates = []
    for v in order:
        clique = frozenset({v} | {u for u in g.neighbors(v) if pos[u] > pos[v]})
        candidates.append(clique)
    maximal = [c for c in candidates if not any(c < d for d in candidates)]
    return sorted(set(maximal), key=sorted)


@lru_cache(maxsize=4096)
def _maximal_cliques_general_cached(g, max_n):
    if g.n > max_n:
        raise ValueError(
            f"general clique enumeration limited to {max_n} vertices, got {g.n}")
    cliques = []

    def expand(r, p, x):
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(g.neighbors(u) & p))
        for v in sorted(p - g.neighbors(pivot)):
            expand(r | {v}, p & g.neighbors(v), x & g.neighbors(v))
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(g.vertices), frozenset())
    return tuple(sorted(cliques, key=sorted))


def maximal_cliques_general(g, max_n=20):
    """All maximal cliques via Bron-Kerbosch with pivoting, sorted."""
    return list(_maximal_cliques_general_cached(g, max_n))


def clique_number(g, max_n=20):
    if g.n == 0:
        return 0
    if is_chordal(g):
        return max(len(c) for c in maximal_cliques_chordal(g))
    return max(len(c) for c in maximal_cliques_general(g, max_n=max_n))


# ---------------------------------------------------------------------------
# perfect orderings of the maximal cliques


@dataclass(frozen=True)
class CliqueOrdering:
    """Ordered maximal cliques C_1..C_k with derived set sequences.

    history_j  = C_1 | ... | C_j
    residual_j = C_j - history_{j-1}
    separator_j = history_{j-1} & C_j        (history_0 = empty)
    """

    cliques: tuple[frozenset[int], ...]

    @property
    def histories(self):
        out = []
        acc = frozenset()
        for c in self.cliques:
            acc = acc | c
            out.append(acc)
        return tuple(out)

    @property
    def residuals(self):
        out = []
        acc = frozenset()
        for c in self.cliques:
            out.append(c - acc)
            acc = acc | c
        return tuple(out)

    @property
    def separators(self):
        out = []
        acc = frozenset()
        for c in self.cliques:
            out.append(acc & c)
            acc = acc | c
        return tuple(out)

    def to_json(self):
        return {
            "cliques": [sorted(c) for c in self.cliques],
            "separators": [sorted(s) for s in self.separators],
            "residuals": [sorted(r) for r in self.residuals],
        }


def check_perfect_ordering(g, cliques):
    """Independent check of the two perfect-ordering conditions.

    (1) each separator is contained in some earlier clique;
    (2) each separator induces a complete subgraph.
    """
    cliques = [frozenset(c) for c in cliques]
    history = frozenset()
    for i, c in enumerate(cliques):
        sep = history & c
        if i > 0 and sep and not any(sep <= cliques[j] for j in range(i)):
            return False
        for a, b in itertools.combinations(sorted(sep), 2):
            if not g.has_edge(a, b):
                return False
        history = history | c
    return True


def _clique_tree_order(g, cliques):
    """Fallback ordering from a maximum-weight spanning tree of the clique
    graph (weights = intersection sizes), traversed root-first."""
    k = len(cliques)
    if k <= 1:
        return list(cliques)
    pairs = sorted(
        itertools.combinations(range(k), 2),
        key=lambda ij: (-len(cliques[ij[0]] & cliques[ij[1]]), ij),
    )
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = {i: [] for i in range(k)}
    used = 0
    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree[i].append(j)
            tree[j].append(i)
            used += 1
            if used == k - 1:
                break
    order = []
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        order.append(cliques[i])
        for j in sorted(tree[i]):
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return order


def perfect_ordering(g):
    """A perfect ordering of the maximal cliques of a chordal graph.

    Primary route: sort cliques by the search rank at which maximum
    cardinality search first discovers one of their vertices. The result is
    verified against check_perfect_ordering; on failure a clique-tree
    ordering is used instead, so a bug in either route cannot slip through.
    """
    cliques = maximal_cliques_chordal(g)
    visit_rank = {v: k for k, v in enumerate(reversed(mcs_order(g)))}
    ordered = sorted(cliques, key=lambda c: (min(visit_rank[v] for v in c), sorted(c)))
    if not check_perfect_ordering(g, ordered):
        ordered = _clique_tree_order(g, cliques)
        if not check_perfect_ordering(g, ordered):
            raise AssertionError("both clique-ordering routes failed on a chordal graph")
    return CliqueOrdering(cliques=tuple(ordered))


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    """Partition (A, C, B): C a clique separating the nonempty sides A, B."""

    side_a: frozenset[int]
    separator: frozenset[int]
    side_b: frozenset[int]

    def __post_init__(self):
        if not self.side_a or not self.side_b:
            raise ValueError("both separated sides must be nonempty")
        if (self.side_a & self.separator or self.side_a & self.side_b
                or self.separator & self.side_b):
            raise ValueError("decomposition parts must be disjoint")

    def vertices(self):
        return self.side_a | self.separator | self.side_b


def decompose(g):
    """Split a connected chordal graph along the last separator of a perfect
    ordering: A = H_{k-1} - S_k, C = S_k, B = R_k. None if complete."""
    _require_chordal(g)
    if not is_connected(g):
        raise ValueError("decompose requires a connected graph")
    ordering = perfect_ordering(g)
    k = len(ordering.cliques)
    if k == 1:
        return None
    hist = ordering.histories
    sep = ordering.separators[k - 1]
    res = ordering.residuals[k - 1]
    return Decomposition(side_a=hist[k - 2] - sep, separator=sep, side_b=res)


def check_decomposition(g, d):
    """True iff the separator induces a complete subgraph and every path
    between the two sides meets it."""
    verts = d.vertices()
    if any(v < 1 or v > g.n for v in verts):
        raise ValueError(f"decomposition vertices out of range 1..{g.n}")
    for a, b in itertools.combinations(sorted(d.separator), 2):
        if not g.has_edge(a, b):
            return False
    # BFS from side A in the graph with the separator deleted
    reached = set(d.side_a)
    queue = deque(sorted(d.side_a))
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in reached and u not in d.separator:
                reached.add(u)
                queue.append(u)
    return not (reached & d.side_b)
