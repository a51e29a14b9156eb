"""Simple undirected graphs with 1-based vertex labels.

Provides the edge-list / JSON codecs, the named graph generators used by the
critical-exponent machinery, and the search for the largest "one edge short
of complete" subgraph, which controls the power threshold on chordal graphs.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np


class GraphParseError(ValueError):
    """Malformed edge-list input; the message carries the line number."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n.

    Edges are stored once, as (i, j) pairs with i < j. Instances are
    immutable and hashable, so derived quantities can be cached.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n, edges):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        canon = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) out of range 1..{n}")
            canon.add((min(i, j), max(i, j)))
        return cls(n=n, edges=frozenset(canon))

    @cached_property
    def _adjacency(self):
        adj = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return {v: frozenset(nb) for v, nb in adj.items()}

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def neighbors(self, v):
        return self._adjacency[v]

    def degree(self, v):
        return len(self._adjacency[v])

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def sorted_edges(self):
        return sorted(self.edges)


def parse_edge_list(text):
    """Parse "i j" lines into a Graph.

    Blank lines and '#' comments are skipped. An optional first line
    "n <count>" fixes the vertex count; otherwise n is the largest label.
    """
    pairs = []
    n_declared = None
    first_data_line = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if first_data_line and tokens[0] == "n":
            if len(tokens) != 2:
                raise GraphParseError(f"line {lineno}: header must be 'n <count>'")
            try:
                n_declared = int(tokens[1])
            except ValueError:
                raise GraphParseError(f"line {lineno}: bad vertex count {tokens[1]!r}") from None
            if n_declared < 0:
                raise GraphParseError(f"line {lineno}: negative vertex count")
            first_data_line = False
            continue
        first_data_line = False
        if len(tokens) != 2:
            raise GraphParseError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex label in {line!r}") from None
        if i <= 0 or j <= 0:
            raise GraphParseError(f"line {lineno}: vertex labels must be positive")
        if i == j:
            raise GraphParseError(f"line {lineno}: self-loop at vertex {i}")
        pairs.append((lineno, i, j))

    n = n_declared if n_declared is not None else max((max(i, j) for _, i, j in pairs), default=0)
    for lineno, i, j in pairs:
        if i > n or j > n:
            raise GraphParseError(f"line {lineno}: label exceeds declared vertex count {n}")
    return Graph.from_edges(n, [(i, j) for _, i, j in pairs])


def to_edge_list(g):
    """Serialize a Graph to the edge-list text format (with 'n' header)."""
    lines = [f"n {g.n}"]
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(lines) + "\n"


def graph_to_json(g):
    return {"n": g.n, "edges": [[i, j] for i, j in g.sorted_edges()]}


def graph_from_json(data):
    try:
        n = int(data["n"])
        edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad graph JSON: {exc}") from None
    return Graph.from_edges(n, [(int(i), int(j)) for i, j in edges])


def connected_components(g):
    """Vertex sets of the connected components, each sorted, in label order."""
    seen = set()
    comps = []
    for start in g.vertices:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def is_connected(g):
    return g.n <= 1 or len(connected_components(g)) == 1


def induced_subgraph(g, subset):
    """Induced subgraph on `subset`, relabeled 1..|subset| in sorted order.

    Returns (subgraph, mapping) where mapping sends old labels to new ones.
    """
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    if subset[0] < 1 or subset[-1] > g.n:
        raise ValueError(f"subset out of range 1..{g.n}")
    mapping = {old: new for new, old in enumerate(subset, start=1)}
    edges = [(mapping[i], mapping[j]) for i, j in g.edges if i in mapping and j in mapping]
    return Graph.from_edges(len(subset), edges), mapping


# ---------------------------------------------------------------------------
# generators


def complete(n):
    if n < 1:
        raise ValueError(f"complete graph needs n >= 1, got {n}")
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def near_complete(n):
    """Complete graph on n vertices with the edge {1, 2} removed."""
    if n < 2:
        raise ValueError(f"near-complete graph needs n >= 2, got {n}")
    edges = set(itertools.combinations(range(1, n + 1), 2)) - {(1, 2)}
    return Graph.from_edges(n, edges)


def cycle(n):
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Graph.from_edges(n, edges)


def path(n):
    if n < 1:
        raise ValueError(f"path needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def random_tree(n, seed=0):
    """Uniform random labeled tree (via a random Pruefer sequence)."""
    if n < 1:
        raise ValueError(f"tree needs n >= 1, got {n}")
    if n <= 2:
        return path(n)
    rng = np.random.default_rng(seed)
    pruefer = rng.integers(1, n + 1, size=n - 2)
    degree = {v: 1 for v in range(1, n + 1)}
    for v in pruefer:
        degree[int(v)] += 1
    edges = []
    leaves = sorted(v for v in range(1, n + 1) if degree[v] == 1)
    for v in pruefer:
        v = int(v)
        leaf = leaves.pop(0)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            # keep the leaf pool sorted for determinism
            bisect.insort(leaves, v)
    edges.append((leaves[0], leaves[1]))
    return Graph.from_edges(n, edges)


def complete_bipartite(a, b):
    if a < 1 or b < 1:
        raise ValueError(f"complete bipartite graph needs a, b >= 1, got {a}, {b}")
    edges = [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return Graph.from_edges(a + b, edges)


def band(n, d):
    """Edge {i, j} iff 0 < |i - j| <= d."""
    if n < 1 or d < 0 or d > n:
        raise ValueError(f"band graph needs n >= 1 and 0 <= d <= n, got n={n}, d={d}")
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, min(i + d, n) + 1)]
    return Graph.from_edges(n, edges)


def split_graph(clique_size, independent_size, attach_degrees, seed=0):
    """Clique on 1..c plus an independent set, each vertex wired to a random
    subset of the clique.

    Attachment degrees at most clique_size - 1, so the clique stays maximal.
    `attach_degrees` is an int (same for every independent vertex) or a
    sequence of length independent_size.
    """
    c, m = clique_size, independent_size
    if c < 1 or m < 0:
        raise ValueError("split graph needs clique_size >= 1 and independent_size >= 0")
    if isinstance(attach_degrees, int):
        degs = [attach_degrees] * m
    else:
        degs = [int(d) for d in attach_degrees]
        if len(degs) != m:
            raise ValueError(f"need {m} attachment degrees, got {len(degs)}")
    for d in degs:
        if not (0 <= d <= c - 1):
            raise ValueError(f"attachment degree {d} outside 0..{c - 1}")
    rng = np.random.default_rng(seed)
    edges = list(itertools.combinations(range(1, c + 1), 2))
    for k, d in enumerate(degs):
        v = c + 1 + k
        targets = rng.choice(np.arange(1, c + 1), size=d, replace=False)
        edges.extend((int(t), v) for t in targets)
    return Graph.from_edges(c + m, edges)


def apollonian(n, seed=0):
    """Stacked triangulation: start from a triangle, repeatedly subdivide a
    random face with a new degree-3 vertex.

    One representative of the family per (n, seed).
    """
    if n < 3:
        raise ValueError(f"apollonian graph needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    edges = [(1, 2), (1, 3), (2, 3)]
    faces = [(1, 2, 3)]
    for v in range(4, n + 1):
        k = int(rng.integers(len(faces)))
        a, b, c = faces.pop(k)
        edges.extend([(a, v), (b, v), (c, v)])
        faces.extend([(a, b, v), (a, c, v), (b, c, v)])
    return Graph.from_edges(n, edges)


def max_outerplanar(n):
    """Fan triangulation of the n-gon (one maximal outerplanar graph)."""
    if n < 3:
        raise ValueError(f"maximal outerplanar graph needs n >= 3, got {n}")
    edges = cycle(n).sorted_edges() + [(1, k) for k in range(3, n)]
    return Graph.from_edges(n, edges)


def random_chordal(n, density=0.5, seed=0):
    """Random connected chordal graph grown one simplicial vertex at a time.

    Each new vertex attaches to a random subset of a previously recorded
    clique, so the reversed insertion order is a perfect elimination
    ordering by construction. `density` in [0, 1] biases subset sizes.
    """
    if n < 1:
        raise ValueError(f"random chordal graph needs n >= 1, got {n}")
    if not (0.0 <= density <= 1.0):
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    edges = []
    cliques = [(1,)]
    for v in range(2, n + 1):
        base = cliques[int(rng.integers(len(cliques)))]
        k = 1 + int(rng.binomial(len(base) - 1, density)) if len(base) > 1 else 1
        chosen = rng.choice(len(base), size=k, replace=False)
        attach = tuple(sorted(base[int(i)] for i in chosen))
        edges.extend((u, v) for u in attach)
        cliques.append(attach + (v,))
    return Graph.from_edges(n, edges)


def random_graph(n, edge_prob=0.5, seed=0):
    """Erdos-Renyi style sample, mainly for cross-checking oracles."""
    if n < 0:
        raise ValueError(f"random graph needs n >= 0, got {n}")
    if not (0.0 <= edge_prob <= 1.0):
        raise ValueError(f"edge probability must lie in [0, 1], got {edge_prob}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)
             if rng.random() < edge_prob]
    return Graph.from_edges(n, edges)


FAMILY_GENERATORS = {
    "complete": complete,
    "near_complete": near_complete,
    "cycle": cycle,
    "path": path,
    "tree": random_tree,
    "complete_bipartite": complete_bipartite,
    "band": band,
    "split": split_graph,
    "apollonian": apollonian,
    "max_outerplanar": max_outerplanar,
    "random_chordal": random_chordal,
}


def generate(family, **params):
    """Build a named family member, e.g. generate("band", n=5, d=2)."""
    try:
        gen = FAMILY_GENERATORS[family]
    except KeyError:
        known = ", ".join(sorted(FAMILY_GENERATORS))
        raise ValueError(f"unknown family {family!r}; known: {known}") from None
    return gen(**params)


# ---------------------------------------------------------------------------
# largest near-complete subgraph


def _adjacency_masks(g):
    masks = [0] * (g.n + 1)
    for i, j in g.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def max_near_complete_order(g):
    """Largest r such that some r vertices span at least C(r,2) - 1 edges.

    Exhaustive over vertex subsets, so only feasible for small n; this is
    the oracle the fast variant is checked against. By convention the empty
    graph on two vertices counts, so r >= 2 whenever n >= 2.
    """
    if g.n < 2:
        raise ValueError(f"need at least 2 vertices, got {g.n}")
    masks = _adjacency_masks(g)
    for r in range(g.n, 1, -1):
        need = r * (r - 1) // 2 - 1
        for subset in itertools.combinations(range(1, g.n + 1), r):
            picked = 0
            count = 0
            for v in subset:
                count += (masks[v] & picked).bit_count()
                picked |= 1 << v
            if count >= need:
                return r
    return 2


@lru_cache(maxsize=4096)
def max_near_complete_order_fast(g, max_clique_n=64):
    """Same value as max_near_complete_order, via clique enumeration.

    r = max over (clique number, 2 + largest clique in the common
    neighborhood of a non-adjacent pair): a near-complete subgraph on r
    vertices is either an r-clique or two non-adjacent vertices joined to
    a common (r-2)-clique.
    """
    from .chordal import clique_number

    if g.n < 2:
        raise ValueError(f"need at least 2 vertices, got {g.n}")
    best = max(2, clique_number(g, max_n=max_clique_n))
    for u, v in itertools.combinations(range(1, g.n + 1), 2):
        if g.has_edge(u, v):
            continue
        common = g.neighbors(u) & g.neighbors(v)
        if len(common) + 2 <= best:
            continue
        if common:
            sub, _ = induced_subgraph(g, common)
            best = max(best, 2 + clique_number(sub, max_n=max_clique_n))
    return best
