"""Unlabeled trees: parsing, canonical codes, free-tree enumeration.

Vertex ids are dense integers ``0..n-1``.  A :class:`Tree` is immutable and
keeps its neighbor lists sorted, so two trees built from the same edge set
compare equal regardless of the order the edges were given in.

Free trees are generated from their centroid.  A tree with a single centroid
``c`` is a multiset of rooted branches at ``c``, each with fewer than ``n/2``
vertices; a tree with two centroids is an unordered pair of rooted halves of
exactly ``n/2`` vertices.  Rooted branches are kept as canonical level
sequences, so every multiset is produced exactly once and no global
deduplication table is needed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    MalformedInput,
    NotATree,
    SizeLimitExceeded,
    VertexOutOfRange,
)

MAX_VERTICES = 64
MAX_ENUMERATION = 20


@dataclass(frozen=True)
class Tree:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tree":
        if not 1 <= n <= MAX_VERTICES:
            raise SizeLimitExceeded(f"tree size {n} outside 1..{MAX_VERTICES}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise NotATree(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise NotATree(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            count += 1
        if count != n - 1:
            raise NotATree(f"{count} edges given, a tree on {n} vertices has {n - 1}")
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise NotATree("graph is disconnected")
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def is_path(self) -> bool:
        return all(len(a) <= 2 for a in self.adjacency)

    def is_caterpillar(self) -> bool:
        """True when deleting every leaf leaves a path (or nothing)."""
        inner = [v for v in range(self.n) if len(self.adjacency[v]) > 1]
        inner_set = set(inner)
        for v in inner:
            if sum(1 for w in self.adjacency[v] if w in inner_set) > 2:
                return False
        return True

    def relabel(self, perm: Sequence[int]) -> "Tree":
        """Return the tree with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise MalformedInput("relabeling is not a permutation of 0..n-1")
        return Tree.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def to_edge_list(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{self.n - 1}")


def path_tree(n: int) -> Tree:
    return Tree.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_tree(n: int) -> Tree:
    """Star on ``n`` vertices with center 0 (``S_n`` has ``n - 1`` leaves)."""
    return Tree.from_edges(n, [(0, i) for i in range(1, n)])


def spider_tree(legs: Sequence[int]) -> Tree:
    """Center 0 with one path of each given length hanging from it."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree.from_edges(nxt, edges)


def parse_edge_list(text: str) -> Tree:
    """Parse the edge-list text format.

    The first non-comment line holds ``n``; every further non-empty line holds
    two vertex ids.  Lines starting with ``#`` are ignored.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise MalformedInput("empty input: expected a vertex count")
    if len(rows[0]) != 1:
        raise MalformedInput(f"first line must hold only n, got {' '.join(rows[0])!r}")
    n = _parse_int(rows[0][0])
    if n < 1:
        raise MalformedInput(f"vertex count must be positive, got {n}")
    if n > MAX_VERTICES:
        raise SizeLimitExceeded(f"tree size {n} exceeds {MAX_VERTICES}")
    edges = []
    for row in rows[1:]:
        if len(row) != 2:
            raise MalformedInput(f"edge line must hold two ids, got {' '.join(row)!r}")
        u, v = _parse_int(row[0]), _parse_int(row[1])
        if u == v:
            raise MalformedInput(f"edge line repeats vertex {u}")
        edges.append((u, v))
    return Tree.from_edges(n, edges)


def _parse_int(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MalformedInput(f"not an integer: {token!r}") from None


# ---------------------------------------------------------------------------
# canonical codes


@dataclass(frozen=True, order=True)
class CanonicalCode:
    code: tuple[int, ...]
    n: int

    def __str__(self) -> str:
        return ",".join(map(str, self.code))

    @classmethod
    def parse(cls, text: str) -> "CanonicalCode":
        code = tuple(int(tok) for tok in text.split(","))
        return cls(code, len(code))


def centroids(t: Tree) -> list[int]:
    """The one or two vertices minimizing the largest branch size."""
    n = t.n
    if n == 1:
        return [0]
    parent, order = _bfs_order(t, 0)
    size = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    best = []
    best_weight = n
    for v in range(n):
        heaviest = n - size[v]
        for w in t.adjacency[v]:
            if w != parent[v]:
                heaviest = max(heaviest, size[w])
        if heaviest < best_weight:
            best, best_weight = [v], heaviest
        elif heaviest == best_weight:
            best.append(v)
    return best


def _bfs_order(t: Tree, root: int) -> tuple[list[int], list[int]]:
    parent = [-1] * t.n
    parent[root] = root
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in t.adjacency[u]:
            if parent[w] == -1:
                parent[w] = u
                order.append(w)
                queue.append(w)
    parent[root] = -1
    return parent, order


def rooted_code(t: Tree, root: int) -> tuple[int, ...]:
    """Lexicographically largest level sequence of ``t`` rooted at ``root``.

    Levels are depths; children are ordered by decreasing subtree code.
    """
    parent, order = _bfs_order(t, root)
    codes: dict[int, tuple[int, ...]] = {}
    for v in reversed(order):
        kids = sorted((codes.pop(w) for w in t.adjacency[v] if w != parent[v]), reverse=True)
        codes[v] = _join(kids)
    return codes[root]


def _join(children: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
    out = [0]
    for c in children:
        out.extend(d + 1 for d in c)
    return tuple(out)


def canonical_code(t: Tree) -> CanonicalCode:
    code = max(rooted_code(t, c) for c in centroids(t))
    return CanonicalCode(code, t.n)


def tree_from_level_sequence(levels: Sequence[int]) -> Tree:
    """Rebuild a tree from a rooted level sequence (preorder depths)."""
    n = len(levels)
    if not n or levels[0] != 0:
        raise MalformedInput("level sequence must start at depth 0")
    if n > MAX_VERTICES:
        raise SizeLimitExceeded(f"tree size {n} exceeds {MAX_VERTICES}")
    nbrs: list[list[int]] = [[] for _ in range(n)]
    stack = [0]
    for v in range(1, n):
        d = levels[v]
        if not 1 <= d <= len(stack):
            raise MalformedInput(f"depth jump at position {v}")
        del stack[d:]
        nbrs[stack[-1]].append(v)
        nbrs[v].append(stack[-1])
        stack.append(v)
    # preorder ids: the parent is always smaller, children are appended in order
    return Tree(n, tuple(tuple(a) for a in nbrs))


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _rooted_pool(max_size: int) -> tuple[tuple[int, ...], ...]:
    """Canonical codes of all rooted trees with at most ``max_size`` vertices,
    sorted in decreasing code order."""
    by_size: dict[int, list[tuple[int, ...]]] = {1: [(0,)]}
    for m in range(2, max_size + 1):
        smaller = tuple(sorted((c for s in range(1, m) for c in by_size[s]), reverse=True))
        by_size[m] = [_join(kids) for kids in _forests(m - 1, smaller, 0)]
    return tuple(sorted((c for s in by_size for c in by_size[s]), reverse=True))


def _forests(
    remaining: int, pool: Sequence[tuple[int, ...]], start: int
) -> Iterator[list[tuple[int, ...]]]:
    """Multisets of pool members with total size ``remaining``, as
    non-increasing lists using indices ``>= start``."""
    if remaining == 0:
        yield []
        return
    for idx in range(start, len(pool)):
        c = pool[idx]
        if len(c) <= remaining:
            for rest in _forests(remaining - len(c), pool, idx):
                yield [c, *rest]


def count_rooted_trees(max_size: int) -> list[int]:
    """Rooted-tree counts ``r(0..max_size)`` from the generated pool."""
    counts = [0] * (max_size + 1)
    for c in _rooted_pool(max_size):
        counts[len(c)] += 1
    return counts


def enumerate_free_codes(n: int, shard: tuple[int, int] = (0, 1)) -> Iterator[tuple[int, ...]]:
    """Level sequences (rooted at a centroid) of all free trees on ``n``
    vertices, one per isomorphism class.

    ``shard=(i, m)`` keeps only classes whose leading branch index is
    congruent to ``i`` mod ``m``; the shards for ``i = 0..m-1`` partition
    the classes.
    """
    if not 1 <= n <= MAX_ENUMERATION:
        raise SizeLimitExceeded(f"free-tree enumeration limited to 1..{MAX_ENUMERATION}, got {n}")
    i_shard, m_shard = shard
    if n == 1:
        if i_shard == 0:
            yield (0,)
        return
    half = (n - 1) // 2
    pool = _rooted_pool(max(half, 1)) if half else ()
    for idx, first in enumerate(pool):
        if idx % m_shard != i_shard or len(first) > n - 1:
            continue
        for rest in _forests(n - 1 - len(first), pool, idx):
            yield _join([first, *rest])
    if n % 2 == 0:
        halves = [c for c in _rooted_pool(n // 2) if len(c) == n // 2]
        for a_idx, a in enumerate(halves):
            if a_idx % m_shard != i_shard:
                continue
            for b in halves[a_idx:]:
                # root at a; b hangs below a's root as one more branch
                yield a + tuple(d + 1 for d in b)


def enumerate_free_trees(n: int, shard: tuple[int, int] = (0, 1)) -> Iterator[Tree]:
    for levels in enumerate_free_codes(n, shard):
        yield tree_from_level_sequence(levels)


# ---------------------------------------------------------------------------
# vertex deletion


@dataclass(frozen=True)
class VertexCut:
    vertex: int
    component_sizes: tuple[int, ...]
    component_vertex_sets: tuple[frozenset[int], ...]


def delete_vertex(t: Tree, v: int) -> VertexCut:
    """Components of ``T - v``, largest first."""
    t._check_vertex(v)
    comps = []
    for start in t.adjacency[v]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in t.adjacency[u]:
                if w != v and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(seen))
    comps.sort(key=lambda s: (-len(s), min(s)))
    return VertexCut(v, tuple(len(c) for c in comps), tuple(comps))


class HdvEntry(NamedTuple):
    vertex: int
    deg_t: int
    deg_h: int
    delta: int
    nonsingleton_components: int


def hdv_profile(t: Tree) -> list[HdvEntry]:
    """One entry per vertex of degree at least 3."""
    deg = t.degrees()
    out = []
    for v in range(t.n):
        if deg[v] < 3:
            continue
        deg_h = sum(1 for w in t.adjacency[v] if deg[w] >= 3)
        cut = delete_vertex(t, v)
        big = sum(1 for s in cut.component_sizes if s > 1)
        out.append(HdvEntry(v, deg[v], deg_h, deg[v] - deg_h, big))
    return out
