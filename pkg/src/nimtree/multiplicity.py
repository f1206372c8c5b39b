"""Path cover number, residual path maximization, and maximum multiplicity.

For a tree ``T`` the largest eigenvalue multiplicity over all real symmetric
matrices with graph ``T`` equals the path cover number ``P(T)``, and also the
maximum over vertex sets ``Q`` of (number of path components of ``T - Q``)
minus ``|Q|``.  Three independent routes to that number live here:

* :func:`path_cover_number`, a leaf-upward greedy,
* :func:`delta_brute_force`, exhaustive over all vertex subsets,
* :func:`rpm_set`, a tree dynamic program that also returns a maximizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SizeLimitExceeded
from .tree import Tree, _bfs_order

BRUTE_FORCE_LIMIT = 16


def path_cover_number(t: Tree) -> int:
    """Minimum number of vertex-disjoint paths covering every vertex.

    Processing vertices leaves-first, a vertex joins the paths of up to two
    children that still have a free end; every join removes one path.
    """
    parent, order = _bfs_order(t, 0)
    open_end = [False] * t.n
    joins = 0
    for v in reversed(order):
        free = sum(1 for w in t.adjacency[v] if w != parent[v] and open_end[w])
        used = min(free, 2)
        joins += used
        open_end[v] = used < 2
    return t.n - joins


def max_multiplicity(t: Tree) -> int:
    """``M(T)``, the maximum eigenvalue multiplicity over matrices on ``T``."""
    return path_cover_number(t)


def _subset_scores(t: Tree) -> tuple[np.ndarray, np.ndarray]:
    n = t.n
    masks = np.arange(1 << n, dtype=np.int64)
    size = np.bitwise_count(masks).astype(np.int64)
    keep = ~masks
    ok = np.ones(masks.shape, dtype=bool)
    for v in range(n):
        nb = 0
        for w in t.adjacency[v]:
            nb |= 1 << w
        outside = ((masks >> v) & 1) == 0
        ok &= ~outside | (np.bitwise_count(keep & nb) <= 2)
    inner_edges = np.zeros(masks.shape, dtype=np.int64)
    for u, w in t.edges:
        inner_edges += ((keep >> u) & (keep >> w) & 1).astype(np.int64)
    comps = (n - size) - inner_edges
    score = np.where(ok, comps - size, np.iinfo(np.int64).min)
    return score, size


def _mask_vertices(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def rpm_maximizers(t: Tree) -> tuple[int, list[frozenset[int]]]:
    """All vertex sets attaining the maximum, ordered by (size, sorted ids)."""
    if t.n > BRUTE_FORCE_LIMIT:
        raise SizeLimitExceeded(f"subset search limited to n <= {BRUTE_FORCE_LIMIT}")
    score, _ = _subset_scores(t)
    best = int(score.max())
    winners = sorted((_mask_vertices(int(m)) for m in np.flatnonzero(score == best)),
                     key=lambda q: (len(q), q))
    return best, [frozenset(q) for q in winners]


def delta_brute_force(t: Tree) -> tuple[int, frozenset[int]]:
    """Exhaustive ``(Delta(T), Q)``; ties go to the smallest, then
    lexicographically first, vertex set."""
    best, winners = rpm_maximizers(t)
    return best, winners[0]


def rpm_set(t: Tree) -> tuple[int, frozenset[int]]:
    """``(Delta(T), Q)`` by dynamic programming over a rooted tree.

    Per vertex ``v`` the states are: ``v`` in ``Q``, or ``v`` outside ``Q``
    joined to exactly ``c`` children outside ``Q`` (``c`` = 0, 1, 2).  A path
    component is counted at its topmost vertex.
    """
    NEG = -(1 << 30)
    parent, order = _bfs_order(t, 0)
    children = [[w for w in t.adjacency[v] if w != parent[v]] for v in range(t.n)]
    in_q = [0] * t.n
    free = [[NEG] * 3 for _ in range(t.n)]
    for v in reversed(order):
        kids = children[v]
        in_q[v] = -1 + sum(max(in_q[u], 1 + max(free[u])) for u in kids)
        base = sum(in_q[u] for u in kids)
        gains = sorted((max(free[u][0], free[u][1]) - in_q[u] for u in kids), reverse=True)
        for c in range(3):
            if c <= len(kids):
                free[v][c] = base + sum(gains[:c])

    q: set[int] = set()

    def take(v: int, state: str, c: int = 0) -> None:
        # iterative walk: (vertex, state, joined-children count)
        stack = [(v, state, c)]
        while stack:
            x, st, cc = stack.pop()
            kids = children[x]
            if st == "q":
                q.add(x)
                for u in kids:
                    if in_q[u] >= 1 + max(free[u]):
                        stack.append((u, "q", 0))
                    else:
                        stack.append((u, "free", _argmax(free[u])))
            else:
                ranked = sorted(kids, key=lambda u: (-(max(free[u][0], free[u][1]) - in_q[u]), u))
                joined = ranked[:cc]
                for u in kids:
                    if u in joined:
                        stack.append((u, "free", 0 if free[u][0] >= free[u][1] else 1))
                    else:
                        stack.append((u, "q", 0))

    root = order[0]
    if in_q[root] > 1 + max(free[root]):
        take(root, "q")
        best = in_q[root]
    else:
        take(root, "free", _argmax(free[root]))
        best = 1 + max(free[root])
    return best, frozenset(q)


def _argmax(values: list[int]) -> int:
    return max(range(len(values)), key=lambda i: (values[i], -i))


def paths_after_removal(t: Tree, q: frozenset[int]) -> Optional[int]:
    """Number of components of ``T - Q`` if all are paths, else ``None``."""
    rest = [v for v in range(t.n) if v not in q]
    for v in rest:
        if sum(1 for w in t.adjacency[v] if w not in q) > 2:
            return None
    inner = sum(1 for u, w in t.edges if u not in q and w not in q)
    return len(rest) - inner


@dataclass(frozen=True)
class MultiplicityProfile:
    path_cover: int
    delta_max: Optional[int]
    max_multiplicity: int
    rpm_set: frozenset[int]

    def to_json(self) -> dict:
        return {
            "path_cover": self.path_cover,
            "delta_max": self.delta_max,
            "max_multiplicity": self.max_multiplicity,
            "rpm_set": sorted(self.rpm_set),
        }


def multiplicity_profile(t: Tree, brute_force: Optional[bool] = None) -> MultiplicityProfile:
    """``P``, ``M`` and an RPM set; ``Delta`` is filled in when the exhaustive
    search runs (by default for ``n <= 16``)."""
    if brute_force is None:
        brute_force = t.n <= BRUTE_FORCE_LIMIT
    p = path_cover_number(t)
    if brute_force:
        delta, q = delta_brute_force(t)
        return MultiplicityProfile(p, delta, p, q)
    _, q = rpm_set(t)
    return MultiplicityProfile(p, None, p, q)
