"""k-NIM classification of explicit trees and the associated counts.

A tree with ``M(T) >= k + 1`` is k-NIM exactly when every high degree vertex
(HDV, degree >= 3) ``v`` satisfies

  (i)  at most ``3 - k`` components of ``T - v`` have more than one vertex;
  (ii) ``delta(v) = deg_T(v) - deg_H(v) >= k + 2``, where ``deg_H`` counts
       HDV neighbours.

The threshold in (ii) is ``k + 2``.  The literal ``k + 1`` variant is kept
behind ``literal_threshold=True`` because it does not reproduce the known
counts (it admits the double star on 6 vertices as NIM).  Paths count as
NIM; for ``k = 2, 3`` trees with ``M(T) < k + 1`` are reported as below
threshold and are not counted.  No tree is k-NIM for ``k >= 4``.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import InvalidK, InvalidRange, NotNimTree, SizeLimitExceeded
from .multiplicity import max_multiplicity
from .tree import MAX_VERTICES, Tree, enumerate_free_trees, hdv_profile, star_tree

ORACLE_LIMIT = 18


class Verdict(str, enum.Enum):
    KNIM = "KNim"
    NOT_KNIM = "NotKNim"
    BELOW_THRESHOLD = "BelowMultiplicityThreshold"


@dataclass(frozen=True)
class Failure:
    vertex: Optional[int]
    condition: str
    observed: int
    required: str

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "condition": self.condition,
            "observed": self.observed,
            "required": self.required,
        }


@dataclass(frozen=True)
class KNimVerdict:
    k: int
    verdict: Verdict
    m_of_t: int
    failures: tuple[Failure, ...] = field(default_factory=tuple)

    @property
    def is_knim(self) -> bool:
        return self.verdict is Verdict.KNIM

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "verdict": self.verdict.value,
            "m": self.m_of_t,
            "failures": [f.to_json() for f in self.failures],
        }


def classify_k_nim(t: Tree, k: int, literal_threshold: bool = False) -> KNimVerdict:
    if k < 1:
        raise InvalidK(f"k must be at least 1, got {k}")
    m = max_multiplicity(t)
    if k >= 4:
        rule = Failure(None, "k>=4", k, "no tree is k-NIM for k >= 4")
        return KNimVerdict(k, Verdict.NOT_KNIM, m, (rule,))
    if k == 1 and t.is_path():
        return KNimVerdict(k, Verdict.KNIM, m)
    if m < k + 1:
        return KNimVerdict(k, Verdict.BELOW_THRESHOLD, m)

    max_big = 3 - k
    min_delta = k + 1 if literal_threshold else k + 2
    failures = []
    for e in hdv_profile(t):
        if e.nonsingleton_components > max_big:
            failures.append(Failure(e.vertex, "i", e.nonsingleton_components, f"<= {max_big}"))
        if e.delta < min_delta:
            failures.append(Failure(e.vertex, "ii", e.delta, f">= {min_delta}"))
    verdict = Verdict.NOT_KNIM if failures else Verdict.KNIM
    return KNimVerdict(k, verdict, m, tuple(failures))


def is_nim(t: Tree) -> bool:
    return classify_k_nim(t, 1).is_knim


# ---------------------------------------------------------------------------
# counting


def _count_shard(args: tuple[int, int, bool, int, int]) -> int:
    n, k, literal, i, m = args
    return sum(
        1 for t in enumerate_free_trees(n, shard=(i, m))
        if classify_k_nim(t, k, literal_threshold=literal).is_knim
    )


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NIMTREE_THREADS", "1")))
    except ValueError:
        return 1


def count_k_nim_oracle(
    n: int, k: int, literal_threshold: bool = False, workers: Optional[int] = None
) -> int:
    """Count isomorphism classes on ``n`` vertices classified k-NIM, by
    enumerating every free tree."""
    if k < 1:
        raise InvalidK(f"k must be at least 1, got {k}")
    if not 1 <= n <= ORACLE_LIMIT:
        raise SizeLimitExceeded(f"oracle counting limited to 1..{ORACLE_LIMIT}, got {n}")
    workers = _default_workers() if workers is None else max(1, workers)
    if workers == 1 or n < 12:
        return _count_shard((n, k, literal_threshold, 0, 1))
    jobs = [(n, k, literal_threshold, i, workers) for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_shard, jobs))


def k_nim_trees(n: int, k: int, literal_threshold: bool = False) -> Iterator[Tree]:
    if not 1 <= n <= ORACLE_LIMIT:
        raise SizeLimitExceeded(f"oracle enumeration limited to 1..{ORACLE_LIMIT}, got {n}")
    for t in enumerate_free_trees(n):
        if classify_k_nim(t, k, literal_threshold=literal_threshold).is_knim:
            yield t


TWO_NIM_PREFIX = (0, 0, 0, 0, 1, 2, 3)


def two_nim_closed_form(n: int) -> int:
    """Number of 2-NIM trees on ``n`` vertices."""
    if n < 1:
        raise InvalidRange(f"n must be positive, got {n}")
    if n < 8:
        return TWO_NIM_PREFIX[n - 1]
    h = n - 4
    return (h // 2) * (-(-h // 2))


def two_nim_summation_form(n: int) -> int:
    """The same count as a literal sum, valid for ``n >= 10``."""
    if n < 10:
        raise InvalidRange(f"summation form needs n >= 10, got {n}")
    return n - 4 + (n - 8) // 2 + sum((n - 6 - j) // 2 for j in range(1, n - 7))


def three_nim_count(n: int) -> int:
    """1 when the star ``S_n`` is 3-NIM, else 0; no other tree is."""
    if n < 1:
        raise InvalidRange(f"n must be positive, got {n}")
    if n > MAX_VERTICES:
        return 1
    return int(classify_k_nim(star_tree(n), 3).is_knim)


# ---------------------------------------------------------------------------
# skeleton signatures


@dataclass(frozen=True)
class Run:
    """Maximal block of consecutive spine HDVs with their leaf counts."""

    pendants: tuple[int, ...]


@dataclass(frozen=True)
class Bridge:
    """Stretch of degree-2 spine vertices between two runs; ``length`` is
    the number of edges between the facing HDVs (always >= 2)."""

    length: int


@dataclass(frozen=True)
class SkeletonSignature:
    is_path: bool
    blocks: tuple  # alternating Run, Bridge, Run, ...
    tails: tuple[int, int] = (0, 0)
    n: int = 0

    @property
    def hdv_pendants(self) -> tuple[int, ...]:
        return tuple(p for b in self.blocks if isinstance(b, Run) for p in b.pendants)

    @property
    def bridge_count(self) -> int:
        return sum(1 for b in self.blocks if isinstance(b, Bridge))

    def variable_hdv_count(self) -> int:
        """HDVs of degree >= 4 in the tree this signature describes."""
        return sum(1 for d in self.hdv_degrees() if d >= 4)

    def hdv_degrees(self) -> list[int]:
        degs = []
        runs = [b for b in self.blocks if isinstance(b, Run)]
        total = sum(len(r.pendants) for r in runs)
        seen = 0
        for r in runs:
            for p in r.pendants:
                spine_nbrs = (seen > 0 or self.tails[0] > 0) + (seen < total - 1 or self.tails[1] > 0)
                degs.append(p + spine_nbrs)
                seen += 1
        return degs

    def to_json(self) -> dict:
        blocks = []
        for b in self.blocks:
            if isinstance(b, Run):
                blocks.append({"run": list(b.pendants)})
            else:
                blocks.append({"bridge": b.length})
        return {"n": self.n, "is_path": self.is_path, "tails": list(self.tails), "blocks": blocks}

    def _key(self) -> tuple:
        return tuple(("r", b.pendants) if isinstance(b, Run) else ("b", (b.length,)) for b in self.blocks)

    def reversed(self) -> "SkeletonSignature":
        blocks = tuple(Run(b.pendants[::-1]) if isinstance(b, Run) else b for b in self.blocks[::-1])
        return SkeletonSignature(self.is_path, blocks, self.tails[::-1], self.n)


def skeleton_signature(t: Tree) -> SkeletonSignature:
    """Spine decomposition of a NIM tree.

    The spine is the shortest path containing every HDV.  ``pendants`` counts
    the leaf neighbours of each spine HDV (spine neighbours excluded); a tail
    is a path of two or more edges leaving an end HDV, recorded by its length
    in edges (0 when absent).  Of the two reading directions the
    lexicographically smaller one is returned.
    """
    if not is_nim(t):
        raise NotNimTree("skeleton signatures are defined for NIM trees only")
    if t.is_path():
        return SkeletonSignature(True, (), (0, 0), t.n)
    deg = t.degrees()
    hdvs = [v for v in range(t.n) if deg[v] >= 3]
    spine = _hdv_spine(t, hdvs)
    on_spine = set(spine)
    hdv_set = set(hdvs)

    if len(spine) == 1:
        c = spine[0]
        arms = sorted((_arm_length(t, c, w) for w in t.adjacency[c] if deg[w] > 1), reverse=True)
        tails = (arms + [0, 0])[:2]
    else:
        tails = []
        for end in (spine[0], spine[-1]):
            arms = [_arm_length(t, end, w) for w in t.adjacency[end]
                    if w not in on_spine and deg[w] > 1]
            tails.append(max(arms, default=0))

    blocks: list = []
    run: list[int] = []
    gap = 0
    for v in spine:
        if v in hdv_set:
            if gap:
                blocks.append(Run(tuple(run)))
                blocks.append(Bridge(gap + 1))
                run, gap = [], 0
            run.append(sum(1 for w in t.adjacency[v] if deg[w] == 1 and w not in on_spine))
        else:
            gap += 1
    blocks.append(Run(tuple(run)))

    sig = SkeletonSignature(False, tuple(blocks), (tails[0], tails[1]), t.n)
    rev = sig.reversed()
    return min(sig, rev, key=lambda s: (s._key(), s.tails))


def _hdv_spine(t: Tree, hdvs: list[int]) -> list[int]:
    """Shortest path through all HDVs (they lie on one path in a NIM tree)."""
    if len(hdvs) == 1:
        return hdvs
    hdv_set = set(hdvs)
    a = _farthest_marked(t, hdvs[0], hdv_set)
    b = _farthest_marked(t, a, hdv_set)
    return _path_between(t, a, b)


def _farthest_marked(t: Tree, start: int, marked: set[int]) -> int:
    dist = {start: 0}
    stack = [start]
    best = start
    while stack:
        u = stack.pop()
        for w in t.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                stack.append(w)
                if w in marked and (dist[w], -w) > (dist[best], -best):
                    best = w
    return best


def _path_between(t: Tree, a: int, b: int) -> list[int]:
    prev = {a: a}
    stack = [a]
    while stack:
        u = stack.pop()
        for w in t.adjacency[u]:
            if w not in prev:
                prev[w] = u
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def _arm_length(t: Tree, hub: int, first: int) -> int:
    length, prev, cur = 1, hub, first
    while True:
        nxt = [w for w in t.adjacency[cur] if w != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def tree_from_signature(sig: SkeletonSignature) -> Tree:
    """Build the tree described by a signature."""
    if sig.is_path:
        from .tree import path_tree

        return path_tree(sig.n)
    edges: list[tuple[int, int]] = []
    counter = iter(range(MAX_VERTICES + 1))

    def fresh() -> int:
        return next(counter)

    def hang_path(start: int, length: int) -> None:
        prev = start
        for _ in range(length):
            v = fresh()
            edges.append((prev, v))
            prev = v

    prev_spine: Optional[int] = None
    first_hdv: Optional[int] = None
    last_hdv: Optional[int] = None
    for b in sig.blocks:
        if isinstance(b, Run):
            for p in b.pendants:
                v = fresh()
                if prev_spine is not None:
                    edges.append((prev_spine, v))
                if first_hdv is None:
                    first_hdv = v
                for _ in range(p):
                    edges.append((v, fresh()))
                prev_spine = last_hdv = v
        else:
            for _ in range(b.length - 1):
                v = fresh()
                edges.append((prev_spine, v))
                prev_spine = v
    hang_path(first_hdv, sig.tails[0])
    hang_path(last_hdv, sig.tails[1])
    n = len(edges) + 1
    return Tree.from_edges(n, edges)
