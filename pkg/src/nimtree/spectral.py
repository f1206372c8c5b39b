"""Numerical checks of the multiplicity theory.

A cyclic Jacobi eigensolver, a matrix on a given tree whose eigenvalue 0
reaches the maximum multiplicity ``M(T)``, and a check that deleting one
vertex moves any eigenvalue multiplicity by at most one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import MultiplicityShortfall, NonConvergence, SizeLimitExceeded
from .multiplicity import max_multiplicity, rpm_maximizers, rpm_set, BRUTE_FORCE_LIMIT
from .tree import MAX_VERTICES, Tree

WITNESS_LIMIT = 14
SWEEP_BUDGET = 50
OFF_DIAGONAL_TOL = 1e-12
CLUSTER_REL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense real symmetric matrix, optionally tied to the tree it lives on."""

    entries: np.ndarray
    tree: Optional[Tree] = None

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        if self.tree is not None:
            if self.tree.n != a.shape[0]:
                raise ValueError("matrix size does not match the tree")
            pattern = (a != 0) & ~np.eye(a.shape[0], dtype=bool)
            edges = np.zeros_like(pattern)
            for u, w in self.tree.edges:
                edges[u, w] = edges[w, u] = True
            if not np.array_equal(pattern, edges):
                raise ValueError("off-diagonal nonzero pattern differs from the tree's edges")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def delete(self, v: int) -> "SymMatrix":
        keep = [i for i in range(self.n) if i != v]
        return SymMatrix(self.entries[np.ix_(keep, keep)])

    def to_json(self) -> list[list[float]]:
        return self.entries.tolist()


def jacobi_eigenvalues(m: SymMatrix, max_sweeps: int = SWEEP_BUDGET,
                       tol: float = OFF_DIAGONAL_TOL) -> list[float]:
    """Sorted eigenvalues by cyclic Jacobi rotations."""
    n = m.n
    if n > MAX_VERTICES:
        raise SizeLimitExceeded(f"eigensolver limited to n <= {MAX_VERTICES}")
    a = np.array(m.entries, dtype=float)
    scale = np.linalg.norm(a)
    if n <= 1 or scale == 0:
        return sorted(np.diag(a).tolist())
    target = tol * scale
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a[off_mask]))
        if off <= target:
            return sorted(np.diag(a).tolist())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    raise NonConvergence(f"Jacobi iteration exceeded {max_sweeps} sweeps")


def cluster_tolerance(m: SymMatrix) -> float:
    return CLUSTER_REL_TOL * max(1.0, m.norm())


def clusters(values: list[float], tol: float) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose neighbours are closer than ``tol``;
    returns (mean, size) pairs."""
    out: list[list[float]] = []
    for x in sorted(values):
        if out and x - out[-1][-1] < tol:
            out[-1].append(x)
        else:
            out.append([x])
    return [(sum(g) / len(g), len(g)) for g in out]


def multiplicity_of(values: list[float], target: float, tol: float) -> int:
    return sum(1 for x in values if abs(x - target) < tol)


@dataclass(frozen=True, eq=False)
class SpectralWitness:
    tree: Tree
    matrix: SymMatrix
    target: float
    required: int
    achieved_multiplicity: int
    cluster_tolerance: float
    eigenvalues: list[float]
    gap: float
    rpm_set: frozenset[int] = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {
            "m": self.required,
            "achieved": self.achieved_multiplicity,
            "eigenvalues": self.eigenvalues,
            "gap": self.gap,
            "tolerance": self.cluster_tolerance,
        }


def witness_matrix(t: Tree) -> SpectralWitness:
    """A matrix on ``t`` with eigenvalue 0 of multiplicity ``M(t)``.

    Removing an RPM set ``Q`` leaves paths; each path on ``m`` vertices gets
    unit off-diagonals and the constant diagonal ``-2 cos(pi/(m+1))``, which
    puts 0 in its spectrum.  Edges at ``Q`` are 1 and ``Q`` diagonals 0.
    """
    if t.n > WITNESS_LIMIT:
        raise SizeLimitExceeded(f"witness construction limited to n <= {WITNESS_LIMIT}")
    required = max_multiplicity(t)
    if t.n <= BRUTE_FORCE_LIMIT:
        _, winners = rpm_maximizers(t)
        q = winners[0]
    else:  # pragma: no cover - unreachable under the size cap
        _, q = rpm_set(t)
    a = np.zeros((t.n, t.n))
    for u, w in t.edges:
        a[u, w] = a[w, u] = 1.0
    for comp in _components_without(t, q):
        shift = -2.0 * math.cos(math.pi / (len(comp) + 1))
        for v in comp:
            a[v, v] = shift
    m = SymMatrix(a, tree=t)
    values = jacobi_eigenvalues(m)
    tol = cluster_tolerance(m)
    achieved = multiplicity_of(values, 0.0, tol)
    rest = [abs(x) for x in values if abs(x) >= tol]
    gap = min(rest) if rest else math.inf
    if achieved != required:
        raise MultiplicityShortfall(
            f"eigenvalue 0 has multiplicity {achieved}, expected {required}")
    return SpectralWitness(t, m, 0.0, required, achieved, tol, values, gap, q)


def _components_without(t: Tree, q: frozenset[int]) -> list[list[int]]:
    seen = set(q)
    comps = []
    for start in range(t.n):
        if start in seen:
            continue
        seen.add(start)
        comp, stack = [], [start]
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in t.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class InterlacingEntry:
    eigenvalue: float
    multiplicity: int
    after_deletion: int

    @property
    def change(self) -> int:
        return self.after_deletion - self.multiplicity


@dataclass(frozen=True)
class InterlacingReport:
    vertex: int
    entries: tuple[InterlacingEntry, ...]
    violations: tuple[InterlacingEntry, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        def row(e: InterlacingEntry) -> dict:
            return {"eigenvalue": e.eigenvalue, "multiplicity": e.multiplicity,
                    "after_deletion": e.after_deletion}

        return {"vertex": self.vertex, "ok": self.ok,
                "entries": [row(e) for e in self.entries],
                "violations": [row(e) for e in self.violations]}


def interlacing_check(m: SymMatrix, v: int) -> InterlacingReport:
    """Compare each eigenvalue cluster of ``m`` with the same value in ``m(v)``."""
    if not 0 <= v < m.n:
        raise IndexError(f"vertex {v} out of range for a {m.n}x{m.n} matrix")
    tol = cluster_tolerance(m)
    full = jacobi_eigenvalues(m)
    sub = jacobi_eigenvalues(m.delete(v)) if m.n > 1 else []
    entries = []
    for value, mult in clusters(full, tol):
        entries.append(InterlacingEntry(value, mult, multiplicity_of(sub, value, tol)))
    bad = tuple(e for e in entries if abs(e.change) > 1)
    return InterlacingReport(v, tuple(entries), bad)


def random_tree_matrix(t: Tree, rng: np.random.Generator) -> SymMatrix:
    """Random weights on the edges (bounded away from 0) and the diagonal."""
    a = np.diag(rng.normal(size=t.n))
    for u, w in t.edges:
        x = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        a[u, w] = a[w, u] = x
    return SymMatrix(a, tree=t)
