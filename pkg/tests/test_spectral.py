from __future__ import annotations

import math
import random

import numpy as np
import pytest

from nimtree.errors import MultiplicityShortfall, NonConvergence, SizeLimitExceeded
from nimtree.multiplicity import path_cover_number
from nimtree.spectral import (
    SymMatrix,
    clusters,
    interlacing_check,
    jacobi_eigenvalues,
    random_tree_matrix,
    witness_matrix,
)
from nimtree.tree import enumerate_free_trees, path_tree, spider_tree, star_tree

from oracles import random_tree


def cubic_roots(m: np.ndarray) -> list[float]:
    """Eigenvalues of a symmetric 3x3 matrix by the trigonometric formula."""
    q = np.trace(m) / 3
    p1 = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    p2 = sum((m[i, i] - q) ** 2 for i in range(3)) + 2 * p1
    p = math.sqrt(p2 / 6)
    b = (m - q * np.eye(3)) / p
    r = max(-1.0, min(1.0, np.linalg.det(b) / 2))
    phi = math.acos(r) / 3
    e1 = q + 2 * p * math.cos(phi)
    e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    return sorted([e1, e3, 3 * q - e1 - e3])


class TestJacobi:
    def test_diagonal(self):
        assert jacobi_eigenvalues(SymMatrix(np.diag([3.0, -1.0, 2.0]))) == [-1.0, 2.0, 3.0]

    def test_two_by_two(self):
        vals = jacobi_eigenvalues(SymMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert vals == pytest.approx([-1.0, 1.0], abs=1e-12)

    def test_random_cubic(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = rng.normal(size=(3, 3))
            a = a + a.T
            assert jacobi_eigenvalues(SymMatrix(a)) == pytest.approx(cubic_roots(a), abs=1e-9)

    def test_against_lapack(self):
        rng = np.random.default_rng(2)
        for n in (5, 17, 40):
            a = rng.normal(size=(n, n))
            a = a + a.T
            assert jacobi_eigenvalues(SymMatrix(a)) == pytest.approx(
                np.linalg.eigvalsh(a).tolist(), abs=1e-9)

    def test_sweep_budget(self):
        with pytest.raises(NonConvergence):
            jacobi_eigenvalues(SymMatrix([[1.0, 2.0], [2.0, 0.0]]), max_sweeps=0)

    def test_size_cap(self):
        with pytest.raises(SizeLimitExceeded):
            jacobi_eigenvalues(SymMatrix(np.eye(65)))


class TestSymMatrix:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            SymMatrix([[0.0, 1.0], [2.0, 0.0]])

    def test_pattern_must_match_tree(self):
        with pytest.raises(ValueError):
            SymMatrix(np.zeros((3, 3)), tree=path_tree(3))
        SymMatrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]], tree=path_tree(3))

    def test_delete(self):
        m = SymMatrix(np.diag([1.0, 2.0, 3.0])).delete(1)
        assert m.entries.tolist() == [[1.0, 0.0], [0.0, 3.0]]


class TestWitness:
    @pytest.mark.parametrize("t,expected", [
        (star_tree(4), 2), (path_tree(5), 1), (spider_tree([2, 1, 1]), 2)])
    def test_examples(self, t, expected):
        w = witness_matrix(t)
        assert w.achieved_multiplicity == expected == w.required

    def test_exhaustive_up_to_9(self):
        for n in range(1, 10):
            for t in enumerate_free_trees(n):
                w = witness_matrix(t)
                assert w.achieved_multiplicity == path_cover_number(t)
                off = w.matrix.entries[~np.eye(n, dtype=bool)]
                assert np.count_nonzero(off) == 2 * (n - 1)
                assert sum(w.eigenvalues) == pytest.approx(np.trace(w.matrix.entries),
                                                           rel=1e-9, abs=1e-9)
                assert w.gap >= 0.05

    def test_larger_sample(self):
        rng = random.Random(8)
        for _ in range(20):
            t = random_tree(14, rng)
            assert witness_matrix(t).achieved_multiplicity == path_cover_number(t)

    def test_json(self):
        data = witness_matrix(star_tree(5)).to_json()
        assert set(data) == {"m", "achieved", "eigenvalues", "gap", "tolerance"}
        assert data["m"] == data["achieved"] == 3

    def test_size_cap(self):
        with pytest.raises(SizeLimitExceeded):
            witness_matrix(path_tree(15))

    def test_shortfall_class_exists(self):
        assert issubclass(MultiplicityShortfall, ArithmeticError)


class TestInterlacing:
    def test_parter_vertex_of_star(self):
        w = witness_matrix(star_tree(5))
        report = interlacing_check(w.matrix, 0)
        zero = [e for e in report.entries if abs(e.eigenvalue) < 1e-6]
        assert len(zero) == 1
        assert (zero[0].multiplicity, zero[0].after_deletion) == (3, 4)
        assert report.ok

    def test_random_trials(self):
        rng = random.Random(99)
        nrng = np.random.default_rng(99)
        for _ in range(100):
            t = random_tree(rng.randint(2, 14), rng)
            report = interlacing_check(random_tree_matrix(t, nrng), rng.randrange(t.n))
            assert report.ok

    def test_diagonal(self):
        m = SymMatrix(np.diag([1.0, 1.0, 1.0, 2.0]))
        for v in range(4):
            report = interlacing_check(m, v)
            assert report.ok
            assert all(abs(e.change) <= 1 for e in report.entries)

    def test_detects_violation_format(self):
        report = interlacing_check(SymMatrix(np.eye(3)), 0)
        assert report.to_json()["ok"] is True
        assert report.entries[0].change == -1


def test_clusters():
    assert clusters([0.0, 1e-9, 1.0, 2.0, 2.0 + 1e-8], 1e-6) == [
        (pytest.approx(5e-10), 2), (1.0, 1), (pytest.approx(2.0), 2)]
