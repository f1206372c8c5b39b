from __future__ import annotations

import itertools
import random

import pytest

from nimtree.errors import MalformedInput, NotATree, SizeLimitExceeded, VertexOutOfRange
from nimtree.tree import (
    CanonicalCode,
    Tree,
    canonical_code,
    delete_vertex,
    enumerate_free_codes,
    enumerate_free_trees,
    hdv_profile,
    parse_edge_list,
    path_tree,
    spider_tree,
    star_tree,
    tree_from_level_sequence,
)

from oracles import otter_free_tree_counts, random_tree

DOUBLE_STAR = Tree.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
FORK = spider_tree([2, 1, 1])


class TestParse:
    def test_single_edge(self):
        t = parse_edge_list("2\n0 1")
        assert t.n == 2 and t.edges == [(0, 1)]

    def test_singleton(self):
        t = parse_edge_list("1\n")
        assert t.n == 1 and t.edges == []

    def test_star(self):
        t = parse_edge_list("4\n0 1\n0 2\n0 3")
        assert t == star_tree(4)

    def test_comments_and_blank_lines(self):
        t = parse_edge_list("# a path\n3\n\n0 1\n# middle\n2 1\n")
        assert t == path_tree(3)

    def test_adjacency_is_sorted(self):
        t = parse_edge_list("4\n0 3\n0 1\n0 2")
        assert t.adjacency[0] == (1, 2, 3)

    @pytest.mark.parametrize("text", ["", "x\n", "3\n0 1 2\n1 2", "2\n0 a", "2 2\n0 1", "2\n0 0"])
    def test_malformed(self, text):
        with pytest.raises(MalformedInput):
            parse_edge_list(text)

    @pytest.mark.parametrize("text", ["3\n0 1\n1 2\n2 0", "4\n0 1\n2 3\n0 1", "4\n0 1\n2 3", "3\n0 1"])
    def test_not_a_tree(self, text):
        with pytest.raises(NotATree):
            parse_edge_list(text)

    def test_vertex_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            parse_edge_list("2\n0 5")

    def test_too_large(self):
        with pytest.raises(SizeLimitExceeded):
            parse_edge_list("65\n")

    def test_round_trip(self):
        t = spider_tree([3, 2, 2, 1])
        assert parse_edge_list(t.to_edge_list()) == t


class TestCanonicalCode:
    def test_relabeled_paths_agree(self):
        a = Tree.from_edges(3, [(0, 1), (1, 2)])
        b = Tree.from_edges(3, [(1, 0), (0, 2)])
        assert canonical_code(a) == canonical_code(b)

    def test_path_and_star_differ(self):
        assert canonical_code(path_tree(4)) != canonical_code(star_tree(4))

    def test_fork_all_relabelings(self):
        codes = {canonical_code(FORK.relabel(p)) for p in itertools.permutations(range(5))}
        assert len(codes) == 1

    def test_length_is_n(self):
        for t in enumerate_free_trees(9):
            assert len(canonical_code(t).code) == 9

    def test_string_round_trip(self):
        code = canonical_code(FORK)
        assert CanonicalCode.parse(str(code)) == code

    def test_complete_invariant_up_to_10(self):
        rng = random.Random(1)
        for n in range(1, 11):
            trees = list(enumerate_free_trees(n))
            codes = [canonical_code(t) for t in trees]
            assert len(set(codes)) == len(codes)
            for t, c in zip(trees, codes):
                perm = list(range(n))
                rng.shuffle(perm)
                assert canonical_code(t.relabel(perm)) == c

    def test_random_labeled_trees_land_in_the_enumeration(self):
        rng = random.Random(5)
        known = {canonical_code(t) for t in enumerate_free_trees(9)}
        for _ in range(50):
            assert canonical_code(random_tree(9, rng)) in known


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 1), (7, 11), (10, 106)])
    def test_examples(self, n, count):
        assert sum(1 for _ in enumerate_free_trees(n)) == count

    def test_matches_otter_up_to_14(self):
        expected = otter_free_tree_counts(14)
        for n in range(1, 15):
            codes = list(enumerate_free_codes(n))
            assert len(codes) == expected[n], f"n={n}"

    def test_codes_distinct_at_12(self):
        codes = [canonical_code(t) for t in enumerate_free_trees(12)]
        assert len(set(codes)) == len(codes) == 551

    def test_shards_partition(self):
        full = sorted(enumerate_free_codes(11))
        parts = []
        for i in range(3):
            parts.extend(enumerate_free_codes(11, shard=(i, 3)))
        assert sorted(parts) == full

    def test_level_sequence_builder_gives_valid_trees(self):
        for levels in enumerate_free_codes(8):
            t = tree_from_level_sequence(levels)
            assert Tree.from_edges(t.n, t.edges) == t

    def test_cap(self):
        with pytest.raises(SizeLimitExceeded):
            next(enumerate_free_trees(21))


class TestVertexDeletion:
    def test_star_center(self):
        assert sorted(delete_vertex(star_tree(5), 0).component_sizes) == [1, 1, 1, 1]

    def test_fork_branch_vertex(self):
        assert sorted(delete_vertex(FORK, 0).component_sizes) == [1, 1, 2]

    def test_path_interior(self):
        assert sorted(delete_vertex(path_tree(4), 1).component_sizes) == [1, 2]

    def test_components_match_degree(self):
        for n in range(1, 9):
            for t in enumerate_free_trees(n):
                for v in range(n):
                    cut = delete_vertex(t, v)
                    assert len(cut.component_sizes) == t.degree(v)
                    assert sum(cut.component_sizes) == n - 1
                    union = frozenset().union(*cut.component_vertex_sets)
                    assert union == frozenset(range(n)) - {v}

    def test_bad_vertex(self):
        with pytest.raises(VertexOutOfRange):
            delete_vertex(path_tree(3), 3)


class TestHdvProfile:
    def test_star(self):
        (e,) = hdv_profile(star_tree(6))
        assert (e.deg_t, e.deg_h, e.delta, e.nonsingleton_components) == (5, 0, 5, 0)

    def test_double_star(self):
        entries = hdv_profile(DOUBLE_STAR)
        assert [(e.deg_t, e.deg_h, e.delta, e.nonsingleton_components) for e in entries] == [
            (3, 1, 2, 1), (3, 1, 2, 1)]

    def test_path_has_none(self):
        assert hdv_profile(path_tree(5)) == []


def test_caterpillar_predicate():
    assert path_tree(6).is_caterpillar()
    assert DOUBLE_STAR.is_caterpillar()
    assert not spider_tree([2, 2, 2]).is_caterpillar()
