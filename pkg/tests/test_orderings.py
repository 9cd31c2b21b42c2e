import itertools

import numpy as np
import pytest

from causalconf import (
    CompleteOrdering,
    DimensionTooLarge,
    HypothesisClass,
    PDMatrix,
    enumerate_all_orderings,
    enumerate_parent_sets,
    enumerate_pev_classes,
    ev_optimal_orderings,
    invert_pd,
    log_det,
    tie_equal,
)
from causalconf.matrixcore import ConditionalCache, index_mask
from causalconf.orderings import I_BEFORE_J, J_BEFORE_I

from _fixtures import COV_IDENTIFIABLE, cond_var_oracle, random_pd, successors


class TestCompleteOrdering:
    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            CompleteOrdering((0, 0, 2))

    def test_predecessors_successors_partition(self):
        order = CompleteOrdering((2, 0, 3, 1))
        for k in range(4):
            parts = set(order.predecessors(k)) | {k} | set(order.successors(k))
            assert parts == {0, 1, 2, 3}
        assert order.precedes(2, 1)
        assert not order.precedes(1, 2)


class TestParentSets:
    def test_d2_single_empty_set(self):
        assert list(enumerate_parent_sets(2, 0, 1)) == [()]

    def test_d4_explicit(self):
        got = list(enumerate_parent_sets(4, 0, 1))
        assert got == [(), (2,), (3,), (2, 3)]

    def test_d10_count(self):
        assert sum(1 for _ in enumerate_parent_sets(10, 0, 1)) == 256

    def test_guard(self):
        with pytest.raises(DimensionTooLarge):
            list(enumerate_parent_sets(25, 0, 1))

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_cover_property(self, d):
        # parent sets of i over all orderings with i before j == enumeration
        i, j = 0, 1
        from_orderings = {
            order.predecessors(i)
            for order in enumerate_all_orderings(d)
            if order.precedes(i, j)
        }
        assert from_orderings == set(enumerate_parent_sets(d, i, j))


class TestPevClasses:
    def test_d2_two_classes(self):
        got = list(enumerate_pev_classes(2, 0, 1))
        assert got == [
            HypothesisClass(I_BEFORE_J, (), (0,)),
            HypothesisClass(J_BEFORE_I, (1,), ()),
        ]

    def test_d3_brute_force_grouping(self):
        got = set(enumerate_pev_classes(3, 0, 1))
        want = {
            HypothesisClass.from_ordering(order, 0, 1)
            for order in enumerate_all_orderings(3)
        }
        assert got == want
        forward = {
            (c.parents_i, c.parents_j) for c in got if c.direction == I_BEFORE_J
        }
        assert forward == {((), (0,)), ((), (0, 2)), ((2,), (0, 2))}

    def test_d10_count(self):
        assert sum(1 for _ in enumerate_pev_classes(10, 0, 1)) == 13122

    def test_guard(self):
        with pytest.raises(DimensionTooLarge):
            list(enumerate_pev_classes(17, 0, 1))

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_class_cover_exactly_once(self, d):
        # every ordering's induced class appears exactly once in the enumeration
        i, j = 1, 2 if d > 2 else 0
        classes = list(enumerate_pev_classes(d, i, j))
        assert len(classes) == len(set(classes)) == 2 * 3 ** (d - 2)
        induced = {
            HypothesisClass.from_ordering(order, i, j)
            for order in enumerate_all_orderings(d)
        }
        assert induced == set(classes)


class TestAllOrderings:
    @pytest.mark.parametrize("d,count", [(1, 1), (3, 6), (5, 120)])
    def test_counts(self, d, count):
        got = list(enumerate_all_orderings(d))
        assert len(got) == count
        assert len(set(got)) == count

    def test_guard(self):
        with pytest.raises(DimensionTooLarge):
            list(enumerate_all_orderings(9))


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_determinant_identity(d):
    # conditional precision entries along any ordering multiply to det
    rng = np.random.default_rng((31, d))
    arr = random_pd(rng, d)
    prec = invert_pd(PDMatrix(arr))
    logdet = log_det(prec)
    for order in itertools.islice(enumerate_all_orderings(d), 24):
        total = sum(
            np.log(cond_var_oracle(prec.entries, k, successors(order.perm, k)))
            for k in range(d)
        )
        assert total == pytest.approx(logdet, rel=1e-9, abs=1e-9)


class TestEvSearch:
    def test_identity_all_orderings_tie(self):
        res = ev_optimal_orderings(PDMatrix(np.eye(3)))
        assert res.min_score == pytest.approx(3.0)
        assert sorted(o.perm for o in res.orderings) == sorted(
            itertools.permutations(range(3))
        )

    def test_identity_d4_reconstruction_complete(self):
        res = ev_optimal_orderings(PDMatrix(np.eye(4)))
        assert len(res.orderings) == 24

    def test_identifiable_fixture_unique_argmin(self):
        prec = invert_pd(PDMatrix(COV_IDENTIFIABLE))
        res = ev_optimal_orderings(prec)
        assert [o.perm for o in res.orderings] == [(0, 1, 2)]
        # brute-force value on the covariance side of the duality
        brute = min(
            sum(
                cond_var_oracle(prec.entries, k, successors(perm, k))
                for k in range(3)
            )
            for perm in itertools.permutations(range(3))
        )
        assert res.min_score == pytest.approx(brute, rel=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_dp_matches_brute_force_d5(self, seed):
        rng = np.random.default_rng((32, seed))
        prec = PDMatrix(random_pd(rng, 5))
        res = ev_optimal_orderings(prec)
        cache = ConditionalCache(prec)
        scores = {}
        for order in enumerate_all_orderings(5):
            scores[order.perm] = sum(
                cache.cond_var(k, index_mask(successors(order.perm, k)))
                for k in range(5)
            )
        best = min(scores.values())
        assert res.min_score == pytest.approx(best, rel=1e-10)
        brute_arg = {p for p, s in scores.items() if tie_equal(s, best)}
        assert {o.perm for o in res.orderings} == brute_arg

    def test_reachable_states_and_witness(self):
        prec = PDMatrix(np.eye(3))
        res = ev_optimal_orderings(prec)
        reachable = res.reachable_states()
        assert set(reachable) == set(range(8))
        order = res.witness_ordering(0b011, 0, reachable)
        assert order.perm[1] == 0  # chosen at a two-element state -> position 1
        assert sorted(order.perm) == [0, 1, 2]

    def test_guard(self):
        with pytest.raises(DimensionTooLarge):
            ev_optimal_orderings(PDMatrix(np.eye(21)))
