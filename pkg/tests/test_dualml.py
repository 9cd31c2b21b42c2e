import numpy as np
import pytest

from causalconf import (
    CompleteOrdering,
    PDMatrix,
    Regime,
    dual_loglik,
    effect_from_ordering,
    empirical_covariance,
    enumerate_all_orderings,
    estimate_effects,
    generate_benchmark_scm,
    invert_pd,
    sample,
    sup_ev,
    sup_general,
    sup_pev,
    true_effect,
)
from causalconf.matrixcore import ConditionalCache
from causalconf.orderings import I_BEFORE_J, HypothesisClass

from _fixtures import (
    AMBIGUOUS_EFFECT,
    COV_AMBIGUOUS,
    COV_IDENTIFIABLE,
    cond_oracle,
    random_pd,
)


def prec_of(arr):
    return invert_pd(PDMatrix(arr))


class TestDualLoglik:
    def test_identity_at_identity(self):
        m = PDMatrix(np.eye(4))
        assert dual_loglik(m, m) == pytest.approx(-4.0)

    def test_scaled_diagonal_hand_value(self):
        d = 3
        sigma = PDMatrix(np.diag([2.0] * d))
        prec_hat = PDMatrix(np.eye(d))
        assert dual_loglik(sigma, prec_hat) == pytest.approx(d * np.log(2) - 2 * d)

    @pytest.mark.parametrize("seed", range(100))
    def test_empirical_covariance_is_global_max(self, seed):
        rng = np.random.default_rng((81, seed))
        sigma_hat = PDMatrix(random_pd(rng, 3))
        prec_hat = invert_pd(sigma_hat)
        at_hat = dual_loglik(sigma_hat, prec_hat)
        bump = rng.standard_normal((3, 3)) * 0.1
        perturbed = PDMatrix(sigma_hat.entries + 0.5 * (bump + bump.T))
        assert dual_loglik(perturbed, prec_hat) < at_hat


class TestSupGeneral:
    def test_identity(self):
        prec = PDMatrix(np.eye(5))
        assert sup_general(prec, CompleteOrdering.identity(5)) == pytest.approx(-5.0)

    def test_equals_dual_loglik_at_optimum(self):
        sigma = PDMatrix(COV_AMBIGUOUS)
        prec = invert_pd(sigma)
        want = dual_loglik(sigma, prec)
        for order in enumerate_all_orderings(3):
            assert sup_general(prec, order) == pytest.approx(want, rel=1e-12)

    def test_ordering_invariance_d5(self):
        rng = np.random.default_rng(82)
        prec = PDMatrix(random_pd(rng, 5))
        cache = ConditionalCache(prec)
        values = [
            sup_general(prec, order, cache=cache)
            for order in enumerate_all_orderings(5)
        ]
        assert max(values) - min(values) < 1e-9


class TestSupPev:
    def test_identity(self):
        prec = PDMatrix(np.eye(4))
        for order in enumerate_all_orderings(4):
            assert sup_pev(prec, order, 0, 1) == pytest.approx(-4.0)

    def test_ambiguous_fixture_two_orderings_tie_at_max(self):
        prec = prec_of(COV_AMBIGUOUS)
        values = {
            order.perm: sup_pev(prec, order, 0, 1)
            for order in enumerate_all_orderings(3)
        }
        best = max(values.values())
        assert values[(0, 1, 2)] == pytest.approx(best, abs=1e-12)
        assert values[(2, 1, 0)] == pytest.approx(best, abs=1e-12)
        assert values[(0, 1, 2)] == pytest.approx(values[(2, 1, 0)], abs=1e-12)

    @pytest.mark.parametrize("d", [4, 5])
    def test_class_constancy(self, d):
        # orderings sharing both parent sets give the same optimum
        rng = np.random.default_rng((83, d))
        prec = PDMatrix(random_pd(rng, d))
        cache = ConditionalCache(prec)
        by_class = {}
        for order in enumerate_all_orderings(d):
            cls = HypothesisClass.from_ordering(order, 0, 1)
            by_class.setdefault(cls, []).append(sup_pev(prec, order, 0, 1, cache=cache))
        assert len(by_class) == 2 * 3 ** (d - 2)
        for values in by_class.values():
            assert max(values) - min(values) <= 1e-10 * max(1.0, abs(values[0]))


class TestSupEv:
    def test_identity(self):
        prec = PDMatrix(np.eye(4))
        assert sup_ev(prec, CompleteOrdering.identity(4)) == pytest.approx(-4.0)

    def test_identifiable_fixture_argmax(self):
        prec = prec_of(COV_IDENTIFIABLE)
        values = {
            order.perm: sup_ev(prec, order) for order in enumerate_all_orderings(3)
        }
        assert max(values, key=values.get) == (0, 1, 2)

    @pytest.mark.parametrize("seed", range(100))
    def test_dominated_by_general(self, seed):
        # averaging conditional entries can only lower the optimum
        rng = np.random.default_rng((84, seed))
        d = int(rng.integers(3, 6))
        prec = PDMatrix(random_pd(rng, d))
        cache = ConditionalCache(prec)
        for _ in range(5):
            perm = tuple(int(k) for k in rng.permutation(d))
            order = CompleteOrdering(perm)
            assert sup_ev(prec, order, cache=cache) <= sup_general(
                prec, order, cache=cache
            ) + 1e-12


class TestEffectFromOrdering:
    def test_zero_when_j_first(self):
        prec = prec_of(COV_AMBIGUOUS)
        assert effect_from_ordering(prec, CompleteOrdering((1, 0, 2)), 0, 1) == 0.0

    def test_ambiguous_fixture_value(self):
        prec = prec_of(COV_AMBIGUOUS)
        got = effect_from_ordering(prec, CompleteOrdering((0, 1, 2)), 0, 1)
        assert got == pytest.approx(AMBIGUOUS_EFFECT, abs=1e-12)

    def test_two_by_two_symbolic(self):
        # precision [[a, b], [b, c]] and ordering (0, 1): effect is -b/c,
        # which equals cov[1,0]/cov[0,0]
        a, b, c = 2.0, 0.7, 1.5
        prec = PDMatrix(np.array([[a, b], [b, c]]))
        cov = invert_pd(prec)
        got = effect_from_ordering(prec, CompleteOrdering((0, 1)), 0, 1)
        assert got == pytest.approx(-b / c)
        assert got == pytest.approx(cov.entries[1, 0] / cov.entries[0, 0])

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_covariance_adjustment(self, seed):
        # precision-side route equals the covariance-side coefficient
        rng = np.random.default_rng((85, seed))
        d = int(rng.integers(3, 7))
        arr = random_pd(rng, d)
        prec = prec_of(arr)
        cache = ConditionalCache(prec)
        for _ in range(5):
            i, j = (int(k) for k in rng.choice(d, size=2, replace=False))
            perm = tuple(int(k) for k in rng.permutation(d))
            order = CompleteOrdering(perm)
            got = effect_from_ordering(prec, order, i, j, cache=cache)
            if order.precedes(j, i):
                assert got == 0.0
                continue
            pa = list(order.predecessors(i))
            phi = (
                cond_oracle(arr, [j], [i], pa)[0, 0]
                / cond_oracle(arr, [i], [i], pa)[0, 0]
            )
            assert got == pytest.approx(phi, rel=1e-9, abs=1e-9)


class TestEstimateEffects:
    def test_general_bound_and_zero(self):
        prec = prec_of(COV_IDENTIFIABLE)
        est = estimate_effects(prec, 100, 0, 1, Regime.general())
        assert 0.0 in est.values
        assert len(est.values) <= 2 ** (3 - 2) + 1
        assert all(np.isfinite(v) for v in est.values)

    def test_general_optimum_matches_dual_loglik(self):
        sigma = PDMatrix(COV_IDENTIFIABLE)
        prec = invert_pd(sigma)
        est = estimate_effects(prec, 100, 0, 1, Regime.general())
        assert est.optimum == pytest.approx(dual_loglik(sigma, prec), rel=1e-12)

    def test_pev_ambiguous_fixture_reports_both(self):
        prec = prec_of(COV_AMBIGUOUS)
        est = estimate_effects(prec, 100, 0, 1, Regime.partial_ev(0, 1))
        assert len(est.values) == 2
        assert est.values[0] == 0.0
        assert est.values[1] == pytest.approx(AMBIGUOUS_EFFECT, abs=1e-9)
        directions = {g[0].direction for g in est.provenance}
        assert directions == {"i_before_j", "j_before_i"}

    def test_pev_identifiable_fixture_singleton(self):
        prec = prec_of(COV_IDENTIFIABLE)
        est = estimate_effects(prec, 100, 0, 1, Regime.partial_ev(0, 1))
        assert len(est.values) == 1
        assert est.values[0] == pytest.approx(1.0, abs=1e-9)
        (cls,) = est.provenance[0]
        assert cls == HypothesisClass(I_BEFORE_J, (), (0,))

    def test_ev_identity_reports_single_zero(self):
        est = estimate_effects(PDMatrix(np.eye(4)), 100, 0, 1, Regime.full_ev())
        assert est.values == (0.0,)

    def test_ev_unique_structure_single_value(self):
        # sampled homoscedastic model at large n: tied orderings agree
        scm = generate_benchmark_scm(5, Regime.full_ev(), True, 0, 1, seed=86)
        data = sample(scm, 10000, seed=87)
        prec = invert_pd(empirical_covariance(data))
        est = estimate_effects(prec, 10000, 0, 1, Regime.full_ev())
        assert len(est.values) == 1
        assert est.values[0] == pytest.approx(true_effect(scm, 0, 1), abs=0.2)

    def test_regime_pair_mismatch_rejected(self):
        prec = prec_of(COV_IDENTIFIABLE)
        with pytest.raises(ValueError, match="pair"):
            estimate_effects(prec, 100, 0, 1, Regime.partial_ev(1, 2))

    def test_json_roundtrip_shape(self):
        prec = prec_of(COV_AMBIGUOUS)
        est = estimate_effects(prec, 100, 0, 1, Regime.partial_ev(0, 1))
        doc = est.to_json()
        assert set(doc) == {"regime", "values", "classes", "optimum"}
        assert len(doc["values"]) == len(doc["classes"])


def _pev_hit_rate(d, n, runs):
    hits = 0
    for rep in range(runs):
        scm = generate_benchmark_scm(
            d, Regime.partial_ev(0, 1), True, 0, 1, seed=(88, d, rep)
        )
        data = sample(scm, n, seed=(88, d, rep, 1))
        prec = invert_pd(empirical_covariance(data))
        est = estimate_effects(prec, n, 0, 1, Regime.partial_ev(0, 1))
        truth = true_effect(scm, 0, 1)
        if any(abs(v - truth) <= 0.05 for v in est.values):
            hits += 1
    return hits / runs


def test_pev_estimator_consistency_rate():
    # at n = 10^4 on pair-equal data the effect set contains a value within
    # 0.05 of the truth in at least 95% of 200 seeded runs (realized: 0.985)
    assert _pev_hit_rate(3, 10000, 200) >= 0.95


def test_pev_estimator_rate_grows_with_n():
    # five-node models sit near model intersections often enough that the
    # hit rate at n = 10^4 is only 0.80; it must climb as n grows
    # (realized: 0.80 at 1e4, 0.94 at 1e5)
    low = _pev_hit_rate(5, 10000, 100)
    high = _pev_hit_rate(5, 100000, 100)
    assert high > low
    assert high >= 0.90
