"""Dual likelihood evaluation and set-valued total-effect estimation.

The dual log-likelihood swaps the arguments of the usual Kullback-Leibler
minimization:

    l(Sigma) = -log det(Sigma^-1) - tr(Sigma * S^-1),

with S the empirical covariance. Its charm is computational: for a fixed
causal ordering, the constrained optimum reduces to regressing each node on
its descendants *in the precision matrix*, so every per-ordering supremum
below is a closed form in conditional entries of S^-1, and effect estimates
come out of one matrix inversion for the whole sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import SingularBlock
from .matrixcore import ConditionalCache, PDMatrix, index_mask, log_det, mask_indices
from .orderings import (
    I_BEFORE_J,
    J_BEFORE_I,
    CompleteOrdering,
    HypothesisClass,
    enumerate_parent_sets,
    enumerate_pev_classes,
    ev_optimal_orderings,
    tie_equal,
)
from .scm import FULL_EV, GENERAL, PARTIAL_EV, Regime


@dataclass(frozen=True)
class EffectEstimate:
    """Finite set of candidate total-effect values with their provenance.

    ``values[t]`` was attained by every hypothesis class in
    ``provenance[t]``; values are deduplicated at the tie tolerance and
    sorted ascending. ``optimum`` is the achieved supremum of the dual
    log-likelihood under the regime's constraint.
    """

    regime: Regime
    values: tuple[float, ...]
    provenance: tuple[tuple[HypothesisClass, ...], ...]
    optimum: float

    def to_json(self) -> dict:
        return {
            "regime": self.regime.to_json(),
            "values": list(self.values),
            "classes": [[c.to_json() for c in group] for group in self.provenance],
            "optimum": self.optimum,
        }


class _ValueAccumulator:
    """Collect (value, classes) pairs, merging values that tie."""

    def __init__(self):
        self._entries: list[list] = []

    def add(self, value: float, classes):
        for entry in self._entries:
            if tie_equal(value, entry[0]):
                entry[1].extend(classes)
                return
        self._entries.append([float(value), list(classes)])

    def finish(self):
        ordered = sorted(self._entries, key=lambda e: e[0])
        values = tuple(e[0] for e in ordered)
        provenance = tuple(tuple(dict.fromkeys(e[1])) for e in ordered)
        return values, provenance


def _checked_cond_var(cache: ConditionalCache, k: int, mask: int) -> float:
    value = cache.cond_var(k, mask)
    if value <= 0.0:
        raise SingularBlock(
            f"conditional precision entry for node {k} is non-positive ({value:.3e})"
        )
    return value


def _successor_masks(order: CompleteOrdering) -> list[int]:
    """Bitmask of descendants (later nodes) for every node."""
    d = order.d
    masks = [0] * d
    acc = 0
    for k in reversed(order.perm):
        masks[k] = acc
        acc |= 1 << k
    return masks


def effect_from_descendants(
    cache: ConditionalCache, i: int, j: int, dmask: int
) -> float:
    """Total effect of i on j implied by the descendant set of i.

    Regresses node i on its descendants in the precision matrix and negates
    the coefficient belonging to j; this equals the covariance-side
    adjustment coefficient (effect of a unit intervention) for any ordering
    with that descendant set. The negation matters: the raw projection of
    the precision-side regression vector carries the opposite sign.
    """
    if not dmask >> j & 1:
        raise ValueError("j is not in the descendant set of i")
    coeffs = cache.cond_solve(dmask, i)
    return -float(coeffs[mask_indices(dmask).index(j)])


def dual_loglik(sigma: PDMatrix, prec_hat: PDMatrix) -> float:
    """Dual log-likelihood of a candidate covariance against S^-1.

    Globally maximized over positive-definite matrices at the empirical
    covariance itself, with value -log det(S^-1) - d.
    """
    if sigma.dim != prec_hat.dim:
        raise ValueError("dimension mismatch between candidate and precision")
    trace = float(np.sum(sigma.entries * prec_hat.entries))
    return log_det(sigma) - trace


def sup_general(
    prec_hat: PDMatrix, order: CompleteOrdering, cache: ConditionalCache | None = None
) -> float:
    """Dual-likelihood optimum over all SCMs with the given ordering.

    Equals -sum_k log (S^-1)[k,k | descendants(k)] - d, and is the same for
    every ordering (the conditional entries multiply to det(S^-1)).
    """
    if cache is None:
        cache = ConditionalCache(prec_hat)
    masks = _successor_masks(order)
    total = 0.0
    for k in range(order.d):
        total += math.log(_checked_cond_var(cache, k, masks[k]))
    return -total - order.d


def sup_pev(
    prec_hat: PDMatrix,
    order: CompleteOrdering,
    i: int,
    j: int,
    cache: ConditionalCache | None = None,
) -> float:
    """Dual-likelihood optimum under the pair-equal-variance constraint.

    The two constrained nodes share one variance parameter, so their two
    conditional precision entries enter through their average; the value
    depends on the ordering only through the parent sets of i and j.
    """
    if i == j:
        raise ValueError("query nodes must be distinct")
    if cache is None:
        cache = ConditionalCache(prec_hat)
    masks = _successor_masks(order)
    total = 0.0
    for k in range(order.d):
        if k in (i, j):
            continue
        total += math.log(_checked_cond_var(cache, k, masks[k]))
    pair_mean = 0.5 * (
        _checked_cond_var(cache, i, masks[i]) + _checked_cond_var(cache, j, masks[j])
    )
    return -total - 2.0 * math.log(pair_mean) - order.d


def sup_ev(
    prec_hat: PDMatrix, order: CompleteOrdering, cache: ConditionalCache | None = None
) -> float:
    """Dual-likelihood optimum under the all-equal-variance constraint.

    All nodes share one variance parameter: -d log(mean of conditional
    precision entries) - d. Maximized over orderings by the subset dynamic
    program (a monotone transform of its minimal score).
    """
    if cache is None:
        cache = ConditionalCache(prec_hat)
    masks = _successor_masks(order)
    d = order.d
    total = 0.0
    for k in range(d):
        total += _checked_cond_var(cache, k, masks[k])
    return -d * math.log(total / d) - d


def effect_from_ordering(
    prec_hat: PDMatrix,
    order: CompleteOrdering,
    i: int,
    j: int,
    cache: ConditionalCache | None = None,
) -> float:
    """Total effect of i on j implied by one complete ordering.

    Zero whenever j precedes i; otherwise the sign-corrected precision-side
    regression coefficient, which matches the covariance-side adjustment
    coefficient for the same ordering.
    """
    if i == j:
        raise ValueError("query nodes must be distinct")
    if order.precedes(j, i):
        return 0.0
    if cache is None:
        cache = ConditionalCache(prec_hat)
    dmask = index_mask(order.successors(i))
    return effect_from_descendants(cache, i, j, dmask)


def _pev_class_sup(
    cache: ConditionalCache, logdet: float, d: int, cls: HypothesisClass, i: int, j: int
) -> float:
    """Pair-equal-variance optimum for one hypothesis class.

    Uses the product identity over conditional precision entries to fold
    the d-2 unconstrained nodes into the log determinant, leaving only the
    two query conditionals.
    """
    t = _checked_cond_var(cache, i, cls.descendants_i_mask(d, i))
    s = _checked_cond_var(cache, j, cls.descendants_j_mask(d, j))
    return -logdet + math.log(t) + math.log(s) - 2.0 * math.log(0.5 * (t + s)) - d


def estimate_effects(
    prec_hat: PDMatrix, n: int, i: int, j: int, regime: Regime
) -> EffectEstimate:
    """Set-valued total-effect estimate for the requested variance regime.

    general
        No optimization: every ordering attains the same supremum, so the
        candidate set collects the effect of every parent set of i (with j
        excluded) and appends the exact zero entailed by every ordering
        that reverses the pair.
    partial_ev
        Sweeps the 2 * 3^(d-2) hypothesis classes, keeps those whose
        constrained optimum ties the best, and reports their effects.
    ev
        Runs the subset dynamic program and reports the effects entailed by
        every tied-optimal ordering, reconstructed from the witness table.
    """
    d = prec_hat.dim
    if i == j or not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"invalid query pair ({i}, {j}) for d={d}")
    if n < 1:
        raise ValueError(f"sample count must be positive, got {n}")
    if regime.kind == PARTIAL_EV and (regime.i, regime.j) != (i, j):
        raise ValueError("partial_ev regime pair does not match the query pair")
    cache = ConditionalCache(prec_hat)
    logdet = log_det(prec_hat)
    full = (1 << d) - 1
    acc = _ValueAccumulator()

    if regime.kind == GENERAL:
        # seed with the exact zero so it stays the canonical representative
        acc.add(0.0, [HypothesisClass(J_BEFORE_I, (j,), ())])
        for ps in enumerate_parent_sets(d, i, j):
            dmask = full & ~index_mask(ps) & ~(1 << i)
            effect = effect_from_descendants(cache, i, j, dmask)
            cls = HypothesisClass(I_BEFORE_J, ps, ps + (i,))
            acc.add(effect, [cls])
        optimum = -logdet - d

    elif regime.kind == PARTIAL_EV:
        best = -np.inf
        tied: list[tuple[HypothesisClass, float]] = []
        for cls in enumerate_pev_classes(d, i, j):
            value = _pev_class_sup(cache, logdet, d, cls, i, j)
            if value > best:
                best = value
                tied = [(c, v) for (c, v) in tied if tie_equal(v, best)]
                tied.append((cls, value))
            elif tie_equal(value, best):
                tied.append((cls, value))
        for cls, _ in tied:
            if cls.direction == I_BEFORE_J:
                effect = effect_from_descendants(
                    cache, i, j, cls.descendants_i_mask(d, i)
                )
            else:
                effect = 0.0
            acc.add(effect, [cls])
        optimum = float(best)

    elif regime.kind == FULL_EV:
        result = ev_optimal_orderings(prec_hat, cache=cache)
        reachable = result.reachable_states()
        for state in sorted(reachable):
            if i not in result.choices(state):
                continue
            witness = HypothesisClass.from_ordering(
                result.witness_ordering(state, i, reachable), i, j
            )
            if state >> j & 1:
                acc.add(0.0, [witness])
            else:
                effect = effect_from_descendants(cache, i, j, full ^ state)
                acc.add(effect, [witness])
        optimum = -d * math.log(result.min_score / d) - d

    else:  # pragma: no cover - Regime validates kinds
        raise ValueError(f"unknown regime kind {regime.kind!r}")

    values, provenance = acc.finish()
    return EffectEstimate(
        regime=regime, values=values, provenance=provenance, optimum=float(optimum)
    )
