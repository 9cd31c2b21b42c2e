"""Test-inversion confidence regions for total causal effects.

A region collects every effect size psi whose joint hypothesis (some causal
ordering plus effect value psi) survives a dual likelihood-ratio test. For
each hypothesis class the acceptance condition is a convex quadratic
inequality in psi, so the region is a finite union of closed intervals, plus
possibly an isolated zero contributed by the orderings that reverse the
query pair. Three constructions are provided, one per error-variance
regime; stricter regimes use the same recipe with their constrained optima.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .exceptions import DegenerateQuadratic, SingularBlock
from .matrixcore import ConditionalCache, PDMatrix, index_mask, log_det
from .orderings import (
    I_BEFORE_J,
    HypothesisClass,
    enumerate_parent_sets,
    enumerate_pev_classes,
    ev_optimal_orderings,
)
from .scm import Regime

# A discriminant this close to zero (relative to its ingredients) counts as
# a tangent: the quadratic touches the critical level in a single point.
TANGENT_RTOL = 1e-12


def chi2_quantile(df: int, p: float) -> float:
    """Chi-square inverse CDF via the inverse regularized incomplete gamma."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly in (0, 1), got {p}")
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    return float(2.0 * special.gammaincinv(df / 2.0, p))


@dataclass(frozen=True)
class ConfidenceRegion:
    """Union of disjoint closed intervals, plus an optional isolated zero.

    ``zero_atom`` marks a zero that belongs to the region without being
    interior to any interval; when an interval already covers zero the flag
    stays unset (it would be redundant). Width queries ignore the atom.
    """

    intervals: tuple[tuple[float, float], ...]
    zero_atom: bool
    alpha: float
    n: int
    regime: Regime

    @classmethod
    def assemble(
        cls,
        raw_intervals,
        zero_included: bool,
        alpha: float,
        n: int,
        regime: Regime,
    ) -> "ConfidenceRegion":
        """Merge raw class intervals into disjoint normal form.

        Overlapping or touching intervals are joined; this preserves the
        region as a set while making membership and width queries canonical.
        """
        merged: list[list[float]] = []
        for lo, hi in sorted(raw_intervals):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        intervals = tuple((lo, hi) for lo, hi in merged)
        atom = zero_included and not any(lo < 0.0 < hi for lo, hi in intervals)
        return cls(
            intervals=intervals, zero_atom=atom, alpha=alpha, n=n, regime=regime
        )

    def contains(self, psi: float, atol: float = 0.0) -> bool:
        """Closed-interval membership, optionally padded by ``atol``."""
        if any(lo - atol <= psi <= hi + atol for lo, hi in self.intervals):
            return True
        return self.zero_atom and abs(psi) <= atol

    def width(self) -> float:
        """Total length of the interval part; the isolated zero adds nothing."""
        return float(sum(hi - lo for lo, hi in self.intervals))

    def includes_zero(self) -> bool:
        """True when zero is the isolated atom or interior to an interval."""
        return self.zero_atom or any(lo < 0.0 < hi for lo, hi in self.intervals)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "n": self.n,
            "regime": self.regime.to_json(),
            "intervals": [[lo, hi] for lo, hi in self.intervals],
            "zero_atom": self.zero_atom,
        }


def _quad_interval(
    aii: float,
    aij: float,
    ajj: float,
    rhs: float,
    cls: Optional[HypothesisClass],
) -> Optional[tuple[float, float]]:
    """Solve psi^2*ajj + 2*psi*aij + aii <= rhs for psi.

    Returns the closed solution interval, or None when the quadratic never
    reaches the level (negative discriminant). A discriminant within
    TANGENT_RTOL of zero relative to its ingredients is treated as an exact
    tangent and yields a single-point interval.
    """
    if ajj <= 0.0:
        raise DegenerateQuadratic(
            f"non-positive quadratic head coefficient {ajj:.3e}; "
            "the empirical precision is too ill-conditioned for this class",
            hypothesis_class=cls,
        )
    disc = aij * aij - ajj * (aii - rhs)
    scale = aij * aij + abs(ajj) * (abs(aii) + abs(rhs))
    if disc < 0.0:
        if disc >= -TANGENT_RTOL * scale:
            disc = 0.0
        else:
            return None
    root = math.sqrt(disc)
    return ((-aij - root) / ajj, (-aij + root) / ajj)


def _validate_query(prec_hat: PDMatrix, n: int, i: int, j: int, alpha: float):
    d = prec_hat.dim
    if i == j or not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"invalid query pair ({i}, {j}) for d={d}")
    if n < d:
        raise ValueError(f"need n >= d observations, got n={n}, d={d}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly in (0, 1), got {alpha}")


def conf_general(
    prec_hat: PDMatrix, n: int, i: int, j: int, alpha: float
) -> ConfidenceRegion:
    """Confidence region without any error-variance assumption.

    For every candidate parent set of i (j excluded), the accepted effect
    sizes solve a quadratic inequality whose level is the conditional
    precision entry of i given all its descendants, inflated by
    exp(chi-square(1) quantile / n). Orderings that put j first entail a
    zero effect and impose no constraint, so zero is always included: this
    region is never conclusive about the existence of an effect.
    """
    _validate_query(prec_hat, n, i, j, alpha)
    d = prec_hat.dim
    full = (1 << d) - 1
    cache = ConditionalCache(prec_hat)
    inflate = math.exp(chi2_quantile(1, 1.0 - alpha) / n)
    raw = []
    for ps in enumerate_parent_sets(d, i, j):
        dimask = full & ~index_mask(ps) & ~(1 << i)
        smask = dimask & ~(1 << j)
        tii = cache.cond_var(i, dimask)
        if tii <= 0.0:
            raise SingularBlock("non-positive conditional precision entry")
        aii, aij, ajj = cache.cond_pair(i, j, smask)
        cls = HypothesisClass(I_BEFORE_J, ps, ps + (i,))
        interval = _quad_interval(aii, aij, ajj, tii * inflate, cls)
        if interval is not None:
            raw.append(interval)
    return ConfidenceRegion.assemble(
        raw, True, alpha, n, Regime.general()
    )


def _pev_pair_score(cache, logdet, d, cls, i, j):
    """Pair score for one class: sqrt-product of free conditionals times the
    sum of the two query conditionals. Class-constant by the determinant
    identity; its minimum over classes is the constrained global optimum."""
    t = cache.cond_var(i, cls.descendants_i_mask(d, i))
    s = cache.cond_var(j, cls.descendants_j_mask(d, j))
    if t <= 0.0 or s <= 0.0:
        raise SingularBlock("non-positive conditional precision entry")
    sqrt_free = math.exp(0.5 * (logdet - math.log(t) - math.log(s)))
    return sqrt_free * (t + s), t, s, sqrt_free


def conf_pev(
    prec_hat: PDMatrix, n: int, i: int, j: int, alpha: float
) -> ConfidenceRegion:
    """Confidence region under the pair-equal-variance assumption.

    The global constrained optimum is a monotone function of the minimal
    pair score over all hypothesis classes. Classes ordering i before j
    contribute a quadratic acceptance interval at the chi-square(2) level;
    zero enters when the best class ordering j before i passes the
    chi-square(1) comparison against the global minimum.
    """
    _validate_query(prec_hat, n, i, j, alpha)
    d = prec_hat.dim
    full = (1 << d) - 1
    cache = ConditionalCache(prec_hat)
    logdet = log_det(prec_hat)

    k_min = np.inf
    z_min = np.inf
    for cls in enumerate_pev_classes(d, i, j):
        score = _pev_pair_score(cache, logdet, d, cls, i, j)[0]
        k_min = min(k_min, score)
        if cls.direction != I_BEFORE_J:
            z_min = min(z_min, score)

    crit2 = math.exp(chi2_quantile(2, 1.0 - alpha) / (2.0 * n))
    crit1 = math.exp(chi2_quantile(1, 1.0 - alpha) / (2.0 * n))
    raw = []
    for cls in enumerate_pev_classes(d, i, j):
        if cls.direction != I_BEFORE_J:
            continue
        _, t, s, sqrt_free = _pev_pair_score(cache, logdet, d, cls, i, j)
        dimask = cls.descendants_i_mask(d, i)
        smask = dimask & ~(1 << j)
        aii, aij, ajj = cache.cond_pair(i, j, smask)
        rhs = k_min * crit2 / sqrt_free
        interval = _quad_interval(aii + s, aij, ajj, rhs, cls)
        if interval is not None:
            raw.append(interval)
    zero_included = z_min <= k_min * crit1
    return ConfidenceRegion.assemble(
        raw, zero_included, alpha, n, Regime.partial_ev(i, j)
    )


def _dp_min_sum(cache: ConditionalCache, members_mask: int, base_mask: int) -> float:
    """Minimal sum of conditional precision entries over orderings of a set.

    Member nodes occupy a contiguous block of positions; a node chosen from
    state S (still-unplaced members) is conditioned on ``base_mask`` plus
    the members already placed after it.
    """
    memo = {0: 0.0}

    def f(state: int) -> float:
        hit = memo.get(state)
        if hit is not None:
            return hit
        comp = base_mask | (members_mask ^ state)
        best = np.inf
        m, k = state, 0
        while m:
            if m & 1:
                best = min(best, cache.cond_var(k, comp) + f(state & ~(1 << k)))
            m >>= 1
            k += 1
        memo[state] = best
        return best

    return f(members_mask)


def _dp_min_total_j_first(cache: ConditionalCache, d: int, i: int, j: int) -> float:
    """Minimal total conditional-precision sum over orderings with j before i.

    Same subset dynamic program as the unconstrained search, except a state
    still containing i never places j (placing from the last position first,
    that is exactly what keeps j ahead of i).
    """
    full = (1 << d) - 1
    scores = np.empty(full + 1)
    scores[0] = 0.0
    for state in range(1, full + 1):
        comp = full ^ state
        i_present = state >> i & 1
        best = np.inf
        m, k = state, 0
        while m:
            if m & 1 and not (k == j and i_present):
                c = cache.cond_var(k, comp) + scores[state & ~(1 << k)]
                if c < best:
                    best = c
            m >>= 1
            k += 1
        scores[state] = best
    return float(scores[full])


def conf_ev(
    prec_hat: PDMatrix, n: int, i: int, j: int, alpha: float
) -> ConfidenceRegion:
    """Confidence region under the all-equal-variance assumption.

    Same inversion recipe as the pair-equal construction, with the
    fully-homoscedastic optima in place of the pair optima: the global
    reference is the subset-DP minimum of the total conditional-precision
    sum, each parent-set class contributes a quadratic interval at the
    chi-square(2) level (with the class's best completion of the remaining
    nodes), and zero enters when the best ordering putting j first passes
    the chi-square(1) comparison.
    """
    _validate_query(prec_hat, n, i, j, alpha)
    d = prec_hat.dim
    full = (1 << d) - 1
    cache = ConditionalCache(prec_hat)
    t_star = ev_optimal_orderings(prec_hat, cache=cache).min_score
    z_total = _dp_min_total_j_first(cache, d, i, j)

    crit2 = math.exp(chi2_quantile(2, 1.0 - alpha) / (n * d))
    crit1 = math.exp(chi2_quantile(1, 1.0 - alpha) / (n * d))
    raw = []
    for ps in enumerate_parent_sets(d, i, j):
        pmask = index_mask(ps)
        rmask = full & ~pmask & ~(1 << i)  # descendants of i, including j
        smask = rmask & ~(1 << j)
        tail_sum = _dp_min_sum(cache, rmask, 0)
        head_sum = _dp_min_sum(cache, pmask, rmask | (1 << i))
        aii, aij, ajj = cache.cond_pair(i, j, smask)
        cls = HypothesisClass(I_BEFORE_J, ps, ps + (i,))
        rhs = t_star * crit2 - (tail_sum + head_sum)
        interval = _quad_interval(aii, aij, ajj, rhs, cls)
        if interval is not None:
            raw.append(interval)
    zero_included = z_total <= t_star * crit1
    return ConfidenceRegion.assemble(raw, zero_included, alpha, n, Regime.full_ev())
