"""Brute-force dual-LRT oracles over all d! orderings.

Everything here recomputes the per-ordering constrained optima directly
from their defining sums, conditioning with plain dense inverses and
walking every permutation, so region tests compare against a route that
shares nothing with the package's class shortcuts, subset DP, or Cholesky
conditioning.

Per-ordering conditional entries do not depend on the candidate effect
size, so each oracle precomputes them once and exposes cheap closures for
grid sweeps: ``stat_min(psi)`` (smallest statistic over orderings placing
i before j) and ``contains(psi)``.
"""
import itertools
import math

import numpy as np
from scipy import stats

from _fixtures import cond_oracle, cond_var_oracle, successors


def _orderings(d):
    return list(itertools.permutations(range(d)))


def _quad_coeffs(P, i, j, S):
    """(constant, linear, square) coefficients of the pinned-effect quadratic."""
    return (
        cond_var_oracle(P, i, S),
        2.0 * float(cond_oracle(P, [i], [j], S)[0, 0]),
        cond_var_oracle(P, j, S),
    )


class GeneralOracle:
    def __init__(self, P, n, i, j, alpha):
        self.n = n
        self.crit = stats.chi2.ppf(1 - alpha, 1)
        d = P.shape[0]
        self.terms = []
        for perm in _orderings(d):
            if perm.index(i) > perm.index(j):
                continue
            S = [k for k in successors(perm, i) if k != j]
            const, lin, sq = _quad_coeffs(P, i, j, S)
            ref = cond_var_oracle(P, i, successors(perm, i))
            self.terms.append((const, lin, sq, ref))

    def stat_min(self, psi):
        best = np.inf
        for const, lin, sq, ref in self.terms:
            quad = const + lin * psi + sq * psi * psi
            best = min(best, self.n * (math.log(quad) - math.log(ref)))
        return best

    def contains(self, psi):
        if psi == 0.0:
            return True
        return self.stat_min(psi) <= self.crit


class PevOracle:
    def __init__(self, P, n, i, j, alpha):
        self.n = n
        self.crit2 = stats.chi2.ppf(1 - alpha, 2)
        self.crit1 = stats.chi2.ppf(1 - alpha, 1)
        d = P.shape[0]
        scores = []
        reverse_scores = []
        self.terms = []
        for perm in _orderings(d):
            prod = 1.0
            for k in range(d):
                if k in (i, j):
                    continue
                prod *= math.sqrt(cond_var_oracle(P, k, successors(perm, k)))
            t = cond_var_oracle(P, i, successors(perm, i))
            s = cond_var_oracle(P, j, successors(perm, j))
            score = prod * (t + s)  # pair score whose minimum is the optimum
            scores.append(score)
            if perm.index(j) < perm.index(i):
                reverse_scores.append(score)
            else:
                S = [k for k in successors(perm, i) if k != j]
                const, lin, sq = _quad_coeffs(P, i, j, S)
                self.terms.append((const + s, lin, sq, prod))
        self.k_all = min(scores)
        self.z = min(reverse_scores)

    def stat_min(self, psi):
        # statistic = n * (sup_all - sup_psi); the -d constants cancel,
        # leaving 2n * log((prod * level / 2) / (k_all / 2))
        best = np.inf
        for const, lin, sq, prod in self.terms:
            level = const + lin * psi + sq * psi * psi
            stat = 2.0 * self.n * (
                math.log(0.5 * prod * level) - math.log(0.5 * self.k_all)
            )
            best = min(best, stat)
        return best

    def contains(self, psi):
        accepted = self.stat_min(psi) <= self.crit2
        if psi == 0.0 and not accepted:
            accepted = self.z <= self.k_all * math.exp(self.crit1 / (2.0 * self.n))
        return accepted


class EvOracle:
    def __init__(self, P, n, i, j, alpha):
        self.n = n
        self.d = P.shape[0]
        self.crit2 = stats.chi2.ppf(1 - alpha, 2)
        self.crit1 = stats.chi2.ppf(1 - alpha, 1)
        totals = []
        reverse_totals = []
        self.terms = []
        for perm in _orderings(self.d):
            total = sum(
                cond_var_oracle(P, k, successors(perm, k)) for k in range(self.d)
            )
            totals.append(total)
            if perm.index(j) < perm.index(i):
                reverse_totals.append(total)
            else:
                S = [k for k in successors(perm, i) if k != j]
                const, lin, sq = _quad_coeffs(P, i, j, S)
                rest = total - cond_var_oracle(P, i, successors(perm, i))
                self.terms.append((rest + const, lin, sq))
        self.t_all = min(totals)
        self.z_total = min(reverse_totals)

    def stat_min(self, psi):
        best = np.inf
        for const, lin, sq in self.terms:
            total_psi = const + lin * psi + sq * psi * psi
            stat = self.n * self.d * (math.log(total_psi) - math.log(self.t_all))
            best = min(best, stat)
        return best

    def contains(self, psi):
        accepted = self.stat_min(psi) <= self.crit2
        if psi == 0.0 and not accepted:
            zstat = self.n * self.d * (math.log(self.z_total) - math.log(self.t_all))
            accepted = zstat <= self.crit1
        return accepted


def grid(lo=-300, hi=300):
    """Exact hundredths grid; integer division keeps 0.0 exactly on it."""
    return [k / 100 for k in range(lo, hi + 1)]
