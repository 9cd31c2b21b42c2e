"""Causal orderings of complete DAGs and their equivalence-class shortcuts.

A complete DAG on d nodes is just a permutation: everything earlier is a
parent of everything later. Estimation never needs all d! permutations --
only the parent sets of the query pair matter -- so this module provides
the three enumeration shortcuts (parent-set classes, tri-partition classes,
subset dynamic programming) next to the brute-force permutation sweep that
serves as their oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .exceptions import DimensionTooLarge
from .matrixcore import ConditionalCache, PDMatrix, index_mask

# Two scores tie when |a - b| <= TIE_RTOL * max(1, |a|, |b|). Distributions
# in the intersection of several causal models produce exact mathematical
# ties that float arithmetic perturbs; this keeps them together.
TIE_RTOL = 1e-9

I_BEFORE_J = "i_before_j"
J_BEFORE_I = "j_before_i"


def tie_equal(a: float, b: float, rtol: float = TIE_RTOL) -> bool:
    """Mixed absolute/relative tie test for optimizer scores."""
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class CompleteOrdering:
    """A permutation of {0..d-1}; perm[t] is the node at position t."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(k) for k in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")

    @classmethod
    def identity(cls, d: int) -> "CompleteOrdering":
        return cls(tuple(range(d)))

    @property
    def d(self) -> int:
        return len(self.perm)

    def position(self, k: int) -> int:
        return self.perm.index(k)

    def predecessors(self, k: int) -> tuple[int, ...]:
        """Nodes before k, i.e. its parents in the complete DAG."""
        return tuple(sorted(self.perm[: self.position(k)]))

    def successors(self, k: int) -> tuple[int, ...]:
        """Nodes after k, i.e. its descendants in the complete DAG."""
        return tuple(sorted(self.perm[self.position(k) + 1 :]))

    def precedes(self, a: int, b: int) -> bool:
        return self.position(a) < self.position(b)


@dataclass(frozen=True)
class HypothesisClass:
    """Equivalence class of complete DAGs: direction plus query parent sets.

    All complete DAGs sharing the parent sets of the query pair entail the
    same total effect and the same constrained dual-likelihood optimum, so
    a class stands in for every ordering that induces it. ``parents_j`` is
    only meaningful to the partially-equal-variance sweep; the general sweep
    carries a canonical completion.
    """

    direction: str
    parents_i: tuple[int, ...]
    parents_j: tuple[int, ...]

    def __post_init__(self):
        if self.direction not in (I_BEFORE_J, J_BEFORE_I):
            raise ValueError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "parents_i", tuple(sorted(self.parents_i)))
        object.__setattr__(self, "parents_j", tuple(sorted(self.parents_j)))

    @classmethod
    def from_ordering(cls, order: CompleteOrdering, i: int, j: int) -> "HypothesisClass":
        direction = I_BEFORE_J if order.precedes(i, j) else J_BEFORE_I
        return cls(direction, order.predecessors(i), order.predecessors(j))

    def descendants_i_mask(self, d: int, i: int) -> int:
        full = (1 << d) - 1
        return full & ~index_mask(self.parents_i) & ~(1 << i)

    def descendants_j_mask(self, d: int, j: int) -> int:
        full = (1 << d) - 1
        return full & ~index_mask(self.parents_j) & ~(1 << j)

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "parents_i": list(self.parents_i),
            "parents_j": list(self.parents_j),
        }


def _check_pair(d: int, i: int, j: int):
    if d < 2:
        raise ValueError(f"need at least two nodes, got d={d}")
    if i == j:
        raise ValueError("query nodes must be distinct")
    for k in (i, j):
        if not 0 <= k < d:
            raise ValueError(f"query node {k} out of range for d={d}")


def enumerate_parent_sets(d: int, i: int, j: int) -> Iterator[tuple[int, ...]]:
    """All 2^(d-2) candidate parent sets of i that exclude j.

    Subsets of the remaining nodes in ascending bitmask order, so output is
    reproducible byte for byte.
    """
    _check_pair(d, i, j)
    if d > 24:
        raise DimensionTooLarge(f"parent-set enumeration capped at d=24, got {d}")
    others = sorted(set(range(d)) - {i, j})
    for mask in range(1 << len(others)):
        yield tuple(others[b] for b in range(len(others)) if mask >> b & 1)


def enumerate_pev_classes(d: int, i: int, j: int) -> Iterator[HypothesisClass]:
    """All 2 * 3^(d-2) hypothesis classes for the pair-variance sweep.

    For each direction, every third node is placed before both query nodes,
    between them, or after both; the placement determines both parent sets.
    Deterministic order: direction i-before-j first, then base-3 ascending
    over the sorted remaining nodes (digit 0 = before, 1 = between,
    2 = after).
    """
    _check_pair(d, i, j)
    if d > 16:
        raise DimensionTooLarge(f"class enumeration capped at d=16, got {d}")
    others = sorted(set(range(d)) - {i, j})
    for direction in (I_BEFORE_J, J_BEFORE_I):
        first, second = (i, j) if direction == I_BEFORE_J else (j, i)
        for assign in itertools.product((0, 1, 2), repeat=len(others)):
            before = tuple(o for o, a in zip(others, assign) if a == 0)
            between = tuple(o for o, a in zip(others, assign) if a == 1)
            p_first = before
            p_second = tuple(sorted(before + (first,) + between))
            if direction == I_BEFORE_J:
                yield HypothesisClass(direction, p_first, p_second)
            else:
                yield HypothesisClass(direction, p_second, p_first)


def enumerate_all_orderings(d: int) -> Iterator[CompleteOrdering]:
    """All d! complete orderings in lexicographic order (brute-force oracle)."""
    if d < 1:
        raise ValueError(f"need at least one node, got d={d}")
    if d > 8:
        raise DimensionTooLarge(f"full permutation sweep capped at d=8, got {d}")
    for perm in itertools.permutations(range(d)):
        yield CompleteOrdering(perm)


@dataclass
class EvSearchResult:
    """Outcome of the subset dynamic program over causal orderings.

    ``min_score`` is the minimal achievable sum of precision-side conditional
    variances (each node conditioned on its descendants). The witness table
    stores, per subset state, every placement choice that ties the optimum;
    all tied-optimal orderings are reconstructable from it without touching
    the d! search space again.
    """

    min_score: float
    d: int
    _scores: np.ndarray
    _witness: list[int]
    _cache: ConditionalCache
    _tie_rtol: float

    def iter_orderings(self) -> Iterator[CompleteOrdering]:
        """Yield every ordering whose total score ties the optimum.

        Walks the witness table from the full node set down; candidate paths
        are re-scored so per-state tolerance cannot admit an ordering whose
        total is off the optimum.
        """
        full = (1 << self.d) - 1

        def walk(state: int, suffix: list[int], total: float):
            if state == 0:
                if tie_equal(total, self.min_score, self._tie_rtol):
                    yield CompleteOrdering(tuple(reversed(suffix)))
                return
            wit = self._witness[state]
            k = 0
            m = wit
            while m:
                if m & 1:
                    step = self._cache.cond_var(k, full ^ state)
                    suffix.append(k)
                    yield from walk(state & ~(1 << k), suffix, total + step)
                    suffix.pop()
                m >>= 1
                k += 1

        yield from walk(full, [], 0.0)

    @property
    def orderings(self) -> tuple[CompleteOrdering, ...]:
        """All tied-optimal orderings, materialized."""
        return tuple(self.iter_orderings())

    def choices(self, state: int) -> tuple[int, ...]:
        """Nodes whose placement from ``state`` ties the state optimum."""
        out = []
        wit = self._witness[state]
        k = 0
        while wit:
            if wit & 1:
                out.append(k)
            wit >>= 1
            k += 1
        return tuple(out)

    def reachable_states(self) -> dict[int, tuple[int, int]]:
        """States on some optimal path, mapped to one (previous state, chosen node).

        The full set maps to (-1, -1). A state is reachable when the witness
        edges connect it to the full set; every reachable state sits on at
        least one tied-optimal ordering.
        """
        full = (1 << self.d) - 1
        seen: dict[int, tuple[int, int]] = {full: (-1, -1)}
        frontier = [full]
        while frontier:
            state = frontier.pop()
            wit = self._witness[state]
            k = 0
            m = wit
            while m:
                if m & 1:
                    nxt = state & ~(1 << k)
                    if nxt not in seen:
                        seen[nxt] = (state, k)
                        frontier.append(nxt)
                m >>= 1
                k += 1
        return seen

    def witness_ordering(
        self, state: int, chosen: int, reachable: dict[int, tuple[int, int]]
    ) -> CompleteOrdering:
        """One tied-optimal ordering that picks ``chosen`` at ``state``."""
        # tail[t] sits at position |state| - 1 + t
        tail = [chosen]
        cur = state
        while reachable[cur][0] != -1:
            prev, node = reachable[cur]
            tail.append(node)
            cur = prev
        # head nodes are chosen last-position-first below the chosen node
        head_state = state & ~(1 << chosen)
        head = []
        while head_state:
            wit = self._witness[head_state]
            k = (wit & -wit).bit_length() - 1
            head.append(k)
            head_state &= ~(1 << k)
        return CompleteOrdering(tuple(reversed(head)) + tuple(tail))


def ev_optimal_orderings(
    prec: PDMatrix,
    cache: ConditionalCache | None = None,
    tie_rtol: float = TIE_RTOL,
) -> EvSearchResult:
    """Minimize the sum of precision conditional variances over all orderings.

    Dynamic program over subset states: nodes are placed from the last
    position to the first, so a node chosen from state S (the still-unplaced
    set) is conditioned exactly on its descendants, the complement of S. The
    per-state witness set keeps every choice within the tie tolerance of the
    state optimum, which is what lets callers recover *all* tied argmin
    orderings, not just one.

    This minimum is a monotone transform of the fully-homoscedastic
    dual-likelihood optimum over orderings.
    """
    d = prec.dim
    if d > 20:
        raise DimensionTooLarge(f"subset DP capped at d=20, got {d}")
    if cache is None:
        cache = ConditionalCache(prec)
    full = (1 << d) - 1
    scores = np.empty(1 << d)
    scores[0] = 0.0
    witness = [0] * (1 << d)
    for state in range(1, full + 1):
        comp = full ^ state
        best = np.inf
        costs = []
        m = state
        k = 0
        while m:
            if m & 1:
                c = cache.cond_var(k, comp) + scores[state & ~(1 << k)]
                costs.append((k, c))
                if c < best:
                    best = c
            m >>= 1
            k += 1
        wit = 0
        for k, c in costs:
            if tie_equal(c, best, tie_rtol):
                wit |= 1 << k
        scores[state] = best
        witness[state] = wit
    return EvSearchResult(
        min_score=float(scores[full]),
        d=d,
        _scores=scores,
        _witness=witness,
        _cache=cache,
        _tie_rtol=tie_rtol,
    )
