"""Linear Gaussian structural causal models.

Representation, exact covariance, ground-truth total effects, Gaussian
sampling, and the randomized benchmark-model generator used by the
simulation harness. All randomness flows through numpy's PCG64 generator
(``numpy.random.default_rng``) seeded explicitly, so every artifact is
reproducible from one integer (or entropy tuple) per invocation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import GenerationExhausted, InvalidSampleCount
from .matrixcore import PDMatrix, SampleMatrix
from .orderings import CompleteOrdering

GENERAL = "general"
PARTIAL_EV = "partial_ev"
FULL_EV = "ev"

_REGIME_KINDS = (GENERAL, PARTIAL_EV, FULL_EV)


@dataclass(frozen=True)
class Regime:
    """Error-variance regime: arbitrary, pair-equal (i, j), or all equal."""

    kind: str
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _REGIME_KINDS:
            raise ValueError(f"unknown regime kind {self.kind!r}")
        if self.kind == PARTIAL_EV:
            if self.i is None or self.j is None or self.i == self.j:
                raise ValueError("partial_ev regime needs two distinct node indices")
        elif self.i is not None or self.j is not None:
            raise ValueError(f"regime {self.kind!r} does not carry node indices")

    @classmethod
    def general(cls) -> "Regime":
        return cls(GENERAL)

    @classmethod
    def partial_ev(cls, i: int, j: int) -> "Regime":
        return cls(PARTIAL_EV, i, j)

    @classmethod
    def full_ev(cls) -> "Regime":
        return cls(FULL_EV)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == PARTIAL_EV:
            out["i"] = self.i
            out["j"] = self.j
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "Regime":
        return cls(doc["kind"], doc.get("i"), doc.get("j"))


@dataclass(frozen=True)
class LinearScm:
    """Acyclic linear Gaussian SCM: X = W X + eps, eps ~ N(0, diag(variances)).

    ``weights[child, parent]`` is the direct effect of parent on child and
    must vanish whenever the child precedes the parent under ``order`` (the
    certificate of acyclicity). ``regime`` records which variance law
    produced the model; it is metadata, not a constraint.
    """

    weights: np.ndarray
    variances: np.ndarray
    order: CompleteOrdering
    regime: Optional[Regime] = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        v = np.array(self.variances, dtype=float)
        d = self.order.d
        if w.shape != (d, d):
            raise ValueError(f"weights shape {w.shape} does not match order d={d}")
        if v.shape != (d,):
            raise ValueError(f"variances shape {v.shape} does not match d={d}")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
            raise ValueError("weights and variances must be finite")
        if np.any(v <= 0):
            raise ValueError("error variances must be strictly positive")
        pos = {k: t for t, k in enumerate(self.order.perm)}
        for child in range(d):
            for parent in range(d):
                if w[child, parent] != 0.0 and pos[child] <= pos[parent]:
                    raise ValueError(
                        f"weight {parent}->{child} violates the causal ordering"
                    )
        w.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "variances", v)

    @property
    def d(self) -> int:
        return self.order.d

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "order": list(self.order.perm),
            "weights": self.weights.tolist(),
            "variances": self.variances.tolist(),
            "regime": self.regime.to_json() if self.regime is not None else None,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LinearScm":
        regime = doc.get("regime")
        return cls(
            weights=np.array(doc["weights"], dtype=float),
            variances=np.array(doc["variances"], dtype=float),
            order=CompleteOrdering(tuple(doc["order"])),
            regime=Regime.from_json(regime) if regime else None,
        )


def _path_matrix(scm: LinearScm) -> np.ndarray:
    """(I - W)^-1 by forward substitution along the causal order.

    Row k of the result is e_k + W[k, :] @ rows of earlier nodes, so entry
    [j, i] is the total effect of i on j (sum over directed paths).
    """
    d = scm.d
    total = np.zeros((d, d))
    for k in scm.order.perm:
        total[k] = scm.weights[k] @ total
        total[k, k] += 1.0
    return total


def covariance_of(scm: LinearScm) -> PDMatrix:
    """Exact model covariance (I - W)^-1 diag(variances) (I - W)^-T."""
    total = _path_matrix(scm)
    cov = (total * scm.variances) @ total.T
    return PDMatrix(0.5 * (cov + cov.T))


def true_effect(scm: LinearScm, i: int, j: int) -> float:
    """Ground-truth total causal effect of i on j (path-sum route).

    Equals the unit change of E[X_j] under an intervention on X_i; agrees
    with the covariance-side adjustment coefficient for the generating
    ordering. Exactly zero when j is not a descendant of i.
    """
    if i == j:
        raise ValueError("query nodes must be distinct")
    return float(_path_matrix(scm)[j, i])


def is_descendant(scm: LinearScm, i: int, j: int) -> bool:
    """Whether j is reachable from i through nonzero direct effects."""
    d = scm.d
    frontier = [i]
    seen = {i}
    while frontier:
        node = frontier.pop()
        for child in range(d):
            if scm.weights[child, node] != 0.0 and child not in seen:
                if child == j:
                    return True
                seen.add(child)
                frontier.append(child)
    return False


def sample(scm: LinearScm, n: int, seed) -> SampleMatrix:
    """Draw n independent observations by solving (I - W) x = eps in order."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidSampleCount(f"sample count must be a positive integer, got {n}")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((n, scm.d)) * np.sqrt(scm.variances)
    x = np.zeros_like(eps)
    for k in scm.order.perm:
        x[:, k] = eps[:, k] + x @ scm.weights[k]
    return SampleMatrix(x)


def fit_along_order(cov: PDMatrix, order: CompleteOrdering) -> LinearScm:
    """Recover (weights, variances) from a covariance by successive regressions.

    Each node is regressed on its predecessors under ``order``; the residual
    variance becomes the node's error variance. Round-trips covariance_of.
    """
    d = cov.dim
    arr = cov.entries
    weights = np.zeros((d, d))
    variances = np.empty(d)
    for k in order.perm:
        pred = list(order.predecessors(k))
        if pred:
            coef = np.linalg.solve(arr[np.ix_(pred, pred)], arr[np.ix_(pred, [k])])
            weights[k, pred] = coef.ravel()
            variances[k] = arr[k, k] - (arr[np.ix_([k], pred)] @ coef)[0, 0]
        else:
            variances[k] = arr[k, k]
    return LinearScm(weights=weights, variances=variances, order=order)


def generate_benchmark_scm(
    d: int,
    regime: Regime,
    require_nonzero: bool,
    i: int,
    j: int,
    seed,
    edge_prob: float = 0.5,
    weight_mean: float = 0.5,
    weight_spread: float = 0.1,
    spread_is: str = "sd",
    max_attempts: int = 10**6,
) -> LinearScm:
    """Random benchmark SCM: random order, sparse edges, Gaussian weights.

    One attempt draws, in this fixed stream order: a random permutation;
    then per ordered pair (child position ascending, parent position
    ascending) an edge indicator with probability ``edge_prob`` followed
    immediately by the edge weight N(weight_mean, weight_spread) when the
    edge is kept. The effect condition depends only on the graph and the
    weights, so attempts advance on one generator stream until it holds:
    a nonzero path-sum effect i -> j when ``require_nonzero``, otherwise
    j not a descendant of i (an exactly-zero effect).

    Error variances are drawn once, after acceptance: ``general`` draws
    every variance uniformly from [0.5, 1.5]; ``partial_ev`` draws the
    same, then pins the regime's query pair to 1; ``ev`` sets all
    variances to 1 without consuming draws. Keeping the variance draws
    out of the rejection loop means one seed yields the same graph and
    weights under every regime (common random numbers for regime
    comparisons).

    ``weight_spread`` is read as a standard deviation by default; pass
    ``spread_is="var"`` to read it as a variance. Weights are used as
    drawn, including values near zero.
    """
    if d < 3:
        raise ValueError(f"benchmark models need d >= 3, got d={d}")
    if i == j or not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"invalid query pair ({i}, {j}) for d={d}")
    if spread_is not in ("sd", "var"):
        raise ValueError(f"spread_is must be 'sd' or 'var', got {spread_is!r}")
    sd = weight_spread if spread_is == "sd" else float(np.sqrt(weight_spread))
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        perm = tuple(int(k) for k in rng.permutation(d))
        order = CompleteOrdering(perm)
        weights = np.zeros((d, d))
        for child_pos in range(1, d):
            for parent_pos in range(child_pos):
                if rng.random() < edge_prob:
                    weights[perm[child_pos], perm[parent_pos]] = rng.normal(
                        weight_mean, sd
                    )
        probe = LinearScm(weights=weights, variances=np.ones(d), order=order)
        if require_nonzero:
            if true_effect(probe, i, j) == 0.0:
                continue
        elif is_descendant(probe, i, j):
            continue
        if regime.kind == GENERAL:
            variances = rng.uniform(0.5, 1.5, d)
        elif regime.kind == PARTIAL_EV:
            variances = rng.uniform(0.5, 1.5, d)
            variances[regime.i] = 1.0
            variances[regime.j] = 1.0
        else:
            variances = np.ones(d)
        return LinearScm(
            weights=weights, variances=variances, order=order, regime=regime
        )
    raise GenerationExhausted(
        f"no admissible model in {max_attempts} attempts "
        f"(require_nonzero={require_nonzero}, pair=({i}, {j}))"
    )
