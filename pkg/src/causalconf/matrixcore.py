"""Dense symmetric positive-definite matrix algebra.

Schur-complement conditional blocks, Cholesky-based inversion, log
determinants and the empirical covariance: the numerical substrate for the
dual-likelihood machinery in the rest of the package. All conditioning is
done through Cholesky solves of the conditioning block, never through an
explicit inverse.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .exceptions import SingularBlock, SingularCovariance

# Relative tolerance for the symmetry check on construction.
SYMMETRY_RTOL = 1e-12
# A Cholesky pivot (squared factor diagonal) below this fraction of the
# largest diagonal entry marks the factorization target as singular.
PIVOT_RTOL = 1e-12


def index_mask(indices: Iterable[int]) -> int:
    """Pack a collection of 0-based indices into a bitmask."""
    mask = 0
    for k in indices:
        mask |= 1 << k
    return mask


def mask_indices(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into a sorted tuple of 0-based indices."""
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def _chol_lower(arr: np.ndarray, what: str) -> np.ndarray:
    """Lower Cholesky factor with a scale-invariant positivity check."""
    if not np.all(np.isfinite(arr)):
        raise SingularBlock(f"{what}: non-finite entries")
    try:
        lower = np.linalg.cholesky(arr)
    except np.linalg.LinAlgError as exc:
        raise SingularBlock(f"{what}: Cholesky factorization failed") from exc
    pivots = np.diagonal(lower) ** 2
    floor = PIVOT_RTOL * max(float(np.max(np.diagonal(arr))), 0.0)
    if float(np.min(pivots)) <= floor:
        raise SingularBlock(
            f"{what}: Cholesky pivot {pivots.min():.3e} below degeneracy "
            f"threshold {floor:.3e}"
        )
    return lower


class PDMatrix:
    """Symmetric positive-definite matrix of dimension >= 2.

    Entries are validated (symmetry to relative tolerance ``SYMMETRY_RTOL``,
    strictly positive Cholesky pivots) and frozen on construction; instances
    are immutable and safe to share across threads.
    """

    __slots__ = ("_entries", "_chol")

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise ValueError("matrix dimension must be at least 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        asym = float(np.max(np.abs(arr - arr.T)))
        if asym > SYMMETRY_RTOL * max(1.0, float(np.max(np.abs(arr)))):
            raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
        self._chol = _chol_lower(arr, "positive-definiteness check")
        arr.flags.writeable = False
        self._entries = arr

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """The underlying (read-only) d x d array."""
        return self._entries

    def __repr__(self):
        return f"PDMatrix(dim={self.dim})"


class SampleMatrix:
    """n observation rows of d variables each; n >= 1, all entries finite."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        arr = np.array(rows, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array of rows, got ndim {arr.ndim}")
        if arr.shape[0] < 1:
            raise ValueError("need at least one observation row")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample entries must be finite")
        arr.flags.writeable = False
        self._rows = arr

    @property
    def n(self) -> int:
        return self._rows.shape[0]

    @property
    def d(self) -> int:
        return self._rows.shape[1]

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def __repr__(self):
        return f"SampleMatrix(n={self.n}, d={self.d})"


def empirical_covariance(data: SampleMatrix, center: bool = False) -> PDMatrix:
    """Empirical covariance (1/n) * sum of x x^T over the observation rows.

    Uncentered by default: the modelled data are zero-mean, so no mean is
    subtracted. Pass ``center=True`` to subtract the column means first
    (useful for real data of unknown location).

    Raises
    ------
    SingularCovariance
        If the scatter matrix is not numerically positive definite, which
        signals n < d or collinear observations.
    """
    x = data.rows
    if center:
        x = x - x.mean(axis=0)
    scatter = x.T @ x / data.n
    scatter = 0.5 * (scatter + scatter.T)
    try:
        return PDMatrix(scatter)
    except (SingularBlock, ValueError) as exc:
        raise SingularCovariance(
            f"empirical covariance is singular (n={data.n}, d={data.d}): {exc}"
        ) from exc


def conditional_block(
    m: PDMatrix,
    rows: Sequence[int],
    cols: Sequence[int],
    given: Sequence[int],
) -> np.ndarray:
    """Conditional block M[rows, cols] - M[rows, given] M[given, given]^-1 M[given, cols].

    ``given`` must be disjoint from ``rows`` and ``cols``; an empty ``given``
    returns the plain sub-block. The conditioning solve goes through the
    Cholesky factor of M[given, given].

    Raises
    ------
    SingularBlock
        If the conditioning block is numerically singular.
    """
    rows = list(rows)
    cols = list(cols)
    given = list(given)
    d = m.dim
    for name, idx in (("rows", rows), ("cols", cols), ("given", given)):
        for k in idx:
            if not 0 <= k < d:
                raise ValueError(f"{name} index {k} out of range for dim {d}")
    overlap = set(given) & (set(rows) | set(cols))
    if overlap:
        raise ValueError(f"conditioning set overlaps rows/cols: {sorted(overlap)}")
    arr = m.entries
    block = arr[np.ix_(rows, cols)].copy()
    if not given:
        return block
    lower = _chol_lower(arr[np.ix_(given, given)], "conditioning block")
    solved = sla.cho_solve((lower, True), arr[np.ix_(given, cols)])
    block -= arr[np.ix_(rows, given)] @ solved
    return block


def invert_pd(m: PDMatrix) -> PDMatrix:
    """Inverse of a positive-definite matrix via its Cholesky factor."""
    lower = _chol_lower(m.entries, "inversion")
    inv = sla.cho_solve((lower, True), np.eye(m.dim))
    return PDMatrix(0.5 * (inv + inv.T))


def log_det(m: PDMatrix) -> float:
    """Log determinant, computed as twice the log-sum of Cholesky pivots."""
    lower = _chol_lower(m.entries, "log-determinant")
    return float(2.0 * np.sum(np.log(np.diagonal(lower))))


class ConditionalCache:
    """Memoized conditional-block scalar queries against one fixed matrix.

    Ordering sweeps ask for the same conditioned entries over and over
    (conditioning sets are bitmasks over node indices); this caches the
    Cholesky factor per conditioning set and the resulting scalars. Not
    thread-safe; intended for single-threaded sweep loops.
    """

    def __init__(self, m: PDMatrix):
        self._arr = m.entries
        self.dim = m.dim
        self._factors: dict[int, tuple[np.ndarray, tuple[int, ...]]] = {}
        self._vars: dict[tuple[int, int], float] = {}
        self._pairs: dict[tuple[int, int, int], tuple[float, float, float]] = {}
        self._solves: dict[tuple[int, int], np.ndarray] = {}

    def _factor(self, mask: int):
        hit = self._factors.get(mask)
        if hit is None:
            idx = mask_indices(mask)
            lower = _chol_lower(self._arr[np.ix_(idx, idx)], "conditioning block")
            hit = (lower, idx)
            self._factors[mask] = hit
        return hit

    def cond_var(self, k: int, mask: int) -> float:
        """Conditional entry M[k, k | S] for the conditioning bitmask S."""
        if mask & (1 << k):
            raise ValueError(f"index {k} inside its own conditioning set")
        key = (k, mask)
        hit = self._vars.get(key)
        if hit is None:
            if mask == 0:
                hit = float(self._arr[k, k])
            else:
                lower, idx = self._factor(mask)
                col = self._arr[np.ix_(idx, [k])]
                corr = (col.T @ sla.cho_solve((lower, True), col))[0, 0]
                hit = float(self._arr[k, k] - corr)
            self._vars[key] = hit
        return hit

    def cond_pair(self, a: int, b: int, mask: int) -> tuple[float, float, float]:
        """Conditional 2x2 block entries (M[a,a|S], M[a,b|S], M[b,b|S])."""
        if mask & ((1 << a) | (1 << b)):
            raise ValueError("pair indices inside the conditioning set")
        key = (a, b, mask)
        hit = self._pairs.get(key)
        if hit is None:
            if mask == 0:
                hit = (
                    float(self._arr[a, a]),
                    float(self._arr[a, b]),
                    float(self._arr[b, b]),
                )
            else:
                lower, idx = self._factor(mask)
                cols = self._arr[np.ix_(idx, [a, b])]
                blk = self._arr[np.ix_([a, b], [a, b])] - cols.T @ sla.cho_solve(
                    (lower, True), cols
                )
                hit = (float(blk[0, 0]), float(blk[0, 1]), float(blk[1, 1]))
            self._pairs[key] = hit
            self._vars.setdefault((a, mask), hit[0])
            self._vars.setdefault((b, mask), hit[2])
        return hit

    def cond_solve(self, mask: int, k: int) -> np.ndarray:
        """Solve M[S, S] x = M[S, k] for the conditioning bitmask S."""
        key = (mask, k)
        hit = self._solves.get(key)
        if hit is None:
            lower, idx = self._factor(mask)
            hit = sla.cho_solve((lower, True), self._arr[np.ix_(idx, [k])]).ravel()
            hit.flags.writeable = False
            self._solves[key] = hit
        return hit
