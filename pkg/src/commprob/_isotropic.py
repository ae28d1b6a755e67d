"""Counting kernels for pairwise-isotropic tuples of vectors over F_p.

A "form system" is a list of D x D integer matrices B_1..B_m over F_p; a
pair (u, v) of digit vectors is isotropic when u B_c v^T = 0 mod p for every
c.  The counters below enumerate ordered r-tuples of pairwise isotropic
vectors in F_p^D.

Two paths are provided:

* a dense path for r <= 4 that materializes the full pairwise isotropy
  matrix and counts edges / triangles / 4-cliques with float64 matmuls
  (all intermediate counts stay far below 2^53, so the arithmetic is exact);
* a pruned depth-first path for any r, walking joint "perp" candidate lists.

Both are oblivious to any recursion or closed formula for these counts.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from .errors import BudgetExceeded

# The dense path is only sensible while the isotropy matrix fits in memory.
DENSE_VECTOR_LIMIT = 8192
DEFAULT_DENSE_BUDGET = 10**12  # multiply-accumulate ops, BLAS-backed
DEFAULT_DFS_BUDGET = 10**8  # candidate-list visits, pure Python


def digit_vectors(p: int, dim: int) -> np.ndarray:
    """All p**dim digit vectors, row i encoding i in little-endian base p."""
    count = p**dim
    out = np.empty((count, dim), dtype=np.int64)
    idx = np.arange(count, dtype=np.int64)
    for j in range(dim):
        out[:, j] = idx % p
        idx //= p
    return out


def isotropy_matrix(forms: List[np.ndarray], p: int, dim: int) -> np.ndarray:
    """Boolean matrix Z with Z[u, v] = 1 iff all forms vanish on (u, v)."""
    vecs = digit_vectors(p, dim)
    count = vecs.shape[0]
    z = np.ones((count, count), dtype=bool)
    block = max(1, min(count, 2**22 // max(count, 1) + 1))
    for form in forms:
        left = (vecs @ (np.asarray(form, dtype=np.int64) % p)) % p
        for start in range(0, count, block):
            stop = min(start + block, count)
            vals = (left[start:stop] @ vecs.T) % p
            z[start:stop] &= vals == 0
    return z


def _triangles(z32: np.ndarray) -> int:
    """Ordered pairwise-isotropic triples within the set indexing z32 (float32 0/1)."""
    count = z32.shape[0]
    total = 0
    block = max(1, 2**24 // max(count, 1))
    for start in range(0, count, block):
        stop = min(start + block, count)
        prod = z32[start:stop] @ z32
        total += int((prod * z32[start:stop]).sum(dtype=np.float64))
    return total


def count_isotropic_dense(
    forms: List[np.ndarray], p: int, dim: int, r: int, budget: Optional[int]
) -> int:
    count = p**dim
    if r == 0:
        return 1
    if r == 1:
        return count
    build_cost = len(forms) * count * count
    if budget is not None and build_cost > budget:
        raise BudgetExceeded(build_cost, budget, "isotropy matrix build")
    z = isotropy_matrix(forms, p, dim)
    if r == 2:
        return int(z.sum(dtype=np.int64))
    # exact in float32/float64: entries are 0/1, inner sums <= count < 2^24
    z32 = z.astype(np.float32)
    if r == 3:
        cost = count**3
        if budget is not None and cost > budget:
            raise BudgetExceeded(cost, budget, "triple count")
        return _triangles(z32)
    if r == 4:
        # group first coordinates with identical isotropy rows: they see the
        # same candidate set, so one triangle count covers the whole class
        rows, counts = np.unique(z, axis=0, return_counts=True)
        degrees = rows.sum(axis=1)
        cost = int((degrees.astype(np.int64) ** 3).sum())  # one pass per class
        if budget is not None and cost > budget:
            raise BudgetExceeded(cost, budget, "quadruple count")
        total = 0
        for row, mult in zip(rows, counts):
            support = np.nonzero(row)[0]
            sub = z32[np.ix_(support, support)]
            total += int(mult) * _triangles(sub)
        return total
    raise ValueError("dense path supports r <= 4")


def count_isotropic_dfs(
    forms: List[np.ndarray], p: int, dim: int, r: int, budget: Optional[int]
) -> int:
    """Pruned enumeration: the i-th vector ranges over the joint perp so far."""
    count = p**dim
    if r == 0:
        return 1
    vecs = digit_vectors(p, dim)
    mats = [np.asarray(f, dtype=np.int64) % p for f in forms]
    visits = 0
    limit = budget if budget is not None else DEFAULT_DFS_BUDGET

    def extend(candidates: np.ndarray, depth: int) -> int:
        nonlocal visits
        visits += len(candidates)
        if visits > limit:
            raise BudgetExceeded(visits, limit, "isotropic tuple enumeration")
        if depth == r:
            return len(candidates)
        total = 0
        for v in candidates:
            keep = np.ones(len(candidates), dtype=bool)
            vv = vecs[v]
            for mat in mats:
                keep &= (vecs[candidates] @ (mat @ vv)) % p == 0
            total += extend(candidates[keep], depth + 1)
        return total

    return extend(np.arange(count, dtype=np.int64), 1)


def count_isotropic(
    forms: List[np.ndarray],
    p: int,
    dim: int,
    r: int,
    budget: Optional[int] = None,
    force_dfs: bool = False,
) -> int:
    """Count ordered r-tuples in F_p^dim pairwise isotropic for all forms."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if not force_dfs and r <= 4 and p**dim <= DENSE_VECTOR_LIMIT:
        return count_isotropic_dense(
            forms, p, dim, r, DEFAULT_DENSE_BUDGET if budget is None else budget
        )
    return count_isotropic_dfs(forms, p, dim, r, budget)
