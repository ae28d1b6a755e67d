"""Exact counts of pairwise-commuting tuples and their conjugation orbits.

Three independent routes are provided: pruned brute-force enumeration,
the nested-centralizer class-number recursion, and explicit orbit
partitioning.  All probabilities are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, DomainError
from .groups import FiniteGroup, _iter_bits

DEFAULT_BUDGET = 10**8

METHODS = ("kappa_recursion", "bruteforce", "class_formula")


def _engine_cache(group: FiniteGroup) -> dict:
    return group._cache.setdefault("engine", {})


def commuting_tuple_count(
    group: FiniteGroup, r: int, budget: Optional[int] = DEFAULT_BUDGET
) -> int:
    """|Comm_r(G)| by pruned enumeration: the independent counting oracle.

    The i-th coordinate ranges over the joint centralizer of the first i-1
    coordinates (as a bitmask); identical (depth, candidate-mask) states are
    merged, which collapses repeated subtrees without using any class theory.

    The cost is estimated up front as n * sum_x |C(x)|^(r-2) and checked
    against the budget (pass ``budget=None`` to disable).
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    if r == 0:
        return 1
    if r == 1:
        return group.order
    masks = group.centralizer_masks
    if budget is not None:
        estimate = group.order * sum(m.bit_count() ** (r - 2) for m in masks)
        if estimate > budget:
            raise BudgetExceeded(estimate, budget, "commuting tuple enumeration")
    memo = _engine_cache(group).setdefault("comm_count", {})

    def count(depth: int, mask: int) -> int:
        if depth == 1:
            return mask.bit_count()
        key = (depth, mask)
        val = memo.get(key)
        if val is None:
            val = 0
            for x in _iter_bits(mask):
                val += count(depth - 1, mask & masks[x])
            memo[key] = val
        return val

    return count(r, (1 << group.order) - 1)


def higher_class_number(
    group: FiniteGroup, r: int, budget: Optional[int] = None
) -> int:
    """Number of diagonal-conjugation orbits on Comm_r(G).

    Computed by summing, over conjugacy classes of nested centralizer
    subgroups, the orbit counts one level down; memoized per subgroup
    (keyed by its sorted element tuple in the top group's universe).
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    memo = _engine_cache(group).setdefault("kappa", {})
    work = 0

    def rec(view, rr: int) -> int:
        nonlocal work
        if rr == 0:
            return 1
        sub = view.materialize()
        if sub.is_abelian():
            return sub.order**rr  # trivial conjugation: every tuple is an orbit
        key = (view.elements, rr)
        val = memo.get(key)
        if val is not None:
            return val
        data = sub.conjugacy_classes()
        work += sub.order * data.class_count
        if budget is not None and work > budget:
            raise BudgetExceeded(work, budget, "class-number recursion")
        total = 0
        for rep in data.representatives:
            cmask = sub.centralizer_mask(rep)
            elems = tuple(view.elements[i] for i in _iter_bits(cmask))
            total += rec(group.subgroup_view(elems), rr - 1)
        memo[key] = total
        return total

    return rec(group.subgroup_view(range(group.order)), r)


def kappa2_class_formula(group: FiniteGroup) -> int:
    """Sum of centralizer class counts over conjugacy classes (equals kappa_2)."""
    total = 0
    for rep in group.conjugacy_classes().representatives:
        sub = group.centralizer(rep).materialize()
        total += sub.conjugacy_classes().class_count
    return total


def kappa3_pairs_formula(group: FiniteGroup) -> int:
    """Double class sum of joint-centralizer class counts (equals kappa_3).

    Outer sum over conjugacy classes [g]; inner sum over classes [h] of
    C_G(g); each term is the class count of C_G(g, h).
    """
    total = 0
    for g in group.conjugacy_classes().representatives:
        cg = group.centralizer(g)
        sub = cg.materialize()
        for h_local in sub.conjugacy_classes().representatives:
            h = cg.elements[h_local]
            joint = group.centralizer((g, h)).materialize()
            total += joint.conjugacy_classes().class_count
    return total


@dataclass(frozen=True)
class ProbResult:
    """Exact probability that r uniform elements pairwise commute."""

    r: int
    comm_count: int
    p_r: Fraction
    kappa_prev: int  # orbit count one level down: |G|^(r-1) * p_r
    method: str


def commuting_probability(
    group: FiniteGroup,
    r: int,
    method: str = "kappa_recursion",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> ProbResult:
    """P_r(G) as an exact rational, by the requested method."""
    if r < 1:
        raise DomainError("r must be at least 1")
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}")
    n = group.order
    if method == "bruteforce":
        comm = commuting_tuple_count(group, r, budget)
        kappa_prev, rem = divmod(comm, n)
        assert rem == 0, "tuple count must be divisible by the group order"
    else:
        if method == "class_formula":
            if r == 2:
                kappa_prev = group.conjugacy_classes().class_count
            elif r == 3:
                kappa_prev = kappa2_class_formula(group)
            elif r == 4:
                kappa_prev = kappa3_pairs_formula(group)
            else:
                raise DomainError("class formulas cover r in {2, 3, 4}")
        else:
            kappa_prev = higher_class_number(group, r - 1)
        comm = kappa_prev * n
    return ProbResult(
        r=r,
        comm_count=comm,
        p_r=Fraction(comm, n**r),
        kappa_prev=kappa_prev,
        method=method,
    )


@dataclass(frozen=True)
class LoopGroupoidCount:
    """An orbit count together with its representation-theoretic meaning."""

    r: int
    count: int
    meaning: str


def loop_groupoid_simple_count(group: FiniteGroup, r: int) -> LoopGroupoidCount:
    """Simple-module count of the (r-2)-fold loop groupoid algebra.

    This equals the orbit count on commuting (r-1)-tuples, hence
    |G|^(r-1) * P_r(G).  For r = 3 it is the simple count of the untwisted
    Drinfeld double; for r = 4, of the untwisted quantum triple, which also
    equals the untwisted 4-torus gauge-theory count.
    """
    if r < 2:
        raise DomainError("r must be at least 2")
    meanings = {
        2: "simple modules of the group algebra C[G] (conjugacy classes)",
        3: "simple modules of the untwisted Drinfeld double D(G)",
        4: (
            "simple modules of the double loop groupoid algebra "
            "(untwisted quantum triple; untwisted 4-torus gauge count)"
        ),
    }
    meaning = meanings.get(
        r, f"simple modules of the {r - 2}-fold loop groupoid algebra"
    )
    return LoopGroupoidCount(r=r, count=higher_class_number(group, r - 1), meaning=meaning)


# -- explicit orbit partition --------------------------------------------------


def _distinct_conjugation_maps(group: FiniteGroup) -> list:
    """The distinct permutations x -> g x g^-1 (one per coset of the center)."""
    maps = {tuple(group.conj(g, x) for x in range(group.order)) for g in group.elements()}
    return sorted(maps)


def _orbit_count_numpy(group: FiniteGroup, r: int, conj_maps: list) -> int:
    n = group.order
    cent = np.array(group.centralizer_masks, dtype=np.uint64)
    tuples = np.arange(n, dtype=np.int64).reshape(-1, 1)
    cur = cent.copy()
    for _ in range(r - 1):
        bits = np.unpackbits(cur.view(np.uint8).reshape(-1, 8), axis=1, bitorder="little")
        rows, cols = np.nonzero(bits[:, :n])
        tuples = np.concatenate(
            [tuples[rows], cols.reshape(-1, 1).astype(np.int64)], axis=1
        )
        cur = cur[rows] & cent[cols]
    keys = np.zeros(len(tuples), dtype=np.int64)
    for j in range(r):
        keys = keys * n + tuples[:, j]
    canon = keys.copy()
    for cmap in conj_maps:
        arr = np.array(cmap, dtype=np.int64)
        mapped = np.zeros(len(tuples), dtype=np.int64)
        for j in range(r):
            mapped = mapped * n + arr[tuples[:, j]]
        np.minimum(canon, mapped, out=canon)
    return int((canon == keys).sum())


def _orbit_count_python(group: FiniteGroup, r: int, conj_maps: list) -> int:
    masks = group.centralizer_masks
    count = 0
    stack = [((), (1 << group.order) - 1)]
    while stack:
        prefix, mask = stack.pop()
        if len(prefix) == r:
            smallest = min(tuple(cmap[x] for x in prefix) for cmap in conj_maps)
            count += smallest == prefix
            continue
        for x in _iter_bits(mask):
            stack.append((prefix + (x,), mask & masks[x]))
    return count


def orbit_count_direct(
    group: FiniteGroup,
    r: int,
    budget: Optional[int] = DEFAULT_BUDGET,
    force_python: bool = False,
) -> int:
    """Diagonal-conjugation orbits on Comm_r(G) by explicit partition.

    Every commuting r-tuple is enumerated and compared against all its
    simultaneous conjugates; tuples that are the lexicographic minimum of
    their orbit are counted, one per orbit.  Conjugation is scanned over the
    distinct conjugation maps (one per coset of the center).  This is the
    dumb cross-check for the class-number recursion.
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    if r == 0:
        return 1
    conj_maps = _distinct_conjugation_maps(group)
    total_tuples = commuting_tuple_count(group, r, budget=None)
    if budget is not None:
        estimate = total_tuples * len(conj_maps)
        if estimate > budget:
            raise BudgetExceeded(estimate, budget, "orbit partition")
    n = group.order
    if not force_python and n <= 64 and n**r < 2**62:
        return _orbit_count_numpy(group, r, conj_maps)
    return _orbit_count_python(group, r, conj_maps)
