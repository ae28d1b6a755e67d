"""Commutator structure of class-2 exponent-p groups as bilinear data.

The central quotient V and the derived subgroup W of such a group are
F_p-vector spaces, and the commutator descends to an alternating bilinear
map beta: V x V -> W.  Commuting in the group is then detected by beta, so
tuple counts reduce to isotropic-vector counts against beta's coordinate
forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ._isotropic import count_isotropic, digit_vectors
from .engine import commuting_probability
from .errors import (
    BudgetExceeded,
    CheckFailed,
    HypothesisNotMet,
    NotClass2ExponentP,
)
from .groups import FiniteGroup
from .symplectic import heisenberg_probability, prime_power


@dataclass(frozen=True)
class CommutatorTensor:
    """Structure constants of the commutator map on V = G/Z(G), W = G'.

    ``beta[i][j]`` is the digit vector (length dim_w) of the commutator of
    the i-th and j-th V-basis lifts; ``basis_lift`` maps V-basis index to a
    group element, ``w_basis`` lists the chosen W-basis (group elements).
    """

    p: int
    dim_v: int
    dim_w: int
    beta: tuple
    basis_lift: tuple
    w_basis: tuple

    def coordinate_forms(self) -> List[np.ndarray]:
        """One dim_v x dim_v matrix over F_p per W-coordinate."""
        return [
            np.array(
                [[self.beta[i][j][c] for j in range(self.dim_v)] for i in range(self.dim_v)],
                dtype=np.int64,
            )
            for c in range(self.dim_w)
        ]

    def contraction_matrix(self, digits) -> List[List[int]]:
        """Rows of beta(v, e_j) for v with the given digits: a dim_w x dim_v matrix."""
        p = self.p
        return [
            [
                sum(digits[i] * self.beta[i][j][c] for i in range(self.dim_v)) % p
                for j in range(self.dim_v)
            ]
            for c in range(self.dim_w)
        ]


def _rank_mod_p(matrix: List[List[int]], p: int) -> int:
    m = [[int(v) % p for v in row] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(v * inv) % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(a - c * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _greedy_basis(group: FiniteGroup, p: int) -> Tuple[list, dict]:
    """Greedy F_p-basis (by element order) of an elementary abelian group,
    plus the coordinate map element -> digit tuple."""
    basis = []
    span = {0}
    for x in group.elements():
        if x in span:
            continue
        basis.append(x)
        extended = set(span)
        for s in span:
            cur = s
            for _ in range(p - 1):
                cur = group.mul(cur, x)
                extended.add(cur)
        span = extended
    coords = {}
    for digits in itertools.product(range(p), repeat=len(basis)):
        e = 0
        for b, c in zip(basis, digits):
            for _ in range(c):
                e = group.mul(e, b)
        coords[e] = digits
    if len(coords) != group.order:
        raise NotClass2ExponentP("derived subgroup is not elementary abelian")
    return basis, coords


def extract_tensor(group: FiniteGroup) -> CommutatorTensor:
    """Commutator tensor of a class-2 exponent-p group.

    Accepted inputs: p-groups of class <= 2 and exponent p, or p-groups
    whose derived subgroup has order exactly p (where centrality and the
    elementary central quotient are automatic).  Basis choices are greedy in
    element order, recorded in ``basis_lift`` for reproducibility.
    """
    if group.order == 1:
        raise NotClass2ExponentP("trivial group has no prime parameter")
    pp = prime_power(group.order)
    if pp is None:
        raise NotClass2ExponentP("group order is not a prime power")
    p = pp[0]
    derived = group.derived_subgroup()
    center = group.center()
    if not set(derived.elements) <= set(center.elements):
        raise NotClass2ExponentP("derived subgroup is not central")
    if derived.order != p and group.exponent() != p:
        raise NotClass2ExponentP(f"exponent is not {p} and |G'| != {p}")

    quotient, proj = group.quotient_with_projection(center)
    if quotient.order > 1 and quotient.exponent() != p:
        raise NotClass2ExponentP("central quotient is not elementary abelian")

    basis_lift = []
    span = {0}
    for g in group.elements():
        v = proj[g]
        if v in span:
            continue
        basis_lift.append(g)
        extended = set(span)
        for s in span:
            cur = s
            for _ in range(p - 1):
                cur = quotient.mul(cur, v)
                extended.add(cur)
        span = extended
    d = len(basis_lift)

    w_group = derived.materialize()
    w_basis_local, w_coords = _greedy_basis(w_group, p)
    w_basis = tuple(derived.elements[b] for b in w_basis_local)
    m = len(w_basis)

    beta = tuple(
        tuple(
            w_coords[derived.index_of[group.commutator(a, b)]]
            for b in basis_lift
        )
        for a in basis_lift
    )
    for i in range(d):
        if any(beta[i][i]):
            raise CheckFailed("commutator tensor is not alternating on the diagonal")
        for j in range(d):
            if any((beta[i][j][c] + beta[j][i][c]) % p for c in range(m)):
                raise CheckFailed("commutator tensor is not antisymmetric")
    return CommutatorTensor(
        p=p,
        dim_v=d,
        dim_w=m,
        beta=beta,
        basis_lift=tuple(basis_lift),
        w_basis=w_basis,
    )


def isotropic_count_tensor(
    tensor: CommutatorTensor, r: int, budget: Optional[int] = None
) -> int:
    """N_r: tuples in V^r that pairwise vanish under beta (direct count)."""
    return count_isotropic(
        tensor.coordinate_forms(), tensor.p, tensor.dim_v, r, budget
    )


def isotropic_span_count(
    tensor: CommutatorTensor, r: int, budget: Optional[int] = None
) -> int:
    """N_(r+1) via the span recursion: sum of |span(tuple)-perp| over
    isotropic r-tuples.

    The perp size is computed from the rank of the stacked contraction
    matrix of a span basis (not by filtering candidates), so this is a
    second, independent route to the same count.
    """
    p, d = tensor.p, tensor.dim_v
    if r == 0:
        return p**d
    vecs = digit_vectors(p, d)
    forms = tensor.coordinate_forms()
    total = 0
    visits = 0
    limit = budget if budget is not None else 10**8

    def perp_size(prefix_rows) -> int:
        stacked = []
        for digits in prefix_rows:
            stacked.extend(tensor.contraction_matrix(digits))
        if not stacked:
            return p**d
        return p ** (d - _rank_mod_p(stacked, p))

    def walk(prefix_rows, candidates, depth: int) -> int:
        nonlocal visits
        visits += len(candidates)
        if visits > limit:
            raise BudgetExceeded(visits, limit, "span recursion enumeration")
        if depth == r:
            return sum(perp_size(prefix_rows + [vecs[v]]) for v in candidates)
        out = 0
        for v in candidates:
            keep = np.ones(len(candidates), dtype=bool)
            vv = vecs[v]
            for mat in forms:
                keep &= (vecs[candidates] @ (mat @ vv)) % p == 0
            out += walk(prefix_rows + [vv], candidates[keep], depth + 1)
        return out

    return walk([], np.arange(p**d, dtype=np.int64), 1)


def p2_rank_distribution(tensor: CommutatorTensor) -> Fraction:
    """P_2 as the average of p^-rank over all contractions beta_v."""
    p, d = tensor.p, tensor.dim_v
    if d == 0:
        return Fraction(1)
    total = Fraction(0)
    for digits in itertools.product(range(p), repeat=d):
        rank = _rank_mod_p(tensor.contraction_matrix(digits), p)
        total += Fraction(1, p**rank)
    return total / p**d


def full_contraction_check(
    tensor: CommutatorTensor,
) -> Tuple[bool, Optional[Fraction]]:
    """Does every nonzero contraction surject onto W?  If so, P_2 is forced.

    Returns (holds, P_2) with P_2 = p^-d + (1 - p^-d) p^-m when the
    condition holds, else (False, None).
    """
    p, d, m = tensor.p, tensor.dim_v, tensor.dim_w
    for digits in itertools.product(range(p), repeat=d):
        if not any(digits):
            continue
        if _rank_mod_p(tensor.contraction_matrix(digits), p) != m:
            return False, None
    a = Fraction(1, p**d)
    return True, a + (1 - a) * Fraction(1, p**m)


@dataclass(frozen=True)
class HeisenbergTypeReport:
    """Necessary conditions for membership in the rank-n family over F_q.

    Deciding whether V genuinely carries a compatible F_q-linear structure
    is a module-isomorphism problem with no effective test here, so that
    condition is reported as "not verified" for raw input groups; catalog
    constructors carry the structure by construction.
    """

    p: int
    q: int  # |G'|, the candidate field size
    derived_equals_center: bool
    class2_exponent_p: bool
    full_contraction: bool
    fq_linearity: str  # always "not verified" for raw groups

    @property
    def necessary_conditions_hold(self) -> bool:
        return (
            self.derived_equals_center
            and self.class2_exponent_p
            and self.full_contraction
        )


def heisenberg_type_report(group: FiniteGroup) -> HeisenbergTypeReport:
    """Check the testable membership conditions for the rank-n family."""
    pp = prime_power(group.order)
    if pp is None:
        raise HypothesisNotMet("group order is not a prime power")
    p = pp[0]
    derived = group.derived_subgroup()
    center = group.center()
    q = derived.order
    class2_exp = group.nilpotency_class_le2() and group.exponent() == p
    full = False
    if class2_exp:
        full, _ = full_contraction_check(extract_tensor(group))
    return HeisenbergTypeReport(
        p=p,
        q=q,
        derived_equals_center=derived.elements == center.elements,
        class2_exponent_p=class2_exp,
        full_contraction=full,
        fq_linearity="not verified",
    )


def full_contraction_group_check(
    group: FiniteGroup, tensor: Optional[CommutatorTensor] = None
) -> Tuple[bool, Optional[Fraction]]:
    """``full_contraction_check`` validated against the source group.

    When the condition holds, asserts that every noncentral element has
    centralizer index |G'| and that the forced P_2 matches the engine.
    """
    tensor = tensor if tensor is not None else extract_tensor(group)
    holds, p2 = full_contraction_check(tensor)
    if holds:
        w = group.derived_subgroup().order
        zset = set(group.center().elements)
        for x in group.elements():
            if x in zset:
                continue
            if group.centralizer(x).order * w != group.order:
                raise CheckFailed(
                    f"noncentral element {x} of {group.name} has centralizer "
                    f"index {group.order // group.centralizer(x).order} != {w}"
                )
        engine_p2 = commuting_probability(group, 2).p_r
        if engine_p2 != p2:
            raise CheckFailed(
                f"forced P_2 {p2} differs from engine value {engine_p2}"
            )
    return holds, p2


@dataclass(frozen=True)
class SymplecticReductionReport:
    p: int
    n: int
    dim_v: int
    checked_r: tuple
    values: tuple  # exact P_r values, both routes agreeing


def verify_symplectic_reduction(
    group: FiniteGroup, r_max: int = 4
) -> SymplecticReductionReport:
    """For |G'| = p: the commutator form is symplectic and P_r is counted by it.

    Extracts the tensor, checks nondegeneracy and even dimension 2n, and
    asserts that the engine's P_r equals the rank-n symplectic probability
    for r = 2..r_max.
    """
    pp = prime_power(group.order)
    if pp is None:
        raise HypothesisNotMet("group order is not a prime power")
    p = pp[0]
    if group.derived_subgroup().order != p:
        raise HypothesisNotMet(f"derived subgroup order is not {p}")
    tensor = extract_tensor(group)
    if tensor.dim_w != 1:
        raise CheckFailed("derived subgroup of order p must give dim W = 1")
    d = tensor.dim_v
    if d % 2:
        raise CheckFailed(f"commutator form on an odd-dimensional space (dim {d})")
    full_matrix = [
        [tensor.beta[i][j][0] for j in range(d)] for i in range(d)
    ]
    if _rank_mod_p(full_matrix, p) != d:
        raise CheckFailed("commutator form is degenerate")
    n = d // 2
    rs, values = [], []
    for r in range(2, r_max + 1):
        engine_value = commuting_probability(group, r).p_r
        counted = heisenberg_probability(p, n, r)
        if engine_value != counted:
            raise CheckFailed(
                f"P_{r}({group.name}) = {engine_value} but rank-{n} count gives {counted}"
            )
        rs.append(r)
        values.append(engine_value)
    return SymplecticReductionReport(
        p=p, n=n, dim_v=d, checked_r=tuple(rs), values=tuple(values)
    )
