"""Closed formulas, sharp bounds, and rigidity validators.

Every checker here recomputes the engine value and fails loudly
(``CheckFailed``) when a claimed identity, bound, or equivalence is
violated; they are theorem validators, not best-effort heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .engine import commuting_probability
from .errors import AbelianInput, CheckFailed, DomainError, HypothesisNotMet
from .groups import FiniteGroup, SubgroupView
from .symplectic import is_prime


def smallest_prime_divisor(n: int) -> int:
    if n < 2:
        raise DomainError(f"{n} has no prime divisor")
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return n


def _prob(group: FiniteGroup, r: int) -> Fraction:
    return commuting_probability(group, r).p_r


def _alpha(group: FiniteGroup) -> Fraction:
    return Fraction(group.center().order, group.order)


# -- the cyclic-index formula ---------------------------------------------------


@dataclass(frozen=True)
class CyclicIndexData:
    """An abelian normal subgroup with cyclic quotient, plus hypothesis data.

    ``hypothesis_holds`` records whether every nontrivial power of the coset
    generator ``t`` has the same fixed subgroup in A (namely A meet Z(G));
    ``failure_witness`` is (j, |C_A(t^j)|) for the first failing power.
    """

    subgroup: SubgroupView
    t: int
    omega: int
    n: int
    f: int
    hypothesis_holds: bool
    failure_witness: Optional[Tuple[int, int]]


def _analyze_cyclic_index(group: FiniteGroup, sub: SubgroupView) -> CyclicIndexData:
    quotient, proj = group.quotient_with_projection(sub)
    if not quotient.is_cyclic():
        raise DomainError("quotient by the subgroup is not cyclic")
    omega = quotient.order
    if omega == 1:
        t = 0
    else:
        t = min(
            g for g in group.elements() if quotient.element_order(proj[g]) == omega
        )
    masks = group.centralizer_masks
    zset = set(group.center().elements)
    fixed = [a for a in sub.elements if (masks[t] >> a) & 1]
    central = [a for a in sub.elements if a in zset]
    if sorted(fixed) != sorted(central):
        raise CheckFailed(
            "fixed subgroup of the coset generator differs from A meet Z(G)"
        )
    f = len(central)
    hypothesis, witness = True, None
    tj = t
    for j in range(1, omega):
        if j > 1:
            tj = group.mul(tj, t)
        size = sum(1 for a in sub.elements if (masks[tj] >> a) & 1)
        if size != f:
            hypothesis, witness = False, (j, size)
            break
    return CyclicIndexData(
        subgroup=sub,
        t=t,
        omega=omega,
        n=sub.order,
        f=f,
        hypothesis_holds=hypothesis,
        failure_witness=witness,
    )


def _abelian_normal_family(group: FiniteGroup, cap: int = 4096) -> list:
    """All abelian normal subgroups, as saturated joins of abelian class closures.

    Every abelian normal subgroup is a join of normal closures of its cyclic
    subgroups, and those closures are closures of single conjugacy classes;
    saturating joins of the abelian class closures therefore enumerates the
    whole family.
    """
    data = group.conjugacy_classes()
    base = []
    seen = set()
    for rep in data.representatives[1:]:
        cls = [x for x in group.elements() if data.class_of[x] == data.class_of[rep]]
        sub = group.subgroup_generated(cls)
        if sub.is_abelian() and sub.elements not in seen:
            seen.add(sub.elements)
            base.append(sub)
    family = {(0,): group.subgroup_view((0,))}
    for sub in base:
        family[sub.elements] = sub
    frontier = list(family.values())
    while frontier:
        cur = frontier.pop()
        cur_set = set(cur.elements)
        for sub in base:
            if set(sub.elements) <= cur_set:
                continue
            join = group.subgroup_generated(cur.elements + sub.elements)
            if join.elements in family:
                continue
            if join.is_abelian():
                family[join.elements] = join
                frontier.append(join)
                if len(family) > cap:
                    raise DomainError("abelian normal subgroup family exceeds cap")
    return list(family.values())


def find_cyclic_index_data(
    group: FiniteGroup, subgroup: Optional[SubgroupView] = None
) -> Optional[CyclicIndexData]:
    """Locate an abelian normal subgroup with cyclic quotient and analyze it.

    Searches the saturated family of abelian normal subgroups and picks the
    largest one whose quotient is cyclic (ties broken by element tuple).
    Pass ``subgroup`` to analyze a specific abelian normal subgroup instead
    (used for negative controls).  Returns None when no such subgroup exists.
    """
    if subgroup is not None:
        if not subgroup.is_abelian():
            raise DomainError("supplied subgroup is not abelian")
        return _analyze_cyclic_index(group, subgroup)
    if group.is_abelian():
        whole = group.subgroup_view(range(group.order))
        return _analyze_cyclic_index(group, whole)
    best = None
    for sub in _abelian_normal_family(group):
        if not group.quotient(sub).is_cyclic():
            continue
        key = (-sub.order, sub.elements)
        if best is None or key < best[0]:
            best = (key, sub)
    if best is None:
        return None
    return _analyze_cyclic_index(group, best[1])


def cyclic_index_comm_count(omega: int, n: int, f: int, r: int) -> int:
    """Commuting r-tuples for cyclic-index data: n^r + (omega^r - 1) n f^(r-1)."""
    if omega < 1 or r < 1 or f < 1:
        raise DomainError("need omega >= 1, r >= 1, f >= 1")
    if n % f:
        raise DomainError(f"f={f} must divide n={n}")
    return n**r + (omega**r - 1) * n * f ** (r - 1)


def cyclic_index_probability(omega: int, n: int, f: int, r: int) -> Fraction:
    """P_r for cyclic-index data: 1/omega^r + (1 - 1/omega^r)(f/n)^(r-1)."""
    return Fraction(cyclic_index_comm_count(omega, n, f, r), (omega * n) ** r)


def dihedral_probability(n: int, r: int) -> Fraction:
    """P_r of the dihedral group of order 2n (f = 1 for odd n, 2 for even)."""
    if n < 1 or r < 1:
        raise DomainError("need n >= 1 and r >= 1")
    f = 2 if n % 2 == 0 else 1
    f = min(f, n)  # n = 1 is the two-element group
    return cyclic_index_probability(2, n, f, r)


def order_pq_probability(p: int, q: int, r: int) -> Fraction:
    """P_r of the non-abelian group of order pq, primes p < q."""
    if not (is_prime(p) and is_prime(q) and p < q):
        raise DomainError("need primes p < q")
    if r < 1:
        raise DomainError("need r >= 1")
    return cyclic_index_probability(p, q, 1, r)


def metacyclic_probability(p: int, r: int, sign: int) -> Fraction:
    """P_r of the metacyclic groups of order p(p-1) (sign=-1) or p(p+1) (sign=+1)."""
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    if r < 1:
        raise DomainError("need r >= 1")
    if sign == -1:
        if p < 3:
            raise DomainError("order p(p-1) needs p >= 3")
        return cyclic_index_probability(p - 1, p, 1, r)
    if sign == +1:
        return cyclic_index_probability(p, p + 1, 1, r)
    raise DomainError("sign must be +1 or -1")


def recover_alpha(value: Fraction, omega: int, r: int) -> Fraction:
    """Invert the cyclic-index formula: alpha^(r-1) from P_r and omega."""
    if omega < 2 or r < 2:
        raise DomainError("need omega >= 2 and r >= 2")
    value = Fraction(value)
    floor = Fraction(1, omega**r)
    if value <= floor:
        raise DomainError(f"P_r={value} must exceed omega^-r={floor}")
    return (value - floor) / (1 - floor)


# -- sharp bounds ---------------------------------------------------------------


def sharp_bound(p: int, r: int) -> Fraction:
    """The sharp non-abelian bound (p^r + p^(r-1) - 1) / p^(2r-1)."""
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    if r < 2:
        raise DomainError("need r >= 2")
    return Fraction(p**r + p ** (r - 1) - 1, p ** (2 * r - 1))


def universal_bound(r: int) -> Fraction:
    """The all-groups sharp constant c_r = sharp_bound(2, r)."""
    return sharp_bound(2, r)


@dataclass(frozen=True)
class BoundReport:
    r: int
    p: int
    value: Fraction
    bound: Fraction
    is_equal: bool
    extremal_structure: bool  # central quotient of order p^2, noncyclic


def _has_extremal_quotient(group: FiniteGroup, p: int) -> bool:
    center = group.center()
    if center.order * p * p != group.order:
        return False
    return not group.quotient(center).is_cyclic()


def check_sharp_bound(group: FiniteGroup, r: int) -> BoundReport:
    """Verify P_r <= sharp bound with equality iff the extremal structure."""
    if group.is_abelian():
        raise AbelianInput("sharp bound applies to non-abelian groups")
    p = smallest_prime_divisor(group.order)
    value = _prob(group, r)
    bound = sharp_bound(p, r)
    if value > bound:
        raise CheckFailed(f"P_{r}({group.name}) = {value} exceeds bound {bound}")
    is_equal = value == bound
    extremal = _has_extremal_quotient(group, p)
    if is_equal != extremal:
        raise CheckFailed(
            f"equality/extremal mismatch for {group.name}: "
            f"is_equal={is_equal}, extremal_structure={extremal}"
        )
    return BoundReport(
        r=r, p=p, value=value, bound=bound, is_equal=is_equal, extremal_structure=extremal
    )


def one_step_bound(group: FiniteGroup, r: int) -> Fraction:
    """Bound P_r <= alpha P_(r-1) + (1 - alpha) p^-(r-1), verified."""
    if r < 2:
        raise DomainError("need r >= 2")
    alpha = _alpha(group)
    bound = alpha * _prob(group, r - 1)
    if alpha != 1:
        p = smallest_prime_divisor(group.order)
        bound += (1 - alpha) * Fraction(1, p ** (r - 1))
    value = _prob(group, r)
    if value > bound:
        raise CheckFailed(f"one-step bound fails for {group.name} at r={r}")
    return bound


def two_block_bounds(group: FiniteGroup, n: int, m: int) -> Tuple[Fraction, Fraction]:
    """Two-sided estimate alpha^n P_m <= P_(n+m) <= alpha^n P_m + (P_n - alpha^n)/p^m."""
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    alpha = _alpha(group)
    lower = alpha**n * _prob(group, m)
    excess = _prob(group, n) - alpha**n
    if excess == 0:
        upper = lower
    else:
        p = smallest_prime_divisor(group.order)
        upper = lower + excess * Fraction(1, p**m)
    value = _prob(group, n + m)
    if not lower <= value <= upper:
        raise CheckFailed(
            f"two-block bounds fail for {group.name} at (n={n}, m={m}): "
            f"{lower} <= {value} <= {upper}"
        )
    return lower, upper


def expcentral_bound(group: FiniteGroup, n: int, m: int) -> Fraction:
    """Bound |P_(n+m) - alpha^n P_m| <= (P_n - alpha^n)/p^m, verified."""
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    alpha = _alpha(group)
    excess = _prob(group, n) - alpha**n
    if excess == 0:
        bound = Fraction(0)
    else:
        p = smallest_prime_divisor(group.order)
        bound = excess * Fraction(1, p**m)
    deviation = abs(_prob(group, n + m) - alpha**n * _prob(group, m))
    if deviation > bound:
        raise CheckFailed(
            f"central-contribution bound fails for {group.name} at (n={n}, m={m})"
        )
    return bound


def deficit_lower_bound(group: FiniteGroup, r: int) -> Fraction:
    """Certified lower bound (1/p^2 - alpha)(p^(r-1)-1)/p^(2r-3) on the deficit."""
    if group.is_abelian():
        raise AbelianInput("deficit bound applies to non-abelian groups")
    if r < 2:
        raise DomainError("need r >= 2")
    p = smallest_prime_divisor(group.order)
    alpha = _alpha(group)
    bound = (Fraction(1, p * p) - alpha) * Fraction(p ** (r - 1) - 1, p ** (2 * r - 3))
    deficit = sharp_bound(p, r) - _prob(group, r)
    if deficit < bound:
        raise CheckFailed(
            f"deficit {deficit} below certified bound {bound} for {group.name}"
        )
    return bound


@dataclass(frozen=True)
class GapReport:
    bound: Fraction  # 1/4 + alpha/4 + alpha^2/2
    classification_triggered: bool  # P_3 > 11/36, forcing |G : Z| = 4


def gap_p3(group: FiniteGroup) -> GapReport:
    """Quadratic stability bound for triples; P_3 > 11/36 forces |G : Z| = 4."""
    if group.is_abelian():
        raise AbelianInput("gap bound applies to non-abelian groups")
    alpha = _alpha(group)
    bound = Fraction(1, 4) + alpha / 4 + alpha * alpha / 2
    value = _prob(group, 3)
    if value > bound:
        raise CheckFailed(f"P_3({group.name}) = {value} exceeds {bound}")
    triggered = value > Fraction(11, 36)
    if triggered and group.order != 4 * group.center().order:
        raise CheckFailed(
            f"{group.name} has P_3 > 11/36 but central quotient of order "
            f"{group.order // group.center().order}"
        )
    return GapReport(bound=bound, classification_triggered=triggered)


def pgroup_ladder(p: int, r: int, d: int) -> Fraction:
    """U_(p,r)(d) = p^-(r-1) + (p-1) sum_(j=1)^(r-1) p^-(r+(d-1)j)."""
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    if r < 2 or d < 2:
        raise DomainError("need r >= 2 and d >= 2")
    total = Fraction(1, p ** (r - 1))
    for j in range(1, r):
        total += (p - 1) * Fraction(1, p ** (r + (d - 1) * j))
    return total


def pgroup_window(p: int, r: int) -> Fraction:
    """B_(p,r), the non-extremal p-group ceiling; two expressions, asserted equal."""
    via_ladder = pgroup_ladder(p, r, 3)
    via_deficit = sharp_bound(p, r) - Fraction(
        (p**r - 1) * (p ** (r - 1) - 1), (p + 1) * p ** (3 * r - 2)
    )
    if via_ladder != via_deficit:
        raise CheckFailed(
            f"window expressions disagree for (p={p}, r={r}): "
            f"{via_ladder} vs {via_deficit}"
        )
    return via_ladder


# -- prime-index equivalence report ---------------------------------------------


@dataclass(frozen=True)
class PrimeIndexReport:
    subgroup: SubgroupView
    p: int
    n: int
    f: int
    fixed_ratio_extremal: bool  # f = n / p
    bound_equality: bool  # equality in the sharp bound (r = 2 and 3)
    central_quotient_extremal: bool  # central quotient of order p^2, noncyclic
    maximal_abelian_count: int  # maximal abelians containing the center
    maximal_count_extremal: bool  # exactly p + 1 of them


def prime_index_equivalences(
    group: FiniteGroup, subgroup: Optional[SubgroupView] = None
) -> PrimeIndexReport:
    """Evaluate the four equivalent extremality conditions and assert they agree.

    Requires an abelian subgroup of index p = smallest prime divisor (found
    among maximal abelian subgroups unless supplied); verifies its normality.
    """
    if group.is_abelian():
        raise AbelianInput("equivalence report applies to non-abelian groups")
    p = smallest_prime_divisor(group.order)
    if subgroup is not None:
        sub = subgroup
        if not sub.is_abelian():
            raise HypothesisNotMet("supplied subgroup is not abelian")
        if sub.order * p != group.order:
            raise HypothesisNotMet(
                f"subgroup index {group.order // sub.order} is not the smallest "
                f"prime divisor {p}"
            )
    else:
        candidates = [
            s
            for s in group.maximal_abelian_subgroups()
            if s.order * p == group.order
        ]
        if not candidates:
            raise HypothesisNotMet(f"no abelian subgroup of index {p} found")
        sub = candidates[0]
    subset = set(sub.elements)
    for g in group.elements():
        for x in sub.elements:
            if group.conj(g, x) not in subset:
                raise CheckFailed(
                    f"index-{p} abelian subgroup of {group.name} is not normal"
                )
    center = group.center()
    zset = set(center.elements)
    n, f = sub.order, sum(1 for a in sub.elements if a in zset)
    cond_ratio = f * p == n
    eq2 = _prob(group, 2) == sharp_bound(p, 2)
    eq3 = _prob(group, 3) == sharp_bound(p, 3)
    if eq2 != eq3:
        raise CheckFailed(f"bound equality differs between r=2 and r=3 for {group.name}")
    cond_quot = _has_extremal_quotient(group, p)
    maximal = group.maximal_abelian_subgroups(require_contains_center=True)
    count = len(maximal)
    cond_count = count == p + 1
    report = PrimeIndexReport(
        subgroup=sub,
        p=p,
        n=n,
        f=f,
        fixed_ratio_extremal=cond_ratio,
        bound_equality=eq2,
        central_quotient_extremal=cond_quot,
        maximal_abelian_count=count,
        maximal_count_extremal=cond_count,
    )
    flags = {cond_ratio, eq2, cond_quot, cond_count}
    if len(flags) != 1:
        raise CheckFailed(f"equivalent conditions disagree for {group.name}", report)
    return report
