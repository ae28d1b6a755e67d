"""Finite groups as validated multiplication tables.

Element 0 is always the two-sided identity; ingestion relabels if needed.
Groups are immutable after construction.  Derived structure (conjugacy
classes, centralizer masks, subgroups) is computed lazily and cached on the
instance; all cached values are deterministic, so concurrent recomputation
is harmless.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ClosureExceedsCap, NotAGroup, NotNormal

# Exhaustive associativity validation is O(n^3); above this order a seeded
# random sample of 10*n^2 triples is used instead.
EXHAUSTIVE_ASSOC_LIMIT = 256
_ASSOC_SAMPLE_FACTOR = 10
_ASSOC_SEED = 0

_PERMUTATION_CAP = 100_000


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _associativity_witness(table: np.ndarray, exhaustive: bool):
    """Return an offending (g, h, k) triple, or None if the check passes."""
    n = table.shape[0]
    if n <= 1:
        return None
    if exhaustive:
        left = table[table, :]  # [g,h,k] -> table[table[g,h], k]
        right = table[:, table]  # [g,h,k] -> table[g, table[h,k]]
        bad = np.argwhere(left != right)
        if bad.size:
            g, h, k = (int(v) for v in bad[0])
            return (g, h, k)
        return None
    rng = np.random.default_rng(_ASSOC_SEED)
    g, h, k = rng.integers(0, n, size=(3, _ASSOC_SAMPLE_FACTOR * n * n))
    left = table[table[g, h], k]
    right = table[g, table[h, k]]
    bad = np.nonzero(left != right)[0]
    if bad.size:
        i = int(bad[0])
        return (int(g[i]), int(h[i]), int(k[i]))
    return None


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``rows[g][h]`` is the index of g*h; index 0 is the identity.
    """

    def __init__(self, rows: Sequence[Sequence[int]], inverse: Sequence[int], name: str):
        self._rows = tuple(tuple(int(v) for v in row) for row in rows)
        self.inverse = tuple(int(v) for v in inverse)
        self.name = name
        self.order = len(self._rows)
        self._cache: dict = {}

    # -- basic arithmetic -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return self._rows[self._rows[g][x]][self.inverse[g]]

    def commutator(self, a: int, b: int) -> int:
        """a^-1 * b^-1 * a * b."""
        rows = self._rows
        return rows[rows[rows[self.inverse[a]][self.inverse[b]]][a]][b]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self._rows[y][x]
            k += 1
        return k

    def power(self, x: int, k: int) -> int:
        k %= self.element_order(x)
        y = 0
        for _ in range(k):
            y = self._rows[y][x]
        return y

    @property
    def table(self) -> tuple:
        return self._rows

    @property
    def np_table(self) -> np.ndarray:
        arr = self._cache.get("np_table")
        if arr is None:
            arr = np.array(self._rows, dtype=np.int32)
            arr.flags.writeable = False
            self._cache["np_table"] = arr
        return arr

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- structural predicates --------------------------------------------

    def is_abelian(self) -> bool:
        val = self._cache.get("is_abelian")
        if val is None:
            val = True
            rows = self._rows
            for a in range(self.order):
                ra = rows[a]
                for b in range(a + 1, self.order):
                    if ra[b] != rows[b][a]:
                        val = False
                        break
                if not val:
                    break
            self._cache["is_abelian"] = val
        return val

    def is_cyclic(self) -> bool:
        val = self._cache.get("is_cyclic")
        if val is None:
            val = any(self.element_order(x) == self.order for x in self.elements())
            self._cache["is_cyclic"] = val
        return val

    def exponent(self) -> int:
        val = self._cache.get("exponent")
        if val is None:
            val = 1
            for x in self.elements():
                val = math.lcm(val, self.element_order(x))
            self._cache["exponent"] = val
        return val

    def nilpotency_class_le2(self) -> bool:
        """True iff the derived subgroup is central."""
        center = set(self.center().elements)
        return all(e in center for e in self.derived_subgroup().elements)

    # -- centralizers and classes -----------------------------------------

    @property
    def centralizer_masks(self) -> tuple:
        """Per-element bitmask of commuting elements (bit y of masks[x])."""
        masks = self._cache.get("cent_masks")
        if masks is None:
            rows = self._rows
            out = []
            for x in range(self.order):
                m = 0
                for y in range(self.order):
                    if rows[x][y] == rows[y][x]:
                        m |= 1 << y
                out.append(m)
            masks = tuple(out)
            self._cache["cent_masks"] = masks
        return masks

    def centralizer_mask(self, xs) -> int:
        if isinstance(xs, int):
            xs = (xs,)
        xs = tuple(xs)
        if not xs:
            raise ValueError("centralizer requires at least one element")
        masks = self.centralizer_masks
        m = (1 << self.order) - 1
        for x in xs:
            m &= masks[x]
        return m

    def centralizer(self, xs) -> "SubgroupView":
        """Joint centralizer of the listed elements, as a subgroup."""
        mask = self.centralizer_mask(xs)
        return self.subgroup_view(tuple(_iter_bits(mask)))

    def center(self) -> "SubgroupView":
        sub = self._cache.get("center")
        if sub is None:
            full = (1 << self.order) - 1
            masks = self.centralizer_masks
            elems = tuple(x for x in range(self.order) if masks[x] == full)
            sub = self.subgroup_view(elems)
            self._cache["center"] = sub
        return sub

    def conjugacy_classes(self) -> "ConjugacyData":
        data = self._cache.get("classes")
        if data is None:
            n = self.order
            class_of = [-1] * n
            reps, sizes = [], []
            rows, inv = self._rows, self.inverse
            for x in range(n):
                if class_of[x] >= 0:
                    continue
                cid = len(reps)
                orbit = {rows[rows[g][x]][inv[g]] for g in range(n)}
                for y in orbit:
                    class_of[y] = cid
                reps.append(x)
                sizes.append(len(orbit))
            data = ConjugacyData(tuple(class_of), tuple(reps), tuple(sizes))
            self._cache["classes"] = data
        return data

    def derived_subgroup(self) -> "SubgroupView":
        sub = self._cache.get("derived")
        if sub is None:
            gens = {self.commutator(a, b) for a in self.elements() for b in self.elements()}
            sub = self.subgroup_generated(gens)
            self._cache["derived"] = sub
        return sub

    # -- subgroups ----------------------------------------------------------

    def subgroup_view(self, elements: Iterable[int]) -> "SubgroupView":
        key = tuple(sorted(set(int(e) for e in elements)))
        views = self._cache.setdefault("subgroup_views", {})
        sub = views.get(key)
        if sub is None:
            sub = SubgroupView(self, key)
            views[key] = sub
        return sub

    def subgroup_generated(self, gens: Iterable[int]) -> "SubgroupView":
        elems = {0}
        frontier = [0]
        rows = self._rows
        gens = sorted(set(gens))
        for g in gens:
            if g not in elems:
                elems.add(g)
                frontier.append(g)
        # words in the generators exhaust the subgroup (finite order supplies
        # inverses), so closing under one-sided products suffices
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (rows[x][g], rows[g][x]):
                    if y not in elems:
                        elems.add(y)
                        frontier.append(y)
        return self.subgroup_view(elems)

    def maximal_abelian_subgroups(self, require_contains_center: bool = False) -> list:
        """All maximal pairwise-commuting subsets, i.e. fixpoints S = C_G(S).

        Recursive branching: refine the current joint centralizer by an
        element that fails to commute with it, branching over both the
        refining element and every element outside its centralizer.
        Intended for small orders (roughly <= 2000).
        """
        masks = self.centralizer_masks
        full = (1 << self.order) - 1
        seen: set = set()
        found: set = set()

        def noncommuting_witness(mask: int) -> Optional[int]:
            for x in _iter_bits(mask):
                if masks[x] & mask != mask:
                    return x
            return None

        stack = [full]
        while stack:
            mask = stack.pop()
            if mask in seen:
                continue
            seen.add(mask)
            x = noncommuting_witness(mask)
            if x is None:
                found.add(mask)
                continue
            stack.append(mask & masks[x])
            for y in _iter_bits(mask & ~masks[x]):
                stack.append(mask & masks[y])

        subs = [self.subgroup_view(tuple(_iter_bits(m))) for m in found]
        if require_contains_center:
            zset = set(self.center().elements)
            subs = [s for s in subs if zset.issubset(s.elements)]
        return sorted(subs, key=lambda s: s.elements)

    # -- quotients ----------------------------------------------------------

    def quotient_with_projection(self, sub: "SubgroupView"):
        """Quotient by a normal subgroup, plus the element -> coset-id map.

        Cosets are labeled by ascending minimal element, so the identity
        coset gets index 0.
        """
        if sub.parent is not self:
            raise ValueError("subgroup belongs to a different group")
        nelems = sub.elements
        rows = self._rows
        nset = set(nelems)
        for g in range(self.order):
            for x in nelems:
                c = self.conj(g, x)
                if c not in nset:
                    raise NotNormal((g, x, c))
        proj = [-1] * self.order
        reps = []
        for g in range(self.order):
            if proj[g] >= 0:
                continue
            cid = len(reps)
            reps.append(g)
            for x in nelems:
                proj[rows[g][x]] = cid
        m = len(reps)
        qrows = [[proj[rows[reps[i]][reps[j]]] for j in range(m)] for i in range(m)]
        # well-definedness of coset multiplication follows from normality,
        # and associativity is inherited from the parent group
        q = _finish_group(qrows, f"{self.name}/N{sub.order}", assoc="skip")
        return q, tuple(proj)

    def quotient(self, sub: "SubgroupView") -> "FiniteGroup":
        return self.quotient_with_projection(sub)[0]


@dataclass(frozen=True)
class ConjugacyData:
    """Conjugacy partition: class ids are assigned by ascending minimal element."""

    class_of: tuple
    representatives: tuple
    class_sizes: tuple

    @property
    def class_count(self) -> int:
        return len(self.representatives)


class SubgroupView:
    """A subgroup of a parent group as a sorted tuple of parent indices.

    Shares the parent's table; ``materialize`` produces a standalone group
    with local indices.
    """

    __slots__ = ("parent", "elements", "index_of")

    def __init__(self, parent: FiniteGroup, elements: tuple):
        self.parent = parent
        self.elements = elements
        self.index_of = {e: i for i, e in enumerate(elements)}
        self._validate()

    def _validate(self) -> None:
        if not self.elements or self.elements[0] != 0:
            raise NotAGroup("subgroup must contain the identity")
        if self.elements == tuple(range(self.parent.order)):
            return  # the whole group, already validated
        idx = self.index_of
        rows = self.parent._rows
        inv = self.parent.inverse
        for a in self.elements:
            if inv[a] not in idx:
                raise NotAGroup("subgroup not closed under inverse", witness=a)
            ra = rows[a]
            for b in self.elements:
                if ra[b] not in idx:
                    raise NotAGroup("subgroup not closed under product", witness=(a, b))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def fingerprint(self) -> tuple:
        """Canonical memo key: the sorted element tuple itself."""
        return self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.index_of

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupView)
            and other.parent is self.parent
            and other.elements == self.elements
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __repr__(self) -> str:
        return f"SubgroupView(order={self.order} of {self.parent.name})"

    def is_abelian(self) -> bool:
        rows = self.parent._rows
        els = self.elements
        for i, a in enumerate(els):
            ra = rows[a]
            for b in els[i + 1 :]:
                if ra[b] != rows[b][a]:
                    return False
        return True

    def materialize(self) -> FiniteGroup:
        """Standalone FiniteGroup on local indices 0..order-1."""
        cache = self.parent._cache.setdefault("materialized", {})
        grp = cache.get(self.elements)
        if grp is None:
            if self.elements == tuple(range(self.parent.order)):
                grp = self.parent
            else:
                idx = self.index_of
                rows = self.parent._rows
                tbl = [
                    [idx[rows[a][b]] for b in self.elements] for a in self.elements
                ]
                # associativity is inherited from the parent table
                grp = _finish_group(tbl, f"{self.parent.name}[{self.order}]", assoc="skip")
            cache[self.elements] = grp
        return grp


# -- construction ----------------------------------------------------------


def _finish_group(rows, name: str, assoc: str = "auto", force_exhaustive: bool = False) -> FiniteGroup:
    """Shared validation tail: identity at 0, inverses, associativity."""
    n = len(rows)
    table = np.array(rows, dtype=np.int32)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise NotAGroup("table is not square")
    if n == 0:
        raise NotAGroup("empty table")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries out of range")

    rng_n = np.arange(n, dtype=np.int32)
    identity = None
    for e in range(n):
        if np.array_equal(table[e], rng_n) and np.array_equal(table[:, e], rng_n):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no two-sided identity element")
    if identity != 0:
        perm = np.arange(n, dtype=np.int32)
        perm[0], perm[identity] = identity, 0
        relabeled = np.empty_like(table)
        relabeled[perm[:, None], perm[None, :]] = perm[table]
        table = relabeled

    zero_rows = np.count_nonzero(table == 0, axis=1)
    zero_cols = np.count_nonzero(table == 0, axis=0)
    if not (np.all(zero_rows == 1) and np.all(zero_cols == 1)):
        g = int(np.argwhere((zero_rows != 1) | (zero_cols != 1))[0][0])
        raise NotAGroup("element without a unique two-sided inverse", witness=g)
    inverse = np.argmax(table == 0, axis=1)
    bad_inv = np.nonzero(table[inverse, np.arange(n)] != 0)[0]
    if bad_inv.size:
        raise NotAGroup("one-sided inverse only", witness=int(bad_inv[0]))

    if assoc != "skip":
        exhaustive = force_exhaustive or n <= EXHAUSTIVE_ASSOC_LIMIT
        witness = _associativity_witness(table, exhaustive)
        if witness is not None:
            raise NotAGroup("associativity fails", witness=witness)

    return FiniteGroup(table.tolist(), inverse.tolist(), name)


def from_cayley_table(table, name: str = "G", force_exhaustive: bool = False) -> FiniteGroup:
    """Validate a raw multiplication table and build a group.

    The identity is relocated to index 0 by relabeling if necessary.
    Associativity is checked exhaustively up to order 256 (or when forced)
    and on a fixed-seed sample of 10*n^2 triples above that.
    """
    return _finish_group(table, name, assoc="auto", force_exhaustive=force_exhaustive)


def _parse_cycles(cycles, degree: int) -> tuple:
    image = list(range(degree))
    used = set()
    for cycle in cycles:
        if not cycle:
            continue
        pts = [int(p) for p in cycle]
        for p in pts:
            if not 1 <= p <= degree:
                raise ValueError(f"cycle point {p} outside 1..{degree}")
            if p in used:
                raise ValueError(f"point {p} repeated across cycles of one generator")
            used.add(p)
        for i, p in enumerate(pts):
            image[p - 1] = pts[(i + 1) % len(pts)] - 1
    return tuple(image)


def from_permutation_generators(
    degree: int, generators, cap: int = _PERMUTATION_CAP, name: Optional[str] = None
) -> FiniteGroup:
    """Breadth-first closure of permutation generators, as a Cayley table.

    Generators are lists of cycles on points 1..degree; element 0 is the
    identity permutation.  Multiplication is function composition:
    (g*h)(x) = g(h(x)).
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    gens = [_parse_cycles(cycs, degree) for cycs in generators]
    identity = tuple(range(degree))
    index = {identity: 0}
    elems = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple(v[g[i]] for i in range(degree))  # v∘g
                if w not in index:
                    if len(elems) + 1 > cap:
                        raise ClosureExceedsCap(cap, len(elems) + 1)
                    index[w] = len(elems)
                    elems.append(w)
                    nxt.append(w)
        frontier = nxt
    n = len(elems)
    rows = [
        [index[tuple(a[b[i]] for i in range(degree))] for b in elems] for a in elems
    ]
    # permutation composition is associative by construction
    return _finish_group(rows, name or f"Perm{degree}<{n}>", assoc="skip")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """Direct product; element (a, b) gets index a*|H| + b."""
    nh = h.order
    rows = [
        [g.mul(a1, a2) * nh + h.mul(b1, b2) for a2 in g.elements() for b2 in h.elements()]
        for a1 in g.elements()
        for b1 in h.elements()
    ]
    return _finish_group(rows, name or f"{g.name}x{h.name}", assoc="skip")


# -- file ingestion ----------------------------------------------------------


def load_group_file(path) -> FiniteGroup:
    """Load a group from the JSON Cayley-table or permutation file format.

    Cayley format: {"name": str, "order": n, "table": [[int]]}.
    Permutation format: {"name": str, "degree": d, "generators": [[[int]]]}
    with each generator a list of cycles on points 1..d.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise NotAGroup(f"cannot read group file {path}: {exc}") from None
    name = obj.get("name") or path.stem
    if "table" in obj:
        table = obj["table"]
        if "order" in obj and obj["order"] != len(table):
            raise NotAGroup(
                f"order field {obj['order']} does not match table size {len(table)}"
            )
        return from_cayley_table(table, name=name)
    if "generators" in obj:
        if "degree" not in obj:
            raise NotAGroup("permutation file missing 'degree'")
        return from_permutation_generators(obj["degree"], obj["generators"], name=name)
    raise NotAGroup("file has neither 'table' nor 'generators'")
