"""Constructors for the group families used by the test corpus and the CLI.

Catalog-spec grammar (also accepted by the CLI)::

    spec     := family [":" params]
    params   := key "=" int ("," key "=" int)*
    family   := cyclic | dihedral | quaternion8 | symmetric
              | elementary_abelian | direct_product | semidirect_cyclic
              | semidirect_matrix | heisenberg | modular_pe | frobenius20
              | s3_times_cm

Examples: ``dihedral:n=12``, ``heisenberg:p=3,m=1,n=2``,
``semidirect_cyclic:a=5,u=2,m=4``, ``direct_product:f1=2,f2=4``.

Element orderings are fixed per family (documented on each constructor), so
identical specs always produce identical tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from .errors import InvalidParameters
from .groups import FiniteGroup, _finish_group, direct_product
from .symplectic import FqField, is_prime

ORDER_CAP = 2048  # largest order a catalog constructor will materialize

FAMILIES = (
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric",
    "elementary_abelian",
    "direct_product",
    "semidirect_cyclic",
    "semidirect_matrix",
    "heisenberg",
    "modular_pe",
    "frobenius20",
    "s3_times_cm",
)


@dataclass(frozen=True)
class CatalogSpec:
    family: str
    parameters: tuple  # sorted (key, value) pairs

    @property
    def params(self) -> Dict[str, int]:
        return dict(self.parameters)

    def __str__(self) -> str:
        if not self.parameters:
            return self.family
        body = ",".join(f"{k}={v}" for k, v in self.parameters)
        return f"{self.family}:{body}"


def parse_spec(text: str) -> CatalogSpec:
    """Parse a catalog-spec string; raises InvalidParameters on bad syntax."""
    family, _, body = text.strip().partition(":")
    if family not in FAMILIES:
        raise InvalidParameters(f"unknown family {family!r}")
    params = {}
    if body:
        for piece in body.split(","):
            key, eq, value = piece.partition("=")
            key = key.strip()
            if not eq or not key:
                raise InvalidParameters(f"malformed parameter {piece!r}")
            try:
                params[key] = int(value)
            except ValueError:
                raise InvalidParameters(f"parameter {key!r} is not an integer") from None
    return CatalogSpec(family, tuple(sorted(params.items())))


def _check_order_cap(order: int) -> None:
    if order > ORDER_CAP:
        raise InvalidParameters(f"order {order} exceeds catalog cap {ORDER_CAP}")


# -- individual families ------------------------------------------------------


def build_cyclic(n: int) -> FiniteGroup:
    """C_n; element i is the i-th power of the generator."""
    if n < 1:
        raise InvalidParameters("cyclic order must be positive")
    _check_order_cap(n)
    rows = [[(i + j) % n for j in range(n)] for i in range(n)]
    return _finish_group(rows, f"C{n}")


def build_dihedral(n: int) -> FiniteGroup:
    """D_{2n}: indices 0..n-1 are rotations r^i, n..2n-1 are reflections r^i s."""
    if n < 1:
        raise InvalidParameters("dihedral parameter n must be positive")
    _check_order_cap(2 * n)
    rows = []
    for i in range(n):  # r^i
        rows.append([(i + j) % n for j in range(n)] + [n + (i + j) % n for j in range(n)])
    for i in range(n):  # r^i s
        rows.append([n + (i - j) % n for j in range(n)] + [(i - j) % n for j in range(n)])
    return _finish_group(rows, f"D{2 * n}")


_QUAT_BASIS = {
    (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
    (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
    (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
    (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
}


def build_quaternion8() -> FiniteGroup:
    """Q_8: index s*4 + b with sign s in {0,1} and basis b in (1, i, j, k)."""
    rows = []
    for s1, b1 in itertools.product(range(2), range(4)):
        row = []
        for s2, b2 in itertools.product(range(2), range(4)):
            sgn, b = _QUAT_BASIS[(b1, b2)]
            row.append(((s1 + s2 + sgn) % 2) * 4 + b)
        rows.append(row)
    return _finish_group(rows, "Q8")


def build_symmetric(n: int) -> FiniteGroup:
    """S_n with elements in lexicographic one-line order (identity first)."""
    if not 1 <= n <= 6:
        raise InvalidParameters("symmetric supports 1 <= n <= 6")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    rows = [
        [index[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms
    ]
    return _finish_group(rows, f"S{n}")


def build_elementary_abelian(p: int, k: int) -> FiniteGroup:
    """(C_p)^k; element index encodes base-p digits of the vector."""
    if not is_prime(p) or k < 1:
        raise InvalidParameters("need prime p and k >= 1")
    n = p**k
    _check_order_cap(n)
    rows = []
    for a in range(n):
        row = []
        da = [(a // p**t) % p for t in range(k)]
        for b in range(n):
            db = [(b // p**t) % p for t in range(k)]
            row.append(sum(((da[t] + db[t]) % p) * p**t for t in range(k)))
        rows.append(row)
    return _finish_group(rows, f"C{p}^{k}")


def build_direct_product_cyclic(factors: List[int]) -> FiniteGroup:
    """Direct product of cyclic groups; last factor varies fastest."""
    if len(factors) < 2 or any(f < 2 for f in factors):
        raise InvalidParameters("need at least two cyclic factors, each >= 2")
    order = math.prod(factors)
    _check_order_cap(order)
    grp = build_cyclic(factors[0])
    for f in factors[1:]:
        grp = direct_product(grp, build_cyclic(f))
    grp.name = "x".join(f"C{f}" for f in factors)
    return grp


def build_semidirect_cyclic(a: int, u: int, m: int) -> FiniteGroup:
    """C_a x| C_m with t x t^-1 = x^u; element (i, k) has index i*m + k."""
    if a < 2 or m < 2:
        raise InvalidParameters("need a >= 2 and m >= 2")
    u %= a
    if math.gcd(u, a) != 1:
        raise InvalidParameters(f"u={u} is not invertible modulo {a}")
    if pow(u, m, a) != 1:
        raise InvalidParameters(f"u^m != 1 (mod {a}); action is not well defined")
    _check_order_cap(a * m)
    upow = [pow(u, k, a) for k in range(m)]
    rows = []
    for i in range(a):
        for k in range(m):
            row = []
            for j in range(a):
                for length in range(m):
                    row.append(((i + j * upow[k]) % a) * m + (k + length) % m)
            rows.append(row)
    return _finish_group(rows, f"C{a}:C{m}(u={u})")


def build_jordan_semidirect(p: int, d: int) -> FiniteGroup:
    """(C_p)^{2d} x| C_p, the generator acting by d unipotent Jordan blocks.

    Element ((x_0, y_0, .., x_{d-1}, y_{d-1}), k) has index vec*p + k with vec
    encoding base-p digits; the action sends (x, y) to (x + k*y, y) per block,
    so the fixed subgroup of every nontrivial power has order p^d.
    """
    if not is_prime(p) or d < 1:
        raise InvalidParameters("need prime p and d >= 1")
    order = p ** (2 * d + 1)
    _check_order_cap(order)
    nvec = p ** (2 * d)

    def decode(v):
        return [(v // p**t) % p for t in range(2 * d)]

    def encode(digs):
        return sum(dg * p**t for t, dg in enumerate(digs))

    vecs = [decode(v) for v in range(nvec)]
    rows = []
    for av in range(nvec):
        for k in range(p):
            a = vecs[av]
            row = []
            for bv in range(nvec):
                b = vecs[bv]
                acted = list(b)
                for blk in range(d):
                    acted[2 * blk] = (b[2 * blk] + k * b[2 * blk + 1]) % p
                summed = [(a[t] + acted[t]) % p for t in range(2 * d)]
                base = encode(summed) * p
                for length in range(p):
                    row.append(base + (k + length) % p)
            rows.append(row)
    return _finish_group(rows, f"Jordan({p},{d})")


def build_heisenberg(p: int, m: int, n: int) -> FiniteGroup:
    """Rank-n group of order q^{2n+1} over F_q, q = p^m, for odd p.

    Elements are tuples (v_0..v_{2n-1}, z) over F_q with index
    sum coord_i * q^(2n-i); the product adds vectors and accumulates
    z + z' + (1/2) * <v, w> for the standard symplectic form, which makes the
    group class 2 of exponent p with derived subgroup = center of order q.
    """
    if not is_prime(p) or p == 2:
        raise InvalidParameters("heisenberg requires an odd prime p")
    if m < 1 or n < 1:
        raise InvalidParameters("need m >= 1 and n >= 1")
    field = FqField(p, m)
    q = field.q
    order = q ** (2 * n + 1)
    _check_order_cap(order)

    width = 2 * n + 1
    idx = np.arange(order, dtype=np.int64)
    coords = np.empty((order, width), dtype=np.int64)
    rem = idx.copy()
    for pos in range(width - 1, -1, -1):
        coords[:, pos] = rem % q
        rem //= q

    add_t, mul_t = field.add_table, field.mul_table
    half = field.inv(field.from_int(2))

    out = np.zeros((order, order), dtype=np.int64)
    weights = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    a = coords[:, None, :]
    b = coords[None, :, :]
    beta = np.zeros((order, order), dtype=np.int64)
    for i in range(n):
        term = mul_t[a[:, :, i], b[:, :, n + i]]
        beta = add_t[beta, term]
        term = field.neg_table[mul_t[a[:, :, n + i], b[:, :, i]]]
        beta = add_t[beta, term]
    for pos in range(2 * n):
        out += add_t[a[:, :, pos], b[:, :, pos]] * weights[pos]
    zsum = add_t[add_t[a[:, :, 2 * n], b[:, :, 2 * n]], mul_t[half, beta]]
    out += zsum
    return _finish_group(out.tolist(), f"Heis(q={q},n={n})")


def build_modular(p: int, e: int) -> FiniteGroup:
    """C_{p^e} x| C_p of order p^{e+1}, the generator acting by 1 + p^{e-1}."""
    if not is_prime(p) or e < 2:
        raise InvalidParameters("need prime p and e >= 2")
    _check_order_cap(p ** (e + 1))
    grp = build_semidirect_cyclic(p**e, 1 + p ** (e - 1), p)
    grp.name = f"M{p ** (e + 1)}"
    return grp


def build_frobenius20() -> FiniteGroup:
    grp = build_semidirect_cyclic(5, 2, 4)
    grp.name = "F20"
    return grp


def build_s3_times_cm(m: int) -> FiniteGroup:
    if m < 1:
        raise InvalidParameters("need m >= 1")
    _check_order_cap(6 * m)
    return direct_product(build_symmetric(3), build_cyclic(m), name=f"S3xC{m}")


# -- dispatch -----------------------------------------------------------------


def _require(params: Dict[str, int], *keys: str) -> List[int]:
    extra = set(params) - set(keys)
    if extra:
        raise InvalidParameters(f"unexpected parameters {sorted(extra)}")
    missing = [k for k in keys if k not in params]
    if missing:
        raise InvalidParameters(f"missing parameters {missing}")
    return [params[k] for k in keys]


def build(spec) -> FiniteGroup:
    """Construct the group described by a CatalogSpec or spec string."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    params = spec.params
    fam = spec.family
    if fam == "cyclic":
        return build_cyclic(*_require(params, "n"))
    if fam == "dihedral":
        return build_dihedral(*_require(params, "n"))
    if fam == "quaternion8":
        _require(params)
        return build_quaternion8()
    if fam == "symmetric":
        return build_symmetric(*_require(params, "n"))
    if fam == "elementary_abelian":
        return build_elementary_abelian(*_require(params, "p", "k"))
    if fam == "direct_product":
        keys = sorted(params)
        if any(not k.startswith("f") for k in keys):
            raise InvalidParameters("direct_product takes factors f1, f2, ...")
        factors = [params[k] for k in sorted(keys, key=lambda k: int(k[1:]))]
        return build_direct_product_cyclic(factors)
    if fam == "semidirect_cyclic":
        a, u, m = _require(params, "a", "u", "m")
        return build_semidirect_cyclic(a, u, m)
    if fam == "semidirect_matrix":
        return build_jordan_semidirect(*_require(params, "p", "d"))
    if fam == "heisenberg":
        p, m, n = _require(params, "p", "m", "n")
        return build_heisenberg(p, m, n)
    if fam == "modular_pe":
        return build_modular(*_require(params, "p", "e"))
    if fam == "frobenius20":
        _require(params)
        return build_frobenius20()
    if fam == "s3_times_cm":
        return build_s3_times_cm(*_require(params, "m"))
    raise InvalidParameters(f"unknown family {fam!r}")


# -- corpus -------------------------------------------------------------------


def _invariant_factor_chains(max_order: int) -> List[List[int]]:
    """Divisor chains d1 | d2 | ... | dk (k >= 2) with product <= max_order."""
    chains = []

    def extend(chain, prod):
        last = chain[-1]
        d = last
        while prod * d <= max_order:
            if d % last == 0:
                chains.append(chain + [d])
                extend(chain + [d], prod * d)
            d += 1

    for d1 in range(2, max_order + 1):
        if d1 * d1 <= max_order:
            extend([d1], d1)
    return chains


def small_catalog(max_order: int) -> List[FiniteGroup]:
    """Deterministic corpus of catalog groups with order <= max_order.

    Covers all cyclic and dihedral groups, every abelian group (one
    invariant-factor representative each), Q8, S3, S4, the order-20
    families, modular and Jordan semidirect instances, and the odd-prime
    rank-n families that fit.  Not a complete census of all groups.
    """
    if max_order < 1:
        raise InvalidParameters("max_order must be positive")
    specs: List[str] = [f"cyclic:n={n}" for n in range(1, max_order + 1)]
    specs += [f"dihedral:n={n}" for n in range(3, max_order // 2 + 1)]
    for chain in _invariant_factor_chains(max_order):
        body = ",".join(f"f{i + 1}={d}" for i, d in enumerate(chain))
        specs.append(f"direct_product:{body}")
    if max_order >= 6:
        specs.append("symmetric:n=3")
    if max_order >= 8:
        specs.append("quaternion8")
    if max_order >= 24:
        specs.append("symmetric:n=4")
    if max_order >= 20:
        specs.append("frobenius20")
        specs.append("semidirect_cyclic:a=5,u=4,m=4")
    for p in (2, 3, 5, 7):
        e = 3 if p == 2 else 2  # for p = 2 the e = 2 instance is dihedral
        while p ** (e + 1) <= max_order:
            specs.append(f"modular_pe:p={p},e={e}")
            e += 1
    for p in (3, 5, 7):
        for m in (1, 2):
            for n in (1, 2, 3):
                if (p**m) ** (2 * n + 1) <= max_order:
                    specs.append(f"heisenberg:p={p},m={m},n={n}")
    for p in (2, 3, 5):
        for d in (1, 2, 3):
            if p ** (2 * d + 1) <= max_order:
                specs.append(f"semidirect_matrix:p={p},d={d}")
    m = 3
    while 6 * m <= max_order:
        specs.append(f"s3_times_cm:m={m}")
        m += 2
    groups = [build(s) for s in specs]
    groups.sort(key=lambda g: (g.order, g.name))
    return groups
