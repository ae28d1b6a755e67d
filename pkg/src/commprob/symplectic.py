"""Isotropic tuple counts in symplectic F_q-spaces and the Heisenberg hierarchy.

Counting operations treat q as a plain integer (the formulas hold verbatim
for any prime power); only direct enumeration and group construction need
explicit field arithmetic, provided by ``FqField``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ._isotropic import count_isotropic
from .errors import CheckFailed, DomainError, InvalidParameters

# Monic irreducible moduli over F_p, little-endian coefficients (c0..cm).
BUNDLED_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (1, 1, 1),
    27: (1, 2, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    49: (1, 0, 1),
    64: (1, 1, 0, 0, 0, 0, 1),
}

_TABLE_LIMIT = 4096  # largest q for which full arithmetic tables are built


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(n: int) -> Optional[Tuple[int, int]]:
    """(p, m) with n = p**m, or None.  Trial factorization; inputs are tiny."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            m = 0
            while n % p == 0:
                n //= p
                m += 1
            return (p, m) if n == 1 else None
        p += 1
    return (n, 1)


# -- polynomial helpers over F_p (little-endian coefficient tuples) ----------


def _poly_trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mod(a: tuple, b: tuple, p: int) -> tuple:
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    lead_inv = pow(lead, -1, p)
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        coef = a[-1] * lead_inv % p
        shift = da - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        a.pop()
    return _poly_trim(a)


def _poly_mul(a: tuple, b: tuple, p: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                out[i + j] = (out[i + j] + ac * bc) % p
    return _poly_trim(out)


def _monic_polys(degree: int, p: int):
    for tail in range(p**degree):
        coeffs, t = [], tail
        for _ in range(degree):
            coeffs.append(t % p)
            t //= p
        yield tuple(coeffs) + (1,)


def _is_irreducible(modulus: tuple, p: int) -> bool:
    m = len(modulus) - 1
    if m < 1 or modulus[-1] != 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not _poly_mod(modulus, divisor, p):
                return False
    return True


class FqField:
    """Explicit finite field F_{p^m} with table-backed arithmetic.

    Elements are integers in [0, q) encoding little-endian base-p digit
    vectors, i.e. coefficients of polynomials modulo the (verified
    irreducible) modulus.
    """

    def __init__(self, p: int, m: int = 1, modulus: Optional[tuple] = None):
        if not is_prime(p):
            raise InvalidParameters(f"p={p} is not prime")
        if m < 1:
            raise InvalidParameters("m must be positive")
        q = p**m
        if q > _TABLE_LIMIT:
            raise InvalidParameters(f"q={q} exceeds table limit {_TABLE_LIMIT}")
        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            elif q in BUNDLED_MODULI:
                modulus = BUNDLED_MODULI[q]
            else:
                raise InvalidParameters(
                    f"no bundled modulus for q={q}; supply one explicitly"
                )
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise InvalidParameters(f"modulus must be monic of degree {m}")
        if not _is_irreducible(modulus, p):
            raise InvalidParameters(f"modulus {modulus} is reducible over F_{p}")
        self.p, self.m, self.q, self.modulus = p, m, q, modulus
        self._build_tables()

    def _digits(self, a: int) -> tuple:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def _encode(self, digits) -> int:
        val = 0
        for d in reversed(tuple(digits) + (0,) * (self.m - len(digits))):
            val = val * self.p + d
        return val

    def _build_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        idx = np.arange(q, dtype=np.int64)
        digit_cols = []
        t = idx.copy()
        for _ in range(m):
            digit_cols.append(t % p)
            t //= p
        digits = np.stack(digit_cols, axis=1)
        add_digits = (digits[:, None, :] + digits[None, :, :]) % p
        weights = p ** np.arange(m, dtype=np.int64)
        self.add_table = (add_digits * weights).sum(axis=2).astype(np.int64)
        self.neg_table = ((-digits % p) * weights).sum(axis=1).astype(np.int64)

        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            pa = _poly_trim(list(self._digits(a)))
            for b in range(a, q):
                pb = _poly_trim(list(self._digits(b)))
                prod = _poly_mod(_poly_mul(pa, pb, p), self.modulus, p) if pa and pb else ()
                val = self._encode(prod)
                mul[a, b] = val
                mul[b, a] = val
        self.mul_table = mul

        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hits = np.nonzero(mul[a] == 1)[0]
            if hits.size != 1:
                raise InvalidParameters(f"element {a} lacks a unique inverse")
            inv[a] = hits[0]
        self.inv_table = inv

    # -- scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("0 has no inverse")
        return int(self.inv_table[a])

    def from_int(self, c: int) -> int:
        return c % self.p

    def mul_structure(self) -> np.ndarray:
        """T[s, t, c] = digit c of x^s * x^t mod modulus (basis products)."""
        m, p = self.m, self.p
        T = np.zeros((m, m, m), dtype=np.int64)
        for s in range(m):
            for t in range(m):
                T[s, t] = self._digits(self.mul(p**s, p**t))
        return T

    def self_check(self) -> None:
        """Exhaustive field-axiom verification (intended for q <= 64)."""
        mul, add = self.mul_table, self.add_table
        if not np.array_equal(mul[mul, :], mul[:, mul]):
            raise CheckFailed("multiplication is not associative")
        if not np.array_equal(add[add, :], add[:, add]):
            raise CheckFailed("addition is not associative")
        a, b, c = np.indices((self.q, self.q, self.q))
        if not np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]]):
            raise CheckFailed("distributivity fails")
        if not np.array_equal(mul[1], np.arange(self.q)):
            raise CheckFailed("1 is not a multiplicative identity")

    def __repr__(self) -> str:
        return f"FqField(p={self.p}, m={self.m})"


# -- counting: L_{n,k}, recursion, closed form -------------------------------


def isotropic_subspace_count(n: int, k: int, q: int) -> int:
    """Number of k-dimensional totally isotropic subspaces of F_q^{2n}."""
    if k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    num = den = 1
    for i in range(k):
        num *= q ** (2 * n - 2 * i) - 1
        den *= q ** (k - i) - 1
    quot, rem = divmod(num, den)
    assert rem == 0, "isotropic subspace count must be an integer"
    return quot


@lru_cache(maxsize=None)
def isotropic_tuples_recursive(q: int, n: int, r: int) -> int:
    """Pairwise-orthogonal r-tuples in F_q^{2n}, by rank recursion."""
    if n < 0 or r < 0:
        raise DomainError("n and r must be nonnegative")
    if r == 0 or n == 0:
        return 1
    if r == 1:
        return q ** (2 * n)
    return isotropic_tuples_recursive(q, n, r - 1) + (
        q ** (2 * n) - 1
    ) * q ** (r - 1) * isotropic_tuples_recursive(q, n - 1, r - 1)


def isotropic_tuples_closed(q: int, n: int, r: int) -> int:
    """Same count via the totally-isotropic-span decomposition."""
    if n < 0 or r < 0:
        raise DomainError("n and r must be nonnegative")
    if r == 0:
        return 1
    total = 0
    for k in range(min(n, r) + 1):
        term = isotropic_subspace_count(n, k, q)
        for i in range(k):
            term *= q**r - q**i
        total += term
    return total


def standard_symplectic_digit_forms(field: FqField, n: int) -> List[np.ndarray]:
    """F_p-bilinear digit forms of <u,v> = sum_i (u_i v_{n+i} - u_{n+i} v_i).

    Vectors in F_q^{2n} are flattened to 2n*m base-p digits; form c gives
    the c-th digit of the F_q-valued symplectic form.
    """
    m, p = field.m, field.p
    T = field.mul_structure()
    dim = 2 * n * m
    forms = [np.zeros((dim, dim), dtype=np.int64) for _ in range(m)]
    for c in range(m):
        for i in range(n):
            for s in range(m):
                for t in range(m):
                    coef = int(T[s, t, c])
                    forms[c][i * m + s, (n + i) * m + t] = coef % p
                    forms[c][(n + i) * m + s, i * m + t] = (-coef) % p
    return forms


def isotropic_tuples_enumerate(
    field: FqField,
    n: int,
    r: int,
    budget: Optional[int] = None,
    force_dfs: bool = False,
) -> int:
    """Independent oracle: explicit enumeration over F_q^{2n}.

    Evaluates the standard symplectic form on explicit vectors (via the
    field's structure constants) and counts pairwise-orthogonal tuples;
    never consults the recursion or the closed formula.
    """
    if n < 0 or r < 0:
        raise DomainError("n and r must be nonnegative")
    if n == 0:
        return 1
    forms = standard_symplectic_digit_forms(field, n)
    return count_isotropic(forms, field.p, 2 * n * field.m, r, budget, force_dfs)


def heisenberg_probability(q: int, n: int, r: int) -> Fraction:
    """P_r for the rank-n family over F_q: isotropic tuples / q^{2nr}."""
    if prime_power(q) is None:
        raise DomainError(f"q={q} is not a prime power")
    return Fraction(isotropic_tuples_recursive(q, n, r), q ** (2 * n * r))


def low_rank_closed(q: int, n: int) -> Tuple[Fraction, Fraction, Fraction]:
    """(P_2, P_3, P_4) by the specialized closed formulas."""
    a = Fraction(1, q ** (2 * n))
    p2 = Fraction(1, q) + (1 - Fraction(1, q)) * a
    p3 = Fraction(q ** (2 * n) + q**3 - 1, q ** (2 * n + 3))
    p4 = (
        Fraction(1, q**6)
        + Fraction(q**5 + q**3 - q**2 - 1, q**6) * a
        + Fraction(q**4 - q**3 - q + 1, q**4) * a * a
    )
    return p2, p3, p4


# -- identification -----------------------------------------------------------


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    ns, ds = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if ns * ns == x.numerator and ds * ds == x.denominator:
        return Fraction(ns, ds)
    return None


def _power_exponent(value: int, base: int) -> Optional[int]:
    if value < 1:
        return None
    e = 0
    while value % base == 0:
        value //= base
        e += 1
    return e if value == 1 else None


def identify_heisenberg(p2: Fraction, p3: Fraction) -> Optional[Tuple[int, int]]:
    """Recover (q, n) from (P_2, P_3), or None if the data does not match.

    q is the positive root of (P2-P3)X^2 + (P2-1)X + (P2-1) = 0; it must be
    an integer prime power, and (q*P2-1)/(q-1) must be an exact q^{-2n}.
    """
    p2, p3 = Fraction(p2), Fraction(p3)
    if not (0 < p2 <= 1 and 0 < p3 <= 1):
        raise DomainError("probabilities must lie in (0, 1]")
    if p2 <= p3 or p2 == 1:
        return None
    a, b = p2 - p3, p2 - 1
    c = b
    disc = b * b - 4 * a * c
    root = _rational_sqrt(disc)
    if root is None:
        return None
    # a > 0 and c < 0, so the roots have opposite signs; take the positive one
    x = (-b + root) / (2 * a)
    if x <= 1 or x.denominator != 1:
        return None
    q = int(x)
    if prime_power(q) is None:
        return None
    t = Fraction(q * p2 - 1, q - 1)
    if t <= 0 or t.numerator != 1:
        return None
    exp = _power_exponent(t.denominator, q)
    if exp is None or exp % 2 or exp == 0:
        return None
    n = exp // 2
    p2_check, p3_check, _ = low_rank_closed(q, n)
    if (p2_check, p3_check) != (p2, p3):
        return None
    return q, n


def rank1_identify(p: int, p2: Fraction) -> Optional[int]:
    """Recover n from P_2 when the derived subgroup has order p."""
    if not is_prime(p):
        raise DomainError(f"p={p} is not prime")
    p2 = Fraction(p2)
    if p * p2 - 1 <= 0:
        raise DomainError("p*P2 must exceed 1")
    val = Fraction(p - 1) / (p * p2 - 1)
    if val.denominator != 1:
        return None
    exp = _power_exponent(val.numerator, p)
    if exp is None or exp % 2 or exp == 0:
        return None
    return exp // 2


# -- series and pole data -----------------------------------------------------


@dataclass(frozen=True)
class SeriesData:
    """Exact expansion P_r = sum_j c_j q^{-(2n-j) r} for the rank-n family."""

    q: int
    n: int
    coefficients: tuple  # c_0..c_n as Fractions (integers in fact)
    pole_candidates: tuple  # q^n .. q^{2n}, ascending
    leading_isotropic_coeff: int

    def reconstruct(self, r: int) -> Fraction:
        total = Fraction(0)
        for j, c in enumerate(self.coefficients):
            total += c * Fraction(1, self.q ** ((2 * self.n - j) * r))
        return total


def series_data(q: int, n: int) -> SeriesData:
    """Collect the coefficients c_j and pole candidates of the P_r hierarchy.

    Each product prod_{i<k}(X - q^i) is expanded as a polynomial in X = q^r;
    the coefficient of X^j, weighted by the isotropic subspace counts, gives
    c_j.  The top coefficient must equal the Lagrangian count.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        lnk = isotropic_subspace_count(n, k, q)
        poly = [1]  # expansion of prod_{i<k}(X - q^i), little-endian in X
        for i in range(k):
            nxt = [0] * (len(poly) + 1)
            for j, cj in enumerate(poly):
                nxt[j + 1] += cj
                nxt[j] -= cj * q**i
            poly = nxt
        for j, cj in enumerate(poly):
            coeffs[j] += lnk * cj
    leading = coeffs[n]
    lagrangian = isotropic_subspace_count(n, n, q)
    if leading != lagrangian:
        raise CheckFailed(
            f"leading coefficient {leading} != Lagrangian count {lagrangian}"
        )
    return SeriesData(
        q=q,
        n=n,
        coefficients=tuple(Fraction(c) for c in coeffs),
        pole_candidates=tuple(q**e for e in range(n, 2 * n + 1)),
        leading_isotropic_coeff=leading,
    )


# -- asymptotics and abelian data ---------------------------------------------


@dataclass(frozen=True)
class AsymptoticReport:
    q: int
    r: int
    limit: Fraction
    diffs: tuple  # |P_r(n) - limit| for n = 0..n_max


def asymptotic_check(q: int, r: int, n_max: int) -> AsymptoticReport:
    """Verify the large-rank limit q^{-r(r-1)/2}: exact, strictly improving.

    Asserts |P_r(n) - limit| is strictly decreasing in n (for r >= 2) and
    below q^{-2n + r^2} for every n up to n_max.
    """
    limit = Fraction(1, q ** (r * (r - 1) // 2))
    diffs = []
    for n in range(n_max + 1):
        diff = abs(heisenberg_probability(q, n, r) - limit)
        bound = Fraction(q ** (r * r), q ** (2 * n))
        if diff >= bound:
            raise CheckFailed(f"diff at n={n} is {diff}, not below {bound}")
        diffs.append(diff)
    if r >= 2:
        for n in range(n_max):
            if not diffs[n + 1] < diffs[n]:
                raise CheckFailed(
                    f"|P_r - limit| not strictly decreasing at n={n}: "
                    f"{diffs[n]} -> {diffs[n + 1]}"
                )
    return AsymptoticReport(q=q, r=r, limit=limit, diffs=tuple(diffs))


def max_abelian_constants(q: int, n: int) -> Tuple[int, int]:
    """(largest abelian subgroup order, number attaining it) for rank n over F_q."""
    return q ** (n + 1), isotropic_subspace_count(n, n, q)
