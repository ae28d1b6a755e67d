from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import commprob as cp
from commprob.symplectic import BUNDLED_MODULI, prime_power

from oracles import brute_isotropic_tuples

F = Fraction


class TestFqField:
    @pytest.mark.parametrize("q", sorted(BUNDLED_MODULI))
    def test_bundled_fields_are_fields(self, q):
        p, m = prime_power(q)
        field = cp.FqField(p, m)
        field.self_check()
        assert field.q == q

    def test_prime_field(self):
        f7 = cp.FqField(7)
        f7.self_check()
        assert f7.mul(3, 5) == 1
        assert f7.inv(3) == 5

    def test_reducible_modulus_rejected(self):
        with pytest.raises(cp.InvalidParameters):
            cp.FqField(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2

    def test_user_modulus(self):
        field = cp.FqField(2, 2, modulus=(1, 1, 1))
        field.self_check()

    def test_nonprime_p(self):
        with pytest.raises(cp.InvalidParameters):
            cp.FqField(6)

    def test_inverse_of_zero(self):
        with pytest.raises(cp.DomainError):
            cp.FqField(3).inv(0)

    def test_f9_arithmetic(self):
        f9 = cp.FqField(3, 2)  # modulus x^2 + 1, element 3 encodes x
        assert f9.mul(3, 3) == f9.neg(1)  # x * x = -1
        assert f9.add(3, 1) == 4
        half = f9.inv(2)
        assert f9.mul(half, 2) == 1


class TestSubspaceCounts:
    def test_golden(self):
        assert cp.isotropic_subspace_count(1, 1, 3) == 4
        assert cp.isotropic_subspace_count(2, 2, 2) == 15
        assert cp.isotropic_subspace_count(2, 2, 3) == 40

    def test_empty_product(self):
        for n in (0, 1, 5):
            assert cp.isotropic_subspace_count(n, 0, 7) == 1

    def test_out_of_range(self):
        with pytest.raises(cp.DomainError):
            cp.isotropic_subspace_count(2, 3, 2)

    def test_lagrangian_product_form(self):
        # L_{n,n}(q) = prod (q^i + 1)
        for q in (2, 3, 4, 5):
            for n in range(5):
                prod = 1
                for i in range(1, n + 1):
                    prod *= q**i + 1
                assert cp.isotropic_subspace_count(n, n, q) == prod

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(0, 12),
        q=st.sampled_from([2, 3, 4, 5, 7, 8, 9]),
        data=st.data(),
    )
    def test_integrality(self, n, q, data):
        k = data.draw(st.integers(0, n))
        val = cp.isotropic_subspace_count(n, k, q)
        assert isinstance(val, int) and val >= 1


class TestTupleCounts:
    def test_golden(self):
        assert cp.isotropic_tuples_recursive(2, 1, 2) == 10
        assert cp.isotropic_tuples_recursive(2, 1, 3) == 22
        assert cp.isotropic_tuples_closed(2, 1, 3) == 22

    def test_base_cases(self):
        for q in (2, 3, 9):
            for r in (1, 2, 5):
                assert cp.isotropic_tuples_recursive(q, 0, r) == 1
            for n in (0, 1, 2):
                assert cp.isotropic_tuples_recursive(q, n, 1) == q ** (2 * n)

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
    def test_recursive_equals_closed(self, q):
        for n in range(4):
            for r in range(7):
                assert cp.isotropic_tuples_recursive(q, n, r) == cp.isotropic_tuples_closed(q, n, r)

    def test_enumerate_f2(self):
        f2 = cp.FqField(2)
        assert cp.isotropic_tuples_enumerate(f2, 1, 2) == 10
        assert cp.isotropic_tuples_enumerate(f2, 1, 3) == 22

    def test_enumerate_matches_product_oracle(self):
        # includes extension fields, where the digit-form decomposition acts
        for q, n, r in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (4, 1, 2), (9, 1, 2)]:
            p, m = prime_power(q)
            field = cp.FqField(p, m)
            assert cp.isotropic_tuples_enumerate(field, n, r) == brute_isotropic_tuples(
                field, n, r
            )

    def test_dense_and_dfs_paths_agree(self):
        for q, n, r in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (4, 1, 2)]:
            p, m = prime_power(q)
            field = cp.FqField(p, m)
            dense = cp.isotropic_tuples_enumerate(field, n, r)
            dfs = cp.isotropic_tuples_enumerate(field, n, r, force_dfs=True)
            assert dense == dfs == cp.isotropic_tuples_closed(q, n, r)

    def test_enumerate_r1(self):
        f3 = cp.FqField(3)
        assert cp.isotropic_tuples_enumerate(f3, 2, 1) == 3**4

    def test_enumerate_budget(self):
        f3 = cp.FqField(3, 2)
        with pytest.raises(cp.BudgetExceeded):
            cp.isotropic_tuples_enumerate(f3, 2, 3, budget=10)


class TestProbabilities:
    def test_golden_rank1_q3(self):
        assert cp.heisenberg_probability(3, 1, 2) == F(11, 27)
        assert cp.heisenberg_probability(3, 1, 3) == F(35, 243)
        assert cp.heisenberg_probability(3, 1, 4) == F(107, 2187)
        # the rank-one quadruple value has a one-line closed form
        assert F(107, 2187) == F(3**4 + 3**3 - 1, 3**7)

    def test_q2_reproduces_universal_constants(self):
        for r in (2, 3, 4, 5):
            assert cp.heisenberg_probability(2, 1, r) == cp.universal_bound(r)

    def test_rank0(self):
        for r in (1, 2, 5):
            assert cp.heisenberg_probability(5, 0, r) == 1

    def test_low_rank_closed_matches(self):
        for q in (2, 3, 4, 5, 9):
            for n in range(4):
                p2, p3, p4 = cp.low_rank_closed(q, n)
                assert p2 == cp.heisenberg_probability(q, n, 2)
                assert p3 == cp.heisenberg_probability(q, n, 3)
                assert p4 == cp.heisenberg_probability(q, n, 4)

    def test_pair_identity(self):
        for q in (2, 3, 4, 5, 9):
            for n in range(5):
                expected = F(1, q) + (1 - F(1, q)) * F(1, q ** (2 * n))
                assert cp.heisenberg_probability(q, n, 2) == expected

    def test_nonprimepower_rejected(self):
        with pytest.raises(cp.DomainError):
            cp.heisenberg_probability(6, 1, 2)


class TestAsymptotics:
    def test_exact_tail_q3_r2(self):
        report = cp.asymptotic_check(3, 2, 10)
        assert report.diffs[10] == (1 - F(1, 3)) * F(1, 3**20)

    def test_strictly_decreasing(self):
        report = cp.asymptotic_check(2, 3, 8)
        for a, b in zip(report.diffs, report.diffs[1:]):
            assert b < a

    def test_r1_trivial(self):
        report = cp.asymptotic_check(5, 1, 4)
        assert all(d == 0 for d in report.diffs)


class TestIdentification:
    def test_golden(self):
        assert cp.identify_heisenberg(F(11, 27), F(35, 243)) == (3, 1)
        assert cp.identify_heisenberg(F(5, 8), F(11, 32)) == (2, 1)
        assert cp.identify_heisenberg(F(1, 2), F(2, 9)) is None

    def test_roundtrip(self):
        for q in (2, 3, 4, 5, 9):
            for n in (1, 2, 3):
                p2 = cp.heisenberg_probability(q, n, 2)
                p3 = cp.heisenberg_probability(q, n, 3)
                assert cp.identify_heisenberg(p2, p3) == (q, n)

    def test_out_of_range(self):
        with pytest.raises(cp.DomainError):
            cp.identify_heisenberg(F(3, 2), F(1, 2))

    def test_abelian_data(self):
        assert cp.identify_heisenberg(F(1), F(1)) is None

    def test_rank1_golden(self):
        assert cp.rank1_identify(2, F(5, 8)) == 1
        assert cp.rank1_identify(3, F(11, 27)) == 1

    def test_rank1_boundary(self):
        with pytest.raises(cp.DomainError):
            cp.rank1_identify(2, F(1, 2))

    def test_rank1_no_match(self):
        assert cp.rank1_identify(2, F(3, 5)) is None

    def test_rank1_roundtrip(self):
        for p in (2, 3, 5):
            for n in (1, 2, 3):
                p2 = cp.heisenberg_probability(p, n, 2)
                assert cp.rank1_identify(p, p2) == n


class TestSeries:
    def test_rank1_coefficients(self):
        for q in (2, 3, 5):
            sd = cp.series_data(q, 1)
            assert sd.coefficients == (F(-q), F(q + 1))
            assert sd.pole_candidates == (q, q * q)
            assert sd.leading_isotropic_coeff == q + 1

    def test_rank2_leading(self):
        sd = cp.series_data(3, 2)
        assert sd.leading_isotropic_coeff == 40

    def test_rank0(self):
        sd = cp.series_data(7, 0)
        assert sd.coefficients == (F(1),)
        assert sd.pole_candidates == (1,)

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_reconstruction(self, q, n):
        sd = cp.series_data(q, n)
        for r in range(2, 7):
            assert sd.reconstruct(r) == cp.heisenberg_probability(q, n, r)


class TestMaxAbelianConstants:
    def test_golden(self):
        assert cp.max_abelian_constants(3, 1) == (9, 4)
        assert cp.max_abelian_constants(2, 2) == (8, 15)
        assert cp.max_abelian_constants(7, 0) == (7, 1)
