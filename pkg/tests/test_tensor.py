from fractions import Fraction

import pytest

import commprob as cp

F = Fraction


class TestExtract:
    def test_heisenberg27(self, h31):
        t = cp.extract_tensor(h31)
        assert (t.p, t.dim_v, t.dim_w) == (3, 2, 1)
        assert t.beta[0][0] == (0,)
        assert t.beta[0][1] != (0,)
        assert (t.beta[0][1][0] + t.beta[1][0][0]) % 3 == 0

    def test_d8_via_small_derived_subgroup(self, d8):
        # exponent 4, but |G'| = 2 makes the reduction valid anyway
        t = cp.extract_tensor(d8)
        assert (t.p, t.dim_v, t.dim_w) == (2, 2, 1)

    def test_extension_field_group(self, h91):
        t = cp.extract_tensor(h91)
        assert (t.dim_v, t.dim_w) == (4, 2)

    def test_abelian_exponent_p(self):
        g = cp.build("elementary_abelian:p=3,k=2")
        t = cp.extract_tensor(g)
        assert (t.dim_v, t.dim_w) == (0, 0)

    def test_rejections(self, s3):
        with pytest.raises(cp.NotClass2ExponentP):
            cp.extract_tensor(s3)  # not a p-group
        with pytest.raises(cp.NotClass2ExponentP):
            cp.extract_tensor(cp.build("cyclic:n=9"))  # exponent 9, trivial derived
        with pytest.raises(cp.NotClass2ExponentP):
            cp.extract_tensor(cp.build("dihedral:n=8"))  # |G'| = 4, exponent 8
        with pytest.raises(cp.NotClass2ExponentP):
            cp.extract_tensor(cp.build("cyclic:n=1"))

    def test_modular27_accepted_by_derived_path(self):
        # exponent 9 but derived subgroup of order 3
        m27 = cp.build("modular_pe:p=3,e=2")
        t = cp.extract_tensor(m27)
        assert (t.p, t.dim_v, t.dim_w) == (3, 2, 1)

    def test_basis_lift_is_deterministic(self, h31):
        t1 = cp.extract_tensor(h31)
        t2 = cp.extract_tensor(cp.build("heisenberg:p=3,m=1,n=1"))
        assert t1.basis_lift == t2.basis_lift
        assert t1.beta == t2.beta


class TestCounts:
    def test_h27_pair_count(self, h31):
        t = cp.extract_tensor(h31)
        assert cp.isotropic_count_tensor(t, 2) == 33  # (11/27) * 81

    def test_zero_dimensional(self):
        t = cp.extract_tensor(cp.build("elementary_abelian:p=3,k=1"))
        for r in (1, 2, 3):
            assert cp.isotropic_count_tensor(t, r) == 1

    def test_d8_matches_symplectic(self, d8):
        t = cp.extract_tensor(d8)
        assert cp.isotropic_count_tensor(t, 2) == 10
        assert cp.isotropic_count_tensor(t, 3) == 22

    def test_counts_match_engine(self, class2_corpus):
        for name, g in class2_corpus:
            t = cp.extract_tensor(g)
            z = g.center().order
            for r in (2, 3):
                res = cp.commuting_probability(g, r)
                assert (
                    cp.isotropic_count_tensor(t, r) * z**r == res.comm_count
                ), (name, r)

    def test_span_recursion_agrees(self, class2_corpus):
        for name, g in class2_corpus:
            t = cp.extract_tensor(g)
            for r in (0, 1, 2):
                assert cp.isotropic_span_count(t, r) == cp.isotropic_count_tensor(
                    t, r + 1
                ), (name, r)

    def test_span_base_case(self, h31):
        t = cp.extract_tensor(h31)
        assert cp.isotropic_span_count(t, 0) == 9  # empty span: the whole plane

    def test_d8_span_by_hand(self, d8):
        # sum over v of |v-perp|: the zero vector sees 4, each nonzero sees 2
        t = cp.extract_tensor(d8)
        assert cp.isotropic_span_count(t, 1) == 4 + 3 * 2


class TestRankDistribution:
    def test_h27(self, h31):
        t = cp.extract_tensor(h31)
        assert cp.p2_rank_distribution(t) == F(11, 27)

    def test_h729(self, h91):
        t = cp.extract_tensor(h91)
        assert cp.p2_rank_distribution(t) == F(89, 729)
        assert cp.p2_rank_distribution(t) == (1 + 80 * F(1, 9)) / 81

    def test_zero_tensor(self):
        t = cp.extract_tensor(cp.build("elementary_abelian:p=3,k=2"))
        assert cp.p2_rank_distribution(t) == 1

    def test_matches_engine(self, class2_corpus):
        for name, g in class2_corpus:
            t = cp.extract_tensor(g)
            assert (
                cp.p2_rank_distribution(t) == cp.commuting_probability(g, 2).p_r
            ), name


class TestFullContraction:
    def test_h729(self, h91):
        t = cp.extract_tensor(h91)
        holds, p2 = cp.full_contraction_check(t)
        assert holds
        assert p2 == F(1, 3**4) + (1 - F(1, 3**4)) * F(1, 9)

    def test_h243(self, h32):
        t = cp.extract_tensor(h32)
        holds, p2 = cp.full_contraction_check(t)
        assert holds
        assert p2 == F(1, 3**4) + (1 - F(1, 3**4)) * F(1, 3)

    def test_central_abelian_factor(self, h31):
        prod = cp.direct_product(h31, cp.build("cyclic:n=3"))
        t = cp.extract_tensor(prod)
        assert (t.dim_v, t.dim_w) == (2, 1)
        holds, p2 = cp.full_contraction_check(t)
        assert holds and p2 == F(11, 27)

    def test_product_of_two_is_not_full(self, h31):
        prod = cp.direct_product(h31, h31)
        t = cp.extract_tensor(prod)
        assert (t.dim_v, t.dim_w) == (4, 2)
        holds, p2 = cp.full_contraction_check(t)
        assert not holds and p2 is None

    def test_group_check_asserts_centralizer_index(self, class2_corpus):
        for name, g in class2_corpus:
            holds, p2 = cp.full_contraction_group_check(g)
            if holds:
                assert p2 == cp.commuting_probability(g, 2).p_r, name


class TestHeisenbergTypeReport:
    def test_rank_family_members(self, h31, h91):
        for g in (h31, h91):
            report = cp.heisenberg_type_report(g)
            assert report.necessary_conditions_hold
            assert report.q == g.derived_subgroup().order
            assert report.fq_linearity == "not verified"

    def test_product_fails_full_contraction(self, h31):
        prod = cp.direct_product(h31, h31)
        report = cp.heisenberg_type_report(prod)
        assert not report.full_contraction
        assert not report.necessary_conditions_hold

    def test_central_factor_breaks_derived_equals_center(self, h31):
        prod = cp.direct_product(h31, cp.build("cyclic:n=3"))
        report = cp.heisenberg_type_report(prod)
        assert not report.derived_equals_center

    def test_non_pgroup_rejected(self, s3):
        with pytest.raises(cp.HypothesisNotMet):
            cp.heisenberg_type_report(s3)


class TestSymplecticReduction:
    def test_d8(self, d8):
        report = cp.verify_symplectic_reduction(d8)
        assert (report.p, report.n) == (2, 1)
        assert report.values[0] == F(5, 8)

    def test_h27(self, h31):
        report = cp.verify_symplectic_reduction(h31)
        assert (report.p, report.n) == (3, 1)

    def test_h243_rank2(self, h32):
        report = cp.verify_symplectic_reduction(h32)
        assert (report.p, report.n) == (3, 2)
        assert report.checked_r == (2, 3, 4)

    def test_center_size_is_irrelevant(self, h31):
        prod = cp.direct_product(h31, cp.build("cyclic:n=9"))
        report = cp.verify_symplectic_reduction(prod)
        assert (report.p, report.n) == (3, 1)
        assert report.values == cp.verify_symplectic_reduction(h31).values

    def test_m16_is_extremal(self):
        report = cp.verify_symplectic_reduction(cp.build("modular_pe:p=2,e=3"))
        assert (report.p, report.n) == (2, 1)

    def test_hypothesis_not_met(self, h91, s3):
        with pytest.raises(cp.HypothesisNotMet):
            cp.verify_symplectic_reduction(h91)  # |G'| = 9, not prime
        with pytest.raises(cp.HypothesisNotMet):
            cp.verify_symplectic_reduction(s3)
