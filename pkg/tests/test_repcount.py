"""Counting and degeneracy formulas against hand-checked values and sum rules."""
import pytest

from openxxz import repcount as rc


def brute_multiplicity(N, twoj):
    """Independent oracle: spin-j multiplicity by weight differencing.

    w(m) = #{basis states with 2*S^z = m} = C(N, (N-m)/2); the number of
    spin-j multiplets is w(2j) - w(2j+2).
    """
    def w(two_m):
        if (N - two_m) % 2 or not -N <= two_m <= N:
            return 0
        from math import comb
        return comb(N, (N - two_m) // 2)

    return w(twoj) - w(twoj + 2)


class TestMultiplicity:
    def test_examples(self):
        assert rc.multiplicity_d(6, twoj=2) == 9
        assert rc.multiplicity_d(4, twoj=6) == 0
        assert rc.multiplicity_d(7, twoj=1) == 14

    def test_parity_rejected(self):
        with pytest.raises(ValueError):
            rc.multiplicity_d(6, twoj=3)

    @pytest.mark.parametrize("N", range(1, 11))
    def test_matches_weight_differencing(self, N):
        for twoj in range(N % 2, N + 3, 2):
            assert rc.multiplicity_d(N, twoj) == brute_multiplicity(N, twoj)

    @pytest.mark.parametrize("N", range(1, 13))
    def test_dimension_sum(self, N):
        total = sum(
            rc.multiplicity_d(N, twoj) * (twoj + 1) for twoj in range(N % 2, N + 1, 2)
        )
        assert total == 2**N


class TestGenericCounts:
    def test_count_examples(self):
        assert rc.count_generic(6, 0) == 1
        assert rc.count_generic(6, 3) == 5
        assert rc.count_generic(7, 3) == 14

    def test_degeneracy(self):
        assert rc.degeneracy_generic(6, 3) == 1
        assert rc.degeneracy_generic(8, 1) == 7

    @pytest.mark.parametrize("N", range(1, 13))
    def test_completeness(self, N):
        counts = {M: rc.count_generic(N, M) for M in range(N // 2 + 1)}
        degens = {M: rc.degeneracy_generic(N, M) for M in range(N // 2 + 1)}
        assert rc.completeness_sum(counts, degens, N)


class TestTilting:
    def test_dim_examples(self):
        assert rc.tilting_dim(6, 2) == 12     # T_3 at p=2: 2(7-1)
        assert rc.tilting_dim(1, 2) == 2      # T_{1/2} irreducible
        assert rc.tilting_dim(8, 3) == 9      # T_4 at p=3: s(4)=0
        assert rc.tilting_dim(4, 3) == 6      # T_2 at p=3: 2(5-2)
        assert rc.tilting_dim(6, 3) == 12     # T_3 at p=3: 2(7-1)

    def test_reducibility(self):
        assert not rc.tilting_is_reducible(1, 2)
        assert rc.tilting_is_reducible(6, 2)
        assert rc.tilting_submodule(6, 2) == 4      # T_3 contains V_2 at p=2
        assert not rc.tilting_is_reducible(8, 3)    # s(4)=0 at p=3
        assert rc.tilting_submodule(4, 3) == 0      # T_2 contains V_0 at p=3

    def test_d0_examples(self):
        assert rc.tl_dim_d0(5, 1, 2) == 5
        assert rc.tl_dim_d0(7, 5, 2) == 6
        assert rc.tl_dim_d0(8, 2, 3) == 28

    def test_d0_exceptional_remainder(self):
        # (j mod p) in {(p-1)/2, p-1/2} collapses d0_j to d_j
        assert rc.tl_dim_d0(9, 9, 2) == rc.multiplicity_d(9, 9)  # j=9/2, p=2
        assert rc.tl_dim_d0(8, 2, 3) == rc.multiplicity_d(8, 2)  # j=1, p=3
        assert rc.tl_dim_d0(10, 4, 5) == rc.multiplicity_d(10, 4)  # j=2, p=5

    def test_decomposition_n9_p2(self):
        table = rc.decomposition(9, 2)
        assert {tj: m for tj, m, _ in table.entries} == {1: 42, 3: 48, 5: 27, 7: 8, 9: 1}

    def test_decomposition_n8_p3(self):
        table = rc.decomposition(8, 3)
        assert {tj: m for tj, m, _ in table.entries} == {0: 1, 2: 28, 4: 13, 6: 7, 8: 1}
        assert {tj: d for tj, _, d in table.entries} == {0: 1, 2: 3, 4: 6, 6: 12, 8: 9}

    def test_decomposition_appendix_cases(self):
        assert {tj: m for tj, m, _ in rc.decomposition(5, 2).entries} == {1: 5, 3: 4, 5: 1}
        assert {tj: m for tj, m, _ in rc.decomposition(6, 2).entries} == {2: 5, 4: 4, 6: 1}
        assert {tj: m for tj, m, _ in rc.decomposition(7, 2).entries} == {
            1: 14, 3: 14, 5: 6, 7: 1
        }
        assert {tj: m for tj, m, _ in rc.decomposition(8, 2).entries} == {
            2: 14, 4: 14, 6: 6, 8: 1
        }

    @pytest.mark.parametrize("N", range(1, 13))
    @pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
    def test_dimension_sum(self, N, p):
        assert rc.check_dimension_sum(rc.decomposition(N, p))


class TestRootOfUnityCounts:
    def test_count_with_supplied_nj(self):
        corr = rc.DegeneracyCorrections(nj={1: 26})
        assert rc.count_root_of_unity(9, 4, 2, corr) == 16
        corr = rc.DegeneracyCorrections(nj={2: 1})
        assert rc.count_root_of_unity(8, 3, 3, corr) == 27
        assert rc.count_root_of_unity(6, 2, 4, rc.DegeneracyCorrections.none()) == 4

    def test_count_missing_correction_means_zero(self):
        assert rc.count_root_of_unity(6, 2, 4) == rc.tl_dim_d0(6, 2, 4)

    def test_degeneracy_examples(self):
        corr = rc.DegeneracyCorrections(njk={(8, 4): 2})
        assert rc.degeneracy_root_of_unity(8, 0, 2, corr) == 32   # 16 + 2*8
        corr = rc.DegeneracyCorrections(njk={(5, 1): 1})
        assert rc.degeneracy_root_of_unity(7, 1, 2, corr) == 8    # 6 + 2
        corr = rc.DegeneracyCorrections(njk={(8, 2): 1})
        assert rc.degeneracy_root_of_unity(8, 0, 3, corr) == 12   # 9 + 3

    def test_nj_from_njk_n9_p2(self):
        corr = rc.DegeneracyCorrections(
            njk={(9, 5): 3, (9, 1): 2, (7, 3): 2, (5, 1): 1}
        )
        assert rc.nj_from_njk(9, 2, corr) == {5: 3, 3: 16, 1: 26}

    def test_nj_from_njk_n7_p2(self):
        corr = rc.DegeneracyCorrections(njk={(7, 3): 2, (5, 1): 1})
        assert rc.nj_from_njk(7, 2, corr) == {3: 2, 1: 6}

    def test_nj_from_njk_alternating_sign(self):
        # chain j=9/2 -> 5/2 -> 1/2 subtracts: a T_{1/2} reached through an
        # absorbed T_{5/2} must not be counted twice
        corr = rc.DegeneracyCorrections(njk={(9, 5): 3, (5, 1): 1, (9, 1): 2})
        nj = rc.nj_from_njk(9, 2, corr)
        # length-1 chains: d0_{9/2}*2 + d0_{5/2}*1 = 2 + 27; length-2 chain
        # through T_{5/2}: -d0_{9/2}*3*1
        assert nj[1] == (1 * 2 + 27 * 1) - 1 * 3 * 1
        assert nj[5] == 3


class TestP2ClosedForms:
    def test_count_examples(self):
        assert rc.p2_count(9, 4) == 16
        assert rc.p2_count(4, 2) == 0
        assert rc.p2_count(5, 2) == 4

    def test_count_table_n9(self):
        assert [rc.p2_count(9, M) for M in range(5)] == [1, 8, 24, 32, 16]

    def test_count_table_n8(self):
        assert [rc.p2_count(8, M) for M in range(5)] == [1, 6, 12, 8, 0]

    def test_degeneracy_examples(self):
        assert rc.p2_degeneracy(9, 0) == 32
        assert rc.p2_degeneracy(8, 4) == 0
        assert rc.p2_degeneracy(7, 2) == 4

    def test_njk_examples(self):
        assert rc.p2_njk(8, 4) == 2    # n_{4,2}
        assert rc.p2_njk(6, 2) == 1    # n_{3,1}
        assert rc.p2_njk(12, 4) == 5   # n_{6,2}: Catalan number C_3
        assert rc.p2_njk(9, 5) == 3    # n_{9/2,5/2} via integer shift
        assert rc.p2_njk(9, 1) == 2    # n_{9/2,1/2}
        assert rc.p2_njk(7, 3) == 2
        assert rc.p2_njk(5, 1) == 1

    def test_njk_catalan_column(self):
        # n_{2m,2} = Catalan(m) for m >= 2
        for m, c in {2: 2, 3: 5, 4: 14, 5: 42}.items():
            assert rc.p2_njk(4 * m, 4) == c

    def test_njk_selection_rule(self):
        assert rc.p2_njk(6, 4) == 0    # j - k odd
        assert rc.p2_njk(4, 4) == 0    # j = k
        with pytest.raises(ValueError):
            rc.p2_njk(6, 3)

    def test_completeness_n5(self):
        counts = {0: 1, 1: 4, 2: 4}
        degens = {0: 8, 1: 4, 2: 2}
        assert rc.completeness_sum(counts, degens, 5)

    @pytest.mark.parametrize("N", range(2, 13))
    def test_count_bounded_by_d0(self, N):
        for M in range(N // 2 + 1):
            assert rc.p2_count(N, M) <= rc.tl_dim_d0(N, N - 2 * M, 2)

    @pytest.mark.parametrize("N", range(2, 13))
    def test_joint_completeness(self, N):
        counts = {M: rc.p2_count(N, M) for M in range(N // 2 + 1)}
        degens = {M: rc.p2_degeneracy(N, M) for M in range(N // 2 + 1)}
        assert rc.completeness_sum(counts, degens, N)

    @pytest.mark.parametrize("N", range(2, 13))
    def test_closed_forms_match_representation_counts(self, N):
        corr = rc.p2_corrections(N)
        for M in range(N // 2 + 1):
            count = rc.count_root_of_unity(N, M, 2, corr)
            assert rc.p2_count(N, M) == count
            if count:  # degeneracy of an empty sector is vacuous
                assert rc.p2_degeneracy(N, M) == rc.degeneracy_root_of_unity(N, M, 2, corr)

    def test_corrections_n9(self):
        corr = rc.p2_corrections(9)
        assert corr.njk == {(9, 5): 3, (9, 1): 2, (7, 3): 2, (5, 1): 1}
        assert corr.nj == {5: 3, 3: 16, 1: 26}
