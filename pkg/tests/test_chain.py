"""Dense transfer matrices, symmetry generators, and Jordan spectra."""
import cmath
import math

import numpy as np
import pytest

from openxxz import bethe, chain, repcount
from openxxz.regimes import XXX, generic_xxz, root_of_unity

ETA01 = generic_xxz(0.1)
P2 = root_of_unity(2)
P3 = root_of_unity(3)

PERMUTATION = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def solution(regime, N, roots):
    return bethe.SolutionVector(regime=regime, N=N, roots=tuple(roots),
                                residual=0.0, verdict=bethe.ADMISSIBLE)


def rel_comm(a, b):
    return np.linalg.norm(a @ b - b @ a) / (np.linalg.norm(a) * np.linalg.norm(b))


def p2_one_magnon_root(N, l):
    """Exact one-magnon root at p=2: (ix-1)/(x-i) = e^{i pi l/N} solved for x."""
    e = complex(math.cos(math.pi * l / N), math.sin(math.pi * l / N))
    return (1 - 1j * e) / (1j - e)


class TestOperators:
    def test_r_matrix_at_zero_is_permutation(self):
        assert np.allclose(chain.r_matrix(0.0, ETA01), math.sinh(0.1) * PERMUTATION)
        assert np.allclose(chain.r_matrix(0.0, XXX), 1j * PERMUTATION)

    @pytest.mark.parametrize("regime", [ETA01, XXX, P3], ids=["eta01", "xxx", "p3"])
    def test_transfer_family_commutes(self, regime):
        t1 = chain.transfer_matrix(0.3, 4, regime)
        t2 = chain.transfer_matrix(0.7 + 0.2j, 4, regime)
        assert rel_comm(t1, t2) < 1e-13

    @pytest.mark.parametrize("regime", [ETA01, XXX, P2], ids=["eta01", "xxx", "p2"])
    def test_transfer_commutes_with_sz(self, regime):
        t = chain.transfer_matrix(0.25 + 0.1j, 4, regime)
        assert rel_comm(t, chain.sz_diagonal(4)) < 1e-13

    @pytest.mark.parametrize("regime", [ETA01, XXX, P2, P3], ids=["eta01", "xxx", "p2", "p3"])
    def test_transfer_crossing_symmetry(self, regime):
        # t(u) = t(-u - eta), with eta -> i at the isotropic point
        u = 0.23 + 0.11j
        shift = 1j if regime is XXX else regime.eta
        t1 = chain.transfer_matrix(u, 4, regime)
        t2 = chain.transfer_matrix(-u - shift, 4, regime)
        assert np.linalg.norm(t1 - t2) < 1e-13 * np.linalg.norm(t1)

    def test_b_operator_lowers_sz(self):
        B = chain.b_operator(0.17 + 0.4j, 3, ETA01)
        sz = chain.sz_diagonal(3)
        assert np.max(np.abs(sz @ B - B @ (sz - np.eye(8)))) < 1e-14

    def test_two_site_isotropic_hamiltonian(self):
        eigs = np.sort(np.linalg.eigvalsh(chain.hamiltonian(2, XXX).real))
        assert np.allclose(eigs, [-3.0, 1.0, 1.0, 1.0])

    def test_reference_state_energy(self):
        # H|0> = (N-1) cosh(eta) |0>; cosh(i pi/3) = 1/2
        assert chain.hamiltonian(4, P3)[0, 0] == pytest.approx(1.5)
        assert chain.hamiltonian(5, P2)[0, 0] == pytest.approx(0.0)

    def test_site_bounds(self):
        with pytest.raises(ValueError):
            chain.hamiltonian(1, XXX)
        with pytest.raises(ValueError):
            chain.transfer_matrix(0.3, chain.MAX_SITES + 1, XXX)


class TestTransferDerivatives:
    @pytest.mark.parametrize("regime,N", [(ETA01, 3), (P3, 3), (P2, 3), (P2, 4)],
                             ids=["eta01-N3", "p3-N3", "p2-N3", "p2-N4"])
    def test_hamiltonian_from_transfer(self, regime, N):
        built = chain.hamiltonian(N, regime)
        derived = chain.hamiltonian_from_transfer(N, regime)
        assert np.linalg.norm(derived - built) / np.linalg.norm(built) < 1e-10

    def test_isotropic_has_no_transfer_relation(self):
        with pytest.raises(ValueError):
            chain.hamiltonian_from_transfer(3, XXX)

    def test_second_charge_commutes(self):
        H = chain.hamiltonian(4, ETA01)
        q2 = chain.higher_charge(2, 4, ETA01)
        t = chain.transfer_matrix(0.3, 4, ETA01)
        assert rel_comm(q2, H) < 1e-12
        assert rel_comm(q2, t) < 1e-12

    def test_zeroth_charge_is_transfer_at_origin(self):
        assert np.allclose(chain.higher_charge(0, 3, ETA01),
                           chain.transfer_matrix(0.0, 3, ETA01))

    def test_derivative_order_bounds(self):
        with pytest.raises(ValueError):
            chain.higher_charge(5, 3, ETA01)
        with pytest.raises(ValueError):
            chain.higher_charge(-1, 3, ETA01)


class TestQuantumGroup:
    q = cmath.exp(0.1)

    def test_weight_relation(self):
        _, sp, _, K, _ = chain.qgroup_generators(3, self.q)
        assert np.max(np.abs(K @ sp @ np.linalg.inv(K) - self.q**2 * sp)) < 1e-13

    def test_ladder_commutator(self):
        _, sp, sm, K, _ = chain.qgroup_generators(3, self.q)
        rhs = (K - np.linalg.inv(K)) / (self.q - 1 / self.q)
        assert np.max(np.abs(sp @ sm - sm @ sp - rhs)) < 1e-13

    def test_transfer_invariance(self):
        t = chain.transfer_matrix(0.25 + 0.1j, 3, ETA01)
        _, sp, sm, K, cas = chain.qgroup_generators(3, self.q)
        assert rel_comm(t, sp) < 1e-13
        assert rel_comm(t, sm) < 1e-13
        assert np.max(np.abs(t @ K - K @ t)) < 1e-13
        assert rel_comm(t, cas) < 1e-13

    def test_casimir_on_reference_state(self):
        _, _, _, _, cas = chain.qgroup_generators(3, self.q)
        ref = chain.reference_state(3)
        assert np.max(np.abs(cas @ ref - chain.casimir_eigenvalue(3, self.q) * ref)) < 1e-13
        assert rel_comm(cas, chain.hamiltonian(3, ETA01)) < 1e-13

    def test_isotropic_casimir_is_j_j_plus_one(self):
        assert chain.casimir_eigenvalue(2, 1.0) == pytest.approx(2.0)
        assert chain.casimir_eigenvalue(3, 1.0) == pytest.approx(3.75)


class TestTemperleyLieb:
    q = cmath.exp(0.1)

    def test_idempotent_relation(self):
        for e in chain.tl_generators(3, self.q):
            assert np.max(np.abs(e @ e - (self.q + 1 / self.q) * e)) < 1e-13

    def test_braid_relation(self):
        e1, e2 = chain.tl_generators(3, self.q)
        assert np.max(np.abs(e1 @ e2 @ e1 - e1)) < 1e-13
        assert np.max(np.abs(e2 @ e1 @ e2 - e2)) < 1e-13

    def test_distant_generators_commute(self):
        es = chain.tl_generators(4, self.q)
        assert np.max(np.abs(es[0] @ es[2] - es[2] @ es[0])) < 1e-14

    def test_hamiltonian_identity(self):
        # H = -2 sum_k e_k + (N-1) cosh(eta)
        H = chain.hamiltonian(3, ETA01)
        es = chain.tl_generators(3, self.q)
        assert np.max(np.abs(H + 2 * sum(es) - 2 * math.cosh(0.1) * np.eye(8))) < 1e-13


class TestBetheStates:
    def test_isotropic_singlet(self):
        psi = chain.bethe_state([0.5 - 0.5j], 2, XXX)
        assert np.allclose(psi, [0, 0.5 + 0.5j, -0.5 - 0.5j, 0])
        H = chain.hamiltonian(2, XXX)
        assert np.max(np.abs(H @ psi + 3.0 * psi)) < 1e-14

    def test_energy_formula_matches_hamiltonian(self):
        sol = solution(XXX, 4, [0.2309546565991595, 0.6683262276726571])
        psi = chain.bethe_state(chain.vs_from_solution(sol), 4, XXX)
        E = bethe.energy(sol)
        assert E == pytest.approx(-6.4641016151377535)
        H = chain.hamiltonian(4, XXX)
        assert np.linalg.norm(H @ psi - E * psi) / np.linalg.norm(psi) < 1e-12

    @pytest.mark.parametrize("regime,N,roots", [
        (XXX, 2, [0.5]),
        (XXX, 4, [0.2309546565991595, 0.6683262276726571]),
        (ETA01, 2, [0.9950207489532265 + 0.0996679946249558j]),
        (root_of_unity(5), 2, [1.962610505505151]),
    ], ids=["xxx-N2", "xxx-N4", "eta01-N2", "p5-N2"])
    def test_on_shell_verification_passes(self, regime, N, roots):
        sol = solution(regime, N, roots)
        report = chain.verify_on_shell(chain.vs_from_solution(sol), N, regime)
        assert report.ok
        assert not report.null_state
        assert report.eigen_residual < 1e-12
        assert report.sz_residual < 1e-12
        assert report.casimir_residual < 1e-12
        assert report.raising_residual < 1e-12

    def test_off_shell_vector_fails(self):
        report = chain.verify_on_shell([0.3 + 0.05j], 2, ETA01)
        assert not report.ok
        assert report.eigen_residual > 1e-3

    def test_root_at_pole_is_rejected(self):
        # v = -eta/2 puts lambda at the f(u, v) pole
        with pytest.raises(ValueError):
            chain.verify_on_shell([-0.05], 2, ETA01)

    def test_complete_p_string_state_is_null(self):
        x0 = 1.3 + 0.4j
        vs = tuple(0.5 * cmath.log(x) - P2.eta / 2 for x in (x0, -x0))
        report = chain.verify_on_shell(vs, 4, P2)
        assert report.null_state
        assert not report.ok


@pytest.fixture(scope="module")
def p2_reports():
    return {N: chain.spectrum(chain.hamiltonian(N, P2), chain.sz_diagonal(N))
            for N in (5, 6, 7, 8)}


@pytest.fixture(scope="module")
def p3_n8_report():
    return chain.spectrum(chain.hamiltonian(8, P3), chain.sz_diagonal(8))


class TestSpectrum:
    @pytest.mark.parametrize("N,alg,geo,jordan2", [
        (5, 8, 8, 0), (6, 16, 12, 4), (7, 16, 16, 0), (8, 32, 24, 8)])
    def test_p2_zero_energy_cluster(self, p2_reports, N, alg, geo, jordan2):
        c = p2_reports[N].cluster_at(0.0, 1e-6)
        assert (c.alg, c.geo, c.jordan2) == (alg, geo, jordan2)

    @pytest.mark.parametrize("N", [5, 6, 7, 8])
    def test_p2_rank_chain_closes(self, p2_reports, N):
        rep = p2_reports[N]
        assert rep.total_multiplicity() == 2**N
        assert not any(c.flagged for c in rep.clusters)
        assert all(c.geo + c.jordan2 == c.alg for c in rep.clusters)

    def test_p2_distinct_counts(self, p2_reports):
        assert p2_reports[5].distinct == 9
        assert p2_reports[6].distinct == 9
        assert p2_reports[7].distinct == 27
        assert p2_reports[8].distinct == 27

    def test_p2_odd_chains_are_diagonalizable(self, p2_reports):
        assert p2_reports[5].jordan_rank2_total() == 0
        assert p2_reports[7].jordan_rank2_total() == 0
        assert p2_reports[6].jordan_rank2_total() > 0
        assert p2_reports[8].jordan_rank2_total() > 0

    @pytest.mark.parametrize("energy", [3.60388, 2.49396, 0.890084])
    def test_p2_seven_site_eightfold_levels(self, p2_reports, energy):
        for sign in (1, -1):
            assert p2_reports[7].cluster_at(sign * energy, 1e-4).alg == 8

    def test_p2_eight_site_towers(self, p2_reports):
        # +-2 sqrt(2 +- sqrt 2) and +-2 sqrt 2, each a 16-dim cluster with
        # four rank-2 cells
        levels = [2 * math.sqrt(2 + math.sqrt(2)), 2 * math.sqrt(2 - math.sqrt(2)),
                  2 * math.sqrt(2)]
        for E in levels:
            for sign in (1, -1):
                c = p2_reports[8].cluster_at(sign * E, 1e-6)
                assert (c.alg, c.geo, c.jordan2) == (16, 12, 4)

    def test_p3_reference_cluster(self, p3_n8_report):
        c = p3_n8_report.cluster_at(3.5, 1e-6)
        assert (c.alg, c.geo, c.jordan2) == (12, 12, 0)

    def test_p3_accidental_cluster_keeps_jordan_cells(self, p3_n8_report):
        c = p3_n8_report.cluster_at(-0.0307337295, 1e-6)
        assert (c.alg, c.geo, c.jordan2) == (12, 8, 4)
        assert not any(cl.flagged for cl in p3_n8_report.clusters)
        assert all(cl.geo + cl.jordan2 == cl.alg for cl in p3_n8_report.clusters)

    @pytest.mark.parametrize("regime,N,expected", [
        (ETA01, 4, (6, 6)), (XXX, 4, (6, 6)),
        (root_of_unity(4), 8, (43, 41)), (P2, 9, (81, 57)),
    ], ids=["eta01-N4", "xxx-N4", "p4-N8", "p2-N9"])
    def test_distinct_eigenvalue_counts(self, regime, N, expected):
        assert chain.distinct_eigenvalue_count(N, regime) == expected

    def test_generic_count_matches_sector_sum(self):
        total = sum(repcount.count_generic(4, M) for M in range(0, 3))
        assert chain.distinct_eigenvalue_count(4, ETA01)[0] == total

    def test_rejects_noncommuting_operator(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            chain.spectrum(rng.random((4, 4)), chain.sz_diagonal(2))

    def test_rejects_nondiagonal_sz(self):
        with pytest.raises(ValueError):
            chain.spectrum(np.eye(4), np.ones((4, 4)))

    def test_cluster_lookup_miss(self, p2_reports):
        with pytest.raises(ValueError):
            p2_reports[5].cluster_at(123.0, 1e-6)


class TestTiltingContent:
    @pytest.mark.parametrize("twoj,p,content", [
        (6, 2, (6, 4, 4, 2, 2, 0, 0, -2, -2, -4, -4, -6)),
        (5, 2, (5, 3, 1, -1, -3, -5)),
        (8, 3, (8, 6, 4, 2, 0, -2, -4, -6, -8)),
        (2, 3, (2, 0, -2)),
    ])
    def test_weight_content(self, twoj, p, content):
        assert chain.tilting_sz_content(twoj, p) == content
        assert len(content) == repcount.tilting_dim(twoj, p)


class TestMeasuredCorrections:
    @pytest.mark.parametrize("N", [5, 6, 7, 8, 9])
    def test_p2_matches_closed_form(self, N):
        measured = chain.measure_njk(N, 2)
        predicted = repcount.p2_corrections(N)
        assert measured.njk == predicted.njk
        assert measured.nj == predicted.nj

    def test_p3_eight_sites(self):
        measured = chain.measure_njk(8, 3)
        assert measured.njk == {(8, 2): 1}
        assert measured.nj == {2: 1}

    def test_p3_four_sites_has_no_corrections(self):
        measured = chain.measure_njk(4, 3)
        assert measured.njk == {}

    @pytest.mark.parametrize("p,N,M,roots", [
        (3, 4, 2, [1.668669261292973, 5.551933372263207]),
        (5, 2, 1, [1.962610505505151]),
    ], ids=["p3-N4", "p5-N2"])
    def test_cluster_degeneracy_matches_prediction(self, p, N, M, roots):
        regime = root_of_unity(p)
        rep = chain.spectrum(chain.transfer_matrix(chain.SAMPLE_U0, N, regime),
                             chain.sz_diagonal(N))
        lam = bethe.transfer_eigenvalue(chain.SAMPLE_U0, roots, regime, N)
        predicted = repcount.degeneracy_root_of_unity(N, M, p, chain.measure_njk(N, p))
        assert rep.cluster_at(lam, 1e-7).alg == predicted

    def test_p2_one_magnon_degeneracy(self):
        N = 5
        rep = chain.spectrum(chain.transfer_matrix(chain.SAMPLE_U0, N, P2),
                             chain.sz_diagonal(N))
        predicted = repcount.degeneracy_root_of_unity(N, 1, 2, repcount.p2_corrections(N))
        assert predicted == 4
        for l in (1, 2):
            lam = bethe.transfer_eigenvalue(chain.SAMPLE_U0, [p2_one_magnon_root(N, l)],
                                            P2, N)
            assert rep.cluster_at(lam, 1e-7).alg == predicted
