"""Bethe residuals, canonicalization, and admissibility verdicts."""
import math

import pytest

from openxxz import bethe
from openxxz.regimes import XXX, generic_xxz, root_of_unity


def p2_one_magnon_root(N, l):
    """Exact one-magnon root at p=2: (ix-1)/(x-i) = e^{i pi l/N} solved for x."""
    e = complex(math.cos(math.pi * l / N), math.sin(math.pi * l / N))
    return (1 - 1j * e) / (1j - e)


KNOWN_XXX = [
    (2, [0.5]),
    (3, [0.8660254037844386]),
    (3, [0.2886751345948129]),
    (4, [0.7160149594491338 + 0.5125206553446844j, 0.7160149594491338 - 0.5125206553446844j]),
    (4, [0.6683262276726571, 0.2309546565991595]),
]


class TestResiduals:
    def test_empty_vector_is_exact(self):
        assert bethe.residual_xxx([], 4) == 0.0
        assert bethe.residual_x([], generic_xxz(0.1), 4) == 0.0

    @pytest.mark.parametrize("N,roots", KNOWN_XXX)
    def test_known_isotropic_solutions(self, N, roots):
        assert bethe.residual_xxx(roots, N) < 1e-12

    def test_known_anisotropic_solutions(self):
        assert bethe.residual_x([0.9950207489532265 + 0.0996679946249558j],
                                generic_xxz(0.1), 2) < 1e-12
        assert bethe.residual_x([1.962610505505151], root_of_unity(5), 2) < 1e-12
        assert bethe.residual_x([3.732050807568877], root_of_unity(3), 2) < 1e-12

    def test_p2_decoupled_roots(self):
        reg = root_of_unity(2)
        for N in (4, 5, 6, 7):
            lmax = (N - 2) // 2 if N % 2 == 0 else (N - 1) // 2
            roots = [p2_one_magnon_root(N, l) for l in range(1, lmax + 1)]
            assert bethe.residual_x(roots, reg, N) < 1e-12

    def test_nonsolution_has_large_residual(self):
        assert bethe.residual_xxx([0.3], 2) > 1e-3

    def test_nonfinite_roots(self):
        assert bethe.residual_xxx([complex("inf")], 2) == math.inf

    def test_regime_mismatch_rejected(self):
        with pytest.raises(ValueError):
            bethe.residual_x([0.5], XXX, 2)


class TestCanonicalize:
    def test_reflects_isotropic(self):
        sol = bethe.classify([-0.5], XXX, 2)
        assert sol.roots == (0.5,)
        assert sol.verdict == bethe.ADMISSIBLE

    def test_reflects_multiplicative(self):
        sol = bethe.classify([0.25], root_of_unity(3), 2)
        assert abs(sol.roots[0] - 4.0) < 1e-15

    def test_lower_half_imaginary_axis_reflects(self):
        sol = bethe.classify([-0.7j + 0.0], XXX, 4)
        assert sol.roots[0].imag > 0

    def test_unit_circle_boundary_is_canonical(self):
        # a root exactly on |x| = 1 with 0 < arg < pi stays put and is admissible
        sol = bethe.classify([0.9950207489532265 + 0.0996679946249558j], generic_xxz(0.1), 2)
        assert sol.verdict == bethe.ADMISSIBLE
        assert sol.residual < 1e-12

    def test_sorted_output(self):
        reg = root_of_unity(2)
        roots = [p2_one_magnon_root(5, 2), p2_one_magnon_root(5, 1)]
        sol = bethe.classify(roots, reg, 5)
        assert sol.roots[0].real <= sol.roots[1].real


class TestVerdicts:
    def test_empty_is_admissible(self):
        sol = bethe.classify([], XXX, 4)
        assert sol.verdict == bethe.ADMISSIBLE and sol.residual == 0.0

    def test_singular_pair(self):
        sol = bethe.classify([0.5j, -0.5j], XXX, 4)
        assert sol.verdict == bethe.SINGULAR

    def test_singular_anisotropic(self):
        reg = root_of_unity(3)
        sol = bethe.classify([reg.q], reg, 4)
        assert sol.verdict == bethe.SINGULAR

    def test_fixed_points(self):
        assert bethe.classify([-1.0], root_of_unity(3), 2).verdict == bethe.ZERO_OR_HALF_PI
        assert bethe.classify([1.0], root_of_unity(3), 2).verdict == bethe.ZERO_OR_HALF_PI
        assert bethe.classify([0.0], XXX, 2).verdict == bethe.ZERO_OR_HALF_PI

    def test_coincident(self):
        sol = bethe.classify([0.7, 0.7 + 1e-10], XXX, 4)
        assert sol.verdict == bethe.COINCIDENT

    def test_two_string_excluded(self):
        reg = root_of_unity(2)
        string = bethe.p_string_image(1.3 + 0.4j, reg)
        sol = bethe.classify(string, reg, 4)
        assert sol.verdict == bethe.P_STRING

    def test_non_canonical_detected(self):
        raw = bethe.SolutionVector(XXX, 2, (-0.5,), 0.0, bethe.ADMISSIBLE)
        assert bethe.is_admissible(raw) == bethe.NON_CANONICAL

    def test_string_detection_requires_all_members(self):
        reg = root_of_unity(3)
        partial = bethe.p_string_image(1.5 + 0.2j, reg)[:2]
        assert not bethe.contains_p_string(partial, 3)

    def test_string_detection_rejects_wrong_ratio(self):
        assert not bethe.contains_p_string([1.5, 1.5 * 1.1], 2)


class TestPStringAugmentation:
    """Appending a complete p-string leaves the residual tiny and is excluded."""

    @pytest.mark.parametrize("p,base,N,amp", [
        (2, [p2_one_magnon_root(5, 1), p2_one_magnon_root(5, 2)], 5, 0.9 + 0.9j),
        (3, [3.732050807568877], 2, 1.7 + 0.4j),
        (4, [1.45314130298278, 3.20337817632093], 4, 1.2 - 0.7j),
        (5, [1.962610505505151], 2, 1.3 + 0.2j),
    ])
    def test_augmented_solution(self, p, base, N, amp):
        reg = root_of_unity(p)
        base_sol = bethe.classify(base, reg, N)
        assert base_sol.verdict == bethe.ADMISSIBLE
        aug = list(base) + list(bethe.p_string_image(amp, reg))
        assert bethe.residual_x(aug, reg, N) < 1e-8
        assert bethe.classify(aug, reg, N).verdict == bethe.P_STRING


class TestEnergy:
    def test_isotropic_singlet(self):
        sol = bethe.classify([0.5], XXX, 2)
        assert abs(bethe.energy(sol) - (-3.0)) < 1e-14

    def test_isotropic_vacuum(self):
        sol = bethe.classify([], XXX, 6)
        assert bethe.energy(sol) == 5.0

    def test_p2_closed_form(self):
        # at eta = i pi/2 the general expression reduces to -8 sum x/(x^2+1)
        reg = root_of_unity(2)
        roots = [p2_one_magnon_root(7, 1), p2_one_magnon_root(7, 3)]
        sol = bethe.classify(roots, reg, 7)
        expected = -8 * sum(x / (x * x + 1) for x in sol.roots)
        assert abs(bethe.energy(sol) - expected) < 1e-12

    def test_pole_raises(self):
        sol = bethe.SolutionVector(XXX, 2, (0.5j,), 0.0, bethe.SINGULAR)
        with pytest.raises(ZeroDivisionError):
            bethe.energy(sol)


class TestCensusAndJson:
    def test_census_counts_admissible_in_sector(self):
        reg = root_of_unity(2)
        sols = [
            bethe.classify([p2_one_magnon_root(5, 1)], reg, 5),
            bethe.classify([p2_one_magnon_root(5, 2)], reg, 5),
            bethe.classify(bethe.p_string_image(1.3 + 0.4j, reg), reg, 5),
            bethe.classify([p2_one_magnon_root(5, 1), p2_one_magnon_root(5, 2)], reg, 5),
        ]
        assert bethe.census(sols, 5, 1) == 2
        assert bethe.census(sols, 5, 2) == 1
        assert bethe.census(sols, 4, 1) == 0

    def test_json_round_trip(self):
        sol = bethe.classify([0.7160149594491338 + 0.5125206553446844j,
                              0.7160149594491338 - 0.5125206553446844j], XXX, 4)
        again = bethe.SolutionVector.from_json_dict(sol.to_json_dict())
        assert again == sol

    def test_json_round_trip_root_of_unity(self):
        reg = root_of_unity(5)
        sol = bethe.classify([1.962610505505151], reg, 2)
        again = bethe.SolutionVector.from_json_dict(sol.to_json_dict())
        assert again.regime.p == 5 and again.roots == sol.roots
