from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from gparith.diosearch import (
    SearchBudget,
    calibrate_C,
    continued_fraction,
    equidist_check,
    find_lemma32_witness,
    find_progression_base,
    find_small_norm,
    find_weyl_witness,
    lemma32_scan,
)
from gparith.errors import (
    NotFoundWithinBudget,
    PreconditionViolated,
    RationalInput,
    ThetaRational,
)
from gparith.genpoly import delta_sym_iter, quadratic_sequence

mp.mp.dps = 50


class TestContinuedFraction:
    def test_sqrt2(self, sqrt2):
        cf = continued_fraction(sqrt2, 8)
        assert cf.partial_quotients == [1, 2, 2, 2, 2, 2, 2, 2]
        assert not cf.terminated

    def test_cbrt2(self, alpha):
        # matches the classical expansion of 2^(1/3)
        cf = continued_fraction(alpha, 6)
        assert cf.partial_quotients == [1, 3, 1, 5, 1, 1]

    def test_rational_terminates(self, cbrt2_field):
        cf = continued_fraction(cbrt2_field.from_rational(Fraction(7, 3)), 5)
        assert cf.partial_quotients == [2, 3]
        assert cf.terminated

    def test_convergent_norm_bound(self, alpha):
        # classical: ||alpha q|| < 1/q for convergent denominators
        cf = continued_fraction(alpha, 12)
        for _, q in cf.convergents()[1:]:
            nrm = (alpha * q).circle_norm()
            assert (nrm - Fraction(1, q)).sign() < 0


class TestSmallNorm:
    def test_sqrt2_eps_tenth(self, sqrt2):
        w = find_small_norm(sqrt2, Fraction(1, 10),
                            SearchBudget(strategy="exhaustive"))
        assert w.m == 5
        assert float(w.achieved["norm"]) == pytest.approx(
            float(abs(5 * mp.sqrt(2) - 7)))

    def test_sqrt2_eps_half(self, sqrt2):
        w = find_small_norm(sqrt2, Fraction(1, 2),
                            SearchBudget(strategy="exhaustive"))
        assert w.m == 1

    def test_budget_exhaustion(self, sqrt2):
        with pytest.raises(NotFoundWithinBudget):
            find_small_norm(sqrt2, Fraction(1, 10**9),
                            SearchBudget(max_candidate=10))

    def test_exhaustive_is_minimal(self, alpha):
        for eps in (Fraction(1, 7), Fraction(1, 23), Fraction(1, 80)):
            w = find_small_norm(alpha, eps, SearchBudget(strategy="exhaustive"))
            brute = next(m for m in range(1, 10**6)
                         if ((alpha * m).circle_norm() - eps).sign() < 0)
            assert w.m == brute

    def test_rational_rejected(self, cbrt2_field):
        with pytest.raises(RationalInput):
            find_small_norm(cbrt2_field.from_rational(Fraction(3, 7)),
                            Fraction(1, 10), SearchBudget())

    def test_witness_reverifies(self, alpha):
        w = find_small_norm(alpha, Fraction(1, 50), SearchBudget())
        assert ((alpha * w.m).circle_norm() - Fraction(1, 50)).sign() < 0


class TestProgressionBase:
    @pytest.mark.parametrize("r", [2, 4, 6])
    def test_conditions_hold(self, alpha, r):
        w = find_progression_base(r, alpha, 1, SearchBudget(max_candidate=10**6))
        m = w.m
        assert ((alpha * m).circle_norm() - Fraction(1, 2 * r)).sign() < 0
        g = quadratic_sequence(alpha, 1)
        # quadratic scaling along the progression
        assert all(g(t * m) == t * t * g(m) for t in range(1, r + 1))

    def test_budget(self, alpha):
        with pytest.raises(NotFoundWithinBudget):
            find_progression_base(2, alpha, 1, SearchBudget(max_candidate=1))

    def test_r_guard(self, alpha):
        with pytest.raises(ValueError):
            find_progression_base(1, alpha, 1, SearchBudget())

    def test_algebraic_beta(self, alpha):
        w = find_progression_base(3, alpha, alpha * alpha,
                                  SearchBudget(max_candidate=10**6))
        inner = alpha * alpha * w.m * (alpha * w.m).nint()
        assert (inner.circle_norm() - Fraction(1, 18)).sign() < 0


class TestLemma32Witness:
    def test_witness_reverifies(self, alpha):
        g = quadratic_sequence(alpha, 1)
        n2 = find_lemma32_witness(5, 50, 2, alpha, 1,
                                  SearchBudget(max_candidate=10**6), g=g)
        assert delta_sym_iter(g, [5, 50, n2]) == 0
        # least witness: nothing below it
        assert lemma32_scan(5, 50, 100, n2 - 1, alpha, 1, g=g) is None

    def test_precondition_ratio(self, alpha):
        with pytest.raises(PreconditionViolated):
            find_lemma32_witness(5, 7, 2, alpha, 1, SearchBudget())

    def test_precondition_fractional(self, alpha):
        # frac(2 alpha) + frac(6 alpha) ~ -0.92 violates the strict bound
        with pytest.raises(PreconditionViolated):
            find_lemma32_witness(2, 6, 2, alpha, 1, SearchBudget())


class TestWeylWitness:
    def test_examples(self, sqrt2):
        n = find_weyl_witness(
            [("alpha*n*n", (Fraction(1, 5) - Fraction(1, 50), Fraction(1, 5))),
             ("2*alpha*n", (Fraction(0), Fraction(1, 40)))],
            SearchBudget(max_candidate=10**6), {"alpha": sqrt2})
        v1 = (sqrt2 * n * n).frac_signed()
        assert (v1 - (Fraction(1, 5) - Fraction(1, 50))).sign() > 0
        assert (Fraction(1, 5) - v1).sign() > 0
        v2 = (2 * sqrt2 * n).frac_signed()
        assert v2.sign() > 0 and (Fraction(1, 40) - v2).sign() > 0

    def test_empty_targets(self):
        assert find_weyl_witness([], SearchBudget()) == 1

    def test_contradictory(self, sqrt2):
        with pytest.raises(NotFoundWithinBudget):
            find_weyl_witness(
                [("alpha*n", (Fraction(1, 10), Fraction(2, 10))),
                 ("alpha*n", (Fraction(3, 10), Fraction(4, 10)))],
                SearchBudget(max_candidate=3000), {"alpha": sqrt2})

    def test_empty_interval_rejected(self, sqrt2):
        with pytest.raises(ValueError):
            find_weyl_witness([("alpha*n", (Fraction(1, 5), Fraction(1, 5)))],
                              SearchBudget(), {"alpha": sqrt2})


class TestCalibration:
    def test_integer_beta_calibrates_small(self, alpha):
        res = calibrate_C(alpha, 1, 400, seed=7)
        assert res.C == 2
        assert res.modes_indistinguishable  # gamma terms vanish for beta in Z
        assert res.failures[(2, "all-pairs")] == 0

    def test_algebraic_beta_distinguishes_modes(self, alpha):
        res = calibrate_C(alpha, alpha * alpha, 150, seed=7)
        assert res.gamma_mode == "all-pairs"
        assert not res.modes_indistinguishable
        assert res.failures[(res.C, "off-diagonal")] >= 1

    def test_zero_samples_rejected(self, alpha):
        with pytest.raises(ValueError):
            calibrate_C(alpha, 1, 0)


class TestEquidist:
    def test_histograms_sum(self, alpha):
        rep = equidist_check(alpha, 1, 2, 3, 1, N=5000, M=20000, grid=8)
        assert int(rep.orbit_hist.sum()) == 5000
        assert int(rep.push_hist.sum()) == 20000
        assert rep.discrepancy >= 0

    def test_origin_box_nonempty(self, alpha):
        rep = equidist_check(alpha, 1, 2, 3, 1, N=50_000, M=50_000, grid=10)
        assert rep.origin_fraction > 0

    def test_deterministic(self, alpha):
        r1 = equidist_check(alpha, 1, 2, 3, 1, N=2000, M=8000, grid=6, seed=5)
        r2 = equidist_check(alpha, 1, 2, 3, 1, N=2000, M=8000, grid=6, seed=5)
        assert np.array_equal(r1.push_hist, r2.push_hist)
        assert r1.discrepancy == r2.discrepancy

    def test_d_zero_rejected(self, alpha):
        with pytest.raises(PreconditionViolated):
            equidist_check(alpha, 0, 1, 1, 0, N=100, M=100, grid=4)

    def test_theta_rational_rejected(self, alpha):
        # (0 + 2 alpha) / (0 + 1 alpha) = 2
        with pytest.raises(ThetaRational):
            equidist_check(alpha, 0, 2, 0, 1, N=100, M=100, grid=4)

    def test_quadratic_alpha_rejected(self, sqrt2):
        with pytest.raises(PreconditionViolated):
            equidist_check(sqrt2, 1, 2, 3, 1, N=100, M=100, grid=4)
