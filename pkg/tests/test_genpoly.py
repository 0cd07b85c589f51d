import random
from fractions import Fraction

import mpmath as mp
import pytest

from gparith.errors import ArityTooSmall, ExprSyntaxError, UnknownConstant
from gparith.genpoly import (
    CircleNorm,
    Const,
    GAMMA_ALL_PAIRS,
    GAMMA_OFF_DIAGONAL,
    IndicatorLess,
    Mul,
    Nint,
    SequenceHandle,
    Var,
    bohr_indicator_sequence,
    delta_shift,
    delta_sym,
    delta_sym_iter,
    delta_sym_iter_subsets,
    eval_expr,
    expr_sort,
    lemma31_classify,
    parse,
    pretty,
    quadratic_sequence,
)

mp.mp.dps = 50
CBRT2 = mp.cbrt(2)


class TestParser:
    def test_theorem_a_shape(self):
        e = parse("nint(beta*n*nint(alpha*n))")
        assert e == Nint(Mul(Mul(Const("beta"), Var()), Nint(Mul(Const("alpha"), Var()))))

    def test_var(self):
        assert parse("n") == Var()

    def test_indicator_shape(self):
        e = parse("ind(norm(alpha*n*n) < rho)")
        assert e == IndicatorLess(
            CircleNorm(Mul(Mul(Const("alpha"), Var()), Var())), Const("rho"))

    @pytest.mark.parametrize("text", [
        "nint(beta*n*nint(alpha*n))",
        "ind(norm(alpha*n*n) < rho)",
        "n", "1+2*n", "-(n+2)*3-floor(alpha*n)",
        "frac(alpha*n)+norm(beta*n)", "3*(n-1)*(n-2)",
    ])
    def test_round_trip(self, text):
        e = parse(text)
        assert parse(pretty(e)) == e

    def test_syntax_errors_carry_position(self):
        with pytest.raises(ExprSyntaxError) as ei:
            parse("nint(alpha*n")
        assert ei.value.position == len("nint(alpha*n")
        with pytest.raises(ExprSyntaxError):
            parse("n +")
        with pytest.raises(ExprSyntaxError):
            parse("ind(alpha*n < rho)")  # ind requires norm(...)
        with pytest.raises(ExprSyntaxError):
            parse("2n")

    def test_unknown_constant_at_eval_not_parse(self):
        e = parse("nint(gamma*n)")
        with pytest.raises(UnknownConstant):
            eval_expr(e, {}, 1)

    def test_sorts(self):
        assert expr_sort(parse("nint(alpha*n)*n + 1")) == "int"
        assert expr_sort(parse("alpha*n")) == "real"
        assert expr_sort(parse("frac(alpha*n)")) == "real"
        assert expr_sort(parse("ind(norm(alpha*n) < rho)")) == "int"


class TestEval:
    def test_theorem_a_values(self, alpha):
        g = quadratic_sequence(alpha, 1)
        assert g(0) == 0
        assert g(5) == 30
        # oracle: nint(6*cbrt2) = 8, so g(6) = nint(6*8) = 48
        assert int(mp.floor(6 * CBRT2 + mp.mpf(1) / 2)) == 8
        assert g(6) == 48

    def test_beta_alpha_squared(self, alpha):
        g2 = quadratic_sequence(alpha, alpha * alpha)
        assert g2(1) == 2  # alpha^2 ~ 1.5874 rounds to 2

    def test_bohr_indicator(self, sqrt2):
        g = bohr_indicator_sequence(sqrt2, Fraction(1, 5))
        assert g(0) == 1
        assert g(1) == 0  # ||sqrt2|| ~ 0.414 >= 1/5
        assert all(g(n) in (0, 1) for n in range(20))
        assert all(g(-n) == g(n) for n in range(1, 15))

    def test_cross_field_products_rejected(self, alpha, sqrt2):
        # constants from independent fields cannot combine: the evaluator
        # propagates the field-mismatch error from the exact core
        from gparith.errors import FieldMismatch

        expr = parse("nint(alpha*beta*n)")
        with pytest.raises(FieldMismatch):
            eval_expr(expr, {"alpha": alpha, "beta": sqrt2}, 3)

    def test_memo_transparency(self, alpha):
        g = quadratic_sequence(alpha, 1)
        rng = random.Random(2)
        for _ in range(10**4):
            n = rng.randrange(0, 10**4)
            assert g(n) == g.fresh(n)

    def test_nearest_product_remark(self, alpha):
        # |g(n) - beta n nint(alpha n)| <= 1/2, exactly
        g = quadratic_sequence(alpha, alpha * alpha)
        beta = alpha * alpha
        for n in range(1, 40):
            inner = beta * n * (alpha * n).nint()
            diff = g(n) - inner
            d = -diff if diff.sign() < 0 else diff
            assert (d - Fraction(1, 2)).sign() <= 0


class TestDiscreteCalculus:
    def test_shift_linear(self, alpha):
        f = SequenceHandle(parse("n"), {})
        assert delta_shift(f, 7, 3) == 7
        assert delta_shift(f, 0, 12) == 0

    def test_shift_on_g(self, alpha):
        g = quadratic_sequence(alpha, 1)
        # g(6) - g(5) = 48 - 30 (50-digit oracle; nint(6 cbrt2) = 8)
        assert delta_shift(g, 1, 5) == 18

    def test_sym_kills_linear(self):
        f = SequenceHandle(parse("7*n-4"), {})
        for m in range(0, 6):
            for n in range(0, 6):
                assert delta_sym(f, m, n) == 0

    def test_sym_quadratic_cross_term(self):
        # for a2 n^2 + a1 n + a0 the symmetric derivative is 2 a2 n m
        f = SequenceHandle(parse("3*n*n-5*n+2"), {})
        for m in range(0, 8):
            for n in range(0, 8):
                assert delta_sym(f, m, n) == 2 * 3 * n * m

    def test_iter_vanishes_on_quadratic(self):
        f = SequenceHandle(parse("4*n*n+n-9"), {})
        assert delta_sym_iter(f, [5, 3, 2]) == 0
        assert delta_sym_iter(f, [1, 1, 1]) == 0

    def test_iter_zero_direction(self, alpha):
        g = quadratic_sequence(alpha, 1)
        assert delta_sym_iter(g, [17, 0, 23]) == 0
        assert delta_sym_iter(g, [17, 23, 0]) == 0

    def test_sym_symmetric_in_arguments(self, alpha):
        g = quadratic_sequence(alpha, 1)
        rng = random.Random(6)
        for _ in range(50):
            m, n = rng.randrange(0, 500), rng.randrange(0, 500)
            assert delta_sym(g, m, n) == delta_sym(g, n, m)

    def test_iter_matches_subset_oracle(self, alpha):
        g = quadratic_sequence(alpha, 1)
        rng = random.Random(9)
        for _ in range(40):
            args = [rng.randrange(1, 300) for _ in range(rng.randrange(2, 5))]
            assert delta_sym_iter(g, args) == delta_sym_iter_subsets(g, args)

    def test_iter_permutation_invariant(self, alpha):
        g = quadratic_sequence(alpha, 1)
        rng = random.Random(10)
        for _ in range(20):
            args = [rng.randrange(1, 200) for _ in range(3)]
            base = delta_sym_iter(g, args)
            for _ in range(3):
                rng.shuffle(args)
                assert delta_sym_iter(g, args) == base

    def test_classical_degree_properties(self):
        # degree-d polynomial: r = d nonzero directions leave no n0
        # dependence; r = d + 1 vanishes identically
        f = SequenceHandle(parse("2*n*n*n-n"), {})
        v1 = delta_sym_iter(f, [4, 1, 2, 3])
        v2 = delta_sym_iter(f, [9, 1, 2, 3])
        assert v1 == v2
        assert delta_sym_iter(f, [5, 1, 2, 3, 4]) == 0

    def test_arity_guard(self, alpha):
        g = quadratic_sequence(alpha, 1)
        with pytest.raises(ArityTooSmall):
            delta_sym_iter(g, [5])


class TestLemma31Classify:
    def test_identity_triple_documented_case(self, alpha):
        # ratio precondition violated: report produced, equivalence not asserted
        rep = lemma31_classify(1, 1, 1, alpha, 1)
        assert rep.lhs_zero is False and rep.cond1 is False

    def test_equivalence_on_admissible_triples(self, alpha):
        g = quadratic_sequence(alpha, 1)
        rng = random.Random(4)
        for _ in range(60):
            n0 = 2 + rng.randrange(20)
            n1 = 2 * n0 + rng.randrange(4 * n0)
            n2 = 2 * n1 + rng.randrange(4 * n1)
            rep = lemma31_classify(n0, n1, n2, alpha, 1, g=g)
            assert rep.equivalent

    def test_violating_pair_scan(self, alpha):
        # a pair with frac sum beyond 1/2 forces nonzero derivative
        s2 = (alpha * 2).frac_signed()
        s6 = (alpha * 6).frac_signed()
        assert (abs(s2 + s6) - Fraction(1, 2)).sign() > 0
        g = quadratic_sequence(alpha, 1)
        for n2 in range(100, 160):
            rep = lemma31_classify(2, 6, n2, alpha, 1, g=g)
            assert not rep.cond1 and not rep.lhs_zero

    def test_gamma_modes_disagree_for_algebraic_beta(self, alpha):
        # frozen by search: beta = alpha^2, all-pairs matches the exact
        # derivative while off-diagonal does not
        beta = alpha * alpha
        g = quadratic_sequence(alpha, beta)
        rep_all = lemma31_classify(23, 530, 9722, alpha, beta,
                                   GAMMA_ALL_PAIRS, g=g)
        rep_off = lemma31_classify(23, 530, 9722, alpha, beta,
                                   GAMMA_OFF_DIAGONAL, g=g)
        assert rep_all.lhs_zero is True
        assert rep_all.cond1 and rep_all.cond2
        assert not rep_off.cond2
        assert rep_all.equivalent and not rep_off.equivalent

    def test_carry_diagnostics_recompute(self, alpha):
        rep = lemma31_classify(5, 50, 600, alpha, 1)
        for I, e in rep.carries_e.items():
            acc = Fraction(0)
            for i in I:
                v = (alpha * rep.triple[i]).frac_signed()
                acc = v + acc
            assert acc.nint() == e
        for f in rep.carries_f.values():
            assert -4 <= f <= 4
