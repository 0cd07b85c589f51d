from fractions import Fraction

import pytest

from gparith.errors import (
    ExprSyntaxError,
    PreconditionViolated,
    RangeOverflow,
    UnboundVariable,
)
from gparith.focheck import (
    BoundProfile,
    DEFAULT_BOUNDS,
    FExists,
    Structure,
    TInt,
    def_mu,
    def_pi,
    def_psi,
    delta_bounded,
    delta_literal,
    ell,
    eval_formula,
    lemma36_characterisation,
    mu_formula,
    parse_formula,
    pretty_formula,
    progression,
    verify_lemma37,
)
from gparith.genpoly import delta_sym


class TestEvaluator:
    def test_exists(self):
        phi = parse_formula("exists x in [1,10]: x + x = 10")
        assert eval_formula(phi, {}, Structure())

    def test_forall_false(self):
        phi = parse_formula("forall x in [1,3]: x < 1")
        assert not eval_formula(phi, {}, Structure())

    def test_empty_ranges(self):
        assert not eval_formula(parse_formula("exists x in [5,4]: x = x"),
                                {}, Structure())
        assert eval_formula(parse_formula("forall x in [5,4]: x < x"),
                            {}, Structure())

    def test_sequences_and_relations(self, ctx):
        phi = parse_formula("exists x in [1,20]: g(x) = 30 and Q(x)")
        st = Structure(sequences={"g": ctx.g},
                       relations={"Q": lambda x: x % 5 == 0})
        assert eval_formula(phi, {}, st)  # x = 5: g(5) = 30

    def test_unbound_variable(self):
        phi = parse_formula("y < 3")
        with pytest.raises(UnboundVariable):
            eval_formula(phi, {}, Structure())

    def test_range_overflow(self):
        phi = parse_formula("exists x in [1, 99999999]: x = 1")
        with pytest.raises(RangeOverflow):
            eval_formula(phi, {}, Structure(), BoundProfile(max_range=1000))

    def test_implication_and_not(self):
        phi = parse_formula("forall x in [1,9]: (x > 5) => x + 1 > 6")
        assert eval_formula(phi, {}, Structure())
        assert eval_formula(parse_formula("not 2 < 1"), {}, Structure())

    def test_parse_round_trip(self):
        texts = [
            "exists x in [1,10]: x + x = 10",
            "forall m in [1,3]: exists h in [m, 2*m]: g(h) != 0 or h <= m",
            "exists m in [1,8]: Q(m, 2*m, 3*m, 6*m) and m != 2",
            "not (1 < 2 and 3 < 2)",
        ]
        for text in texts:
            phi = parse_formula(text)
            assert parse_formula(pretty_formula(phi)) == phi

    def test_parse_error(self):
        with pytest.raises(ExprSyntaxError):
            parse_formula("exists x in [1 5]: x = 1")

    def test_monotone_caps(self, ctx):
        # enlarging an existential range never flips true to false;
        # enlarging a universal range never flips false to true
        st = Structure(sequences={"g": ctx.g})
        for cap in (200, 400, 1600):
            phi = FExists("n2", TInt(100), TInt(cap),
                          mu_formula(2, cap).body)
            val = {"n0": 5, "n1": 50}
            small = eval_formula(mu_formula(2, cap), val, st)
            big = eval_formula(mu_formula(2, 4 * cap), val, st)
            assert (not small) or big


class TestMuPsi:
    def test_mu_witness_pair(self, ctx):
        b = BoundProfile(n2_cap=5000)
        assert def_mu(5, 50, 2, b, ctx.g)

    def test_mu_violating_pair(self, ctx):
        b = BoundProfile(n2_cap=3000)
        assert not def_mu(2, 6, 2, b, ctx.g)

    def test_mu_empty_range(self, ctx):
        b = BoundProfile(n2_cap=10)  # cap below C*n1
        assert not def_mu(5, 50, 2, b, ctx.g)

    def test_psi_vacuous(self, ctx):
        assert def_psi(7, 0, 2, DEFAULT_BOUNDS, ctx.g)

    def test_psi_matches_hand_loop(self, ctx):
        # independent loop oracle over a bounded witness search
        b = BoundProfile(n2_cap=4000)
        g = ctx.g

        def mu_loop(n0, n1):
            return any(
                g(n0 + n1 + n2) - g(n1 + n2) - g(n0 + n2) - g(n0 + n1)
                + g(n0) + g(n1) + g(n2) - g(0) == 0
                for n2 in range(2 * n1, 4001))

        for m in (3, 4, 29):
            want = all(mu_loop(n, m) for n in range(1, 6))
            assert def_psi(m, 5, 2, b, g) == want

    def test_psi_window_equivalence_small(self, ctx):
        # eq-(3.8)-style window: membership matches the bounded search
        # (false instances refute within a short witness range here, so a
        # modest cap keeps the generic evaluator honest and quick)
        b = BoundProfile(n2_cap=2000)
        for N in (1, 3, 5):
            for m in range(1, 30):
                assert def_psi(m, N, 2, b, ctx.g) == ctx.in_window(m, N)


class TestEllProgressionPi:
    def test_ell_unit_band(self, ctx):
        # norm in (1/4, 1/2] gives ell(k) = k; k = 2 has norm ~ 0.48
        assert ell(2, ctx.alpha) == 2

    def test_ell_example(self, ctx):
        assert ell(4, ctx.alpha) == 48

    def test_ell_multiple_of_k(self, ctx):
        for k in range(1, 40):
            assert ell(k, ctx.alpha) % k == 0

    def test_ell_unique_via_bounded_delta(self, ctx):
        # ell(k) is the unique n with delta(k, n) and not delta(k, n+k)
        for k in (2, 4, 7):
            L = ell(k, ctx.alpha)
            assert delta_bounded(k, L, ctx).value is True
            assert delta_bounded(k, L + k, ctx).value is False

    def test_progression(self, ctx):
        assert progression(4, 4, ctx.alpha).elements == [4]
        assert progression(4, 48, ctx.alpha).elements == list(range(4, 49, 4))
        with pytest.raises(PreconditionViolated):
            progression(4, 3, ctx.alpha)
        with pytest.raises(PreconditionViolated):
            progression(4, 52, ctx.alpha)  # beyond ell(4)

    def test_progression_matches_bounded_delta(self, ctx):
        # FO cross-check: P_{m,h} = {n in [m,h] : delta(m,n)} on a desk case
        m, h = 4, 48
        P = set(progression(m, h, ctx.alpha).elements)
        for n in range(m, h + 1):
            v = delta_bounded(m, n, ctx)
            assert v.value is not None
            assert (n in P) == v.value

    def test_pi_examples(self, ctx):
        assert def_pi(4, 48, ctx)
        assert not def_pi(4, 8, ctx)   # below the range clause
        assert not def_pi(4, 52, ctx)  # beyond ell

    def test_pi_from_progression_base(self, ctx):
        from gparith.diosearch import SearchBudget, find_progression_base

        for r in (3, 5):
            w = find_progression_base(r, ctx.alpha, 1, SearchBudget())
            assert def_pi(w.m, r * w.m, ctx)


class TestLemma37:
    def test_true_instance(self, ctx):
        rep = verify_lemma37(4, 48, ctx)
        assert rep.side_polynomial and rep.side_constant_d2
        assert rep.equivalent and rep.leading_matches
        assert rep.fit[2] == Fraction(rep.a_value, 2 * 16)

    def test_precondition(self, ctx):
        with pytest.raises(PreconditionViolated):
            verify_lemma37(4, 8, ctx)

    def test_scaling_identity_on_witness(self, ctx):
        # on a progression-base instance the fit is (n/m)^2 g(m)
        from gparith.diosearch import SearchBudget, find_progression_base

        w = find_progression_base(5, ctx.alpha, 1, SearchBudget())
        rep = verify_lemma37(w.m, 5 * w.m, ctx)
        g_m = ctx.g(w.m)
        assert rep.fit == (Fraction(0), Fraction(0),
                           Fraction(g_m, w.m * w.m))


class TestDelta:
    @pytest.mark.parametrize("n,npr", [(4, 8), (5, 5), (3, 9), (2, 3), (7, 6),
                                       (12, 36), (10, 250)])
    def test_matches_characterisation(self, ctx, n, npr):
        v = delta_bounded(n, npr, ctx)
        assert v.value is not None
        assert v.value == lemma36_characterisation(n, npr, ctx.alpha)

    def test_divisible_needs_norm_bound(self, ctx):
        # 3 | 9 but 3 * ||3 alpha|| > 1/2, so the ratio of nearest
        # integers is off and the relation must refute
        assert not lemma36_characterisation(3, 9, ctx.alpha)
        assert delta_bounded(3, 9, ctx).value is False

    def test_literal_prefix_equals_monotone_collapse(self, ctx):
        # the nested prefix evaluated literally equals the single-pass
        # evaluation at the outermost caps (quantifier monotonicity)
        g = ctx.g
        caps = dict(H_cap=2, Mp_cap=4, M_cap=4, m_cap=120, mp_cap=400)

        def collapsed(n, npr):
            H, Mp, M = caps["H_cap"], caps["Mp_cap"], caps["M_cap"]
            for m in range(1, caps["m_cap"] + 1):
                if not ctx.in_window(m, M):
                    continue
                if not any(ctx.in_window(mp, Mp)
                           and abs(delta_sym(g, mp, n) - delta_sym(g, m, npr)) <= H
                           for mp in range(1, caps["mp_cap"] + 1)):
                    return False
            return True

        for (n, npr) in [(4, 8), (2, 3), (5, 5), (3, 9)]:
            lit = delta_literal(n, npr, ctx, **caps)
            assert lit == collapsed(n, npr)

    def test_converse_bound(self, ctx):
        # direct instance of the divisible-case bound |...| <= 2
        g = ctx.g
        n, t = 4, 3  # 3 * ||4 alpha|| < 1/2
        m = 4        # ||4 alpha|| ~ 0.0397 < all margins for t = 3
        assert abs(delta_sym(g, t * m, n) - delta_sym(g, m, t * n)) <= 2
