#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetlift/errors.hpp"
#include "jetlift/shlie.hpp"

#include <climits>
#include <vector>

using namespace jetlift;

namespace {
LdoGenParams tiny_params() {
    LdoGenParams p;
    p.max_terms = 2;
    p.max_xi_order = 1;
    p.max_eta_letters = 1;
    p.max_eta_order = 1;
    p.coeff.max_terms = 2;
    p.coeff.max_x_degree = 1;
    p.coeff.max_jet_order = 1;
    p.coeff.max_u_factors = 1;
    p.coeff.coeff_bound = 3;
    return p;
}

Ldo unit_coefficient(int dim, int arity, const Rat& c) {
    return Ldo::coefficient(dim, arity, LocalFunction::constant(dim, c));
}

// (f, g) |-> f dg/dx as a top form on one variable.
OperatorForm right_derivative_bracket() {
    Ldo idop = unit_coefficient(1, 1, Rat(1));
    OperatorForm lt2(1, 2, 1);
    lt2.add_component(1u, Ldo::compose(unit_coefficient(1, 2, Rat(1)),
                                       {idop, idop.total_derivative_compose(1)}));
    return lt2;
}

// (f, g) |-> E(f) E(g) dx with the truncated variational derivative.
OperatorForm symmetric_euler_bracket(int order) {
    Ldo e = euler_ldo(1, order);
    OperatorForm lt2(1, 2, 1);
    lt2.add_component(1u, Ldo::compose(unit_coefficient(1, 2, Rat(1)), {e, e}));
    return lt2;
}

int min_drop_floor(const DEndElement& x) {
    int best = INT_MAX;
    for (const auto& [eps, form] : x.families())
        for (const auto& [mask, a] : form.components())
            best = std::min(best, a.drop_floor());
    return best;
}

bool residuals_all_zero(const ShLieTower& t) {
    for (const auto& [k, r] : t.residuals)
        if (!r.is_zero()) return false;
    return true;
}

bool element_skew(const DEndElement& a) {
    int n = a.arity();
    std::vector<std::vector<int>> gens;
    if (n == 2) gens = {{2, 1}};
    if (n == 3) gens = {{2, 1, 3}, {2, 3, 1}};
    for (const auto& sigma : gens)
        if (!(dend_sym_action(sigma, a) - a.scaled(Rat(perm_sign(sigma)))).is_zero())
            return false;
    return true;
}

HorizontalForm wrap_top(int dim, const LocalFunction& f) {
    HorizontalForm top(dim, dim);
    top.add_component(full_mask(dim), f);
    return top;
}
} // namespace

TEST_CASE("unshuffle enumeration") {
    auto u21 = unshuffles(2, 1);
    REQUIRE(u21.size() == 3);
    CHECK(u21[0] == std::vector<int>{1, 2, 3});
    CHECK(u21[1] == std::vector<int>{1, 3, 2});
    CHECK(u21[2] == std::vector<int>{2, 3, 1});
    auto u12 = unshuffles(1, 2);
    REQUIRE(u12.size() == 3);
    CHECK(u12[0] == std::vector<int>{1, 2, 3});
    CHECK(u12[1] == std::vector<int>{2, 1, 3});
    CHECK(u12[2] == std::vector<int>{3, 1, 2});
    CHECK(unshuffles(3, 0).size() == 1);
    CHECK(unshuffles(2, 2).size() == 6);
}

TEST_CASE("alternating projector is idempotent and skew") {
    Rng rng(31);
    for (int trial = 0; trial < 4; ++trial) {
        int dim = 1 + trial % 2;
        DEndElement f = random_dend(rng, dim, 3, trial % 2, tiny_params());
        DEndElement a = alternate(f);
        CHECK((alternate(a) - a).is_zero());
        CHECK(element_skew(a));
    }
}

TEST_CASE("symmetric action commutes with the differential") {
    Rng rng(32);
    for (int trial = 0; trial < 8; ++trial) {
        int dim = 1 + trial % 2, arity = 2 + trial / 4, deg = (trial / 2) % 2;
        DEndElement f = random_dend(rng, dim, arity, deg, tiny_params());
        std::vector<int> sigma =
            arity == 2 ? std::vector<int>{2, 1} : std::vector<int>{2, 3, 1};
        CHECK((dend_delta(dend_sym_action(sigma, f)) -
               dend_sym_action(sigma, dend_delta(f)))
                  .is_zero());
        if (arity == 3)
            CHECK((dend_delta(alternate(f)) - alternate(dend_delta(f))).is_zero());
    }
}

TEST_CASE("truncated variational derivative") {
    CHECK(euler_ldo(1, 2).str() == "V[1,(0)] - D[1,1]*V[1,(1)] + D[1,1]^2*V[1,(2)]");
    CHECK(euler_ldo(2, 1).str() == "V[1,(0,0)] - D[1,2]*V[1,(0,1)] - D[1,1]*V[1,(1,0)]");

    // Agrees with the variational derivative of forms whenever the input
    // jet order stays under the truncation.
    Rng rng(33);
    LfGenParams p1;
    p1.max_jet_order = 3;
    Ldo e1 = euler_ldo(1, 3);
    for (int trial = 0; trial < 10; ++trial) {
        LocalFunction L = random_lf(rng, 1, p1);
        CHECK((e1.apply({L}) - euler(wrap_top(1, L))).is_zero());
    }
    LfGenParams p2;
    p2.max_jet_order = 2;
    Ldo e2 = euler_ldo(2, 2);
    for (int trial = 0; trial < 6; ++trial) {
        LocalFunction L = random_lf(rng, 2, p2);
        CHECK((e2.apply({L}) - euler(wrap_top(2, L))).is_zero());
    }
}

TEST_CASE("operadic composition in arbitrary degrees") {
    Rng rng(34);
    for (int trial = 0; trial < 6; ++trial) {
        DEndElement f = random_dend(rng, 2, 2, 0, tiny_params());
        DEndElement g = random_dend(rng, 2, 1, 1, tiny_params());
        CHECK(dend_compose(f, 2, g).degree() == 1);
        HorizontalForm w1 = random_hform(rng, 2, 1);
        HorizontalForm v = random_hform(rng, 2, 2);
        // Slot 2 carries g of odd degree past the degree-1 first argument
        // (regraded degree 1), so the composite evaluation flips sign.
        HorizontalForm lhs = dend_apply(dend_compose(f, 2, g), {w1, v});
        HorizontalForm rhs = dend_apply(f, {w1, dend_apply(g, {v})});
        CHECK((lhs + rhs).is_zero());
        // Slot 1 has nothing to the left: no sign.
        HorizontalForm l1 = dend_apply(dend_compose(f, 1, g), {v, w1});
        HorizontalForm r1 = dend_apply(f, {dend_apply(g, {v}), w1});
        CHECK((l1 - r1).is_zero());
    }
}

TEST_CASE("bracket condition checks") {
    SUBCASE("zero bracket passes strictly") {
        PoissonCheck pc = check_poisson_conditions(OperatorForm(1, 2, 1), -1);
        CHECK(pc.all());
        CHECK(check_poisson_conditions(OperatorForm(2, 2, 2), -1).all());
    }
    SUBCASE("truncated bracket obstruction floors") {
        PoissonCheck p2 = check_poisson_conditions(kdv_bracket(2), -1);
        CHECK_FALSE(p2.liftable);
        CHECK(p2.antisymmetric);
        CHECK_FALSE(p2.jacobi);
        CHECK(p2.chi_sym.is_zero());
        CHECK(p2.chi_insert[0][0].drop_floor() == 2);
        CHECK(p2.chi_insert[0][1].drop_floor() == 2);
        CHECK(p2.chi_jacobi.drop_floor() == 1);
        CHECK(check_poisson_conditions(kdv_bracket(2), 0).all());
        CHECK_FALSE(check_poisson_conditions(kdv_bracket(2), 1).all());

        PoissonCheck p4 = check_poisson_conditions(kdv_bracket(4), -1);
        CHECK(p4.chi_insert[0][0].drop_floor() == 4);
        CHECK(p4.chi_jacobi.drop_floor() == 2);
        CHECK(p4.chi_sym.is_zero());
        CHECK(check_poisson_conditions(kdv_bracket(4), 1).all());
        CHECK_FALSE(check_poisson_conditions(kdv_bracket(4), 2).jacobi);
    }
    SUBCASE("symmetric bracket fails on every window") {
        OperatorForm lt2 = symmetric_euler_bracket(2);
        PoissonCheck pc = check_poisson_conditions(lt2, 5);
        CHECK_FALSE(pc.antisymmetric);
        CHECK(pc.chi_sym.drop_floor() == 0);
        CHECK_FALSE(check_poisson_conditions(lt2, 50).antisymmetric);
    }
    SUBCASE("shape errors") {
        CHECK_THROWS_AS(check_poisson_conditions(OperatorForm(1, 3, 1), -1),
                        JetliftError);
        CHECK_THROWS_AS(check_poisson_conditions(OperatorForm(1, 2, 0), -1),
                        JetliftError);
    }
}

TEST_CASE("skew symmetrization") {
    for (int order = 2; order <= 3; ++order) {
        OperatorForm lt2 = kdv_bracket(order);
        OperatorForm out = skew_symmetrize(lt2, order == 2 ? 0 : 1);
        // Exactly skew, despite the windowed input conditions.
        OperatorForm swapped(1, 2, 1);
        swapped.add_component(1u,
                              out.component(1u).depolarized_form().sym_action({2, 1}));
        CHECK((out + swapped).is_zero());
        // The correction is an exact boundary: same induced bracket.
        OperatorForm corr = lt2 - out;
        TopReduction tr = reduce_top(corr);
        CHECK(tr.chi.is_zero());
        CHECK((d_op(tr.tilde) - corr).is_zero());
        // Idempotent on already-skew input.
        CHECK((skew_symmetrize(out, 0) - out).is_zero());
    }
    CHECK_THROWS_WITH_AS(skew_symmetrize(symmetric_euler_bracket(2), 3),
                         doctest::Contains("surviving characteristic"),
                         JetliftError);
}

TEST_CASE("jacobiator") {
    CHECK(jacobiator(DEndElement(1, 2, 0)).is_zero());

    // Bottom component equals the three-term cyclic sum at the operator
    // level, computed independently from the bottom bracket.
    ShLieTower t = build_tower(kdv_bracket(2), 2, 0);
    const DEndElement& l2 = t.bracket(2);
    DEndElement jac = jacobiator(l2, 0);
    CHECK(jac.families().size() == 4);
    Ldo lt2 = ladder_b0(l2).depolarized_form();
    Ldo h = lt2.compose_slot(1, lt2);
    Ldo expect = h - h.sym_action({1, 3, 2}) + h.sym_action({3, 1, 2});
    CHECK((ladder_b0(jac).depolarized_form() - expect).is_zero());

    // Non-cycles are rejected: a bare multiplication family does not
    // commute with the horizontal differentials.
    DEndElement notcycle(1, 2, 0);
    OperatorForm bottom(1, 2, 1);
    bottom.add_component(1u, unit_coefficient(1, 2, Rat(1)));
    notcycle.add_family({1u, 1u}, bottom);
    CHECK_THROWS_WITH_AS(jacobiator(notcycle), doctest::Contains("not a cycle"),
                         JetliftError);
}

TEST_CASE("windowed tower for the truncated bracket") {
    OperatorForm lt2 = kdv_bracket(2);
    ShLieTower t = build_tower(lt2, 3, 0);
    CHECK(t.window == 0);
    CHECK(t.certified_order() == 0);
    CHECK(t.brackets.at(2).families().size() == 3);
    CHECK(t.brackets.at(3).families().size() == 1);
    CHECK(element_skew(t.bracket(2)));
    CHECK(element_skew(t.bracket(3)));
    // Residuals die on the window but carry the frozen drop floors.
    CHECK(min_drop_floor(t.residuals.at(2)) == 2);
    CHECK(min_drop_floor(t.residuals.at(3)) == 1);
    CHECK(dies_on_window(t.residuals.at(3), 0));
    CHECK_FALSE(dies_on_window(t.residuals.at(3), 1));
    // The bottom of the lifted bracket is the skew representative.
    CHECK((ladder_b0(t.bracket(2)) - skew_symmetrize(lt2, 0).component(1u)).is_zero());

    LfGenParams p;
    p.max_jet_order = 0;
    ShLieVerifyReport rep = verify_shlie(t, 3, 8, 20260816, p);
    CHECK(rep.ok());
    CHECK(rep.entries.size() == 3);
    CHECK(rep.entries[0].checked == 0); // no admissible arity-1 tuples on the line
    CHECK(rep.entries[1].checked == 8);
    CHECK(rep.str().find("structure identities") != std::string::npos);

    // Beyond the certified jet order the relation value is exactly the
    // residual applied to the arguments.
    Rng rng(35);
    LfGenParams q;
    q.max_jet_order = 2;
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<HorizontalForm> args = {random_hform(rng, 1, 1, q),
                                            random_hform(rng, 1, 1, q),
                                            random_hform(rng, 1, 0, q)};
        HorizontalForm rel = shlie_relation(t, 3, args);
        CHECK((rel - dend_apply(t.residuals.at(3), args)).is_zero());
    }

    CHECK_THROWS_WITH_AS(build_tower(lt2, 3, -1),
                         doctest::Contains("bracket conditions fail"), JetliftError);
    CHECK_THROWS_WITH_AS(build_tower(lt2, 3, 1), doctest::Contains("conditions"),
                         JetliftError);
}

TEST_CASE("exact towers from operator boundaries") {
    SUBCASE("one independent variable, arity four") {
        Rng rng(7);
        OperatorForm lt2 = d_op(random_opform(rng, 1, 2, 0, tiny_params()));
        CHECK(check_poisson_conditions(lt2, -1).all());
        ShLieTower t = build_tower(lt2, 4, -1);
        CHECK(residuals_all_zero(t));
        CHECK(t.certified_order() == INT_MAX);
        CHECK_FALSE(t.bracket(3).is_zero());
        CHECK(t.bracket(4).is_zero()); // the arity-4 defect vanishes
        CHECK(verify_shlie(t, 4, 5, 99).ok());
    }
    SUBCASE("two independent variables") {
        Rng rng(11);
        OperatorForm lt2 = d_op(random_opform(rng, 2, 2, 1, tiny_params()));
        ShLieTower t = build_tower(lt2, 3, -1);
        CHECK(residuals_all_zero(t));
        CHECK_FALSE(t.bracket(3).is_zero());
        ShLieVerifyReport rep = verify_shlie(t, 3, 3, 99);
        CHECK(rep.ok());
        CHECK(rep.entries[0].checked > 0); // arity 1 is live in two variables
    }
    SUBCASE("symmetric boundary gives the zero tower") {
        OperatorForm x(1, 2, 0);
        x.add_component(0u, unit_coefficient(1, 2, Rat(3)));
        ShLieTower t = build_tower(d_op(x), 3, -1);
        CHECK(t.bracket(2).is_zero());
        CHECK(t.bracket(3).is_zero());
    }
    SUBCASE("zero bracket gives the zero tower") {
        ShLieTower t = build_tower(OperatorForm(1, 2, 1), 3, -1);
        CHECK(t.bracket(2).is_zero());
        CHECK(t.bracket(3).is_zero());
        CHECK(verify_shlie(t, 3, 2, 5).ok());
    }
    SUBCASE("derivative bracket is never liftable") {
        PoissonCheck pc = check_poisson_conditions(right_derivative_bracket(), -1);
        CHECK_FALSE(pc.liftable);
        CHECK(pc.antisymmetric);
        // The obstruction keeps no eta letter, so no window accepts it.
        CHECK(pc.chi_insert[0][0].drop_floor() == -1);
        CHECK_FALSE(check_poisson_conditions(right_derivative_bracket(), 40).liftable);
        CHECK_THROWS_AS(build_tower(right_derivative_bracket(), 3, 3), JetliftError);
    }
}

TEST_CASE("variational witness separates eta operators from zero") {
    Rng rng(13);
    for (int arity = 1; arity <= 2; ++arity) {
        Ldo a(1, arity);
        LdoKey key;
        key.slots.resize(static_cast<size_t>(arity));
        for (int j = 0; j < arity; ++j)
            key.slots[static_cast<size_t>(j)].eta[MultiIndex{{(j + 1) % 3}}] = 1;
        a.add_term(key, LocalFunction::constant(1, Rat(2)));
        bool found = false;
        for (int attempt = 0; attempt < 30 && !found; ++attempt) {
            std::vector<LocalFunction> fs;
            for (int j = 0; j < arity; ++j) fs.push_back(random_lf(rng, 1));
            found = !euler(wrap_top(1, a.apply(fs))).is_zero();
        }
        CHECK(found);
    }
}

TEST_CASE("characteristic-free operators land in exact forms pointwise") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        OperatorForm a = random_opform(rng, 1, 2, 1, tiny_params());
        TopReduction tr = reduce_top(a);
        OperatorForm exact_part = a - tr.chi;
        CHECK(reduce_top(exact_part).chi.is_zero());
        for (int k = 0; k < 3; ++k) {
            std::vector<LocalFunction> fs = {random_lf(rng, 1), random_lf(rng, 1)};
            CHECK(euler(opform_apply(exact_part, fs)).is_zero());
        }
        if (!tr.chi.is_zero()) {
            bool found = false;
            for (int attempt = 0; attempt < 30 && !found; ++attempt) {
                std::vector<LocalFunction> fs = {random_lf(rng, 1), random_lf(rng, 1)};
                found = !euler(opform_apply(a, fs)).is_zero();
            }
            CHECK(found);
        }
    }
}

TEST_CASE("tower bookkeeping errors") {
    ShLieTower t = build_tower(kdv_bracket(2), 2, 0);
    CHECK_THROWS_WITH_AS(t.bracket(7), doctest::Contains("no bracket"), JetliftError);
    CHECK_THROWS_WITH_AS(verify_shlie(t, 3, 1, 1), doctest::Contains("kmax"),
                         JetliftError);
    Rng rng(3);
    CHECK_THROWS_AS(bound_cycle(random_dend(rng, 1, 2, 1), -1), JetliftError);
    DEndElement notcycle(1, 2, 0);
    OperatorForm bottom(1, 2, 1);
    bottom.add_component(1u, unit_coefficient(1, 2, Rat(1)));
    notcycle.add_family({1u, 1u}, bottom);
    CHECK_THROWS_WITH_AS(bound_cycle(notcycle), doctest::Contains("not a cycle"),
                         JetliftError);
    // Degree bookkeeping: three degree-0 arguments overshoot the line.
    std::vector<HorizontalForm> low(3, HorizontalForm(1, 0));
    CHECK_THROWS_AS(shlie_relation(t, 3, low), JetliftError);
}
