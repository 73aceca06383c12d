#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jetlift/errors.hpp"
#include "jetlift/horiforms.hpp"
#include "jetlift/opcomplex.hpp"

using namespace jetlift;

namespace {
MultiIndex mi(std::initializer_list<int> l) { return MultiIndex(l); }

LdoGenParams tiny_params() {
    LdoGenParams p;
    p.max_terms = 2;
    p.max_xi_order = 1;
    p.max_eta_letters = 1;
    p.max_eta_order = 2;
    p.coeff.max_terms = 2;
    p.coeff.max_x_degree = 1;
    p.coeff.max_u_factors = 1;
    return p;
}

OperatorForm single(int dim, int arity, int degree, uint32_t mask, const Ldo& a) {
    OperatorForm f(dim, arity, degree);
    f.add_component(mask, a);
    return f;
}
} // namespace

TEST_CASE("d_op: frozen examples") {
    int N = 1;
    LocalFunction u = LocalFunction::u(N, mi({0}));
    Ldo uid = Ldo::coefficient(N, 1, u);
    Ldo D = Ldo::xi(N, 1, 1, 1);

    // d(u id) = (u_1 id + u zeta) dx, matching the normal-ordered compose
    OperatorForm F = single(N, 1, 0, 0, uid);
    OperatorForm dF = d_op(F);
    CHECK(dF.degree() == 1);
    CHECK(dF.component(1) == Ldo::compose(D, {uid}).polarized_form());

    // d(1 id) = zeta dx
    OperatorForm G = single(N, 1, 0, 0, Ldo::identity(N));
    CHECK(d_op(G).component(1) == D.polarized_form());

    // top degree maps to zero
    CHECK(d_op(dF).is_zero());
}

TEST_CASE("d_op is a differential and splits by diagonal degree") {
    Rng rng(601);
    LdoGenParams tp = tiny_params();
    for (int t = 0; t < 12; ++t) {
        int N = rng.uniform(1, 3);
        int n = rng.uniform(1, 2);
        int k = rng.uniform(0, N - 1);
        OperatorForm F = random_opform(rng, N, n, k, tp);
        CHECK(d_op(d_op(F)).is_zero());
        CHECK(d1(d1(F)).is_zero());
        CHECK(d2(d2(F)).is_zero());
        CHECK((d1(d2(F)) + d2(d1(F))).is_zero());
        CHECK(d_op(F) == d1(F) + d2(F));

        // block decomposition: d1 preserves q, d2 raises it by one
        OperatorForm sum(N, n, k);
        for (int q = 0; q <= F.max_zeta_degree(); ++q) {
            OperatorForm B = F.zeta_block(q);
            sum = sum + B;
            OperatorForm b1 = d1(B);
            OperatorForm b2 = d2(B);
            CHECK(b1 == (b1.max_zeta_degree() < 0 ? b1 : b1.zeta_block(q)));
            CHECK(b2 == (b2.max_zeta_degree() < 0 ? b2 : b2.zeta_block(q + 1)));
        }
        CHECK(sum == F);
    }
}

TEST_CASE("koszul_solve: frozen examples") {
    // N=1: zeta dx has preimage id
    Ldo zeta = Ldo::xi(1, 1, 1, 1).polarized_form();
    OperatorForm z1 = single(1, 1, 1, 1, zeta);
    OperatorForm a1 = koszul_solve(z1);
    CHECK(a1.component(0) == Ldo::identity(1).polarized_form());
    CHECK(d2(a1) == z1);

    // N=2: zeta^1 zeta^2 dx1^dx2 -> (zeta^2 dx2 - zeta^1 dx1)/2
    Ldo z12 = Ldo::xi(2, 1, 1, 1).polarized_form().letter_bump(1, 2);
    OperatorForm z2 = single(2, 1, 2, 3, z12);
    OperatorForm a2 = koszul_solve(z2);
    OperatorForm expect(2, 1, 1);
    expect.add_component(1, -Ldo::xi(2, 1, 1, 1).polarized_form().scaled(Rat(1, 2)));
    expect.add_component(2, Ldo::xi(2, 1, 1, 2).polarized_form().scaled(Rat(1, 2)));
    CHECK(a2 == expect);
    CHECK(d2(a2) == z2);

    // zero in, zero out
    CHECK(koszul_solve(OperatorForm(2, 1, 1)).is_zero());

    // no diagonal letters: no preimage
    OperatorForm q0 = single(1, 1, 1, 1, Ldo::identity(1));
    CHECK_THROWS_AS(koszul_solve(q0), JetliftError);

    // not closed
    OperatorForm nc = single(2, 1, 1, 2, Ldo::xi(2, 1, 1, 1).polarized_form());
    CHECK_THROWS_AS(koszul_solve(nc), JetliftError);
}

TEST_CASE("koszul_solve: round trips on closed blocks") {
    Rng rng(602);
    LdoGenParams tp = tiny_params();
    for (int t = 0; t < 12; ++t) {
        int N = rng.uniform(1, 3);
        int n = rng.uniform(1, 2);
        int k = rng.uniform(0, N - 1);
        OperatorForm F = random_opform(rng, N, n, k, tp);
        for (int q = 0; q <= F.max_zeta_degree(); ++q) {
            OperatorForm z = d2(F.zeta_block(q));
            OperatorForm alpha = koszul_solve(z);
            CHECK(d2(alpha) == z);
        }
    }
}

TEST_CASE("reduce_top: frozen examples") {
    int N = 1;
    LocalFunction u = LocalFunction::u(N, mi({0}));
    LocalFunction x = LocalFunction::x(N, 1);
    Ldo D = Ldo::xi(N, 1, 1, 1);

    // A = xi: tilde = id, chi = 0
    TopReduction r1 = reduce_top(single(N, 1, 1, 1, D));
    CHECK(r1.tilde.component(0) == Ldo::identity(N).polarized_form());
    CHECK(r1.chi.is_zero());

    // A = x xi: tilde = x id, chi = -id; i.e. x f' = (x f)' - f
    TopReduction r2 = reduce_top(single(N, 1, 1, 1, D.premultiply(x)));
    CHECK(r2.tilde.component(0) ==
          Ldo::coefficient(N, 1, x).polarized_form());
    CHECK(r2.chi.component(1) == Ldo::identity(N).polarized_form().scaled(Rat(-1)));
    Rng rng(603);
    for (int t = 0; t < 5; ++t) {
        LocalFunction f = random_lf(rng, N);
        LocalFunction lhs = x * f.total_derivative(1);
        LocalFunction rhs = (x * f).total_derivative(1) - f;
        CHECK(lhs == rhs);
    }

    // no diagonal letters at all: tilde = 0, chi = A
    Ldo ue = Ldo::eta(N, 1, 1, mi({0})).premultiply(u);
    TopReduction r3 = reduce_top(single(N, 1, 1, 1, ue));
    CHECK(r3.tilde.is_zero());
    CHECK(r3.chi.component(1) == ue.polarized_form());
}

TEST_CASE("reduce_top: random split property") {
    Rng rng(604);
    LdoGenParams tp = tiny_params();
    for (int t = 0; t < 10; ++t) {
        int N = rng.uniform(1, 2);
        int n = rng.uniform(1, 2);
        OperatorForm A = random_opform(rng, N, n, N, tp);
        TopReduction r = reduce_top(A);
        CHECK(d_op(r.tilde) + r.chi == A);
        CHECK(r.chi.max_zeta_degree() <= 0);
        CHECK(r.chi.component(full_mask(N)) ==
              A.component(full_mask(N)).characteristic());
    }
}

TEST_CASE("solve_d: round trips and degree-0 acyclicity") {
    Rng rng(605);
    LdoGenParams tp = tiny_params();
    for (int t = 0; t < 10; ++t) {
        int N = rng.uniform(2, 3);
        int n = rng.uniform(1, 2);
        int k0 = rng.uniform(0, N - 2);
        OperatorForm X0 = random_opform(rng, N, n, k0, tp);
        OperatorForm Y = d_op(X0);
        OperatorForm X = solve_d(Y);
        CHECK(d_op(X) == Y);
    }

    CHECK(solve_d(OperatorForm(2, 1, 1)).is_zero());

    // a nonzero degree-0 form is never closed (H^0 = 0)
    OperatorForm bad = single(2, 1, 0, 0, Ldo::identity(2));
    CHECK_THROWS_AS(solve_d(bad), JetliftError);
    CHECK_THROWS_AS(solve_d(random_opform(rng, 2, 1, 2, tiny_params())),
                    JetliftError);
}
