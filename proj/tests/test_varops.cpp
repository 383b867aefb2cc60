#include <doctest.h>

#include "mpva/families.hpp"
#include "mpva/lenard.hpp"
#include "mpva/varops.hpp"
#include "test_util.hpp"

using namespace mpva;
using test::TestAlgebra;

TEST_CASE("to_functional picks the min-site-0 orbit representative") {
    TestAlgebra A;
    CHECK(to_functional(A.ux(1) * A.ux(2)).repr == A.ux(0) * A.ux(1));
    CHECK(to_functional(A.ux(1) - A.ux(0)).is_zero());
    CHECK(to_functional(A.ux(1) * A.ux(2) + A.ux(0, 2) - A.ux(-1) * A.ux(0)).repr ==
          A.ux(0, 2));
    // pure constants are kept
    DiffExpr c = DiffExpr::constant(Coefficient::param("c"), A.tab);
    CHECK(to_functional(c + A.ux(3)).repr == c + A.ux(0));
}

TEST_CASE("to_functional is idempotent and kills the (S-1) span") {
    TestAlgebra A;
    test::Rng rng(31);
    for (int i = 0; i < 150; ++i) {
        DiffExpr e = A.random_expr(rng);
        Functional f = to_functional(e);
        CHECK(to_functional(f.repr) == f);
        CHECK(to_functional(shift(e, rng.range(-3, 3))) == f);
        CHECK(to_functional(shift(e, 1) - e).is_zero());
    }
}

TEST_CASE("variational derivative basics") {
    TestAlgebra A;
    CHECK(variational_derivative(A.ux(0) * A.ux(1)) == A.ux(1) + A.ux(-1));
    // the log-type rule: d(L)/du = u^-1
    auto tab = SymbolTable::create();
    int u = tab->add_identity("u");
    int L = tab->declare_defined("L");
    tab->set_defined_template(L, DiffExpr::symbol(tab, u, 0, -1));
    CHECK(variational_derivative(DiffExpr::symbol(tab, L, 0)) ==
          DiffExpr::symbol(tab, u, 0, -1));
}

TEST_CASE("variational derivative kills (S-1)V and shifts") {
    TestAlgebra A;
    test::Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        DiffExpr e = A.random_expr(rng);
        CHECK(variational_derivative(shift(e, 1) - e).is_zero());
        CHECK(variational_derivative(shift(e, rng.range(-3, 3))) ==
              variational_derivative(e));
    }
    CHECK(variational_derivative(DiffExpr::constant(Coefficient::param("c"), A.tab))
              .is_zero());
}

TEST_CASE("frechet derivative and closedness") {
    TestAlgebra A;
    DiffOperator d = frechet(A.ux(0) * A.ux(1));
    CHECK(d.coeff(0) == A.ux(1));
    CHECK(d.coeff(1) == A.ux(0));
    CHECK(frechet(DiffExpr::integer(3)).is_zero());

    // xi_2 with the g F' = F rule is self-adjoint
    DiffExpr xi2 = partial(A.Fx(0), 0) * (A.Fx(-1) + A.Fx(0) + A.Fx(1));
    CHECK(is_closed(xi2));

    DiffOperator res;
    CHECK(!is_closed(A.ux(1), &res));
    CHECK(res.coeff(1) == DiffExpr::integer(1));
    CHECK(res.coeff(-1) == DiffExpr::integer(-1));
    CHECK(is_closed(DiffExpr::integer(7)));
}

TEST_CASE("images of the variational derivative are closed") {
    TestAlgebra A;
    test::Rng rng(33);
    for (int i = 0; i < 80; ++i) {
        TestAlgebra::ExprOpts o;
        o.neg_exp = false;  // keep derivative towers in range
        DiffExpr h = A.random_expr(rng, o);
        CHECK(is_closed(variational_derivative(h)));
    }
}

TEST_CASE("check_exact on the printed low densities") {
    TestAlgebra A;
    DiffExpr F0 = A.Fx(0), F1 = A.Fx(1);
    DiffExpr Fp = partial(F0, 0);  // F' = F/g
    CHECK(check_exact(F0, Fp));
    DiffExpr h2 = F0 * F0 * DiffExpr::constant(Coefficient::rational(Rational(1, 2))) +
                  F0 * F1;
    DiffExpr xi2 = Fp * (A.Fx(-1) + F0 + F1);
    CHECK(check_exact(h2, xi2));
    CHECK(!check_exact(A.ux(0) * A.ux(0), A.ux(0)));
}

TEST_CASE("evolutionary fields") {
    TestAlgebra A;
    CHECK(apply_evolutionary(A.ux(0), A.ux(1) * A.ux(1)) ==
          (A.ux(1) * A.ux(1)).scaled(Coefficient::integer(2)));
    CHECK(apply_evolutionary(A.ux(0) * A.ux(1), DiffExpr::integer(5)).is_zero());
    test::Rng rng(34);
    for (int i = 0; i < 100; ++i) {
        DiffExpr p = A.random_expr(rng), f = A.random_expr(rng);
        CHECK(apply_evolutionary(p, shift(f, 1)) == shift(apply_evolutionary(p, f), 1));
    }
}

TEST_CASE("evolutionary bracket antisymmetry and Jacobi") {
    TestAlgebra A;
    test::Rng rng(35);
    for (int i = 0; i < 40; ++i) {
        TestAlgebra::ExprOpts o;
        o.max_terms = 2;
        o.max_factors = 2;
        DiffExpr p = A.random_expr(rng, o), q = A.random_expr(rng, o),
                 r = A.random_expr(rng, o);
        CHECK(evolutionary_bracket(p, p).is_zero());
        CHECK(evolutionary_bracket(p, q) == -evolutionary_bracket(q, p));
        DiffExpr jac = evolutionary_bracket(p, evolutionary_bracket(q, r)) +
                       evolutionary_bracket(q, evolutionary_bracket(r, p)) +
                       evolutionary_bracket(r, evolutionary_bracket(p, q));
        CHECK(jac.is_zero());
    }
    CHECK(evolutionary_bracket(A.ux(0), A.ux(0) * A.ux(0)) == A.ux(0) * A.ux(0));
}

TEST_CASE("frechet directional identity") {
    TestAlgebra A;
    test::Rng rng(36);
    for (int i = 0; i < 100; ++i) {
        DiffExpr f = A.random_expr(rng), p = A.random_expr(rng);
        CHECK(apply_op(frechet(f), p) == apply_evolutionary(p, f));
    }
}

TEST_CASE("integrals of motion of the Volterra flow") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    DiffExpr u0 = st.pair.F;
    DiffExpr flow = st.flows[0];  // u(u_1 - u_-1)
    CHECK(is_integral_of_motion(u0, flow));
    CHECK(is_integral_of_motion(st.densities[0], flow));  // (1/2) log u
    CHECK(!is_integral_of_motion(u0 * u0, flow));
}

TEST_CASE("second flow commutes with the Volterra flow") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    CHECK(evolutionary_bracket(st.flows[0], st.flows[1]).is_zero());
}

TEST_CASE("functional bracket") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    const DiffOperator& k = st.pair.K;
    DiffExpr u0 = st.pair.F;
    test::Rng rng(37);
    // skewsymmetry: {int f, int f} = 0
    TestAlgebra A;
    for (int i = 0; i < 40; ++i) {
        DiffExpr f = A.random_expr(rng);
        DiffOperator kk = structure_to_operator(build_family({FamilyTag::Volterra}, A.tab));
        CHECK(functional_bracket(kk, f, f).is_zero());
    }
    // Lenard integrals are in involution
    CHECK(functional_bracket(k, u0, st.densities[0]).is_zero());
    // positive control
    CHECK(!functional_bracket(k, u0, u0 * u0).is_zero());
}
