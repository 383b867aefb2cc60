#include <doctest.h>

#include "mpva/families.hpp"
#include "mpva/lenard.hpp"
#include "mpva/varops.hpp"
#include "test_util.hpp"

using namespace mpva;
using test::TestAlgebra;

namespace {

DiffOperator random_operator(const TestAlgebra& A, test::Rng& rng, int span = 2) {
    DiffOperator op;
    int terms = rng.range(1, 3);
    for (int t = 0; t < terms; ++t) {
        TestAlgebra::ExprOpts o;
        o.max_terms = 2;
        o.max_factors = 2;
        op.add(rng.range(-span, span), A.random_expr(rng, o));
    }
    return op;
}

DiffOperator random_skewadjoint(const TestAlgebra& A, test::Rng& rng) {
    DiffOperator op;
    int terms = rng.range(1, 2);
    for (int t = 0; t < terms; ++t) {
        TestAlgebra::ExprOpts o;
        o.max_terms = 2;
        o.max_factors = 2;
        DiffOperator half = DiffOperator::monomial(A.random_expr(rng, o),
                                                   rng.range(1, 3));
        op = op + half - adjoint(half);
    }
    return op;
}

}  // namespace

TEST_CASE("noncommutative product") {
    TestAlgebra A;
    DiffOperator S = DiffOperator::monomial(DiffExpr::integer(1), 1);
    DiffOperator u0 = DiffOperator::monomial(A.ux(0), 0);
    CHECK((S * u0).coeff(1) == A.ux(1));

    // (S + u S^-1)^2 = S^2 + (u + u_1) + u u_-1 S^-2
    DiffOperator L = S + DiffOperator::monomial(A.ux(0), -1);
    DiffOperator L2 = L * L;
    CHECK(L2.coeff(2) == DiffExpr::integer(1));
    CHECK(L2.coeff(0) == A.ux(0) + A.ux(1));
    CHECK(L2.coeff(-2) == A.ux(0) * A.ux(-1));
    CHECK(L2.coeff(1).is_zero());

    test::Rng rng(41);
    for (int i = 0; i < 60; ++i) {
        DiffOperator a = random_operator(A, rng);
        CHECK(a * DiffOperator::identity() == a);
        DiffOperator b = random_operator(A, rng), c = random_operator(A, rng);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
    TestAlgebra A;
    CHECK(adjoint(DiffOperator::monomial(A.ux(0) * A.ux(1), 1)) ==
          DiffOperator::monomial(A.ux(-1) * A.ux(0), -1));
    test::Rng rng(42);
    for (int i = 0; i < 80; ++i) {
        DiffOperator a = random_operator(A, rng), b = random_operator(A, rng);
        CHECK(adjoint(adjoint(a)) == a);
        CHECK(adjoint(a * b) == adjoint(b) * adjoint(a));
    }
}

TEST_CASE("apply_op is a module action") {
    TestAlgebra A;
    test::Rng rng(43);
    for (int i = 0; i < 60; ++i) {
        DiffOperator a = random_operator(A, rng), b = random_operator(A, rng);
        DiffExpr e = A.random_expr(rng);
        CHECK(apply_op(a * b, e) == apply_op(a, apply_op(b, e)));
    }
    CHECK(apply_op(DiffOperator::zero(), A.ux(0)).is_zero());
}

TEST_CASE("K applied to 1 gives the Volterra flow") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 1);
    DiffExpr u0 = st.pair.F;
    CHECK(apply_op(st.pair.K, DiffExpr::integer(1)) ==
          u0 * (shift(u0, 1) - shift(u0, -1)));
    CHECK(adjoint(st.pair.K) == -st.pair.K);
}

TEST_CASE("structure/operator conversion") {
    BracketStructure vol = build_family({FamilyTag::Volterra});
    SymbolTablePtr tab = vol.table();
    DiffExpr u0 = DiffExpr::symbol(tab, tab->find("u"), 0);
    DiffOperator k = structure_to_operator(vol);
    CHECK(k.coeff(1) == u0 * shift(u0, 1));
    CHECK(k.coeff(-1) == -(u0 * shift(u0, -1)));

    BracketStructure back = operator_to_structure(k, tab, "roundtrip");
    CHECK(back.order() == 1);
    CHECK(back.mode(1) == vol.mode(1));

    // complementary order 2 gives the explicit 4-band operator
    LenardPair p = make_pair(PairRealization::Abstract);
    DiffExpr g0 = p.g, F0 = p.F;
    CHECK(p.H2.coeff(2) == g0 * shift(g0, 2) * shift(F0, 1));
    CHECK(p.H2.coeff(1) == g0 * shift(g0, 1) * (F0 + shift(F0, 1)));
    CHECK(p.H2.coeff(0).is_zero());
    CHECK(p.H2.coeff(-1) == -(g0 * shift(g0, -1) * (F0 + shift(F0, -1))));
    CHECK(p.H2.coeff(-2) == -(g0 * shift(g0, -2) * shift(F0, -1)));

    test::Rng rng(44);
    TestAlgebra A;
    for (int i = 0; i < 40; ++i) {
        DiffOperator h = random_skewadjoint(A, rng);
        if (h.is_zero() || h.support().back() <= 0) continue;
        BracketStructure stq = operator_to_structure(h, A.tab, "rt");
        CHECK(structure_to_operator(stq) == h);
    }
    DiffOperator bad = DiffOperator::monomial(A.ux(0), 1);
    CHECK_THROWS_AS(operator_to_structure(bad, A.tab, "bad"), StructureError);
}

TEST_CASE("skewsymmetry of the bracket matches skewadjointness") {
    TestAlgebra A;
    test::Rng rng(45);
    DiffExpr u0 = A.ux(0);
    for (int i = 0; i < 40; ++i) {
        DiffOperator h = random_skewadjoint(A, rng);
        BracketStructure st = BracketStructure::raw(A.tab, "sk", [&] {
            std::map<int, DiffExpr> m;
            for (const auto& [k, e] : h.coeffs()) m[k] = e;
            return m;
        }());
        CHECK(skew_residual(st, u0, u0).is_zero());
    }
    // non-skewadjoint direction
    DiffExpr f1 = A.ux(0) * A.ux(1);
    BracketStructure raw = BracketStructure::raw(
        A.tab, "sym", {{1, f1}, {-1, shift(f1, -1)}});
    CHECK(!is_skewadjoint(structure_to_operator(raw)));
    CHECK(!skew_residual(raw, u0, u0).is_zero());
}

TEST_CASE("hamiltonian flows") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    DiffExpr u0 = st.pair.F;
    DiffExpr volterra_flow = u0 * (shift(u0, 1) - shift(u0, -1));
    CHECK(hamiltonian_flow(st.pair.K, u0) == volterra_flow);
    // H2 with h = (1/2) log u gives the same equation
    CHECK(hamiltonian_flow(st.pair.H2, st.densities[0]) == volterra_flow);
    CHECK(hamiltonian_flow(st.pair.K, DiffExpr::integer(9)).is_zero());
}

TEST_CASE("H2 factors as g (1 + S^-1) D") {
    for (PairRealization r : {PairRealization::Abstract, PairRealization::VolterraU}) {
        LenardPair p = make_pair(r);
        auto S = [](int k) { return DiffOperator::monomial(DiffExpr::integer(1), k); };
        CHECK(p.H2 == DiffOperator::monomial(p.g, 0) * (S(0) + S(-1)) * p.D);
    }
}

TEST_CASE("kernel probe") {
    TestAlgebra A;
    std::vector<Monomial> basis;
    for (int s = 0; s <= 3; ++s)
        basis.push_back(Monomial{{Factor{A.u, s, 1}}});
    // P(S) = S - 2 has P(-1) != 0: trivial kernel on sited monomials
    CHECK(kernel_probe({{1, Rational(1)}, {0, Rational(-2)}}, basis, A.tab).empty());
    // P(S) = S + 3 likewise
    CHECK(kernel_probe({{1, Rational(1)}, {0, Rational(3)}}, basis, A.tab).empty());
    // P(S) = S - 1 fixes the constants
    std::vector<Monomial> with_const = basis;
    with_const.push_back(Monomial{});
    auto ker = kernel_probe({{1, Rational(1)}, {0, Rational(-1)}}, with_const, A.tab);
    REQUIRE(ker.size() == 1);
    CHECK(ker[0] == DiffExpr::constant(Coefficient::one(), A.tab));
    // P(S) = S - S^-1 kills constants too (P(1) = 0)
    auto ker2 = kernel_probe({{1, Rational(1)}, {-1, Rational(-1)}}, with_const, A.tab);
    CHECK(ker2.size() == 1);
}

TEST_CASE("operator-form Jacobi identity") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 1);
    SymbolTablePtr tab = st.pair.tab;
    int u = tab->find("u");
    test::Rng rng(46);
    auto rand_u = [&]() {
        DiffExpr e = DiffExpr::term(tab, Monomial{}, Coefficient());
        int terms = rng.range(1, 2);
        for (int t = 0; t < terms; ++t) {
            DiffExpr m =
                DiffExpr::constant(Coefficient::rational(rng.small_rational()), tab);
            int nf = rng.range(1, 2);
            for (int k = 0; k < nf; ++k)
                m = m * DiffExpr::symbol(tab, u, rng.range(-1, 1), rng.range(1, 2));
            e = e + m;
        }
        return e;
    };
    for (int i = 0; i < 20; ++i) {
        DiffExpr f = rand_u(), g = rand_u();
        CHECK(jacobi_operator_form(st.pair.K, f, g).is_zero());
        CHECK(jacobi_operator_form(st.pair.H2, f, g).is_zero());
    }
    // broken structure: f_1 = u^2 u_1 fails for some panel member
    DiffExpr u0 = DiffExpr::symbol(tab, u, 0);
    BracketStructure bad = BracketStructure::normal_form(
        tab, "order1-control", {u0 * u0 * shift(u0, 1)});
    DiffOperator hbad = structure_to_operator(bad);
    bool some_nonzero = false;
    for (int i = 0; i < 20 && !some_nonzero; ++i)
        some_nonzero = !jacobi_operator_form(hbad, rand_u(), rand_u()).is_zero();
    CHECK(some_nonzero);
    // the F = G substitution stays consistent
    DiffExpr f = rand_u();
    CHECK(jacobi_operator_form(st.pair.K, f, f).is_zero());
    CHECK(!jacobi_operator_form(hbad, u0, u0 * u0).is_zero());
}

TEST_CASE("operator text form") {
    TestAlgebra A;
    DiffOperator k;
    k.add(1, A.ux(0) * A.ux(1));
    k.add(-1, -(A.ux(0) * A.ux(-1)));
    CHECK(format_operator(k) == "u[0]*u[1]*S^1 - u[0]*u[-1]*S^-1");
    CHECK(format_operator(DiffOperator::zero()) == "0");
}
