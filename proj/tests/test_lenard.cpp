#include <doctest.h>

#include "mpva/lenard.hpp"
#include "mpva/parse.hpp"
#include "test_util.hpp"

using namespace mpva;

TEST_CASE("pair construction matches the displayed operators") {
    LenardPair p = make_pair(PairRealization::VolterraU);
    CHECK(format_operator(p.K) == "u[0]*u[1]*S^1 - u[0]*u[-1]*S^-1");
    CHECK(adjoint(p.H2) == -p.H2);
    CHECK(adjoint(p.K) == -p.K);

    LenardPair a = make_pair(PairRealization::Abstract);
    CHECK(a.K.coeff(1) == a.g * shift(a.g, 1));
    CHECK(a.K.coeff(-1) == -(a.g * shift(a.g, -1)));
}

TEST_CASE("seeds and the first two flows match the printed hierarchy") {
    for (PairRealization r : {PairRealization::Abstract, PairRealization::VolterraU}) {
        HierarchyState st = run_hierarchy(r, 2);
        const LenardPair& p = st.pair;
        DiffExpr F0 = p.F, F1 = shift(p.F, 1), Fm1 = shift(p.F, -1);
        // P_0 = g (F_1 - F_-1)
        CHECK(st.flows[0] == p.g * (F1 - Fm1));
        // P_1 = g (F F_1 + F_1^2 + F_1 F_2 - F F_-1 - F_-1^2 - F_-1 F_-2)
        DiffExpr F2 = shift(p.F, 2), Fm2 = shift(p.F, -2);
        CHECK(st.flows[1] ==
              p.g * (F0 * F1 + F1 * F1 + F1 * F2 - F0 * Fm1 - Fm1 * Fm1 - Fm1 * Fm2));
    }
}

TEST_CASE("xi_2 and xi_3 equal the printed expressions") {
    HierarchyState st = run_hierarchy(PairRealization::Abstract, 3);
    const LenardPair& p = st.pair;
    DiffExpr Fp = partial(p.F, 0);
    DiffExpr F0 = p.F, F1 = shift(p.F, 1), F2 = shift(p.F, 2);
    DiffExpr Fm1 = shift(p.F, -1), Fm2 = shift(p.F, -2);
    CHECK(st.xi[1] == Fp);
    CHECK(st.xi[2] == Fp * (Fm1 + F0 + F1));
    DiffExpr xi3 = Fp * (Fm1 * (Fm2 + Fm1 + F0) + (Fm1 + F0) * (F0 + F1) +
                         F1 * (F0 + F1 + F2));
    CHECK(st.xi[3] == xi3);
}

TEST_CASE("deep abstract run: relations, closedness, exactness, independence") {
    HierarchyState st = run_hierarchy(PairRealization::Abstract, 6);
    const LenardPair& p = st.pair;
    CHECK(st.all_ok());
    CHECK(apply_op(p.K, st.xi[0]).is_zero());
    for (size_t j = 0; j + 1 < st.xi.size(); ++j)
        CHECK(apply_op(p.K, st.xi[j + 1]) == apply_op(p.H2, st.xi[j]));
    // strictly increasing max site => linear independence
    for (size_t j = 2; j < st.xi.size(); ++j) {
        int lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
        REQUIRE(site_range(st.xi[j - 1], lo1, hi1));
        REQUIRE(site_range(st.xi[j], lo2, hi2));
        CHECK(hi2 == hi1 + 1);
    }
    // provenance labels: printed densities first, then residue candidates
    CHECK(st.steps[3].density_provenance == "explicit");
    CHECK(st.steps[4].density_provenance == "lax");
}

TEST_CASE("involution matrices vanish and detect tampering") {
    HierarchyState st = run_hierarchy(PairRealization::Abstract, 4);
    for (bool use_k : {true, false})
        for (const auto& row : involution_matrix(st, use_k))
            for (const Functional& f : row) CHECK(f.is_zero());

    // replacing xi_2 by u breaks row 2
    HierarchyState broken = st;
    broken.xi[2] = DiffExpr::symbol(st.pair.tab, st.pair.tab->find("u"), 0);
    auto m = involution_matrix(broken, true);
    bool row2_nonzero = false;
    for (const Functional& f : m[2])
        if (!f.is_zero()) row2_nonzero = true;
    CHECK(row2_nonzero);
}

TEST_CASE("flows commute pairwise") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 4);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j <= 3; ++j)
            CHECK(evolutionary_bracket(st.flows[i], st.flows[j]).is_zero());
}

TEST_CASE("lax residues reproduce the printed densities") {
    LenardPair p = make_pair(PairRealization::VolterraU);
    DiffExpr u0 = p.F;
    // Res L^2 = u + u_1: density (1/2)(u + u_1), functional int u
    DiffExpr d1 = lax_residue_density(p, 1);
    CHECK(d1 == (u0 + shift(u0, 1)).scaled(Coefficient::rational(Rational(1, 2))));
    CHECK(to_functional(d1).repr == u0);
    // (1/4) Res L^4 reduces to int((1/2)u^2 + u u_1)
    DiffExpr d2 = lax_residue_density(p, 2);
    CHECK(to_functional(d2).repr ==
          to_functional(u0 * u0 * DiffExpr::constant(Coefficient::rational(
                                      Rational(1, 2))) +
                        u0 * shift(u0, 1))
              .repr);
    // abstract F: density (1/2)(F + F_1), functional int F
    LenardPair a = make_pair(PairRealization::Abstract);
    CHECK(to_functional(lax_residue_density(a, 1)).repr == a.F);
}

TEST_CASE("lax flows align with the hierarchy") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 3);
    const LenardPair& p = st.pair;
    DiffExpr u0 = p.F;
    LaxFlowResult f0 = lax_flow(p, 0);
    CHECK(f0.support_ok);
    CHECK(f0.dF == u0 * (shift(u0, 1) - shift(u0, -1)));
    // S^{+1} coefficient of [(L^2)_+, L] cancels
    CHECK(f0.commutator.coeff(1).is_zero());
    for (int n = 0; n <= 2; ++n) {
        LaxFlowResult fn = lax_flow(p, n);
        CHECK(fn.support_ok);
        CHECK(fn.dF == apply_evolutionary(st.flows[static_cast<size_t>(n)], p.F));
    }
}

TEST_CASE("lax densities are exact for the hierarchy gradients") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 4);
    for (int n = 1; n <= 4; ++n)
        CHECK(check_exact(lax_residue_density(st.pair, n),
                          st.xi[static_cast<size_t>(n)]));
}

TEST_CASE("hierarchy report is deterministic JSON") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    std::string a = hierarchy_report_json(st);
    std::string b = hierarchy_report_json(run_hierarchy(PairRealization::VolterraU, 2));
    CHECK(a == b);
    CHECK(a.find("\"lenard\": true") != std::string::npos);
}

TEST_CASE("recursion errors carry the failing step") {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 2);
    // tamper with the last xi so the next step's division check fails
    st.xi.back() = st.xi.back() + DiffExpr::symbol(st.pair.tab, st.pair.tab->find("u"), 0);
    CHECK_THROWS_AS(lenard_step(st), RecursionError);
}
