#include "mpva/lenard.hpp"

#include <json.hpp>

#include "mpva/parse.hpp"

namespace mpva {

namespace {

DiffExpr half() { return DiffExpr::constant(Coefficient::rational(Rational(1, 2))); }

DiffExpr third() { return DiffExpr::constant(Coefficient::rational(Rational(1, 3))); }

}  // namespace

LenardPair make_pair(PairRealization real) {
    LenardPair p;
    p.real = real;
    p.tab = SymbolTable::create(EpsSpec::None);
    int u = p.tab->add_identity("u");
    if (real == PairRealization::Abstract) {
        int g = p.tab->add_free("g");
        int F = p.tab->declare_defined("F");
        p.g = DiffExpr::symbol(p.tab, g, 0);
        p.F = DiffExpr::symbol(p.tab, F, 0);
        // g F' = F
        p.tab->set_defined_template(F, p.F * pow(p.g, -1));
        // Phi' = 1/(2g), so that delta Phi/delta u = xi_0
        int Phi = p.tab->declare_defined("Phi");
        p.tab->set_defined_template(Phi, half() * pow(p.g, -1));
        p.h0 = DiffExpr::symbol(p.tab, Phi, 0);
    } else {
        p.g = DiffExpr::symbol(p.tab, u, 0);
        p.F = p.g;
        // L' = 1/u (logarithm); h_0 = (1/2) L
        int L = p.tab->declare_defined("L");
        p.tab->set_defined_template(L, pow(p.g, -1));
        p.h0 = half() * DiffExpr::symbol(p.tab, L, 0);
    }

    DiffExpr g1 = shift(p.g, 1), F1 = shift(p.F, 1);
    BracketStructure kst =
        BracketStructure::normal_form(p.tab, "volterra-K", {p.g * g1});
    BracketStructure h2st = BracketStructure::normal_form(
        p.tab, "volterra-H2", {p.g * g1 * (p.F + F1), p.g * shift(p.g, 2) * F1});
    p.K = structure_to_operator(kst);
    p.H2 = structure_to_operator(h2st);

    auto S = [](int k) { return DiffOperator::monomial(DiffExpr::integer(1), k); };
    auto M = [](const DiffExpr& e) { return DiffOperator::monomial(e, 0); };
    p.D = (S(2) * M(shift(p.F, -1)) + (S(1) - S(0)) * M(p.F) - S(-1) * M(F1)) * M(p.g);

    if (p.H2 != M(p.g) * (S(0) + S(-1)) * p.D)
        throw RecursionError("H2 factorization g(1+S^-1)D failed");
    if (!is_skewadjoint(p.K) || !is_skewadjoint(p.H2))
        throw RecursionError("K or H2 is not skewadjoint");
    return p;
}

DiffExpr lenard_step(HierarchyState& state) {
    const LenardPair& p = state.pair;
    int n = static_cast<int>(state.xi.size());
    if (n < 2) throw RecursionError("lenard_step needs xi_0, xi_1 seeded");
    const DiffExpr& prev = state.xi.back();
    DiffExpr two_g = DiffExpr::integer(2) * p.g;

    DiffExpr a_n = DiffExpr::zero();
    for (int i = 1; i <= n - 1; ++i) {
        int j = n - i;
        if (j < 1 || j > n - 1) continue;
        a_n = a_n - p.g * shift(p.g, -1) * state.xi[static_cast<size_t>(i)] *
                        shift(state.xi[static_cast<size_t>(j)], -1);
    }
    for (int i = 0; i <= n - 1; ++i) {
        int j = n - 1 - i;
        if (j < 0 || j > n - 1) continue;
        for (const auto& [deg, fcoef] : p.H2.coeffs()) {
            if (deg >= 0) continue;
            int k = -deg;
            DiffExpr base = fcoef * state.xi[static_cast<size_t>(i)] *
                            shift(state.xi[static_cast<size_t>(j)], -k);
            for (int l = 0; l <= k - 1; ++l) a_n = a_n - shift(base, l);
        }
    }

    StepRecord rec;
    rec.j = n;
    DiffExpr h2prev = apply_op(p.H2, prev);
    rec.lemma71a =
        divide_by_single_term(h2prev, two_g) == (shift(a_n, 1) - a_n);
    if (!rec.lemma71a)
        throw RecursionError("Lenard step " + std::to_string(n) +
                             ": (1/2g) H2 xi = (S-1)A failed");

    DiffExpr eta = DiffExpr::integer(2) * shift(a_n, 1);
    DiffExpr zeta = apply_op(p.D, prev);
    rec.lemma72a = shift(eta - zeta, 1) == (eta + zeta);
    if (!rec.lemma72a)
        throw RecursionError("Lenard step " + std::to_string(n) +
                             ": S(eta - zeta) = eta + zeta failed");

    DiffExpr xi_n = divide_by_single_term(eta - zeta, two_g);
    rec.lenard = apply_op(p.K, xi_n) == h2prev;
    if (!rec.lenard)
        throw RecursionError("Lenard step " + std::to_string(n) +
                             ": K xi_N = H2 xi_{N-1} failed, residual " +
                             format_expr(apply_op(p.K, xi_n) - h2prev));

    int lo = 0, hi = 0;
    site_range(xi_n, lo, hi);
    rec.max_site = hi;
    state.xi.push_back(xi_n);
    state.steps.push_back(rec);
    return xi_n;
}

HierarchyState run_hierarchy(PairRealization real, int depth) {
    if (depth < 1) throw RecursionError("run_hierarchy: depth must be >= 1");
    HierarchyState st;
    st.pair = make_pair(real);
    const LenardPair& p = st.pair;

    DiffExpr xi0 = half() * pow(p.g, -1);
    DiffExpr xi1 = partial(p.F, 0);  // F'(u)
    if (!apply_op(p.K, xi0).is_zero())
        throw RecursionError("seed check K xi_0 = 0 failed");
    st.xi = {xi0, xi1};
    {
        StepRecord r0;
        r0.j = 0;
        r0.lenard = true;  // membership in ker K checked above
        st.steps.push_back(r0);
        StepRecord r1;
        r1.j = 1;
        r1.lenard = apply_op(p.K, xi1) == apply_op(p.H2, xi0);
        if (!r1.lenard) throw RecursionError("seed check K xi_1 = H2 xi_0 failed");
        int lo = 0, hi = 0;
        site_range(xi1, lo, hi);
        r1.max_site = hi;
        st.steps.push_back(r1);
    }
    for (int n = 2; n <= depth; ++n) lenard_step(st);

    for (int j = 0; j < depth; ++j)
        st.flows.push_back(apply_op(p.H2, st.xi[static_cast<size_t>(j)]));

    // densities: the explicit low ones, then the Lax residue candidates
    DiffExpr F1 = shift(p.F, 1), F2 = shift(p.F, 2);
    std::vector<DiffExpr> dens = {
        p.h0,
        p.F,
        half() * p.F * p.F + p.F * F1,
        third() * p.F * p.F * p.F + p.F * p.F * F1 + p.F * F1 * F1 + p.F * F1 * F2,
    };
    for (int j = 4; j <= depth; ++j) dens.push_back(lax_residue_density(p, j));
    dens.resize(static_cast<size_t>(depth) + 1, DiffExpr::zero());
    st.densities = dens;

    for (int j = 0; j <= depth; ++j) {
        StepRecord& rec = st.steps[static_cast<size_t>(j)];
        rec.closed = is_closed(st.xi[static_cast<size_t>(j)]);
        rec.density_provenance = j <= 3 ? "explicit" : "lax";
        rec.exact = check_exact(st.densities[static_cast<size_t>(j)],
                                st.xi[static_cast<size_t>(j)]);
    }
    return st;
}

bool HierarchyState::all_ok() const {
    for (const StepRecord& r : steps) {
        if (r.j >= 1 && !r.lenard) return false;
        if (r.j >= 2 && (!r.lemma71a || !r.lemma72a)) return false;
        if (!r.closed || !r.exact) return false;
    }
    return true;
}

std::vector<std::vector<Functional>> involution_matrix(const HierarchyState& state,
                                                       bool use_k) {
    const DiffOperator& L = use_k ? state.pair.K : state.pair.H2;
    size_t n = state.xi.size();
    std::vector<std::vector<Functional>> m(n);
    for (size_t i = 0; i < n; ++i) {
        DiffExpr lxi = apply_op(L, state.xi[i]);
        for (size_t j = 0; j < n; ++j)
            m[i].push_back(to_functional(lxi * state.xi[j]));
    }
    return m;
}

DiffOperator lax_operator(const LenardPair& pair) {
    DiffOperator l;
    l.add(1, DiffExpr::constant(Coefficient::one(), pair.tab));
    l.add(-1, pair.F);
    return l;
}

DiffExpr lax_residue_density(const LenardPair& pair, int n) {
    if (n < 1) throw RecursionError("lax_residue_density: N >= 1");
    DiffOperator l = lax_operator(pair);
    DiffOperator p = DiffOperator::identity();
    for (int i = 0; i < 2 * n; ++i) p = p * l;
    return p.coeff(0).scaled(Coefficient::rational(Rational(1, 2 * n)));
}

LaxFlowResult lax_flow(const LenardPair& pair, int n) {
    if (n < 0) throw RecursionError("lax_flow: N >= 0");
    DiffOperator l = lax_operator(pair);
    DiffOperator p = DiffOperator::identity();
    for (int i = 0; i < 2 * n + 2; ++i) p = p * l;
    DiffOperator plus;
    for (const auto& [k, e] : p.coeffs())
        if (k >= 0) plus.add(k, e);
    LaxFlowResult res;
    res.commutator = plus * l - l * plus;
    res.support_ok = true;
    for (const auto& [k, e] : res.commutator.coeffs())
        if (k != -1) res.support_ok = false;
    res.dF = res.commutator.coeff(-1);
    return res;
}

std::string hierarchy_report_json(const HierarchyState& state) {
    nlohmann::ordered_json j;
    j["g"] = state.pair.real == PairRealization::Abstract ? "free" : "u";
    j["F"] = state.pair.real == PairRealization::Abstract ? "free" : "u";
    j["depth"] = state.xi.size() - 1;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (size_t i = 0; i < state.xi.size(); ++i) {
        const StepRecord& r = state.steps[i];
        nlohmann::ordered_json s;
        s["j"] = r.j;
        s["xi"] = format_expr(state.xi[i]);
        if (i < state.flows.size()) s["flow"] = format_expr(state.flows[i]);
        nlohmann::ordered_json d;
        d["expr"] = format_expr(state.densities[i]);
        d["provenance"] = r.density_provenance;
        d["exact"] = r.exact;
        s["density"] = d;
        nlohmann::ordered_json checks;
        if (r.j >= 1) checks["lenard"] = r.lenard;
        if (r.j >= 2) {
            checks["lemma71a"] = r.lemma71a;
            checks["lemma72a"] = r.lemma72a;
        }
        checks["closed"] = r.closed;
        checks["exact"] = r.exact;
        s["checks"] = checks;
        s["max_site"] = r.max_site;
        steps.push_back(s);
    }
    j["steps"] = steps;
    return j.dump(2);
}

}  // namespace mpva
