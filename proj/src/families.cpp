#include "mpva/families.hpp"

#include <map>

namespace mpva {

namespace {

struct Ctx {
    SymbolTablePtr tab;
    int u = -1;
    int g = -1;  // equals u for the concrete realization
    std::vector<std::string> params;
    size_t next_param = 0;

    DiffExpr gx(int site) const { return DiffExpr::symbol(tab, g, site); }
    DiffExpr sx(int sym, int site) const { return DiffExpr::symbol(tab, sym, site); }
    DiffExpr num(long long v) const {
        return DiffExpr::constant(Coefficient::integer(v), tab);
    }
    DiffExpr ep(int k) const {
        return DiffExpr::constant(Coefficient::eps_pow(tab->eps(), k), tab);
    }
    Coefficient par(const std::string& fallback) {
        std::string name = next_param < params.size() ? params[next_param] : fallback;
        ++next_param;
        return Coefficient::param(name);
    }
};

Ctx make_ctx(const FamilySpec& spec, EpsSpec eps, const SymbolTablePtr& reuse) {
    Ctx c;
    c.tab = reuse ? reuse : SymbolTable::create(eps);
    if (reuse && eps != EpsSpec::None && reuse->eps() != eps) {
        if (reuse->eps() != EpsSpec::None)
            throw StructureError("shared table carries a different eps extension");
        reuse->set_eps(eps);
    }
    c.params = spec.params;
    int u = c.tab->find("u");
    c.u = u >= 0 ? u : c.tab->add_identity("u");
    if (spec.concrete_u) {
        c.g = c.u;
    } else {
        int g = c.tab->find("g");
        c.g = g >= 0 ? g : c.tab->add_free("g");
    }
    return c;
}

// Defined symbol with derivative template coef * name(u) * g(u)^-1 at site 0.
int add_scaled_symbol(Ctx& c, const std::string& name, const Coefficient& scale) {
    int found = c.tab->find(name);
    if (found >= 0) return found;
    int id = c.tab->declare_defined(name);
    DiffExpr tmpl = DiffExpr::symbol(c.tab, id, 0) * pow(c.gx(0), -1);
    c.tab->set_defined_template(id, tmpl.scaled(scale));
    return id;
}

void require_eps_constraint(EpsSpec spec, int power, const std::string& family) {
    if (Coefficient::eps_pow(spec, power) != Coefficient::integer(-1, spec))
        throw StructureError(family + ": eps^" + std::to_string(power) +
                             " = -1 violated by " + eps_spec_name(spec));
}

std::vector<DiffExpr> complementary_modes(Ctx& c, int order) {
    int n = order;
    if (n < 2) throw StructureError("complementary type needs order >= 2");
    EpsSpec spec = c.tab->eps();
    require_eps_constraint(spec, n - 1, "complementary");
    std::vector<int> F(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n - 1; ++j) {
        if (c.g == c.u) {
            // concrete realization: g F_j' = eps^{j-1} F_j with F_j = u forces
            // eps^{j-1} = 1, which only the order-2 family satisfies
            if (j != 1 || n != 2)
                throw StructureError("complementary: concrete g = u only at order 2");
            F[static_cast<size_t>(j)] = c.u;
        } else {
            F[static_cast<size_t>(j)] = add_scaled_symbol(
                c, "F" + std::to_string(j), Coefficient::eps_pow(spec, j - 1));
        }
    }
    auto prod_low = [&]() {  // F_1(u) ... F_{N-1}(u_{N-2})
        DiffExpr p = c.num(1);
        for (int j = 1; j <= n - 1; ++j) p = p * c.sx(F[static_cast<size_t>(j)], j - 1);
        return p;
    };
    auto prod_high = [&]() {  // F_1(u_1) ... F_{N-1}(u_{N-1})
        DiffExpr p = c.num(1);
        for (int j = 1; j <= n - 1; ++j) p = p * c.sx(F[static_cast<size_t>(j)], j);
        return p;
    };
    std::vector<DiffExpr> modes(static_cast<size_t>(n), DiffExpr::zero());
    if (n - 2 >= 1)
        modes[static_cast<size_t>(n - 3)] = c.gx(0) * c.gx(n - 2) * prod_low();
    modes[static_cast<size_t>(n - 2)] =
        c.gx(0) * c.gx(n - 1) * (c.ep(n - 2) * prod_low() + c.ep(2 - n) * prod_high());
    modes[static_cast<size_t>(n - 1)] = c.gx(0) * c.gx(n) * prod_high();
    return modes;
}

std::vector<DiffExpr> general_modes(Ctx& c, int order, bool unit_coeffs) {
    if (order < 1) throw StructureError("general type needs order >= 1");
    std::vector<DiffExpr> modes;
    for (int k = 1; k <= order; ++k) {
        DiffExpr f = c.gx(0) * c.gx(k);
        modes.push_back(unit_coeffs ? f : f.scaled(c.par("c" + std::to_string(k))));
    }
    return modes;
}

}  // namespace

FamilyTag family_tag_from_name(const std::string& name) {
    static const std::map<std::string, FamilyTag> names = {
        {"general", FamilyTag::General},
        {"complementary", FamilyTag::Complementary},
        {"type-iii", FamilyTag::TypeIII},
        {"type-iv", FamilyTag::TypeIV},
        {"type-v", FamilyTag::TypeV},
        {"type-vi", FamilyTag::TypeVI},
        {"type-vii", FamilyTag::TypeVII},
        {"type-viii", FamilyTag::TypeVIII},
        {"ftv", FamilyTag::FTV},
        {"twisted-order2", FamilyTag::TwistedOrder2},
        {"thm81", FamilyTag::Thm81},
        {"volterra", FamilyTag::Volterra},
    };
    auto it = names.find(name);
    if (it == names.end()) throw StructureError("unknown family: " + name);
    return it->second;
}

std::string family_tag_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::General: return "general";
        case FamilyTag::Complementary: return "complementary";
        case FamilyTag::TypeIII: return "type-iii";
        case FamilyTag::TypeIV: return "type-iv";
        case FamilyTag::TypeV: return "type-v";
        case FamilyTag::TypeVI: return "type-vi";
        case FamilyTag::TypeVII: return "type-vii";
        case FamilyTag::TypeVIII: return "type-viii";
        case FamilyTag::FTV: return "ftv";
        case FamilyTag::TwistedOrder2: return "twisted-order2";
        case FamilyTag::Thm81: return "thm81";
        case FamilyTag::Volterra: return "volterra";
    }
    return "?";
}

BracketStructure build_family(const FamilySpec& spec, const SymbolTablePtr& reuse) {
    switch (spec.tag) {
        case FamilyTag::General: {
            Ctx c = make_ctx(spec, spec.eps.value_or(EpsSpec::None), reuse);
            return BracketStructure::normal_form(
                c.tab, "general-" + std::to_string(spec.order),
                general_modes(c, spec.order, false));
        }
        case FamilyTag::Volterra: {
            FamilySpec s = spec;
            s.concrete_u = true;
            Ctx c = make_ctx(s, EpsSpec::None, reuse);
            return BracketStructure::normal_form(c.tab, "volterra",
                                                 general_modes(c, 1, true));
        }
        case FamilyTag::Complementary: {
            EpsSpec def = spec.order == 2   ? EpsSpec::EpsPlus1
                          : spec.order == 3 ? EpsSpec::Eps2Plus1
                                            : EpsSpec::Eps2MinusEpsPlus1;
            Ctx c = make_ctx(spec, spec.eps.value_or(def), reuse);
            return BracketStructure::normal_form(
                c.tab, "complementary-" + std::to_string(spec.order),
                complementary_modes(c, spec.order));
        }
        case FamilyTag::TypeIII: {
            if (spec.order != 2 && spec.order != 3)
                throw StructureError("type-iii exists at orders 2 and 3");
            EpsSpec def = spec.order == 2 ? EpsSpec::EpsPlus1 : EpsSpec::Eps2Plus1;
            Ctx c = make_ctx(spec, spec.eps.value_or(def), reuse);
            std::vector<DiffExpr> modes = complementary_modes(c, spec.order);
            modes[0] = modes[0] + (c.gx(0) * c.gx(1)).scaled(c.par("t"));
            return BracketStructure::normal_form(
                c.tab, "type-iii-" + std::to_string(spec.order), std::move(modes));
        }
        case FamilyTag::TypeIV: {
            Ctx c = make_ctx(spec, EpsSpec::EpsPlus1, reuse);
            int F = c.g == c.u ? c.u : add_scaled_symbol(c, "F", Coefficient::one());
            auto Fx = [&](int s) { return c.sx(F, s); };
            auto Fineg = [&](int s) { return pow(c.sx(F, s), -1); };
            std::vector<DiffExpr> modes = complementary_modes(c, 2);
            modes.resize(4, DiffExpr::zero());
            Coefficient t = c.par("t");
            modes[1] =
                modes[1] + (c.gx(0) * c.gx(2) * Fx(0) * Fineg(1) * Fx(2)).scaled(t);
            modes[2] = (c.gx(0) * c.gx(3) *
                        (Fx(0) * Fineg(1) * Fx(2) + Fx(1) * Fineg(2) * Fx(3)))
                           .scaled(t);
            modes[3] = (c.gx(0) * c.gx(4) * Fx(1) * Fineg(2) * Fx(3)).scaled(t);
            return BracketStructure::normal_form(c.tab, "type-iv", std::move(modes));
        }
        case FamilyTag::TypeV: {
            FamilySpec comp{FamilyTag::Complementary, 2, EpsSpec::EpsPlus1,
                            spec.concrete_u, {}};
            BracketStructure c2 = build_family(comp, reuse);
            BracketStructure c2s = stretch(c2, 2);
            FamilySpec gen{FamilyTag::General, 1, std::nullopt, spec.concrete_u,
                           {spec.params.empty() ? "t" : spec.params[0]}};
            BracketStructure g1s = stretch(build_family(gen, c2.table()), 2);
            std::vector<DiffExpr> modes;
            for (int k = 1; k <= 4; ++k) modes.push_back(c2s.mode(k) + g1s.mode(k));
            return BracketStructure::normal_form(c2.table(), "type-v", std::move(modes));
        }
        case FamilyTag::TypeVI: {
            EpsSpec eps = spec.eps.value_or(EpsSpec::Eps2MinusEpsPlus1);
            if (eps != EpsSpec::Eps2MinusEpsPlus1)
                throw StructureError("type-vi needs eps^3 = -1 with eps != -1");
            Ctx c = make_ctx(spec, eps, reuse);
            if (c.g == c.u) throw StructureError("type-vi requires an abstract g");
            int F1 = add_scaled_symbol(c, "F1", Coefficient::one());
            int F3 = add_scaled_symbol(c, "F3", Coefficient::eps_pow(eps, 2));
            // F2 = F1 F3; consistent since 1 + eps^2 = eps for this extension
            auto F2x = [&](int s) { return c.sx(F1, s) * c.sx(F3, s); };
            auto Phi = [&](int a) {  // F1(u_a) F2(u_{a+1}) F3(u_{a+2})
                return c.sx(F1, a) * F2x(a + 1) * c.sx(F3, a + 2);
            };
            Coefficient cc = c.par("c");
            Coefficient c2 = cc * cc;
            DiffExpr f1 = c.gx(0) * c.gx(1) *
                          ((c.sx(F1, 0) * c.sx(F3, 1)).scaled(cc) -
                           DiffExpr::constant(c2, c.tab));
            DiffExpr f2 =
                c.gx(0) * c.gx(2) *
                (Phi(0) + (c.ep(2) * c.sx(F1, 0) * c.sx(F3, 1) +
                           c.ep(-2) * c.sx(F1, 1) * c.sx(F3, 2))
                              .scaled(cc));
            DiffExpr f3 = c.gx(0) * c.gx(3) *
                          (c.ep(2) * Phi(0) + c.ep(-2) * Phi(1) +
                           (c.sx(F1, 1) * c.sx(F3, 2)).scaled(cc));
            DiffExpr f4 = c.gx(0) * c.gx(4) * Phi(1);
            return BracketStructure::normal_form(c.tab, "type-vi", {f1, f2, f3, f4});
        }
        case FamilyTag::TypeVII: {
            EpsSpec eps = spec.eps.value_or(EpsSpec::Eps2PlusEpsPlus1);
            if (eps != EpsSpec::Eps2PlusEpsPlus1)
                throw StructureError("type-vii needs a primitive 3rd root of 1");
            Ctx c = make_ctx(spec, eps, reuse);
            if (c.g == c.u) throw StructureError("type-vii requires an abstract g");
            int F = add_scaled_symbol(c, "F", Coefficient::eps(eps));
            int G = add_scaled_symbol(c, "G", Coefficient::one());
            auto FG = [&](int a, int b) { return c.sx(F, a) * c.sx(G, b); };
            // the general part is the single bracket {.}_{1,g} + {.}_{2,g}:
            // both modes carry the same combination coefficient
            Coefficient cc = c.par("c"), t = c.par("t");
            DiffExpr f1 = (c.gx(0) * c.gx(1)).scaled(cc) +
                          (c.gx(0) * c.gx(1) * FG(0, 1)).scaled(t);
            DiffExpr f2 = (c.gx(0) * c.gx(2)).scaled(cc) -
                          (c.gx(0) * c.gx(2) * (c.ep(1) * FG(0, 1) + c.ep(-1) * FG(1, 2)))
                              .scaled(t);
            DiffExpr f3 = (c.gx(0) * c.gx(3) *
                           (c.ep(-1) * FG(0, 1) + FG(1, 2) + c.ep(1) * FG(2, 3)))
                              .scaled(t);
            DiffExpr f4 =
                -(c.gx(0) * c.gx(4) * (c.ep(1) * FG(1, 2) + c.ep(-1) * FG(2, 3)))
                     .scaled(t);
            DiffExpr f5 = (c.gx(0) * c.gx(5) * FG(2, 3)).scaled(t);
            return BracketStructure::normal_form(c.tab, "type-vii",
                                                 {f1, f2, f3, f4, f5});
        }
        case FamilyTag::TypeVIII: {
            Ctx c = make_ctx(spec, EpsSpec::None, reuse);
            int F = c.g == c.u ? c.u : add_scaled_symbol(c, "F", Coefficient::one());
            auto Fx = [&](int s) { return c.sx(F, s); };
            Coefficient cc = c.par("c");
            DiffExpr cnum = DiffExpr::constant(cc, c.tab);
            DiffExpr c2num = DiffExpr::constant(cc * cc, c.tab);
            DiffExpr f1 = c.gx(0) * c.gx(1) *
                          (Fx(0) * Fx(1) + cnum * (Fx(0) + Fx(1)) + c2num);
            DiffExpr f2 = -(c.gx(0) * c.gx(2) *
                            (Fx(0) * Fx(1) + Fx(1) * Fx(2) +
                             cnum * (Fx(0) + Fx(1) + Fx(2)) + c2num));
            DiffExpr f3 = c.gx(0) * c.gx(3) *
                          (Fx(0) * Fx(1) + Fx(1) * Fx(2) + Fx(2) * Fx(3) +
                           cnum * (Fx(1) + Fx(2)));
            DiffExpr f4 =
                -(c.gx(0) * c.gx(4) * (Fx(1) * Fx(2) + Fx(2) * Fx(3) + cnum * Fx(2)));
            DiffExpr f5 = c.gx(0) * c.gx(5) * Fx(2) * Fx(3);
            return BracketStructure::normal_form(c.tab, "type-viii",
                                                 {f1, f2, f3, f4, f5});
        }
        case FamilyTag::FTV: {
            FamilySpec s = spec;
            s.concrete_u = true;
            Ctx c = make_ctx(s, EpsSpec::None, reuse);
            auto ux = [&](int k) { return c.sx(c.u, k); };
            Coefficient c1 = c.par("c1"), c2 = c.par("c2");
            DiffExpr f1 = (ux(0) * ux(1)).scaled(c1) +
                          (ux(0) * ux(1) * (ux(0) + ux(1))).scaled(c2);
            DiffExpr f2 = (ux(0) * ux(2) * ux(1)).scaled(c2);
            return BracketStructure::normal_form(c.tab, "ftv", {f1, f2});
        }
        case FamilyTag::Thm81: {
            EpsSpec eps = spec.eps.value_or(EpsSpec::Eps2Plus1);
            if (eps != EpsSpec::Eps2Plus1)
                throw StructureError("thm81 needs eps^2 = -1");
            Ctx c = make_ctx(spec, eps, reuse);
            if (c.g == c.u) throw StructureError("thm81 requires an abstract g");
            Coefficient a = c.par("a"), cc = c.par("c");
            int F = add_scaled_symbol(c, "F", a);
            int G = add_scaled_symbol(c, "G", a * Coefficient::eps(eps));
            auto FG = [&](int i, int j) { return c.sx(F, i) * c.sx(G, j); };
            DiffExpr f1 =
                c.gx(0) * c.gx(1) * (FG(0, 1) + DiffExpr::constant(cc, c.tab));
            DiffExpr f2 =
                c.gx(0) * c.gx(2) * (c.ep(1) * FG(0, 1) + c.ep(-1) * FG(1, 2));
            DiffExpr f3 = c.gx(0) * c.gx(3) * FG(1, 2);
            return BracketStructure::normal_form(c.tab, "thm81", {f1, f2, f3});
        }
        case FamilyTag::TwistedOrder2: {
            return twisted_pair(true).order2;
        }
    }
    throw StructureError("unhandled family tag");
}

BracketStructure stretch(const BracketStructure& st, int n) {
    if (n < 1) throw StructureError("stretch: n must be >= 1");
    if (n == 1) return st;
    if (st.is_raw()) throw StructureError("stretch: raw structures not supported");
    std::vector<DiffExpr> modes(static_cast<size_t>(n * st.order()), DiffExpr::zero());
    for (int j = 1; j <= st.order(); ++j)
        modes[static_cast<size_t>(n * j) - 1] = dilate(st.mode(j), n);
    return BracketStructure::normal_form(
        st.table(), st.name() + "-stretched-" + std::to_string(n), std::move(modes));
}

TwistedPair twisted_pair(bool include_c) {
    TwistedPair tp;
    tp.tab = SymbolTable::create(EpsSpec::None);
    int u = tp.tab->add_identity("u");
    (void)u;
    int g = tp.tab->add_free("g");
    int a = tp.tab->add_shift_constant("a");
    int F = tp.tab->declare_defined("F");
    auto gx = [&](int s) { return DiffExpr::symbol(tp.tab, g, s); };
    auto ax = [&](int s) { return DiffExpr::symbol(tp.tab, a, s); };
    auto axi = [&](int s) { return DiffExpr::symbol(tp.tab, a, s, -1); };
    auto Fx = [&](int s) { return DiffExpr::symbol(tp.tab, F, s); };
    // g dF/du = a F
    tp.tab->set_defined_template(F, ax(0) * Fx(0) * pow(gx(0), -1));

    DiffExpr f1_k = gx(0) * axi(0) * gx(1) * axi(1);
    tp.order1 = BracketStructure::normal_form(tp.tab, "twisted-order1", {f1_k});
    tp.K1 = structure_to_operator(tp.order1);

    DiffExpr f1_h = gx(0) * gx(1) *
                    (ax(-1) * axi(0) * Fx(0) + ax(2) * axi(1) * Fx(1));
    if (include_c)
        f1_h = f1_h + (gx(0) * gx(1) * axi(0) * axi(1))
                          .scaled(Coefficient::param("c"));
    DiffExpr f2_h = gx(0) * gx(2) * Fx(1);
    tp.order2 =
        BracketStructure::normal_form(tp.tab, "twisted-order2", {f1_h, f2_h});
    tp.H2 = structure_to_operator(tp.order2);

    tp.xi0 = pow(gx(0), -1).scaled(Coefficient::rational(Rational(1, 2))) * ax(0);
    tp.xi1 = ax(1) * ax(-1) * partial(Fx(0), 0);
    tp.flow0 = apply_op(tp.H2, tp.xi0);

    if (!apply_op(tp.K1, tp.xi0).is_zero())
        throw StructureError("twisted pair: K1 xi0 != 0");
    if (apply_op(tp.K1, tp.xi1) != tp.flow0)
        throw StructureError("twisted pair: K1 xi1 != H2 xi0");
    return tp;
}

}  // namespace mpva
