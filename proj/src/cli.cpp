#include "mpva/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mpva/families.hpp"
#include "mpva/lenard.hpp"
#include "mpva/numsim.hpp"
#include "mpva/parse.hpp"

namespace mpva::cli {

namespace {

using nlohmann::ordered_json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file " + out_path);
        f << text;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct StructureArgs {
    std::string family;
    std::string expr_file;
    int order = 0;
    std::string eps;
    std::string g = "free";
};

void add_structure_options(CLI::App* cmd, StructureArgs& sa) {
    cmd->add_option("--family", sa.family, "catalog family tag");
    cmd->add_option("--expr-file", sa.expr_file, "structure file (text format)");
    cmd->add_option("--order", sa.order, "order N where the family has a choice");
    cmd->add_option("--eps", sa.eps, "eps minimal polynomial override");
    cmd->add_option("--g", sa.g, "symbol realization: free or u")
        ->check(CLI::IsMember({"free", "u"}));
}

BracketStructure make_structure(const StructureArgs& sa) {
    if (!sa.expr_file.empty()) return load_structure(read_file(sa.expr_file));
    if (sa.family.empty())
        throw CLI::ValidationError("--family or --expr-file is required");
    FamilySpec spec;
    spec.tag = family_tag_from_name(sa.family);
    spec.order = sa.order;
    if (spec.order == 0) {
        switch (spec.tag) {
            case FamilyTag::General: spec.order = 2; break;
            case FamilyTag::Complementary: spec.order = 2; break;
            case FamilyTag::TypeIII: spec.order = 2; break;
            default: break;
        }
    }
    if (!sa.eps.empty()) spec.eps = eps_spec_from_name(sa.eps);
    spec.concrete_u = sa.g == "u";
    return build_family(spec);
}

int run_verify(const StructureArgs& sa, const std::string& format,
               const std::string& out) {
    BracketStructure st = make_structure(sa);
    SymbolTablePtr tab = st.table();
    int u = tab->find("u");
    if (u < 0) throw StructureError("structure has no identity symbol u");
    DiffExpr ux = DiffExpr::symbol(tab, u, 0);

    LambdaPoly skew = skew_residual(st, ux, ux);
    LambdaPoly skew2 = skew_residual(st, ux, ux * ux);
    BiLambdaPoly jac = jacobi_residual(st);
    bool ok = skew.is_zero() && skew2.is_zero() && jac.is_zero();

    if (format == "json") {
        ordered_json j;
        j["command"] = "verify";
        j["structure"] = st.name();
        j["order"] = st.order();
        j["eps_min_poly"] = eps_spec_name(st.eps());
        j["skew_residual_zero"] = skew.is_zero() && skew2.is_zero();
        j["jacobi_residual_zero"] = jac.is_zero();
        ordered_json viol = ordered_json::array();
        for (const auto& [p, e] : skew.coeffs()) {
            ordered_json v;
            v["kind"] = "skew";
            v["lambda_power"] = p;
            v["residual"] = format_expr(e);
            viol.push_back(v);
        }
        for (const auto& [mn, e] : jac.coeffs()) {
            ordered_json v;
            v["kind"] = "jacobi";
            v["m"] = mn.first;
            v["n"] = mn.second;
            v["residual"] = format_expr(e);
            viol.push_back(v);
        }
        j["violations"] = viol;
        j["pass"] = ok;
        emit(j.dump(2), out);
    } else {
        std::ostringstream os;
        os << "structure: " << st.name() << " (order " << st.order() << ")\n";
        if (skew.is_zero() && skew2.is_zero()) {
            os << "skew residual: 0\n";
        } else {
            for (const auto& [p, e] : skew.coeffs())
                os << "skew residual lambda^" << p << ": " << format_expr(e) << "\n";
            for (const auto& [p, e] : skew2.coeffs())
                os << "skew residual (u,u^2) lambda^" << p << ": " << format_expr(e)
                   << "\n";
        }
        if (jac.is_zero()) {
            os << "jacobi residual: 0\n";
        } else {
            for (const auto& [mn, e] : jac.coeffs())
                os << "jacobi residual (" << mn.first << "," << mn.second
                   << "): " << format_expr(e) << "\n";
        }
        os << (ok ? "PASS" : "FAIL") << "\n";
        emit(os.str(), out);
    }
    return ok ? 0 : 1;
}

int run_hierarchy(const std::string& g, const std::string& f, int depth,
                  const std::string& checks, const std::string& format,
                  const std::string& out) {
    if (g != f)
        throw CLI::ValidationError("--g and --F must both be 'u' or both 'free'");
    PairRealization real =
        g == "u" ? PairRealization::VolterraU : PairRealization::Abstract;
    HierarchyState st = run_hierarchy(real, depth);

    bool want_involution = checks.find("involution") != std::string::npos;
    bool want_closed = checks.find("closed") != std::string::npos;
    bool want_exact = checks.find("exact") != std::string::npos;

    bool ok = true;
    for (const StepRecord& r : st.steps) {
        if (r.j >= 1 && !r.lenard) ok = false;
        if (r.j >= 2 && (!r.lemma71a || !r.lemma72a)) ok = false;
        if (want_closed && !r.closed) ok = false;
        if (want_exact && !r.exact) ok = false;
    }
    bool invol_k = true, invol_h = true;
    if (want_involution) {
        for (const auto& row : involution_matrix(st, true))
            for (const Functional& f2 : row)
                if (!f2.is_zero()) invol_k = false;
        for (const auto& row : involution_matrix(st, false))
            for (const Functional& f2 : row)
                if (!f2.is_zero()) invol_h = false;
        ok = ok && invol_k && invol_h;
    }

    if (format == "json") {
        ordered_json j = ordered_json::parse(hierarchy_report_json(st));
        if (want_involution) {
            j["involution"]["K_zero"] = invol_k;
            j["involution"]["H2_zero"] = invol_h;
        }
        j["pass"] = ok;
        emit(j.dump(2), out);
    } else {
        std::ostringstream os;
        os << "hierarchy g=" << g << " F=" << f << " depth=" << depth << "\n";
        for (size_t i = 0; i < st.xi.size(); ++i) {
            const StepRecord& r = st.steps[i];
            os << "xi_" << r.j << " = " << format_expr(st.xi[i]) << "\n";
            os << "  checks:";
            if (r.j >= 1) os << " lenard=" << (r.lenard ? "ok" : "FAIL");
            if (r.j >= 2)
                os << " lemma71a=" << (r.lemma71a ? "ok" : "FAIL")
                   << " lemma72a=" << (r.lemma72a ? "ok" : "FAIL");
            if (want_closed) os << " closed=" << (r.closed ? "ok" : "FAIL");
            if (want_exact)
                os << " exact=" << (r.exact ? "ok" : "FAIL") << " (density "
                   << r.density_provenance << ")";
            os << "\n";
        }
        if (want_involution)
            os << "involution: K=" << (invol_k ? "0" : "NONZERO")
               << " H2=" << (invol_h ? "0" : "NONZERO") << "\n";
        os << (ok ? "PASS" : "FAIL") << "\n";
        emit(os.str(), out);
    }
    return ok ? 0 : 1;
}

int run_lax_check(int max_flow, int max_density, const std::string& format,
                  const std::string& out) {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU,
                                      std::max(max_density, max_flow + 1));
    const LenardPair& p = st.pair;

    ordered_json j;
    j["command"] = "lax-check";
    j["F"] = "u";
    bool ok = true;
    ordered_json flows = ordered_json::array();
    for (int n = 0; n <= max_flow; ++n) {
        LaxFlowResult r = lax_flow(p, n);
        // the hierarchy flow by both routes: K xi_{N+1} and H2 xi_N
        DiffExpr via_k = apply_op(p.K, st.xi[static_cast<size_t>(n) + 1]);
        DiffExpr via_h2 = st.flows[static_cast<size_t>(n)];
        bool routes_agree = via_k == via_h2;
        // dL/dt_N writes dF/dt; with F = u this is the flow itself
        bool match = r.dF == apply_evolutionary(via_h2, p.F);
        ok = ok && match && routes_agree && r.support_ok;
        ordered_json row;
        row["N"] = n;
        row["support_only_Sminus1"] = r.support_ok;
        row["matches_flow"] = "P_" + std::to_string(n);
        row["K_and_H2_routes_agree"] = routes_agree;
        row["match"] = match;
        flows.push_back(row);
    }
    j["alignment"] =
        "lax time label N corresponds to the hierarchy flow P_N = K xi_{N+1} = H2 xi_N";
    j["flows"] = flows;
    ordered_json dens = ordered_json::array();
    for (int n = 1; n <= max_density; ++n) {
        DiffExpr h = lax_residue_density(p, n);
        bool exact = check_exact(h, st.xi[static_cast<size_t>(n)]);
        ok = ok && exact;
        ordered_json row;
        row["N"] = n;
        row["density"] = format_expr(h);
        row["exact_for_xi"] = exact;
        dens.push_back(row);
    }
    j["densities"] = dens;
    j["note"] =
        "desk-scale check of the Lax hierarchy conjecture; conjecture-derived "
        "densities are exactness-verified";
    j["pass"] = ok;
    if (format == "json") {
        emit(j.dump(2), out);
    } else {
        std::ostringstream os;
        os << "lax-check F=u\n";
        for (const auto& row : flows)
            os << "flow N=" << row["N"] << " support{S^-1}="
               << (row["support_only_Sminus1"].get<bool>() ? "ok" : "FAIL")
               << " matches " << row["matches_flow"].get<std::string>() << ": "
               << (row["match"].get<bool>() ? "ok" : "FAIL") << "\n";
        for (const auto& row : dens)
            os << "density N=" << row["N"]
               << " exact: " << (row["exact_for_xi"].get<bool>() ? "ok" : "FAIL")
               << "\n";
        os << j["alignment"].get<std::string>() << "\n";
        os << (ok ? "PASS" : "FAIL") << "\n";
        emit(os.str(), out);
    }
    return ok ? 0 : 1;
}

int run_simulate(int lattice, double dt, int steps, unsigned long long seed,
                 const std::string& flow_name, const std::string& densities,
                 bool with_sites, const std::string& out) {
    HierarchyState st = run_hierarchy(PairRealization::VolterraU, 3);
    SymbolTablePtr tab = st.pair.tab;
    SymbolBinding bind;
    bind.symbols[tab->find("L")] = Realization::log();

    DiffExpr flow;
    if (flow_name == "volterra" || flow_name == "p0") flow = st.flows[0];
    else if (flow_name == "p1") flow = st.flows[1];
    else if (flow_name == "p2") flow = st.flows[2];
    else throw CLI::ValidationError("unknown flow " + flow_name);

    std::vector<NamedExpr> dens;
    std::istringstream ds(densities);
    std::string name;
    while (std::getline(ds, name, ',')) {
        if (name == "u") dens.push_back({"u", st.pair.F});
        else if (name == "logu") dens.push_back({"logu", st.densities[0]});
        else if (name == "h2") dens.push_back({"h2", st.densities[2]});
        else if (name == "h3") dens.push_back({"h3", st.densities[3]});
        else if (name == "u2") dens.push_back({"u2", st.pair.F * st.pair.F});
        else throw CLI::ValidationError("unknown density " + name);
    }

    LatticeState state{lattice, seeded_uniform(seed, lattice, 0.5, 1.5)};
    std::ostringstream csv;
    csv << "step,t";
    if (with_sites)
        for (int i = 0; i < lattice; ++i) csv << ",u" << i;
    for (const NamedExpr& d : dens) csv << "," << d.name;
    csv << "\n";
    char buf[32];
    auto emit_row = [&](int step, const LatticeState& s) {
        csv << step << "," << step * dt;
        if (with_sites)
            for (double v : s.values) {
                snprintf(buf, sizeof buf, "%.17g", v);
                csv << "," << buf;
            }
        for (const NamedExpr& d : dens) {
            snprintf(buf, sizeof buf, "%.17g", functional_value(d.expr, s, bind));
            csv << "," << buf;
        }
        csv << "\n";
    };
    emit_row(0, state);
    for (int s = 1; s <= steps; ++s) {
        state = integrate_to(flow, state, dt, 1, bind);
        emit_row(s, state);
    }
    emit(csv.str(), out);
    return 0;
}

int run_bracket(const StructureArgs& sa, const std::string& ftext,
                const std::string& gtext, const std::string& out) {
    BracketStructure st = make_structure(sa);
    DiffExpr f = parse_expr(ftext, st.table());
    DiffExpr g = parse_expr(gtext, st.table());
    LambdaPoly b = master_bracket(f, g, st);
    std::ostringstream os;
    if (b.is_zero()) os << "0\n";
    for (const auto& [k, e] : b.coeffs())
        os << "lambda^" << k << ": " << format_expr(e) << "\n";
    emit(os.str(), out);
    return 0;
}

int dispatch_impl(const std::vector<std::string>& args) {
    CLI::App app{"exact verifier and hierarchy generator for multiplicative "
                 "Poisson lambda-brackets on difference algebras"};
    app.require_subcommand(1);

    if (const char* cap = std::getenv("MPVA_TOWER_DEPTH")) {
        int v = std::atoi(cap);
        if (v >= 1) SymbolTable::set_default_tower_cap(v);
    }

    std::string format = "text", out_path;
    StructureArgs sa;

    CLI::App* verify = app.add_subcommand("verify", "skew + Jacobi verification");
    add_structure_options(verify, sa);
    verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--out", out_path);

    CLI::App* hier = app.add_subcommand("hierarchy", "Lenard-Magri hierarchy");
    std::string hg = "free", hf = "free", checks = "involution,closed,exact";
    int depth = 6;
    hier->add_option("--g", hg)->check(CLI::IsMember({"free", "u"}));
    hier->add_option("--F", hf)->check(CLI::IsMember({"free", "u"}));
    hier->add_option("--depth", depth);
    hier->add_option("--check", checks, "comma list: involution,closed,exact");
    hier->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    hier->add_option("--out", out_path);

    CLI::App* lax = app.add_subcommand("lax-check", "Lax residue / flow oracle");
    int max_flow = 2, max_density = 4;
    std::string lax_f = "u";
    lax->add_option("--F", lax_f)->check(CLI::IsMember({"u"}));
    lax->add_option("--max-flow", max_flow);
    lax->add_option("--max-density", max_density);
    lax->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    lax->add_option("--out", out_path);

    CLI::App* sim = app.add_subcommand("simulate", "periodic lattice RK4 runs");
    int lattice = 32, steps = 10000;
    double dt = 1e-3;
    unsigned long long seed = 1;
    std::string flow_name = "volterra", densities = "u,logu,h2,h3";
    bool with_sites = false;
    sim->add_option("--flow", flow_name);
    sim->add_option("--lattice", lattice);
    sim->add_option("--dt", dt);
    sim->add_option("--steps", steps);
    sim->add_option("--seed", seed);
    sim->add_option("--densities", densities);
    sim->add_flag("--sites", with_sites, "include site values in the CSV");
    sim->add_option("--out", out_path);

    CLI::App* bracket = app.add_subcommand("bracket", "master bracket of two exprs");
    std::string fexpr = "u[0]", gexpr = "u[0]";
    add_structure_options(bracket, sa);
    bracket->add_option("--f", fexpr);
    bracket->add_option("--expr2,--g-expr", gexpr);
    bracket->add_option("--out", out_path);

    CLI::App* exp = app.add_subcommand("export", "structure JSON export");
    add_structure_options(exp, sa);
    exp->add_option("--out", out_path);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verify->parsed()) return run_verify(sa, format, out_path);
    if (hier->parsed())
        return run_hierarchy(hg, hf, depth, checks, format, out_path);
    if (lax->parsed()) return run_lax_check(max_flow, max_density, format, out_path);
    if (sim->parsed())
        return run_simulate(lattice, dt, steps, seed, flow_name, densities,
                            with_sites, out_path);
    if (bracket->parsed()) return run_bracket(sa, fexpr, gexpr, out_path);
    if (exp->parsed()) {
        emit(structure_to_json(make_structure(sa)), out_path);
        return 0;
    }
    return 2;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    try {
        return dispatch_impl(args);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const IncompatibleFieldError& e) {
        std::cerr << "field error: " << e.what() << "\n";
        return 2;
    } catch (const StructureError& e) {
        std::cerr << "structure error: " << e.what() << "\n";
        return 1;
    } catch (const RecursionError& e) {
        std::cerr << "recursion error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mpva::cli
