#include "mpva/lambda.hpp"

#include <json.hpp>

#include "mpva/parse.hpp"

namespace mpva {

BracketStructure BracketStructure::normal_form(SymbolTablePtr tab, std::string name,
                                               std::vector<DiffExpr> modes) {
    while (!modes.empty() && modes.back().is_zero()) modes.pop_back();
    if (modes.empty()) throw StructureError("bracket structure with all modes zero");
    BracketStructure st;
    st.tab_ = std::move(tab);
    st.name_ = std::move(name);
    st.order_ = static_cast<int>(modes.size());
    st.pos_ = std::move(modes);
    return st;
}

BracketStructure BracketStructure::raw(SymbolTablePtr tab, std::string name,
                                       std::map<int, DiffExpr> modes) {
    BracketStructure st;
    st.tab_ = std::move(tab);
    st.name_ = std::move(name);
    st.raw_ = true;
    int order = 0;
    for (auto it = modes.begin(); it != modes.end();) {
        if (it->second.is_zero()) {
            it = modes.erase(it);
        } else {
            order = std::max({order, it->first, -it->first});
            ++it;
        }
    }
    if (modes.empty()) throw StructureError("bracket structure with all modes zero");
    st.order_ = order;
    st.raw_modes_ = std::move(modes);
    return st;
}

DiffExpr BracketStructure::mode(int k) const {
    if (raw_) {
        auto it = raw_modes_.find(k);
        return it == raw_modes_.end() ? DiffExpr::zero() : it->second;
    }
    if (k == 0) return DiffExpr::zero();
    if (k > 0) {
        if (k > order_) return DiffExpr::zero();
        return pos_[static_cast<size_t>(k) - 1];
    }
    DiffExpr f = mode(-k);
    if (f.is_zero()) return f;
    return -shift(f, k);  // f_{-k} = -S^{-k} f_k
}

std::vector<int> BracketStructure::mode_indices() const {
    std::vector<int> idx;
    if (raw_) {
        for (const auto& [k, f] : raw_modes_) idx.push_back(k);
        return idx;
    }
    for (int k = -order_; k <= order_; ++k)
        if (k != 0 && !mode(k).is_zero()) idx.push_back(k);
    return idx;
}

BracketStructure BracketStructure::with_mode(int k, DiffExpr f,
                                             const std::string& new_name) const {
    BracketStructure st = *this;
    st.name_ = new_name;
    if (raw_) {
        st.raw_modes_[k] = std::move(f);
        return st;
    }
    if (k <= 0) throw StructureError("with_mode: normal-form modes are indexed k >= 1");
    if (k > order_) {
        st.pos_.resize(static_cast<size_t>(k), DiffExpr::zero());
        st.order_ = k;
    }
    st.pos_[static_cast<size_t>(k) - 1] = std::move(f);
    while (!st.pos_.empty() && st.pos_.back().is_zero()) {
        st.pos_.pop_back();
        st.order_--;
    }
    if (st.pos_.empty()) throw StructureError("with_mode: all modes zero");
    return st;
}

LambdaPoly master_bracket(const DiffExpr& f, const DiffExpr& g,
                          const BracketStructure& st) {
    LambdaPoly out;
    std::vector<int> midx = st.mode_indices();
    for (int n : partial_sites(g)) {
        DiffExpr dg = partial(g, n);
        if (dg.is_zero()) continue;
        for (int m : partial_sites(f)) {
            DiffExpr df = partial(f, m);
            if (df.is_zero()) continue;
            for (int k : midx) {
                // dg/du_n * lambda^{n+k-m} * S^n(f_k) * S^{n+k-m}(df/du_m)
                out.add(n + k - m, dg * shift(st.mode(k), n) * shift(df, n + k - m));
            }
        }
    }
    return out;
}

LambdaPoly skew_residual(const BracketStructure& st, const DiffExpr& f,
                         const DiffExpr& g) {
    LambdaPoly out = master_bracket(g, f, st);
    LambdaPoly fg = master_bracket(f, g, st);
    // +<-{f_{(S lambda)^-1} g}: lambda^p c_p  ->  lambda^-p S^-p(c_p)
    for (const auto& [p, c] : fg.coeffs()) out.add(-p, shift(c, -p));
    return out;
}

BiLambdaPoly jacobi_residual(const BracketStructure& st) {
    BiLambdaPoly out;
    std::vector<int> midx = st.mode_indices();
    for (int k : midx) {
        DiffExpr fk = st.mode(k);
        for (int j : midx) {
            DiffExpr fj = st.mode(j);
            for (int s : partial_sites(fj)) {
                DiffExpr d = partial(fj, s);
                if (d.is_zero()) continue;
                DiffExpr t = shift(fk, s) * d;
                out.add(s + k, j, t);        // lambda-side of the commutator
                out.add(j, s + k, -t);       // mu-side
                // right side: f_k S^{k-s}(df_j/du_{-(-s)}) at (k-s+j, k-s)
                out.add(k - s + j, k - s, -(fk * shift(d, k - s)));
            }
        }
    }
    return out;
}

DiffExpr jacobi_coefficient(const BracketStructure& st, int m, int n) {
    return jacobi_residual(st).coeff(m, n);
}

DiffExpr site_bracket(const BracketStructure& st, int m, int n) {
    return shift(st.mode(m - n), n);
}

std::string structure_to_json(const BracketStructure& st) {
    nlohmann::ordered_json j;
    j["order"] = st.order();
    j["eps_min_poly"] = eps_spec_name(st.eps());
    nlohmann::ordered_json syms = nlohmann::ordered_json::array();
    const SymbolTable& tab = *st.table();
    for (int i = 0; i < tab.size(); ++i) {
        const FuncSymbol& s = tab.sym(i);
        nlohmann::ordered_json js;
        js["name"] = s.name;
        switch (s.kind) {
            case SymbolKind::Identity: js["kind"] = "identity"; break;
            case SymbolKind::Free: js["kind"] = "free"; break;
            case SymbolKind::ShiftConstant: js["kind"] = "shiftconst"; break;
            case SymbolKind::Defined:
                js["kind"] = "defined";
                js["rule"] = s.deriv_template ? format_expr(*s.deriv_template) : "";
                break;
        }
        syms.push_back(js);
    }
    j["symbols"] = syms;
    nlohmann::ordered_json modes;
    for (int k : st.mode_indices()) {
        if (!st.is_raw() && k < 0) continue;  // induced, not stored
        modes[std::to_string(k)] = format_expr(st.mode(k));
    }
    j["modes"] = modes;
    if (st.is_raw()) j["raw"] = true;
    j["name"] = st.name();
    return j.dump(2);
}

BracketStructure load_structure(const std::string& text) {
    SymbolTablePtr tab;
    std::string eps_line = "none";
    std::string name = "structure";
    std::vector<std::pair<std::string, std::string>> symbol_stmts_raw;
    std::map<int, std::string> mode_texts;
    std::map<int, std::string> raw_mode_texts;
    int declared_order = -1;

    // statement split on ';'
    std::vector<std::string> stmts;
    size_t start = 0;
    while (start < text.size()) {
        size_t semi = text.find(';', start);
        if (semi == std::string::npos) {
            if (text.find_first_not_of(" \t\r\n", start) != std::string::npos)
                throw ParseError("statement not terminated by ';'", start);
            break;
        }
        std::string stmt = text.substr(start, semi - start);
        if (stmt.find_first_not_of(" \t\r\n") != std::string::npos)
            stmts.push_back(stmt);
        start = semi + 1;
    }

    std::string decl_block;
    for (const std::string& stmt : stmts) {
        size_t i = stmt.find_first_not_of(" \t\r\n");
        std::string body = stmt.substr(i);
        auto word_end = body.find_first_of(" \t\r\n");
        std::string kw = body.substr(0, word_end);
        std::string rest = word_end == std::string::npos ? "" : body.substr(word_end + 1);
        if (kw == "symbol") {
            decl_block += body + ";\n";
        } else if (kw == "eps") {
            eps_line = rest.substr(rest.find_first_not_of(" \t"));
        } else if (kw == "name") {
            name = rest.substr(rest.find_first_not_of(" \t"));
        } else if (kw == "order") {
            declared_order = std::stoi(rest);
        } else if (kw == "mode" || kw == "rawmode") {
            size_t eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("mode statement needs '='", 0);
            int k = std::stoi(rest.substr(0, eq));
            if (kw == "mode") mode_texts[k] = rest.substr(eq + 1);
            else raw_mode_texts[k] = rest.substr(eq + 1);
        } else {
            throw ParseError("unknown statement '" + kw + "'", 0);
        }
    }

    tab = SymbolTable::create(eps_spec_from_name(eps_line));
    parse_declarations(decl_block, tab);

    if (!raw_mode_texts.empty()) {
        std::map<int, DiffExpr> modes;
        for (const auto& [k, t] : mode_texts) modes[k] = parse_expr(t, tab);
        for (const auto& [k, t] : raw_mode_texts) modes[k] = parse_expr(t, tab);
        return BracketStructure::raw(tab, name, std::move(modes));
    }
    int order = declared_order;
    for (const auto& [k, t] : mode_texts) {
        if (k <= 0) throw ParseError("normal-form mode index must be positive", 0);
        order = std::max(order, k);
    }
    if (order <= 0) throw ParseError("structure has no modes", 0);
    std::vector<DiffExpr> modes(static_cast<size_t>(order), DiffExpr::zero());
    for (const auto& [k, t] : mode_texts)
        modes[static_cast<size_t>(k) - 1] = parse_expr(t, tab);
    return BracketStructure::normal_form(tab, name, std::move(modes));
}

}  // namespace mpva
