#include "mpva/parse.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace mpva {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
public:
    // bare_site0: inside defined-symbol templates a bare symbol name stands
    // for its occurrence at site 0 ("symbol F defined F*g^-1;").
    Parser(const std::string& src, SymbolTablePtr tab, bool bare_site0 = false)
        : src_(src), tab_(std::move(tab)), bare_site0_(bare_site0) {}

    DiffExpr parse() {
        DiffExpr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& src_;
    SymbolTablePtr tab_;
    bool bare_site0_ = false;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    long long parse_uint() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ == start) throw ParseError("expected integer", pos_);
        return std::stoll(src_.substr(start, pos_ - start));
    }
    long long parse_int() {
        skip_ws();
        long long sign = 1;
        if (eat('-')) sign = -1;
        else eat('+');
        return sign * parse_uint();
    }
    std::string parse_name() {
        skip_ws();
        size_t start = pos_;
        if (pos_ >= src_.size() || !name_start(src_[pos_]))
            throw ParseError("expected identifier", pos_);
        ++pos_;
        while (pos_ < src_.size() && name_char(src_[pos_])) ++pos_;
        return src_.substr(start, pos_ - start);
    }

    DiffExpr parse_sum() {
        bool neg = false;
        if (peek() == '-') { ++pos_; neg = true; }
        else if (peek() == '+') ++pos_;
        DiffExpr e = parse_term();
        if (neg) e = -e;
        for (;;) {
            char c = peek();
            if (c == '+') { ++pos_; e = e + parse_term(); }
            else if (c == '-') { ++pos_; e = e - parse_term(); }
            else break;
        }
        return e;
    }

    DiffExpr parse_term() {
        DiffExpr e = parse_atom();
        while (eat('*')) e = e * parse_atom();
        return e;
    }

    DiffExpr parse_atom() {
        char c = peek();
        size_t at = pos_;
        if (c == '(') {
            ++pos_;
            DiffExpr inner = parse_sum();
            expect(')');
            return maybe_pow(inner, at);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long num = parse_uint();
            Rational r(num);
            if (peek() == '/') {
                ++pos_;
                size_t dat = pos_;
                long long den = parse_uint();
                if (den == 0) throw ParseError("zero denominator", dat);
                r = Rational(num, den);
            }
            return maybe_pow(DiffExpr::constant(Coefficient::rational(r), tab_), at);
        }
        if (name_start(c)) {
            std::string name = parse_name();
            if (peek() == '[') {
                ++pos_;
                long long site = parse_int();
                expect(']');
                if (!tab_) throw ParseError("no symbol table for symbol " + name, at);
                int id = tab_->resolve(name);
                if (id < 0) throw ParseError("undeclared symbol " + name, at);
                int exp = 1;
                if (eat('^')) exp = static_cast<int>(parse_int());
                return DiffExpr::symbol(tab_, id, static_cast<int>(site), exp);
            }
            if (name == "eps") {
                EpsSpec spec = tab_ ? tab_->eps() : EpsSpec::None;
                if (spec == EpsSpec::None)
                    throw ParseError("eps used but no eps extension declared", at);
                int exp = 1;
                if (eat('^')) exp = static_cast<int>(parse_int());
                return DiffExpr::constant(Coefficient::eps_pow(spec, exp), tab_);
            }
            if (tab_ && tab_->find(name) >= 0) {
                if (!bare_site0_)
                    throw ParseError(
                        "symbol " + name + " needs a site index like " + name + "[0]", at);
                int exp = 1;
                if (eat('^')) exp = static_cast<int>(parse_int());
                return DiffExpr::symbol(tab_, tab_->find(name), 0, exp);
            }
            int exp = 1;
            if (eat('^')) exp = static_cast<int>(parse_int());
            if (exp <= 0)
                throw ParseError("parameter " + name + " cannot carry power " +
                                     std::to_string(exp),
                                 at);
            return DiffExpr::constant(Coefficient::param(name, exp), tab_);
        }
        throw ParseError("expected a factor", pos_);
    }

    DiffExpr maybe_pow(const DiffExpr& e, size_t at) {
        if (!eat('^')) return e;
        long long k = parse_int();
        try {
            return pow(e, static_cast<int>(k));
        } catch (const std::domain_error& ex) {
            throw ParseError(ex.what(), at);
        }
    }
};

// Print order inside a monomial and across terms: distance from site 0,
// nonnegative site first, then symbol id, then exponent.
struct FactorPrintKey {
    int dist, neg, sym, exp;
    friend bool operator<(const FactorPrintKey& a, const FactorPrintKey& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.neg != b.neg) return a.neg < b.neg;
        if (a.sym != b.sym) return a.sym < b.sym;
        return a.exp < b.exp;
    }
};

std::vector<FactorPrintKey> print_keys(const Monomial& m) {
    std::vector<FactorPrintKey> keys;
    keys.reserve(m.factors.size());
    for (const Factor& f : m.factors)
        keys.push_back({f.site < 0 ? -f.site : f.site, f.site < 0 ? 1 : 0, f.sym, f.exp});
    std::sort(keys.begin(), keys.end());
    return keys;
}

std::string factor_string(const SymbolTable& tab, const FactorPrintKey& k) {
    int site = k.neg ? -k.dist : k.dist;
    std::string s = tab.sym(k.sym).name + "[" + std::to_string(site) + "]";
    if (k.exp != 1) s += "^" + std::to_string(k.exp);
    return s;
}

}  // namespace

DiffExpr parse_expr(const std::string& text, const SymbolTablePtr& table) {
    return Parser(text, table).parse();
}

Coefficient parse_coefficient(const std::string& text, EpsSpec spec) {
    SymbolTablePtr tab = SymbolTable::create(spec);
    DiffExpr e = Parser(text, tab).parse();
    Coefficient c;
    for (const auto& [m, v] : e.terms()) {
        if (!m.empty())
            throw ParseError("symbols are not allowed in a coefficient", 0);
        c = c + v;
    }
    return c;
}

std::string format_expr(const DiffExpr& e) {
    if (e.is_zero()) return "0";
    const SymbolTablePtr& tab = e.table();

    struct Entry {
        std::vector<FactorPrintKey> keys;
        const Monomial* mono;
        const Coefficient* coeff;
    };
    std::vector<Entry> entries;
    entries.reserve(e.num_terms());
    for (const auto& [m, c] : e.terms()) entries.push_back({print_keys(m), &m, &c});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.keys < b.keys; });

    std::string out;
    bool first = true;
    for (const Entry& en : entries) {
        const Coefficient& c = *en.coeff;
        bool single = c.is_single_printable();
        bool neg = single && c.leading_negative();
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string cs;
        if (single) {
            cs = neg ? (-c).to_string() : c.to_string();
        } else {
            cs = "(" + c.to_string() + ")";
        }
        std::string prod;
        if (cs != "1" || en.keys.empty()) prod = cs;
        for (const FactorPrintKey& k : en.keys) {
            if (!prod.empty()) prod += "*";
            prod += factor_string(*tab, k);
        }
        out += prod;
    }
    return out;
}

void parse_symbol_declaration(const std::string& stmt, const SymbolTablePtr& table) {
    // form: symbol NAME KIND [template]
    size_t i = 0;
    auto next_word = [&]() {
        while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
        size_t start = i;
        while (i < stmt.size() && !std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
        return stmt.substr(start, i - start);
    };
    std::string kw = next_word();
    if (kw != "symbol") throw ParseError("expected 'symbol'", 0);
    std::string name = next_word();
    if (name.empty() || name == "eps")
        throw ParseError("bad symbol name '" + name + "'", 0);
    std::string kind = next_word();
    if (kind == "identity") {
        table->add_identity(name);
    } else if (kind == "free") {
        table->add_free(name);
    } else if (kind == "shiftconst") {
        table->add_shift_constant(name);
    } else if (kind == "defined") {
        std::string tmpl = stmt.substr(i);
        if (tmpl.find_first_not_of(" \t\r\n") == std::string::npos)
            throw ParseError("defined symbol " + name + " needs a derivative template", 0);
        int id = table->find(name);
        if (id < 0) id = table->declare_defined(name);
        // template factors live at the occurrence site; stored at site 0
        table->set_defined_template(id, Parser(tmpl, table, true).parse());
    } else {
        throw ParseError("unknown symbol kind '" + kind + "'", 0);
    }
}

void parse_declarations(const std::string& text, const SymbolTablePtr& table) {
    // pass 1: register names so defined templates can reference later symbols
    std::vector<std::string> stmts;
    size_t start = 0;
    while (start < text.size()) {
        size_t semi = text.find(';', start);
        if (semi == std::string::npos) {
            if (text.find_first_not_of(" \t\r\n", start) != std::string::npos)
                throw ParseError("declaration not terminated by ';'", start);
            break;
        }
        std::string stmt = text.substr(start, semi - start);
        if (stmt.find_first_not_of(" \t\r\n") != std::string::npos) stmts.push_back(stmt);
        start = semi + 1;
    }
    std::vector<std::pair<int, std::string>> templates;  // (symbol id, template text)
    for (const std::string& stmt : stmts) {
        size_t i = 0;
        auto next_word = [&]() {
            while (i < stmt.size() && std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
            size_t s = i;
            while (i < stmt.size() && !std::isspace(static_cast<unsigned char>(stmt[i]))) ++i;
            return stmt.substr(s, i - s);
        };
        std::string kw = next_word();
        if (kw != "symbol") throw ParseError("expected 'symbol' in declaration", 0);
        std::string name = next_word();
        std::string kind = next_word();
        if (kind == "identity") table->add_identity(name);
        else if (kind == "free") table->add_free(name);
        else if (kind == "shiftconst") table->add_shift_constant(name);
        else if (kind == "defined")
            templates.emplace_back(table->declare_defined(name), stmt.substr(i));
        else throw ParseError("unknown symbol kind '" + kind + "'", 0);
    }
    for (const auto& [id, tmpl] : templates)
        table->set_defined_template(id, Parser(tmpl, table, true).parse());
}

}  // namespace mpva
