#include "mpva/expr.hpp"

#include <algorithm>

namespace mpva {

namespace {
int g_default_tower_cap = 4;
}

int SymbolTable::default_tower_cap() { return g_default_tower_cap; }
void SymbolTable::set_default_tower_cap(int cap) {
    if (cap < 1) throw std::invalid_argument("tower cap must be >= 1");
    g_default_tower_cap = cap;
}

int SymbolTable::add(FuncSymbol s) {
    if (by_name_.count(s.name))
        throw std::invalid_argument("symbol already declared: " + s.name);
    syms_.push_back(std::move(s));
    int id = static_cast<int>(syms_.size()) - 1;
    by_name_[syms_.back().name] = id;
    return id;
}

int SymbolTable::add_identity(const std::string& name) {
    for (const auto& s : syms_)
        if (s.kind == SymbolKind::Identity)
            throw std::invalid_argument("only one identity symbol is supported");
    return add({name, SymbolKind::Identity, -1, 0, nullptr});
}

int SymbolTable::add_free(const std::string& name) {
    return add({name, SymbolKind::Free, -1, 0, nullptr});
}

int SymbolTable::add_shift_constant(const std::string& name) {
    return add({name, SymbolKind::ShiftConstant, -1, 0, nullptr});
}

int SymbolTable::declare_defined(const std::string& name) {
    return add({name, SymbolKind::Defined, -1, 0, nullptr});
}

void SymbolTable::set_defined_template(int id, const DiffExpr& tmpl) {
    FuncSymbol& s = syms_.at(static_cast<size_t>(id));
    if (s.kind != SymbolKind::Defined)
        throw std::invalid_argument("set_defined_template: not a defined symbol");
    s.deriv_template = std::make_shared<const DiffExpr>(tmpl);
}

int SymbolTable::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
}

int SymbolTable::resolve(const std::string& name) {
    int id = find(name);
    if (id >= 0) return id;
    // allow free-tower names "g'", "g''", ... if the base symbol is free
    size_t primes = 0;
    while (primes < name.size() && name[name.size() - 1 - primes] == '\'') ++primes;
    if (primes == 0) return -1;
    int base = find(name.substr(0, name.size() - primes));
    if (base < 0 || sym(base).kind != SymbolKind::Free) return -1;
    for (size_t i = 0; i < primes; ++i) base = derivative_symbol(base);
    return base;
}

int SymbolTable::derivative_symbol(int id) {
    const FuncSymbol& s = sym(id);
    if (s.kind != SymbolKind::Free)
        throw std::invalid_argument("derivative_symbol: not a free symbol");
    std::string child = s.name + "'";
    int found = find(child);
    if (found >= 0) return found;
    if (s.tower_level + 1 > tower_cap_)
        throw DepthError("free-derivative tower deeper than cap " +
                         std::to_string(tower_cap_) + " at symbol " + child);
    FuncSymbol d{child, SymbolKind::Free, id, s.tower_level + 1, nullptr};
    return add(std::move(d));
}

DiffExpr SymbolTable::derivative_expr(int id, int site) {
    const FuncSymbol& s = sym(id);
    switch (s.kind) {
        case SymbolKind::Identity:
            return DiffExpr::constant(Coefficient::one(), shared_from_this());
        case SymbolKind::ShiftConstant:
            return DiffExpr::zero();
        case SymbolKind::Free:
            return DiffExpr::symbol(shared_from_this(), derivative_symbol(id), site);
        case SymbolKind::Defined:
            if (!s.deriv_template)
                throw std::logic_error("defined symbol lacking template: " + s.name);
            return shift(*s.deriv_template, site);
    }
    return DiffExpr::zero();
}

Monomial Monomial::mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    auto key_lt = [](const Factor& x, const Factor& y) {
        return x.sym != y.sym ? x.sym < y.sym : x.site < y.site;
    };
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && key_lt(a.factors[i], b.factors[j]))) {
            r.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || key_lt(b.factors[j], a.factors[i])) {
            r.factors.push_back(b.factors[j++]);
        } else {
            Factor f = a.factors[i];
            f.exp += b.factors[j].exp;
            if (f.exp != 0) r.factors.push_back(f);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::shifted(int k) const {
    Monomial r = *this;
    for (auto& f : r.factors) f.site += k;
    return r;
}

Monomial Monomial::dilated(int n) const {
    Monomial r = *this;
    for (auto& f : r.factors) f.site *= n;
    return r;
}

Monomial Monomial::inverted() const {
    Monomial r = *this;
    for (auto& f : r.factors) f.exp = -f.exp;
    return r;
}

DiffExpr DiffExpr::symbol(SymbolTablePtr tab, int sym, int site, int exp) {
    if (!tab || sym < 0 || sym >= tab->size())
        throw std::invalid_argument("DiffExpr::symbol: bad symbol id");
    DiffExpr e;
    e.tab_ = std::move(tab);
    if (exp != 0) e.terms_[Monomial{{Factor{sym, site, exp}}}] = Coefficient::one();
    return e;
}

DiffExpr DiffExpr::term(SymbolTablePtr tab, Monomial m, Coefficient c) {
    DiffExpr e;
    e.tab_ = std::move(tab);
    if (!c.is_zero()) e.terms_[std::move(m)] = std::move(c);
    return e;
}

void DiffExpr::add_term(const Monomial& m, const Coefficient& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SymbolTablePtr unify_tables(const DiffExpr& a, const DiffExpr& b) {
    if (!a.tab_) return b.tab_;
    if (!b.tab_) return a.tab_;
    if (a.tab_ != b.tab_)
        throw std::invalid_argument("expressions built over different symbol tables");
    return a.tab_;
}

DiffExpr operator+(const DiffExpr& a, const DiffExpr& b) {
    DiffExpr r;
    r.tab_ = unify_tables(a, b);
    r.terms_ = a.terms_;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

DiffExpr operator-(const DiffExpr& a, const DiffExpr& b) { return a + (-b); }

DiffExpr DiffExpr::operator-() const {
    DiffExpr r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

DiffExpr DiffExpr::scaled(const Coefficient& c) const {
    DiffExpr r;
    r.tab_ = tab_;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) {
        Coefficient p = v * c;
        if (!p.is_zero()) r.terms_.emplace(m, std::move(p));
    }
    return r;
}

DiffExpr operator*(const DiffExpr& a, const DiffExpr& b) {
    DiffExpr r;
    r.tab_ = unify_tables(a, b);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            r.add_term(Monomial::mul(ma, mb), ca * cb);
    return r;
}

DiffExpr shift(const DiffExpr& e, int k) {
    if (k == 0) return e;
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (const auto& [m, c] : e.terms()) r.add_term(m.shifted(k), c);
    return r;
}

DiffExpr dilate(const DiffExpr& e, int n) {
    if (n < 1) throw std::invalid_argument("dilate: n must be >= 1");
    if (n == 1) return e;
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (const auto& [m, c] : e.terms()) r.add_term(m.dilated(n), c);
    return r;
}

DiffExpr partial(const DiffExpr& e, int n) {
    DiffExpr acc = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    if (!e.table()) return acc;
    SymbolTable& tab = *e.table();
    for (const auto& [m, c] : e.terms()) {
        for (size_t i = 0; i < m.factors.size(); ++i) {
            const Factor& f = m.factors[i];
            if (f.site != n) continue;
            if (tab.sym(f.sym).kind == SymbolKind::ShiftConstant) continue;
            DiffExpr d = tab.derivative_expr(f.sym, n);
            if (d.is_zero()) continue;
            Monomial rest = m;
            if (f.exp == 1) {
                rest.factors.erase(rest.factors.begin() + static_cast<long>(i));
            } else {
                rest.factors[i].exp -= 1;
            }
            Coefficient cc = c * Coefficient::integer(f.exp);
            acc = acc + DiffExpr::term(e.table(), std::move(rest), std::move(cc)) * d;
        }
    }
    return acc;
}

DiffExpr pow(const DiffExpr& e, int k) {
    if (k == 0) return DiffExpr::constant(Coefficient::one(), e.table());
    if (k < 0) {
        if (e.num_terms() != 1)
            throw std::domain_error("pow: negative power of a multi-term expression");
        const auto& [m, c] = *e.terms().begin();
        Monomial inv = m.inverted();
        Coefficient ic = c.inverse();
        DiffExpr base = DiffExpr::term(e.table(), inv, ic);
        return pow(base, -k);
    }
    DiffExpr r = DiffExpr::constant(Coefficient::one(), e.table());
    for (int i = 0; i < k; ++i) r = r * e;
    return r;
}

DiffExpr divide_by_single_term(const DiffExpr& e, const DiffExpr& divisor) {
    if (divisor.num_terms() != 1)
        throw std::domain_error(
            "exact division is only defined for one-term divisors "
            "(inverting a sum is not available in this localization)");
    return e * pow(divisor, -1);
}

DiffExpr substitute_one(const DiffExpr& e, int sym) {
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (const auto& [m, c] : e.terms()) {
        Monomial kept;
        for (const Factor& f : m.factors)
            if (f.sym != sym) kept.factors.push_back(f);
        r.add_term(kept, c);
    }
    return r;
}

std::vector<int> partial_sites(const DiffExpr& e) {
    std::set<int> sites;
    if (!e.table()) return {};
    const SymbolTable& tab = *e.table();
    for (const auto& [m, c] : e.terms())
        for (const Factor& f : m.factors)
            if (tab.sym(f.sym).kind != SymbolKind::ShiftConstant) sites.insert(f.site);
    return {sites.begin(), sites.end()};
}

bool site_range(const DiffExpr& e, int& lo, int& hi) {
    bool any = false;
    for (const auto& [m, c] : e.terms())
        for (const Factor& f : m.factors) {
            if (!any) { lo = hi = f.site; any = true; }
            lo = std::min(lo, f.site);
            hi = std::max(hi, f.site);
        }
    return any;
}

}  // namespace mpva
