#ifndef MPVA_EXPR_HPP
#define MPVA_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpva/scalars.hpp"

namespace mpva {

struct DepthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DiffExpr;
class SymbolTable;
using SymbolTablePtr = std::shared_ptr<SymbolTable>;

// How a function symbol differentiates with respect to its site variable.
enum class SymbolKind {
    Identity,       // the variable u itself; derivative 1
    Free,           // abstract g; derivative is a fresh free symbol g'
    Defined,        // derivative given by a template expression at site 0
    ShiftConstant,  // a in F with Sa != a; all u-derivatives vanish
};

struct FuncSymbol {
    std::string name;
    SymbolKind kind;
    int tower_parent = -1;  // Free towers: id of the symbol this one derives
    int tower_level = 0;
    std::shared_ptr<const DiffExpr> deriv_template;  // Defined only
};

// Append-only registry of function symbols. Lazy creation of free-derivative
// tower entries mutates the table, so share one table per computation and
// keep multi-threaded use read-only (or pre-generate the tower).
class SymbolTable : public std::enable_shared_from_this<SymbolTable> {
public:
    static SymbolTablePtr create(EpsSpec spec = EpsSpec::None) {
        auto t = SymbolTablePtr(new SymbolTable());
        t->eps_ = spec;
        t->tower_cap_ = default_tower_cap();
        return t;
    }

    // Process-wide default for the free-derivative cap (MPVA_TOWER_DEPTH).
    static int default_tower_cap();
    static void set_default_tower_cap(int cap);

    int add_identity(const std::string& name);
    int add_free(const std::string& name);
    int add_shift_constant(const std::string& name);
    int declare_defined(const std::string& name);
    void set_defined_template(int id, const DiffExpr& tmpl);

    int find(const std::string& name) const;
    // find() that materializes free-tower names like "g''" on demand.
    int resolve(const std::string& name);
    int derivative_symbol(int id);
    DiffExpr derivative_expr(int id, int site);

    const FuncSymbol& sym(int id) const { return syms_.at(static_cast<size_t>(id)); }
    int size() const { return static_cast<int>(syms_.size()); }

    EpsSpec eps() const { return eps_; }
    void set_eps(EpsSpec e) { eps_ = e; }
    int tower_cap() const { return tower_cap_; }
    void set_tower_cap(int cap) { tower_cap_ = cap; }

private:
    SymbolTable() = default;
    int add(FuncSymbol s);

    std::vector<FuncSymbol> syms_;
    std::map<std::string, int> by_name_;
    EpsSpec eps_ = EpsSpec::None;
    int tower_cap_ = 4;
};

// One factor phi(u_site)^exp inside a monomial; exp may be negative
// (localization at g, F, u).
struct Factor {
    int sym;
    int site;
    int exp;
    friend bool operator==(const Factor& a, const Factor& b) {
        return a.sym == b.sym && a.site == b.site && a.exp == b.exp;
    }
};

// Product of factors, kept sorted by (symbol id, site); no zero exponents.
struct Monomial {
    std::vector<Factor> factors;

    bool empty() const { return factors.empty(); }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors == b.factors;
    }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        size_t n = std::min(a.factors.size(), b.factors.size());
        for (size_t i = 0; i < n; ++i) {
            const Factor &x = a.factors[i], &y = b.factors[i];
            if (x.sym != y.sym) return x.sym < y.sym;
            if (x.site != y.site) return x.site < y.site;
            if (x.exp != y.exp) return x.exp < y.exp;
        }
        return a.factors.size() < b.factors.size();
    }

    static Monomial mul(const Monomial& a, const Monomial& b);
    Monomial shifted(int k) const;
    Monomial dilated(int n) const;
    Monomial inverted() const;  // negate all exponents
};

// Canonical sparse sum of Coefficient * Monomial over a shared symbol table.
// Values are immutable; every operation returns a fresh canonical expression.
class DiffExpr {
public:
    DiffExpr() = default;

    static DiffExpr zero() { return DiffExpr(); }
    static DiffExpr constant(Coefficient c, SymbolTablePtr tab = nullptr) {
        DiffExpr e;
        e.tab_ = std::move(tab);
        if (!c.is_zero()) e.terms_[Monomial{}] = std::move(c);
        return e;
    }
    static DiffExpr integer(long long v) { return constant(Coefficient::integer(v)); }
    static DiffExpr symbol(SymbolTablePtr tab, int sym, int site, int exp = 1);
    static DiffExpr term(SymbolTablePtr tab, Monomial m, Coefficient c);

    bool is_zero() const { return terms_.empty(); }
    size_t num_terms() const { return terms_.size(); }
    const std::map<Monomial, Coefficient>& terms() const { return terms_; }
    const SymbolTablePtr& table() const { return tab_; }

    friend DiffExpr operator+(const DiffExpr& a, const DiffExpr& b);
    friend DiffExpr operator-(const DiffExpr& a, const DiffExpr& b);
    friend DiffExpr operator*(const DiffExpr& a, const DiffExpr& b);
    DiffExpr operator-() const;
    DiffExpr scaled(const Coefficient& c) const;

    friend bool operator==(const DiffExpr& a, const DiffExpr& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const DiffExpr& a, const DiffExpr& b) { return !(a == b); }

    void add_term(const Monomial& m, const Coefficient& c);  // canonicalizing

private:
    SymbolTablePtr tab_;
    std::map<Monomial, Coefficient> terms_;

    friend SymbolTablePtr unify_tables(const DiffExpr& a, const DiffExpr& b);
};

SymbolTablePtr unify_tables(const DiffExpr& a, const DiffExpr& b);

// The shift automorphism S^k.
DiffExpr shift(const DiffExpr& e, int k);
// Partial derivative with respect to u_n, driven by per-symbol rules.
DiffExpr partial(const DiffExpr& e, int n);
// Site dilation u_k -> u_{n*k} (the n-stretch on expressions).
DiffExpr dilate(const DiffExpr& e, int n);
// Integer power; negative exponents require a single-term expression.
DiffExpr pow(const DiffExpr& e, int k);
// Exact division by a one-term expression such as 2*g(u).
DiffExpr divide_by_single_term(const DiffExpr& e, const DiffExpr& divisor);
// Replace every occurrence of a symbol (any site, any power) by 1.
DiffExpr substitute_one(const DiffExpr& e, int sym);

// Sites where the partial derivative can be nonzero.
std::vector<int> partial_sites(const DiffExpr& e);
// Smallest/largest site index present (ShiftConstant sites included);
// returns false when the expression has no sited factor.
bool site_range(const DiffExpr& e, int& lo, int& hi);

}  // namespace mpva

#endif
