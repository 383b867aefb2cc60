#ifndef MPVA_LAMBDA_HPP
#define MPVA_LAMBDA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mpva/expr.hpp"

namespace mpva {

// Laurent polynomial in lambda with DiffExpr coefficients.
class LambdaPoly {
public:
    void add(int k, const DiffExpr& e) {
        if (e.is_zero()) return;
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            coeffs_.emplace(k, e);
        } else {
            it->second = it->second + e;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }
    DiffExpr coeff(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? DiffExpr::zero() : it->second;
    }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, DiffExpr>& coeffs() const { return coeffs_; }
    friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

private:
    std::map<int, DiffExpr> coeffs_;
};

// Polynomial in lambda and mu; houses both sides of the Jacobi identity.
class BiLambdaPoly {
public:
    void add(int m, int n, const DiffExpr& e) {
        if (e.is_zero()) return;
        auto key = std::make_pair(m, n);
        auto it = coeffs_.find(key);
        if (it == coeffs_.end()) {
            coeffs_.emplace(key, e);
        } else {
            it->second = it->second + e;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }
    DiffExpr coeff(int m, int n) const {
        auto it = coeffs_.find({m, n});
        return it == coeffs_.end() ? DiffExpr::zero() : it->second;
    }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<std::pair<int, int>, DiffExpr>& coeffs() const { return coeffs_; }

private:
    std::map<std::pair<int, int>, DiffExpr> coeffs_;
};

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An order-N multiplicative lambda-bracket on the generator u, stored in
// skewsymmetry normal form: modes f_1..f_N with f_{-k} = -S^{-k} f_k induced.
// The raw constructor stores explicit modes of either sign and exists to
// build negative controls that violate skewsymmetry.
class BracketStructure {
public:
    static BracketStructure normal_form(SymbolTablePtr tab, std::string name,
                                        std::vector<DiffExpr> modes);
    static BracketStructure raw(SymbolTablePtr tab, std::string name,
                                std::map<int, DiffExpr> modes);

    int order() const { return order_; }
    bool is_raw() const { return raw_; }
    const std::string& name() const { return name_; }
    const SymbolTablePtr& table() const { return tab_; }
    EpsSpec eps() const { return tab_->eps(); }

    // f_k for any integer k (f_0 = 0; negative modes induced unless raw).
    DiffExpr mode(int k) const;
    // Indices with a nonzero mode, both signs.
    std::vector<int> mode_indices() const;

    // Replace mode k (k>0 for normal-form structures); used to build
    // perturbed negative controls.
    BracketStructure with_mode(int k, DiffExpr f, const std::string& new_name) const;

private:
    SymbolTablePtr tab_;
    std::string name_;
    int order_ = 0;
    bool raw_ = false;
    std::vector<DiffExpr> pos_;          // normal form: f_1..f_N
    std::map<int, DiffExpr> raw_modes_;  // raw only
};

// The master formula: {f_lambda g} from the generator bracket of st.
LambdaPoly master_bracket(const DiffExpr& f, const DiffExpr& g,
                          const BracketStructure& st);

// {g_lambda f} + (left-arrowed {f_{(S lambda)^-1} g}); zero iff skewsymmetry
// holds on the pair (f, g).
LambdaPoly skew_residual(const BracketStructure& st, const DiffExpr& f,
                         const DiffExpr& g);

// LHS - RHS of the Jacobi identity on the generator triple (u, u, u),
// as a polynomial in lambda and mu.
BiLambdaPoly jacobi_residual(const BracketStructure& st);

// Single (m, n) entry of the Jacobi residual.
DiffExpr jacobi_coefficient(const BracketStructure& st, int m, int n);

// [u_m, u_n] = S^n f_{m-n}.
DiffExpr site_bracket(const BracketStructure& st, int m, int n);

// JSON export / text-format import of a structure (symbol declarations,
// optional eps/name/order lines, and mode statements).
std::string structure_to_json(const BracketStructure& st);
BracketStructure load_structure(const std::string& text);

}  // namespace mpva

#endif
