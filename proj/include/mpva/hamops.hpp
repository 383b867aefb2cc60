#ifndef MPVA_HAMOPS_HPP
#define MPVA_HAMOPS_HPP

#include <map>
#include <vector>

#include "mpva/lambda.hpp"

namespace mpva {

// Laurent polynomial in the shift S with DiffExpr coefficients; the
// noncommutative product follows S o f = S(f) S.
class DiffOperator {
public:
    DiffOperator() = default;

    static DiffOperator zero() { return {}; }
    static DiffOperator identity() {
        DiffOperator a;
        a.add(0, DiffExpr::integer(1));
        return a;
    }
    // f * S^k as a one-term operator
    static DiffOperator monomial(const DiffExpr& f, int k) {
        DiffOperator a;
        a.add(k, f);
        return a;
    }

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
    const std::map<int, DiffExpr>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::vector<int> support() const {
        std::vector<int> s;
        for (const auto& [k, e] : coeffs_) s.push_back(k);
        return s;
    }

    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        DiffOperator r = a;
        for (const auto& [k, e] : b.coeffs_) r.add(k, e);
        return r;
    }
    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
        return a + (-b);
    }
    DiffOperator operator-() const {
        DiffOperator r = *this;
        for (auto& [k, e] : r.coeffs_) e = -e;
        return r;
    }
    // (f S^m) o (g S^n) = f S^m(g) S^{m+n}
    friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
        DiffOperator r;
        for (const auto& [m, f] : a.coeffs_)
            for (const auto& [n, g] : b.coeffs_) r.add(m + n, f * shift(g, m));
        return r;
    }
    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const DiffOperator& a, const DiffOperator& b) {
        return !(a == b);
    }

private:
    std::map<int, DiffExpr> coeffs_;
};

inline DiffOperator op_mul(const DiffOperator& a, const DiffOperator& b) { return a * b; }

// Anti-involution: f* = f, S* = S^-1, so (f S^n)* = S^-n(f) S^-n.
DiffOperator adjoint(const DiffOperator& a);

// A(e) = sum_k coeff_k * S^k(e).
DiffExpr apply_op(const DiffOperator& a, const DiffExpr& e);

bool is_skewadjoint(const DiffOperator& a);

// H(S) = sum_k f_k S^k over the structure's modes (induced negatives included).
DiffOperator structure_to_operator(const BracketStructure& st);

// Inverse of the above on skewadjoint operators; rejects anything else with
// the residual H + H* in the error message.
BracketStructure operator_to_structure(const DiffOperator& h, SymbolTablePtr tab,
                                       const std::string& name);

// du/dt = H(S) delta(int h)/delta u.
DiffExpr hamiltonian_flow(const DiffOperator& h, const DiffExpr& density);

// Scalar instance of the operator-form Jacobi identity; vanishes for all
// F, G exactly when the bracket of the operator satisfies Jacobi.
DiffExpr jacobi_operator_form(const DiffOperator& h, const DiffExpr& f,
                              const DiffExpr& g);

// Solve P(S) x = 0 for x in the span of the given monomials (expanded by
// shifts staying inside the basis site range). A falsification probe over a
// finite ansatz, not a kernel proof.
std::vector<DiffExpr> kernel_probe(const std::map<int, Rational>& p,
                                   const std::vector<Monomial>& basis,
                                   const SymbolTablePtr& tab);

std::string format_operator(const DiffOperator& a);

}  // namespace mpva

#endif
