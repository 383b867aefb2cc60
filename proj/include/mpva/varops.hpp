#ifndef MPVA_VAROPS_HPP
#define MPVA_VAROPS_HPP

#include "mpva/hamops.hpp"

namespace mpva {

// Canonical representative of V/(S-1)V: every sited monomial shifted so its
// minimal site is 0; site-free monomials kept as-is.
struct Functional {
    DiffExpr repr;
    bool is_zero() const { return repr.is_zero(); }
    friend bool operator==(const Functional& a, const Functional& b) {
        return a.repr == b.repr;
    }
    friend bool operator!=(const Functional& a, const Functional& b) {
        return !(a == b);
    }
};

Functional to_functional(const DiffExpr& e);

// delta e / delta u = sum_n S^-n(de/du_n).
DiffExpr variational_derivative(const DiffExpr& e);

// D_e(S) = sum_n (de/du_n) S^n.
DiffOperator frechet(const DiffExpr& e);

// Closedness: D_xi(S) = D_xi(S)*; the residual operator is returned for
// diagnostics.
bool is_closed(const DiffExpr& xi, DiffOperator* residual = nullptr);

// xi == delta(int h)/delta u, exactly.
bool check_exact(const DiffExpr& h, const DiffExpr& xi);

// X_P(f) = sum_n S^n(P) df/du_n.
DiffExpr apply_evolutionary(const DiffExpr& p, const DiffExpr& f);

// [P, Q] = X_P(Q) - X_Q(P).
DiffExpr evolutionary_bracket(const DiffExpr& p, const DiffExpr& q);

// int (delta h/delta u) * P == 0.
bool is_integral_of_motion(const DiffExpr& h, const DiffExpr& p);

// {int f, int g} = int (delta g/delta u) H(S) (delta f/delta u).
Functional functional_bracket(const DiffOperator& h, const DiffExpr& f,
                              const DiffExpr& g);

}  // namespace mpva

#endif
