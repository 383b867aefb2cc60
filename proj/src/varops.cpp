#include "mpva/varops.hpp"

namespace mpva {

Functional to_functional(const DiffExpr& e) {
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (const auto& [m, c] : e.terms()) {
        if (m.empty()) {
            r.add_term(m, c);
            continue;
        }
        int lo = m.factors.front().site;
        for (const Factor& f : m.factors) lo = std::min(lo, f.site);
        r.add_term(m.shifted(-lo), c);
    }
    return Functional{r};
}

DiffExpr variational_derivative(const DiffExpr& e) {
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (int n : partial_sites(e)) r = r + shift(partial(e, n), -n);
    return r;
}

DiffOperator frechet(const DiffExpr& e) {
    DiffOperator d;
    for (int n : partial_sites(e)) d.add(n, partial(e, n));
    return d;
}

bool is_closed(const DiffExpr& xi, DiffOperator* residual) {
    DiffOperator d = frechet(xi);
    DiffOperator r = d - adjoint(d);
    if (residual) *residual = r;
    return r.is_zero();
}

bool check_exact(const DiffExpr& h, const DiffExpr& xi) {
    return (variational_derivative(h) - xi).is_zero();
}

DiffExpr apply_evolutionary(const DiffExpr& p, const DiffExpr& f) {
    DiffExpr r = DiffExpr::term(unify_tables(p, f), Monomial{}, Coefficient());
    for (int n : partial_sites(f)) r = r + shift(p, n) * partial(f, n);
    return r;
}

DiffExpr evolutionary_bracket(const DiffExpr& p, const DiffExpr& q) {
    return apply_evolutionary(p, q) - apply_evolutionary(q, p);
}

bool is_integral_of_motion(const DiffExpr& h, const DiffExpr& p) {
    return to_functional(variational_derivative(h) * p).is_zero();
}

Functional functional_bracket(const DiffOperator& h, const DiffExpr& f,
                              const DiffExpr& g) {
    return to_functional(variational_derivative(g) *
                         apply_op(h, variational_derivative(f)));
}

}  // namespace mpva
