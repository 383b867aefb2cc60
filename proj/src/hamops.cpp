#include "mpva/hamops.hpp"

#include <algorithm>

#include "mpva/parse.hpp"
#include "mpva/varops.hpp"

namespace mpva {

DiffOperator adjoint(const DiffOperator& a) {
    DiffOperator r;
    for (const auto& [n, f] : a.coeffs()) r.add(-n, shift(f, -n));
    return r;
}

DiffExpr apply_op(const DiffOperator& a, const DiffExpr& e) {
    DiffExpr r = DiffExpr::term(e.table(), Monomial{}, Coefficient());
    for (const auto& [k, f] : a.coeffs()) r = r + f * shift(e, k);
    return r;
}

bool is_skewadjoint(const DiffOperator& a) { return (a + adjoint(a)).is_zero(); }

DiffOperator structure_to_operator(const BracketStructure& st) {
    DiffOperator h;
    for (int k : st.mode_indices()) h.add(k, st.mode(k));
    return h;
}

BracketStructure operator_to_structure(const DiffOperator& h, SymbolTablePtr tab,
                                       const std::string& name) {
    DiffOperator res = h + adjoint(h);
    if (!res.is_zero())
        throw StructureError("operator is not skewadjoint; H + H* = " +
                             format_operator(res));
    int order = 0;
    for (const auto& [k, f] : h.coeffs()) order = std::max(order, k);
    if (order == 0) throw StructureError("operator has no positive S-degree");
    std::vector<DiffExpr> modes(static_cast<size_t>(order), DiffExpr::zero());
    for (const auto& [k, f] : h.coeffs())
        if (k > 0) modes[static_cast<size_t>(k) - 1] = f;
    return BracketStructure::normal_form(std::move(tab), name, std::move(modes));
}

DiffExpr hamiltonian_flow(const DiffOperator& h, const DiffExpr& density) {
    return apply_op(h, variational_derivative(density));
}

DiffExpr jacobi_operator_form(const DiffOperator& h, const DiffExpr& f,
                              const DiffExpr& g) {
    DiffExpr hf = apply_op(h, f);
    DiffExpr hg = apply_op(h, g);
    DiffExpr lhs = apply_op(h, apply_op(frechet(g), hf))              //  H D_G H F
                   + apply_op(h, apply_op(adjoint(frechet(hf)), g))   // +H D*_{HF} G
                   - apply_op(h, apply_op(frechet(f), hg))            // -H D_F H G
                   + apply_op(h, apply_op(adjoint(frechet(f)), hg));  // +H D*_F H G
    DiffExpr rhs = apply_op(frechet(hg), hf) - apply_op(frechet(hf), hg);
    return lhs - rhs;
}

std::vector<DiffExpr> kernel_probe(const std::map<int, Rational>& p,
                                   const std::vector<Monomial>& basis,
                                   const SymbolTablePtr& tab) {
    // expand ansatz by shifts staying inside the basis site range
    int lo = 0, hi = 0;
    bool any = false;
    for (const Monomial& m : basis)
        for (const Factor& f : m.factors) {
            if (!any) { lo = hi = f.site; any = true; }
            lo = std::min(lo, f.site);
            hi = std::max(hi, f.site);
        }
    std::vector<Monomial> ansatz;
    auto push_unique = [&](const Monomial& m) {
        if (std::find(ansatz.begin(), ansatz.end(), m) == ansatz.end())
            ansatz.push_back(m);
    };
    for (const Monomial& m : basis) {
        push_unique(m);
        if (m.empty()) continue;
        int mlo = m.factors.front().site, mhi = mlo;
        for (const Factor& f : m.factors) {
            mlo = std::min(mlo, f.site);
            mhi = std::max(mhi, f.site);
        }
        for (int k = lo - mlo; k <= hi - mhi; ++k)
            if (k != 0) push_unique(m.shifted(k));
    }

    // rows: image monomials of P(S) applied to each ansatz monomial
    std::map<Monomial, size_t> row_of;
    std::vector<std::vector<Rational>> cols;
    for (const Monomial& m : ansatz) {
        std::vector<std::pair<size_t, Rational>> entries;
        for (const auto& [k, coef] : p) {
            Monomial im = m.shifted(m.empty() ? 0 : k);
            auto [it, fresh] = row_of.try_emplace(im, row_of.size());
            entries.emplace_back(it->second, coef);
        }
        std::vector<Rational> col(row_of.size());
        for (auto& [r, v] : entries) {
            if (r >= col.size()) col.resize(row_of.size());
            col[r] = col[r] + v;
        }
        cols.push_back(std::move(col));
    }
    size_t rows = row_of.size(), ncols = cols.size();
    for (auto& c : cols) c.resize(rows);

    // Gaussian elimination for the null space of the rows x ncols matrix
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(ncols));
    for (size_t j = 0; j < ncols; ++j)
        for (size_t i = 0; i < rows; ++i) a[i][j] = cols[j][i];
    std::vector<long> pivot_col(rows, -1);
    size_t rank = 0;
    for (size_t j = 0; j < ncols && rank < rows; ++j) {
        size_t sel = rank;
        while (sel < rows && a[sel][j].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        Rational inv = a[rank][j].inverse();
        for (size_t jj = 0; jj < ncols; ++jj) a[rank][jj] = a[rank][jj] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][j].is_zero()) continue;
            Rational f = a[i][j];
            for (size_t jj = 0; jj < ncols; ++jj)
                a[i][jj] = a[i][jj] - f * a[rank][jj];
        }
        pivot_col[rank] = static_cast<long>(j);
        ++rank;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (size_t r = 0; r < rank; ++r) is_pivot[static_cast<size_t>(pivot_col[r])] = true;

    std::vector<DiffExpr> kernel;
    for (size_t j = 0; j < ncols; ++j) {
        if (is_pivot[j]) continue;
        DiffExpr v = DiffExpr::term(tab, ansatz[j], Coefficient::one());
        for (size_t r = 0; r < rank; ++r) {
            if (a[r][j].is_zero()) continue;
            v = v + DiffExpr::term(tab, ansatz[static_cast<size_t>(pivot_col[r])],
                                   Coefficient::rational(-a[r][j]));
        }
        kernel.push_back(v);
    }
    return kernel;
}

std::string format_operator(const DiffOperator& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
        const auto& [k, f] = *it;
        std::string fs = format_expr(f);
        bool neg = false;
        if (f.num_terms() == 1 && fs.size() && fs[0] == '-') {
            neg = true;
            fs = fs.substr(1);
        }
        if (f.num_terms() > 1) fs = "(" + fs + ")";
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        out += fs + "*S^" + std::to_string(k);
    }
    return out;
}

}  // namespace mpva
