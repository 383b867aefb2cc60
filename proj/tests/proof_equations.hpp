#ifndef MPVA_TESTS_PROOF_EQUATIONS_HPP
#define MPVA_TESTS_PROOF_EQUATIONS_HPP

// Transcriptions of the explicit order-2 and order-3 coefficient equations,
// used as independent oracles against jacobi_coefficient. The sign tables
// record each display's orientation relative to the raw residual; they are
// validated on generic structures with unconstrained free modes.

#include "mpva/lambda.hpp"

namespace mpva::test {

// A generic order-2 structure: f_1 = p(u)q(u_1), f_2 = r(u)s(u_1)w(u_2)
// with unrelated free symbols, so display identities are checked identically.
inline BracketStructure generic_order2() {
    auto tab = SymbolTable::create();
    tab->add_identity("u");
    DiffExpr p = DiffExpr::symbol(tab, tab->add_free("p"), 0);
    DiffExpr q = DiffExpr::symbol(tab, tab->add_free("q"), 1);
    DiffExpr r = DiffExpr::symbol(tab, tab->add_free("r"), 0);
    DiffExpr s = DiffExpr::symbol(tab, tab->add_free("s"), 1);
    DiffExpr w = DiffExpr::symbol(tab, tab->add_free("w"), 2);
    return BracketStructure::normal_form(tab, "generic-2", {p * q, r * s * w});
}

inline BracketStructure generic_order3() {
    auto tab = SymbolTable::create();
    tab->add_identity("u");
    auto f = [&](const char* n, int site) {
        return DiffExpr::symbol(tab, tab->add_free(n), site);
    };
    DiffExpr f1 = f("p", 0) * f("q", 1);
    DiffExpr f2 = f("r", 0) * f("s", 1) * f("w", 2);
    DiffExpr f3 = f("x", 0) * f("y", 1) * f("z", 2) * f("v", 3);
    return BracketStructure::normal_form(tab, "generic-3", {f1, f2, f3});
}

inline DiffExpr dmode(const BracketStructure& st, int k, int site) {
    return partial(st.mode(k), site);
}

// Order-2 proof equations, transcribed as displayed (LHS - RHS).
inline DiffExpr display_eq_order2(const BracketStructure& st, int which) {
    DiffExpr f1 = st.mode(1), f2 = st.mode(2);
    switch (which) {
        case 0:  // lambda^2 mu^4
            return f2 * shift(dmode(st, 2, 0), 2) - shift(f2, 2) * dmode(st, 2, 2);
        case 1:  // lambda^2 mu^3
            return shift(f1, 2) * dmode(st, 2, 2) + shift(f2, 1) * dmode(st, 2, 1) -
                   f2 * shift(dmode(st, 1, 0), 2);
        case 2:  // lambda mu^3
            return shift(f2, 1) * dmode(st, 1, 1) - f1 * shift(dmode(st, 2, 0), 1) -
                   f2 * shift(dmode(st, 2, 1), 1);
        case 3:  // lambda mu^2
            return shift(f1, 1) * dmode(st, 1, 1) + shift(f1, 1) * dmode(st, 2, 2) -
                   f1 * dmode(st, 2, 0) - f1 * shift(dmode(st, 1, 0), 1) +
                   f2 * dmode(st, 1, 0) - f2 * shift(dmode(st, 1, 1), 1);
    }
    return DiffExpr::zero();
}

// Order-3 proof equations (LHS - RHS), in the lambda^m mu^n order
// (3,6),(3,5),(3,4),(2,5),(2,4),(1,4),(1,3),(2,3),(1,2).
inline DiffExpr display_eq_order3(const BracketStructure& st, int which) {
    DiffExpr f1 = st.mode(1), f2 = st.mode(2), f3 = st.mode(3);
    auto S = [](const DiffExpr& e, int k) { return shift(e, k); };
    switch (which) {
        case 0:
            return S(f3, 3) * dmode(st, 3, 3) - f3 * S(dmode(st, 3, 0), 3);
        case 1:
            return S(f2, 3) * dmode(st, 3, 3) + S(f3, 2) * dmode(st, 3, 2) -
                   f3 * S(dmode(st, 2, 0), 3);
        case 2:
            return S(f1, 3) * dmode(st, 3, 3) + S(f2, 2) * dmode(st, 3, 2) +
                   S(f3, 1) * dmode(st, 3, 1) - f3 * S(dmode(st, 1, 0), 3);
        case 3:
            return S(f3, 2) * dmode(st, 2, 2) - f3 * S(dmode(st, 3, 1), 2) -
                   f2 * S(dmode(st, 3, 0), 2);
        case 4:
            return S(f2, 2) * dmode(st, 2, 2) + S(f3, 1) * dmode(st, 2, 1) -
                   f3 * S(dmode(st, 2, 1), 2) - f2 * S(dmode(st, 2, 0), 2);
        case 5:
            return S(f3, 1) * dmode(st, 1, 1) - f3 * S(dmode(st, 3, 2), 1) -
                   f2 * S(dmode(st, 3, 1), 1) - f1 * S(dmode(st, 3, 0), 1);
        case 6:
            return S(f2, 1) * dmode(st, 3, 3) + S(f1, 1) * dmode(st, 3, 2) -
                   f1 * dmode(st, 3, 0) + S(f2, 1) * dmode(st, 1, 1) +
                   f3 * dmode(st, 1, 0) - f3 * S(dmode(st, 2, 2), 1) -
                   f2 * S(dmode(st, 2, 1), 1) - f1 * S(dmode(st, 2, 0), 1);
        case 7:
            return S(f1, 2) * dmode(st, 3, 3) - S(f1, 1) * dmode(st, 3, 1) -
                   f2 * dmode(st, 3, 0) + S(f1, 2) * dmode(st, 2, 2) +
                   S(f2, 1) * dmode(st, 2, 1) + f3 * dmode(st, 2, 0) -
                   f3 * S(dmode(st, 1, 1), 2) - f2 * S(dmode(st, 1, 0), 2);
        case 8:
            return S(f1, 1) * dmode(st, 1, 1) + S(f1, 1) * dmode(st, 2, 2) -
                   f1 * dmode(st, 2, 0) - f1 * S(dmode(st, 1, 0), 1) +
                   f2 * dmode(st, 1, 0) - f2 * S(dmode(st, 1, 1), 1);
    }
    return DiffExpr::zero();
}

constexpr int kOrder2MN[4][2] = {{2, 4}, {2, 3}, {1, 3}, {1, 2}};
constexpr int kOrder2Sign[4] = {+1, -1, -1, -1};
constexpr int kOrder3MN[9][2] = {{3, 6}, {3, 5}, {3, 4}, {2, 5}, {2, 4},
                                 {1, 4}, {1, 3}, {2, 3}, {1, 2}};
constexpr int kOrder3Sign[9] = {-1, -1, -1, -1, -1, -1, -1, -1, -1};


}  // namespace mpva::test

#endif
