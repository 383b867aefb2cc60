#ifndef MPVA_LENARD_HPP
#define MPVA_LENARD_HPP

#include <string>
#include <vector>

#include "mpva/varops.hpp"

namespace mpva {

struct RecursionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PairRealization {
    Abstract,   // free g, defined F with g F' = F
    VolterraU,  // g = F = u
};

// The compatible operators K = g(g_1 S - g_-1 S^-1) and H2 (order 2), plus
// the factorization witness D with H2 = g (1 + S^-1) D.
struct LenardPair {
    SymbolTablePtr tab;
    PairRealization real = PairRealization::Abstract;
    DiffExpr g, F;   // g(u_0), F(u_0)
    DiffExpr h0;     // density with delta h0/delta u = 1/(2g)
    DiffOperator K, H2, D;
};

LenardPair make_pair(PairRealization real);

struct StepRecord {
    int j = 0;
    bool lemma71a = false;    // (1/2g) H2 xi_{j-1} = (S-1) A_j   (j >= 2)
    bool lemma72a = false;    // S(eta - zeta) = eta + zeta        (j >= 2)
    bool lenard = false;      // K xi_j = H2 xi_{j-1}              (j >= 1)
    bool closed = false;
    bool exact = false;
    std::string density_provenance;  // "explicit" (printed form) or "lax" (residue)
    int max_site = 0;
};

struct HierarchyState {
    LenardPair pair;
    std::vector<DiffExpr> xi;         // xi_0 .. xi_depth
    std::vector<DiffExpr> flows;      // P_j = H2 xi_j, j = 0 .. depth-1
    std::vector<DiffExpr> densities;  // h_0 .. h_depth
    std::vector<StepRecord> steps;    // one per xi
    bool all_ok() const;
};

// One recursion step: builds xi_N (N = current length) through the explicit
// A_N / eta_N / zeta_N construction and verifies the step identities.
DiffExpr lenard_step(HierarchyState& state);

HierarchyState run_hierarchy(PairRealization real, int depth);

// Gram matrix <xi_m, xi_n>_L = int (L xi_m) xi_n for L = K or H2.
std::vector<std::vector<Functional>> involution_matrix(const HierarchyState& state,
                                                       bool use_k);

// The Lax operator S + F(u) S^-1 over the pair's algebra.
DiffOperator lax_operator(const LenardPair& pair);

// (1/2N) Res L^{2N}: conjectural density for xi_N.
DiffExpr lax_residue_density(const LenardPair& pair, int n);

struct LaxFlowResult {
    DiffExpr dF;           // S^-1 coefficient of [(L^{2N+2})_+, L]
    bool support_ok = false;  // commutator supported on {S^-1} only
    DiffOperator commutator;
};
LaxFlowResult lax_flow(const LenardPair& pair, int n);

std::string hierarchy_report_json(const HierarchyState& state);

}  // namespace mpva

#endif
