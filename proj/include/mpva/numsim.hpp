#ifndef MPVA_NUMSIM_HPP
#define MPVA_NUMSIM_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mpva/expr.hpp"

namespace mpva {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed family of numeric stand-ins for function symbols; derivatives stay
// inside the family, so free towers bind analytically.
struct Realization {
    enum class Kind { Identity, Power, Log, Reciprocal, Constant, Affine };
    Kind kind = Kind::Identity;
    double a = 1.0;  // scale (Constant: the value; Affine: slope)
    double b = 0.0;  // Affine offset
    int k = 1;       // Power exponent

    static Realization identity() { return {Kind::Identity, 1, 0, 1}; }
    static Realization power(int k, double scale = 1.0) {
        return {Kind::Power, scale, 0, k};
    }
    static Realization log(double scale = 1.0) { return {Kind::Log, scale, 0, 1}; }
    static Realization reciprocal(double scale = 1.0) {
        return {Kind::Reciprocal, scale, 0, 1};
    }
    static Realization constant(double v) { return {Kind::Constant, v, 0, 1}; }
    static Realization affine(double slope, double offset) {
        return {Kind::Affine, slope, offset, 1};
    }

    double value(double x) const;
    Realization derivative() const;
};

struct LatticeState {
    int size = 0;
    std::vector<double> values;  // periodic: u_{n mod M}

    static LatticeState constant(int m, double v) {
        return {m, std::vector<double>(static_cast<size_t>(m), v)};
    }
    double at(int site) const {
        int m = ((site % size) + size) % size;
        return values[static_cast<size_t>(m)];
    }
};

struct SymbolBinding {
    std::map<int, Realization> symbols;      // symbol id -> realization
    std::map<std::string, double> params;
    double eps_value = std::nan("");

    // Resolves free-tower derivatives analytically from the parent binding.
    Realization resolve(const SymbolTable& tab, int sym) const;
};

// |phi'(x) - template(x)| <= tol for every bound defined symbol, sampled on
// [0.5, 1.5]; identity and tower bindings are consistent by construction.
bool binding_consistent(const SymbolTablePtr& tab, const SymbolBinding& bind,
                        double tol = 1e-9, int samples = 100);

double evaluate(const DiffExpr& e, const LatticeState& state, int site,
                const SymbolBinding& bind);

double functional_value(const DiffExpr& h, const LatticeState& state,
                        const SymbolBinding& bind);

// Classical fixed-step RK4 applied sitewise to du/dt = P.
std::vector<LatticeState> integrate_flow(const DiffExpr& p, LatticeState state,
                                         double dt, int steps,
                                         const SymbolBinding& bind);
// Same integrator, final state only.
LatticeState integrate_to(const DiffExpr& p, LatticeState state, double dt,
                          int steps, const SymbolBinding& bind);

struct DriftRow {
    std::string flow, density;
    double drift = 0;
};

struct NamedExpr {
    std::string name;
    DiffExpr expr;
};

// max over the trajectory of |H(t) - H(0)| / max(1, |H(0)|) per pair.
std::vector<DriftRow> conservation_report(const std::vector<NamedExpr>& flows,
                                          const std::vector<NamedExpr>& densities,
                                          const LatticeState& state, double dt,
                                          double t_final, const SymbolBinding& bind);

// max-norm difference of (P for t, then Q for t) vs (Q then P).
double commutativity_check(const DiffExpr& p, const DiffExpr& q,
                           const LatticeState& state, double t, double dt,
                           const SymbolBinding& bind);

// Deterministic uniform values in [lo, hi] from a fixed seed.
std::vector<double> seeded_uniform(unsigned long long seed, int count, double lo,
                                   double hi);

}  // namespace mpva

#endif
