#include "mpva/numsim.hpp"

#include <algorithm>

namespace mpva {

double Realization::value(double x) const {
    switch (kind) {
        case Kind::Identity: return x;
        case Kind::Power: {
            double p = 1;
            int e = k >= 0 ? k : -k;
            for (int i = 0; i < e; ++i) p *= x;
            if (k < 0) {
                if (x == 0) throw EvalError("realization: pole at 0");
                p = 1 / p;
            }
            return a * p;
        }
        case Kind::Log:
            if (x <= 0) throw EvalError("realization: log of non-positive value");
            return a * std::log(x);
        case Kind::Reciprocal:
            if (x == 0) throw EvalError("realization: reciprocal of zero");
            return a / x;
        case Kind::Constant: return a;
        case Kind::Affine: return a * x + b;
    }
    return 0;
}

Realization Realization::derivative() const {
    switch (kind) {
        case Kind::Identity: return constant(1);
        case Kind::Power:
            if (k == 0) return constant(0);
            return power(k - 1, a * k);
        case Kind::Log: return power(-1, a);
        case Kind::Reciprocal: return power(-2, -a);
        case Kind::Constant: return constant(0);
        case Kind::Affine: return constant(a);
    }
    return constant(0);
}

Realization SymbolBinding::resolve(const SymbolTable& tab, int sym) const {
    auto it = symbols.find(sym);
    if (it != symbols.end()) return it->second;
    const FuncSymbol& s = tab.sym(sym);
    if (s.kind == SymbolKind::Identity) return Realization::identity();
    if (s.tower_parent >= 0) return resolve(tab, s.tower_parent).derivative();
    throw EvalError("unbound symbol " + s.name);
}

bool binding_consistent(const SymbolTablePtr& tab, const SymbolBinding& bind,
                        double tol, int samples) {
    for (int id = 0; id < tab->size(); ++id) {
        const FuncSymbol& s = tab->sym(id);
        if (s.kind != SymbolKind::Defined || !s.deriv_template) continue;
        if (!bind.symbols.count(id)) continue;
        Realization phi = bind.resolve(*tab, id);
        Realization dphi = phi.derivative();
        LatticeState probe = LatticeState::constant(3, 1.0);
        for (int i = 0; i < samples; ++i) {
            double x = 0.5 + (1.0 * i) / (samples - 1);
            probe.values.assign(3, x);
            double lhs = dphi.value(x);
            double rhs = evaluate(*s.deriv_template, probe, 0, bind);
            if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs)))
                return false;
        }
    }
    return true;
}

double evaluate(const DiffExpr& e, const LatticeState& state, int site,
                const SymbolBinding& bind) {
    if (state.size < 3 && !e.is_zero() && e.table())
        throw EvalError("lattice size must be >= 3");
    double total = 0;
    const SymbolTablePtr& tab = e.table();
    for (const auto& [m, c] : e.terms()) {
        double t = c.eval(bind.params, bind.eps_value);
        for (const Factor& f : m.factors) {
            Realization r = bind.resolve(*tab, f.sym);
            double v = r.value(state.at(site + f.site));
            double p = 1;
            int ae = f.exp >= 0 ? f.exp : -f.exp;
            for (int i = 0; i < ae; ++i) p *= v;
            if (f.exp < 0) {
                if (p == 0) throw EvalError("evaluate: division by zero factor");
                p = 1 / p;
            }
            t *= p;
        }
        total += t;
    }
    return total;
}

double functional_value(const DiffExpr& h, const LatticeState& state,
                        const SymbolBinding& bind) {
    double total = 0;
    for (int i = 0; i < state.size; ++i) total += evaluate(h, state, i, bind);
    return total;
}

namespace {

std::vector<double> flow_rhs(const DiffExpr& p, const LatticeState& s,
                             const SymbolBinding& bind) {
    std::vector<double> d(static_cast<size_t>(s.size));
    for (int i = 0; i < s.size; ++i) d[static_cast<size_t>(i)] = evaluate(p, s, i, bind);
    return d;
}

void rk4_step(const DiffExpr& p, LatticeState& s, double dt,
              const SymbolBinding& bind) {
    size_t n = s.values.size();
    LatticeState tmp = s;
    std::vector<double> k1 = flow_rhs(p, s, bind);
    for (size_t i = 0; i < n; ++i) tmp.values[i] = s.values[i] + 0.5 * dt * k1[i];
    std::vector<double> k2 = flow_rhs(p, tmp, bind);
    for (size_t i = 0; i < n; ++i) tmp.values[i] = s.values[i] + 0.5 * dt * k2[i];
    std::vector<double> k3 = flow_rhs(p, tmp, bind);
    for (size_t i = 0; i < n; ++i) tmp.values[i] = s.values[i] + dt * k3[i];
    std::vector<double> k4 = flow_rhs(p, tmp, bind);
    for (size_t i = 0; i < n; ++i)
        s.values[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

}  // namespace

std::vector<LatticeState> integrate_flow(const DiffExpr& p, LatticeState state,
                                         double dt, int steps,
                                         const SymbolBinding& bind) {
    if (dt <= 0) throw EvalError("integrate_flow: dt must be positive");
    std::vector<LatticeState> traj;
    traj.reserve(static_cast<size_t>(steps) + 1);
    traj.push_back(state);
    for (int s = 0; s < steps; ++s) {
        rk4_step(p, state, dt, bind);
        for (double v : state.values)
            if (!std::isfinite(v))
                throw EvalError("trajectory blew up at step " + std::to_string(s + 1));
        traj.push_back(state);
    }
    return traj;
}

LatticeState integrate_to(const DiffExpr& p, LatticeState state, double dt,
                          int steps, const SymbolBinding& bind) {
    if (dt <= 0) throw EvalError("integrate_to: dt must be positive");
    for (int s = 0; s < steps; ++s) {
        rk4_step(p, state, dt, bind);
        for (double v : state.values)
            if (!std::isfinite(v))
                throw EvalError("trajectory blew up at step " + std::to_string(s + 1));
    }
    return state;
}

std::vector<DriftRow> conservation_report(const std::vector<NamedExpr>& flows,
                                          const std::vector<NamedExpr>& densities,
                                          const LatticeState& state, double dt,
                                          double t_final,
                                          const SymbolBinding& bind) {
    int steps = static_cast<int>(t_final / dt + 0.5);
    std::vector<DriftRow> rows;
    for (const NamedExpr& flow : flows) {
        LatticeState s = state;
        std::vector<double> h0;
        for (const NamedExpr& d : densities)
            h0.push_back(functional_value(d.expr, s, bind));
        std::vector<double> drift(densities.size(), 0.0);
        for (int step = 0; step < steps; ++step) {
            rk4_step(flow.expr, s, dt, bind);
            for (size_t di = 0; di < densities.size(); ++di) {
                double h = functional_value(densities[di].expr, s, bind);
                drift[di] = std::max(
                    drift[di], std::abs(h - h0[di]) / std::max(1.0, std::abs(h0[di])));
            }
        }
        for (size_t di = 0; di < densities.size(); ++di)
            rows.push_back({flow.name, densities[di].name, drift[di]});
    }
    return rows;
}

double commutativity_check(const DiffExpr& p, const DiffExpr& q,
                           const LatticeState& state, double t, double dt,
                           const SymbolBinding& bind) {
    if (t <= 0) throw EvalError("commutativity_check: t must be positive");
    int steps = std::max(1, static_cast<int>(t / dt + 0.5));
    LatticeState a = integrate_to(q, integrate_to(p, state, dt, steps, bind), dt,
                                  steps, bind);
    LatticeState b = integrate_to(p, integrate_to(q, state, dt, steps, bind), dt,
                                  steps, bind);
    double m = 0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

std::vector<double> seeded_uniform(unsigned long long seed, int count, double lo,
                                   double hi) {
    // xorshift64*: identical output on every platform
    unsigned long long x = seed ? seed : 0x9e3779b97f4a7c15ull;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        unsigned long long r = x * 0x2545f4914f6cdd1dull;
        double u = static_cast<double>(r >> 11) * (1.0 / 9007199254740992.0);
        out.push_back(lo + u * (hi - lo));
    }
    return out;
}

}  // namespace mpva
