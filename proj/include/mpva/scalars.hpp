#ifndef MPVA_SCALARS_HPP
#define MPVA_SCALARS_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpva/rational.hpp"

namespace mpva {

struct IncompatibleFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The root-of-unity extensions the bracket catalog needs. Everything is a
// cyclotomic divisor, so irreducibility over Q holds by construction.
enum class EpsSpec {
    None,             // plain rationals, eps unavailable
    EpsPlus1,         // eps = -1
    Eps2Plus1,        // eps^2 = -1
    Eps2MinusEpsPlus1,// eps^2 = eps - 1   (primitive 6th root, eps^3 = -1)
    Eps2PlusEpsPlus1, // eps^2 = -eps - 1  (primitive 3rd root, eps^3 = 1)
};

inline int eps_degree(EpsSpec s) {
    switch (s) {
        case EpsSpec::None:
        case EpsSpec::EpsPlus1: return 1;
        default: return 2;
    }
}

inline std::string eps_spec_name(EpsSpec s) {
    switch (s) {
        case EpsSpec::None: return "none";
        case EpsSpec::EpsPlus1: return "eps+1";
        case EpsSpec::Eps2Plus1: return "eps^2+1";
        case EpsSpec::Eps2MinusEpsPlus1: return "eps^2-eps+1";
        case EpsSpec::Eps2PlusEpsPlus1: return "eps^2+eps+1";
    }
    return "?";
}

inline EpsSpec eps_spec_from_name(const std::string& s) {
    if (s == "none") return EpsSpec::None;
    if (s == "eps+1") return EpsSpec::EpsPlus1;
    if (s == "eps^2+1") return EpsSpec::Eps2Plus1;
    if (s == "eps^2-eps+1") return EpsSpec::Eps2MinusEpsPlus1;
    if (s == "eps^2+eps+1") return EpsSpec::Eps2PlusEpsPlus1;
    throw IncompatibleFieldError("unknown eps minimal polynomial: " + s);
}

namespace detail {
// For deg-2 specs, eps^2 = p*eps + q.
inline void eps_square_rule(EpsSpec s, Rational& p, Rational& q) {
    switch (s) {
        case EpsSpec::Eps2Plus1: p = 0; q = -1; break;
        case EpsSpec::Eps2MinusEpsPlus1: p = 1; q = -1; break;
        case EpsSpec::Eps2PlusEpsPlus1: p = -1; q = -1; break;
        default: throw std::logic_error("eps_square_rule: degree-1 spec");
    }
}
}  // namespace detail

// Element of Q[eps]/m(eps): c0 + c1*eps (c1 identically 0 for degree-1 specs).
struct EpsValue {
    Rational c0, c1;
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const EpsValue& o) const { return c0 == o.c0 && c1 == o.c1; }
};

// A parameter power product: sorted (name, exponent>0) pairs.
using ParamMono = std::vector<std::pair<std::string, int>>;

// Canonical multivariate polynomial over Q[eps]/m(eps) in free commuting
// parameters. Exact zero test; values are immutable after construction.
class Coefficient {
public:
    Coefficient() = default;

    static Coefficient rational(Rational r, EpsSpec spec = EpsSpec::None) {
        Coefficient c;
        c.spec_ = spec;
        if (!r.is_zero()) c.terms_[{}] = EpsValue{std::move(r), Rational(0)};
        return c;
    }
    static Coefficient integer(long long v, EpsSpec spec = EpsSpec::None) {
        return rational(Rational(v), spec);
    }
    static Coefficient one() { return integer(1); }
    static Coefficient param(const std::string& name, int exp = 1,
                             EpsSpec spec = EpsSpec::None) {
        if (exp <= 0) throw std::invalid_argument("parameter exponent must be positive");
        Coefficient c;
        c.spec_ = spec;
        c.terms_[ParamMono{{name, exp}}] = EpsValue{Rational(1), Rational(0)};
        return c;
    }
    static Coefficient eps(EpsSpec spec) { return eps_pow(spec, 1); }
    static Coefficient eps_pow(EpsSpec spec, int k) {
        if (spec == EpsSpec::None)
            throw IncompatibleFieldError("eps requested but no eps extension declared");
        Coefficient c;
        c.spec_ = spec;
        EpsValue v = eps_unit_pow(spec, k);
        if (!v.is_zero()) c.terms_[{}] = v;
        return c;
    }

    EpsSpec spec() const { return spec_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.empty() &&
               terms_.begin()->second.c0.is_one() && terms_.begin()->second.c1.is_zero();
    }
    // True when the value is a plain rational (possibly zero).
    bool is_rational(Rational* out = nullptr) const {
        if (terms_.empty()) {
            if (out) *out = Rational(0);
            return true;
        }
        if (terms_.size() == 1 && terms_.begin()->first.empty() &&
            terms_.begin()->second.c1.is_zero()) {
            if (out) *out = terms_.begin()->second.c0;
            return true;
        }
        return false;
    }
    size_t num_terms() const { return terms_.size(); }

    friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
        Coefficient r;
        r.spec_ = unify(a.spec_, b.spec_);
        r.terms_ = a.terms_;
        for (const auto& [mono, v] : b.terms_) {
            auto it = r.terms_.find(mono);
            if (it == r.terms_.end()) {
                r.terms_.emplace(mono, v);
            } else {
                it->second.c0 = it->second.c0 + v.c0;
                it->second.c1 = it->second.c1 + v.c1;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        return r;
    }
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
        return a + (-b);
    }
    Coefficient operator-() const {
        Coefficient r = *this;
        for (auto& [mono, v] : r.terms_) {
            v.c0 = -v.c0;
            v.c1 = -v.c1;
        }
        return r;
    }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        Coefficient r;
        r.spec_ = unify(a.spec_, b.spec_);
        for (const auto& [ma, va] : a.terms_)
            for (const auto& [mb, vb] : b.terms_) {
                ParamMono m = mul_mono(ma, mb);
                EpsValue v = eps_mul(r.spec_, va, vb);
                if (v.is_zero()) continue;
                auto it = r.terms_.find(m);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(std::move(m), v);
                } else {
                    it->second.c0 = it->second.c0 + v.c0;
                    it->second.c1 = it->second.c1 + v.c1;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        return r;
    }

    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        unify(a.spec_, b.spec_);  // raises on a genuine field mismatch
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    // Multiplicative inverse; defined for single-term, parameter-free values.
    Coefficient inverse() const {
        if (terms_.size() != 1 || !terms_.begin()->first.empty())
            throw std::domain_error("Coefficient: inverse only for parameter-free single terms");
        const EpsValue& v = terms_.begin()->second;
        Coefficient r;
        r.spec_ = spec_;
        if (v.c1.is_zero()) {
            r.terms_[{}] = EpsValue{v.c0.inverse(), Rational(0)};
            return r;
        }
        Rational p, q;
        detail::eps_square_rule(spec_, p, q);
        // (c0 + c1 e)(d0 + d1 e) = 1 with e^2 = p e + q
        Rational det = v.c0 * (v.c0 + p * v.c1) - q * v.c1 * v.c1;
        Rational d1 = -v.c1 / det;
        Rational d0 = (v.c0 + p * v.c1) / det;
        r.terms_[{}] = EpsValue{d0, d1};
        return r;
    }

    double eval(const std::map<std::string, double>& params, double eps_value) const;

    std::string to_string() const;
    // Printable as a bare product (single term, at most one eps power)?
    bool is_single_printable() const {
        return terms_.size() == 1 &&
               (terms_.begin()->second.c0.is_zero() || terms_.begin()->second.c1.is_zero());
    }
    // Leading sign for formatting single-term values.
    bool leading_negative() const {
        if (terms_.empty()) return false;
        const EpsValue& v = terms_.begin()->second;
        return v.c0.is_zero() ? v.c1.is_negative() : v.c0.is_negative();
    }

    const std::map<ParamMono, EpsValue>& terms() const { return terms_; }

    static EpsSpec unify(EpsSpec a, EpsSpec b) {
        if (a == b) return a;
        if (a == EpsSpec::None) return b;
        if (b == EpsSpec::None) return a;
        throw IncompatibleFieldError("coefficients over different eps extensions: " +
                                     eps_spec_name(a) + " vs " + eps_spec_name(b));
    }

private:
    EpsSpec spec_ = EpsSpec::None;
    std::map<ParamMono, EpsValue> terms_;

    static ParamMono mul_mono(const ParamMono& a, const ParamMono& b) {
        ParamMono r;
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                r.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                r.push_back(b[j++]);
            } else {
                r.emplace_back(a[i].first, a[i].second + b[j].second);
                ++i;
                ++j;
            }
        }
        return r;
    }

    static EpsValue eps_mul(EpsSpec spec, const EpsValue& a, const EpsValue& b) {
        EpsValue r;
        r.c0 = a.c0 * b.c0;
        r.c1 = a.c0 * b.c1 + a.c1 * b.c0;
        Rational e2 = a.c1 * b.c1;
        if (!e2.is_zero()) {
            Rational p, q;
            detail::eps_square_rule(spec, p, q);
            r.c0 = r.c0 + q * e2;
            r.c1 = r.c1 + p * e2;
        }
        return r;
    }

    static EpsValue eps_unit_pow(EpsSpec spec, int k) {
        if (spec == EpsSpec::EpsPlus1)
            return EpsValue{Rational((k % 2 == 0) ? 1 : -1), Rational(0)};
        EpsValue e{Rational(0), Rational(1)};
        if (k < 0) {
            // eps is a unit: eps^-1 from eps^(ord-1)
            EpsValue inv;
            switch (spec) {
                case EpsSpec::Eps2Plus1: inv = {Rational(0), Rational(-1)}; break;           // -eps
                case EpsSpec::Eps2MinusEpsPlus1: inv = {Rational(1), Rational(-1)}; break;   // 1-eps
                case EpsSpec::Eps2PlusEpsPlus1: inv = {Rational(-1), Rational(-1)}; break;   // -1-eps
                default: throw std::logic_error("eps_unit_pow");
            }
            e = inv;
            k = -k;
        }
        EpsValue acc{Rational(1), Rational(0)};
        for (int i = 0; i < k; ++i) acc = eps_mul(spec, acc, e);
        return acc;
    }
};

inline double Coefficient::eval(const std::map<std::string, double>& params,
                                double eps_value) const {
    double total = 0;
    for (const auto& [mono, v] : terms_) {
        double t = v.c0.to_double();
        if (!v.c1.is_zero()) {
            if (eps_value != eps_value)
                throw std::domain_error("Coefficient: eps value required for evaluation");
            t += v.c1.to_double() * eps_value;
        }
        for (const auto& [name, exp] : mono) {
            auto it = params.find(name);
            if (it == params.end())
                throw std::domain_error("Coefficient: unbound parameter " + name);
            double p = 1;
            for (int i = 0; i < exp; ++i) p *= it->second;
            t *= p;
        }
        total += t;
    }
    return total;
}

inline std::string Coefficient::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [mono, v] : terms_) {
        // split into up to two printed products: rational part and eps part
        for (int part = 0; part < 2; ++part) {
            const Rational& r = part == 0 ? v.c0 : v.c1;
            if (r.is_zero()) continue;
            Rational a = r;
            if (first) {
                if (a.is_negative()) { out += "-"; a = -a; }
                first = false;
            } else {
                if (a.is_negative()) { out += " - "; a = -a; }
                else out += " + ";
            }
            std::string prod;
            bool unit = a.is_one();
            if (!unit) prod = a.to_string();
            if (part == 1) {
                if (!prod.empty()) prod += "*";
                prod += "eps";
            }
            for (const auto& [name, exp] : mono) {
                if (!prod.empty()) prod += "*";
                prod += name;
                if (exp != 1) prod += "^" + std::to_string(exp);
            }
            if (prod.empty()) prod = "1";
            out += prod;
        }
    }
    return out;
}

}  // namespace mpva

#endif
