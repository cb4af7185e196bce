#ifndef SCH_CLASSIFY_HPP
#define SCH_CLASSIFY_HPP

#include <optional>
#include <string>

#include "sch/common.hpp"

namespace sch {

// Exact rational parameter (the regime tables are about exact criticality;
// config values like "3/2" stay exact through the classifier).
struct Rational {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const {
        return static_cast<long long>(num) * o.den == static_cast<long long>(o.num) * den;
    }
    static std::optional<Rational> parse(const std::string& s) {
        const auto slash = s.find('/');
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                // integers only: "2" is exact, "1.5" is not
                const long long v = std::stoll(s, &used);
                if (used != s.size()) return std::nullopt;
                return Rational{v, 1};
            }
            const long long n = std::stoll(s.substr(0, slash), &used);
            if (used != slash) return std::nullopt;
            const long long d = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1 || d == 0) return std::nullopt;
            return Rational{n, d};
        } catch (...) {
            return std::nullopt;
        }
    }
};

enum class WkbRegime { Linear, Nonlinear };
enum class FocusRegime { Linear, Nonlinear };

struct RegimeLabel {
    WkbRegime wkb = WkbRegime::Linear;
    FocusRegime focus = FocusRegime::Linear;

    std::string str() const {
        std::string s = wkb == WkbRegime::Linear ? "Linear WKB" : "Nonlinear WKB";
        s += focus == FocusRegime::Linear ? ", linear focus" : ", nonlinear focus";
        return s;
    }
    bool operator==(const RegimeLabel& o) const { return wkb == o.wkb && focus == o.focus; }
};

namespace detail {
inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
}

// Regime tables: WKB is nonlinear iff alpha = 1 (or beta = 1 when the local
// term is present); the focus is nonlinear iff alpha = gamma (or beta =
// sigma n).  Double inputs compare with tolerance 1e-12.
inline RegimeLabel classify_regime(double alpha, double gamma, std::optional<double> beta,
                                   std::optional<double> sigma, int n,
                                   double tol = 1e-12) {
    require(alpha >= 1.0 - tol, "classify_regime: alpha >= 1 required");
    require(gamma > 0.0, "classify_regime: gamma > 0 required");
    require(beta.has_value() == sigma.has_value(),
            "classify_regime: beta and sigma must be supplied together");
    if (beta) {
        require(*beta >= 1.0 - tol, "classify_regime: beta >= 1 required");
        require(*sigma > 0.0 && *sigma < 2.0 / n, "classify_regime: sigma in (0, 2/n)");
    }
    RegimeLabel lbl;
    const bool wkb_nl = detail::near(alpha, 1.0, tol) || (beta && detail::near(*beta, 1.0, tol));
    const bool focus_nl = detail::near(alpha, gamma, tol) ||
                          (beta && detail::near(*beta, *sigma * n, tol));
    lbl.wkb = wkb_nl ? WkbRegime::Nonlinear : WkbRegime::Linear;
    lbl.focus = focus_nl ? FocusRegime::Nonlinear : FocusRegime::Linear;
    return lbl;
}

// Exact-rational variant: equality is exact integer arithmetic.
inline RegimeLabel classify_regime(const Rational& alpha, const Rational& gamma,
                                   std::optional<Rational> beta, std::optional<Rational> sigma,
                                   int n) {
    require(alpha.value() >= 1.0, "classify_regime: alpha >= 1 required");
    require(gamma.value() > 0.0, "classify_regime: gamma > 0 required");
    require(beta.has_value() == sigma.has_value(),
            "classify_regime: beta and sigma must be supplied together");
    if (beta) {
        require(beta->value() >= 1.0, "classify_regime: beta >= 1 required");
        require(sigma->value() > 0.0 && sigma->value() < 2.0 / n,
                "classify_regime: sigma in (0, 2/n)");
    }
    RegimeLabel lbl;
    const Rational one{1, 1};
    bool wkb_nl = alpha == one || (beta && *beta == one);
    bool focus_nl = alpha == gamma;
    if (beta) {
        const Rational sn{sigma->num * n, sigma->den};
        focus_nl = focus_nl || (*beta == sn);
    }
    lbl.wkb = wkb_nl ? WkbRegime::Nonlinear : WkbRegime::Linear;
    lbl.focus = focus_nl ? FocusRegime::Nonlinear : FocusRegime::Linear;
    return lbl;
}

}  // namespace sch

#endif
