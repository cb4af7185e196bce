#ifndef SCH_PROFILES_HPP
#define SCH_PROFILES_HPP

#include "sch/field.hpp"

namespace sch {

// Named analytic initial profiles.  All are normalized to unit L^2 mass on
// the continuum; `scale` rescales afterwards (small-data experiments).
struct ProfileSpec {
    enum class Kind { gaussian_iso, gaussian_aniso, gaussian_poly };
    Kind kind = Kind::gaussian_iso;
    double width = 1.0;                       // isotropic width
    std::array<double, 3> widths{1.0, 1.0, 1.0};  // anisotropic widths
    double poly_coeff = 0.5;                  // for gaussian_poly
    double scale = 1.0;
};

inline Field make_profile(const Grid& g, double eps, const ProfileSpec& spec) {
    const int n = g.dim();
    Field u(g, eps);
    switch (spec.kind) {
        case ProfileSpec::Kind::gaussian_iso: {
            const double w = spec.width;
            const double amp = std::pow(pi * w * w, -0.25 * n);
            u = Field::from_function(g, eps, [&](const std::array<double, 3>& x) {
                double r2 = 0.0;
                for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
                return complexd(amp * std::exp(-0.5 * r2 / (w * w)), 0.0);
            });
            break;
        }
        case ProfileSpec::Kind::gaussian_aniso: {
            double amp = 1.0;
            for (int a = 0; a < n; ++a) amp *= std::pow(pi * spec.widths[a] * spec.widths[a], -0.25);
            u = Field::from_function(g, eps, [&](const std::array<double, 3>& x) {
                double arg = 0.0;
                for (int a = 0; a < n; ++a)
                    arg += 0.5 * x[a] * x[a] / (spec.widths[a] * spec.widths[a]);
                return complexd(amp * std::exp(-arg), 0.0);
            });
            break;
        }
        case ProfileSpec::Kind::gaussian_poly: {
            // even polynomial envelope gives a non-Gaussian focus profile,
            // so F S F^{-1} acts nontrivially
            const double w = spec.width, c = spec.poly_coeff;
            u = Field::from_function(g, eps, [&](const std::array<double, 3>& x) {
                double r2 = 0.0;
                for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
                return complexd((1.0 + c * r2 / (w * w)) * std::exp(-0.5 * r2 / (w * w)), 0.0);
            });
            const double nrm = l2_norm(u);
            for (auto& v : u.values) v /= nrm;
            break;
        }
    }
    if (spec.scale != 1.0)
        for (auto& v : u.values) v *= spec.scale;
    return u;
}

}  // namespace sch

#endif
