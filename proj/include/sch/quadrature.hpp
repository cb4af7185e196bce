#ifndef SCH_QUADRATURE_HPP
#define SCH_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "sch/common.hpp"

namespace sch {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct gl_rule {
    std::vector<double> x, w;
};

inline const gl_rule& gauss_legendre(int m) {
    static std::vector<gl_rule> cache(129);
    require(m >= 2 && m <= 128, "gauss_legendre: order out of range");
    gl_rule& r = cache[static_cast<std::size_t>(m)];
    if (!r.x.empty()) return r;
    r.x.resize(static_cast<std::size_t>(m));
    r.w.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = m * (x * p1 - p0) / (x * x - 1.0);
        r.x[static_cast<std::size_t>(i)] = x;
        r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

template <class F>
inline double gl_integrate(F&& f, double a, double b, int m = 64) {
    const gl_rule& r = gauss_legendre(m);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return half * acc;
}

namespace detail {
template <class F>
double adsimp(F& f, double a, double b, double fa, double fm, double fb, double whole,
              double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adsimp(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adsimp(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
inline double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adsimp(f, a, b, fa, fm, fb, whole, tol, depth);
}

namespace detail {

// int_0^x (cos t)^{-p} dt on [0, pi/2), p < 1.  The endpoint singularity is
// removed by tau = pi/2 - s^2 followed by s = r^{1/(2-2p)}, which flattens
// the weight s^{1-2p} exactly; the remaining factor is a bounded smooth-ish
// profile handled adaptively.
inline double cos_power_primitive(double p, double x) {
    require(p < 1.0, "cos_power_integral: exponent must satisfy p < 1");
    require(x >= 0.0 && x <= 0.5 * pi, "cos_power_primitive: x out of range");
    const double safe = 0.5 * pi - 0.45;
    auto direct = [p](double t) { return std::pow(std::cos(t), -p); };
    if (x <= safe) return adaptive_simpson(direct, 0.0, x, 1e-13);
    double acc = adaptive_simpson(direct, 0.0, safe, 1e-13);
    if (p <= 0.0) {
        // integrand bounded; no substitution needed
        return acc + adaptive_simpson(direct, safe, x, 1e-13);
    }
    // tau = pi/2 - s^2: integral over s in [s_x, s0], integrand 2 s (sin s^2)^{-p}
    const double s0 = std::sqrt(0.5 * pi - safe);
    const double sx = std::sqrt(0.5 * pi - x);
    const double beta = 1.0 / (2.0 - 2.0 * p);
    auto smooth = [p, beta](double r) {
        const double s2 = std::pow(r, 2.0 * beta);
        const double ratio = s2 > 1e-30 ? std::sin(s2) / s2 : 1.0;
        return 2.0 * beta * std::pow(ratio, -p);
    };
    const double r0 = std::pow(s0, 1.0 / beta);
    const double rx = std::pow(sx, 1.0 / beta);
    acc += adaptive_simpson(smooth, rx, r0, 1e-13);
    return acc;
}

}  // namespace detail

// I_p(t) = int_0^t |cos tau|^{-p} d tau for p < 1 (finite through the
// singularities), assembled from the quarter-period primitive by symmetry:
// |cos| is pi-periodic and even about every multiple of pi/2.
inline double cos_power_integral(double p, double t) {
    if (t < 0.0) return -cos_power_integral(p, -t);
    const double half = detail::cos_power_primitive(p, 0.5 * pi);
    const long long m = static_cast<long long>(std::floor(t / pi));
    const double s = t - static_cast<double>(m) * pi;  // in [0, pi)
    double tail;
    if (s <= 0.5 * pi)
        tail = detail::cos_power_primitive(p, s);
    else
        tail = 2.0 * half - detail::cos_power_primitive(p, pi - s);
    return 2.0 * half * static_cast<double>(m) + tail;
}

}  // namespace sch

#endif
