#ifndef SCH_FIELD_HPP
#define SCH_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <functional>

#include "sch/grid.hpp"

namespace sch {

// Complex lattice function tagged with the semiclassical parameter and the
// simulation time.  Values are row-major with axis 0 slowest.  The discrete
// L^2 pairing carries the quadrature weight dx^n.
struct Field {
    Grid grid;
    cvector values;
    double epsilon = 1.0;
    double time = 0.0;

    Field() = default;
    Field(const Grid& g, double eps, double t = 0.0)
        : grid(g), values(g.size(), complexd(0.0, 0.0)), epsilon(eps), time(t) {
        require(eps > 0.0 && eps <= 1.0, "Field: epsilon must lie in (0, 1]");
    }

    std::size_t size() const { return values.size(); }

    static Field from_function(const Grid& g, double eps,
                               const std::function<complexd(const std::array<double, 3>&)>& f,
                               double t = 0.0) {
        Field u(g, eps, t);
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int a = 0; a < g.dim(); ++a) x[a] = g.x(j[a]);
            u.values[idx] = f(x);
        });
        return u;
    }

    bool all_finite() const {
        for (const auto& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline void require_same_grid(const Field& u, const Field& v, const char* what) {
    require(u.grid == v.grid, std::string(what) + ": fields live on different grids");
}

// <u, v> = dx^n * sum conj(u) v  (conjugate-linear in the first slot).
inline complexd inner_product(const Field& u, const Field& v) {
    require_same_grid(u, v, "inner_product");
    const double w = std::pow(u.grid.dx(), u.grid.dim());
    complexd acc(0.0, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u.values[i]) * v.values[i];
    return w * acc;
}

// L^p quadrature norm; p = infinity gives the max norm.
inline double lp_norm(const Field& u, double p) {
    require(p >= 1.0, "lp_norm: p must satisfy p >= 1");
    if (std::isinf(p)) return u.max_abs();
    const double w = std::pow(u.grid.dx(), u.grid.dim());
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& v : u.values) acc += std::norm(v);
        return std::sqrt(w * acc);
    }
    for (const auto& v : u.values) acc += std::pow(std::abs(v), p);
    return std::pow(w * acc, 1.0 / p);
}

inline double l2_norm(const Field& u) { return lp_norm(u, 2.0); }

inline double l2_distance(const Field& u, const Field& v) {
    require_same_grid(u, v, "l2_distance");
    const double w = std::pow(u.grid.dx(), u.grid.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::norm(u.values[i] - v.values[i]);
    return std::sqrt(w * acc);
}

// || x_a u ||^2 summed over axes.
inline double weighted_x_norm_sq(const Field& u) {
    const Grid& g = u.grid;
    const double w = std::pow(g.dx(), g.dim());
    double acc = 0.0;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double xa = g.x(j[a]);
            x2 += xa * xa;
        }
        acc += x2 * std::norm(u.values[idx]);
    });
    return w * acc;
}

// Fraction of the squared mass within `cells` lattice cells of the boundary
// (any axis).  Used by dilation/shift guards.
inline double boundary_mass_fraction(const Field& u, int cells = 2) {
    const Grid& g = u.grid;
    double edge = 0.0, total = 0.0;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        const double m = std::norm(u.values[idx]);
        total += m;
        for (int a = 0; a < g.dim(); ++a) {
            if (j[a] < cells || j[a] >= g.points_per_axis() - cells) {
                edge += m;
                break;
            }
        }
    });
    return total > 0.0 ? edge / total : 0.0;
}

inline Field operator*(const complexd& c, const Field& u) {
    Field r = u;
    for (auto& v : r.values) v *= c;
    return r;
}

inline Field operator-(const Field& u, const Field& v) {
    require_same_grid(u, v, "operator-");
    Field r = u;
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] -= v.values[i];
    return r;
}

inline Field operator+(const Field& u, const Field& v) {
    require_same_grid(u, v, "operator+");
    Field r = u;
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += v.values[i];
    return r;
}

}  // namespace sch

#endif
