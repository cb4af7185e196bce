#ifndef SCH_OBSERVABLES_HPP
#define SCH_OBSERVABLES_HPP

#include "sch/propagators.hpp"

namespace sch {

inline double mass(const Field& u) { return l2_norm(u); }

// Conserved energy of the Hartree / Xalpha flow:
//   (1/2)||eps grad u||^2 + (1/2)||x u||^2
//   + (eps^alpha/2) int (K * |u|^2) |u|^2  -  eps^beta/(sigma+1) int |u|^{2 sigma + 2}.
inline double energy(const Field& u, const SolverConfig& cfg, const HartreeKernel& k) {
    require(u.grid == k.grid, "energy: kernel grid mismatch");
    const double eps = u.epsilon;
    const double w = std::pow(u.grid.dx(), u.grid.dim());
    double e = 0.5 * eps * eps * gradient_norm_sq(u) + 0.5 * weighted_x_norm_sq(u);

    Field vh = hartree_potential(k, u);
    double hart = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) hart += vh.values[i].real() * std::norm(u.values[i]);
    e += 0.5 * std::pow(eps, cfg.alpha) * w * hart;

    if (cfg.beta) {
        double loc = 0.0;
        const double sg = *cfg.sigma;
        for (const auto& v : u.values) loc += std::pow(std::norm(v), sg + 1.0);
        e -= std::pow(eps, *cfg.beta) / (sg + 1.0) * w * loc;
    }
    return e;
}

enum class Heisenberg { J, H };

// One component of the Heisenberg observables
//   J^eps(t) = (x/eps) sin t - i cos t grad,   H^eps(t) = x cos t + i eps sin t grad,
// gradient spectral.  They are the conjugated gradient / position operators
// of the exact flow, so their norms of a linear solution are constant.
inline Field jh_apply(const Field& u, Heisenberg which, double t, int axis) {
    const Grid& g = u.grid;
    require(axis >= 0 && axis < g.dim(), "jh_apply: bad axis");
    const double eps = u.epsilon;
    const double s = std::sin(t), c = std::cos(t);
    Field du = derivative(u, axis);
    Field r(g, eps, u.time);
    if (which == Heisenberg::J) {
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            r.values[idx] = (g.x(j[axis]) / eps) * s * u.values[idx] -
                            complexd(0.0, 1.0) * c * du.values[idx];
        });
    } else {
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            r.values[idx] = g.x(j[axis]) * c * u.values[idx] +
                            complexd(0.0, eps) * s * du.values[idx];
        });
    }
    return r;
}

inline double jh_norm(const Field& u, Heisenberg which, double t) {
    double acc = 0.0;
    for (int a = 0; a < u.grid.dim(); ++a) {
        const double na = l2_norm(jh_apply(u, which, t, a));
        acc += na * na;
    }
    return std::sqrt(acc);
}

// || J (u - v) ||-style weighted distances used by the error tables
inline double jh_distance(const Field& u, const Field& v, Heisenberg which, double t) {
    return jh_norm(u - v, which, t);
}

inline double admissible_delta(int dim, double r) { return dim * (0.5 - 1.0 / r); }

// Modified Gagliardo-Nirenberg monitor: returns the constant
//   C = ||u||_r |cos t|^{delta(r)} / ( ||u||_2^{1-delta} ||J(t)u||_2^{delta} ),
// which the inequality bounds uniformly in eps and t.
inline double sobolev_monitor(const Field& u, double t, double r) {
    const double d = admissible_delta(u.grid.dim(), r);
    require(d > 0.0 && d < 1.0, "sobolev_monitor: r outside the admissible range");
    const double lr = lp_norm(u, r);
    const double l2 = l2_norm(u);
    const double jn = jh_norm(u, Heisenberg::J, t);
    return lr * std::pow(std::abs(std::cos(t)), d) /
           (std::pow(l2, 1.0 - d) * std::pow(jn, d));
}

}  // namespace sch

#endif
