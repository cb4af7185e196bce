#ifndef SCH_PROPAGATORS_HPP
#define SCH_PROPAGATORS_HPP

#include <optional>
#include <vector>

#include "sch/chirpz.hpp"
#include "sch/kernels.hpp"

namespace sch {

enum class Splitting { strang };

// Full parameter set of the semiclassical Hartree / Xalpha solve:
//   i eps u_t = -(eps^2/2) Lap u + (x^2/2) u
//               + eps^alpha (|x|^{-gamma} * |u|^2) u - eps^beta |u|^{2 sigma} u.
struct SolverConfig {
    double epsilon = 0.125;
    double alpha = 1.0;
    double gamma = 1.0;
    std::optional<double> beta;   // Xalpha local term, both set or neither
    std::optional<double> sigma;
    double dt = 1e-3;
    double t_end = pi;
    Splitting splitting = Splitting::strang;

    void validate(int dim) const {
        require(epsilon > 0.0 && epsilon <= 1.0, "SolverConfig: epsilon in (0,1]");
        require(alpha >= 1.0, "SolverConfig: alpha >= 1");
        require(gamma > 0.0, "SolverConfig: gamma > 0");
        require(beta.has_value() == sigma.has_value(),
                "SolverConfig: beta and sigma must be set together");
        if (beta) {
            require(*beta >= 1.0, "SolverConfig: beta >= 1");
            require(*sigma > 0.0 && *sigma < 2.0 / dim,
                    "SolverConfig: sigma in (0, 2/n)");
        }
        require(dt > 0.0 && t_end > 0.0, "SolverConfig: dt and t_end positive");
        // the x^2/(2 eps) phase is the stiffest term; keep the per-step
        // increment bounded
        require(dt <= epsilon / 4.0 + 1e-15, "SolverConfig: needs dt <= epsilon/4");
    }
};

namespace detail {

// exact identity for |s| < pi/2 (and (pi/2, pi) with the branch factor):
// U^eps(s) = V^eps(s) o exp(i eps tan(s) Lap / 2), where
// V^eps(s) phi = branch |cos s|^{-n/2} phi(x / cos s) exp(-i x^2 tan s/(2 eps)).
// This is the computation inside the paper-style profile lemma, used here as
// an exact propagator: the free factor is a lattice multiplier and the
// dilation is spectral.
inline Field harmonic_lens_route(const Field& u, double s) {
    const Grid& g = u.grid;
    const double eps = u.epsilon;
    const double c = std::cos(s), tn = std::tan(s);
    Field w = u;
    apply_xi_multiplier(w, [&](const std::array<double, 3>& xi) {
        double xi2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) xi2 += xi[a] * xi[a];
        return std::polar(1.0, -0.5 * eps * tn * xi2);
    });
    Field d = spectral_dilate(w, c);
    const double amp = std::pow(std::abs(c), -0.5 * g.dim());
    const double branch = (s > 0.5 * pi) ? -0.5 * pi * g.dim() : 0.0;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) x2 += g.x(j[a]) * g.x(j[a]);
        d.values[idx] *= amp * std::polar(1.0, -0.5 * x2 * tn / eps + branch);
    });
    return d;
}

// U^eps(pi/2): the exact focus zoom  e^{-i n pi/4} eps^{-n/2} (F u)(x/eps).
inline Field harmonic_focus_zoom(const Field& u) {
    const Grid& g = u.grid;
    const double eps = u.epsilon;
    Field z = fourier_at_scaled_points(u, 1.0 / eps);
    const complexd amp = std::pow(eps, -0.5 * g.dim()) *
                         std::polar(1.0, -0.25 * pi * g.dim());
    for (auto& v : z.values) v *= amp;
    return z;
}

}  // namespace detail

// Exact linear evolution U^eps(t) = e^{-i (t/(2 eps)) (-eps^2 Lap + x^2)}.
// t is reduced mod pi through U^eps(pi) = e^{-i n pi/2} parity; the residual
// is evaluated by the lens route away from the focus and by zoom-plus-lens
// near it (|cos| < 0.35, where the dilation degenerates).
inline Field mehler_apply(const Field& u, double t) {
    const Grid& g = u.grid;
    require(u.all_finite(), "mehler_apply: field not finite");
    if (boundary_mass_fraction(u, 2) > 1e-8)
        throw numerics_error("mehler_apply: state not resolvable (boundary mass)");
    const double norm_in = l2_norm(u);

    const double k = std::floor(t / pi);
    double tau = t - k * pi;
    if (tau >= pi) {  // floating point edge
        tau -= pi;
    }
    const long long kk = static_cast<long long>(k);

    Field w = u;
    if (kk != 0) {
        const double phase = -0.5 * pi * g.dim() * static_cast<double>(kk);
        const complexd ph = std::polar(1.0, phase);
        if (kk & 1) {  // parity
            Field p(g, u.epsilon, u.time);
            g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
                std::array<int, 3> jr{0, 0, 0};
                for (int a = 0; a < g.dim(); ++a)
                    jr[a] = (g.points_per_axis() - j[a]) % g.points_per_axis();
                p.values[g.index(jr)] = ph * w.values[idx];
            });
            // the j = 0 column maps to itself (x = -L has no mirror node);
            // fine for states with negligible boundary mass
            w = p;
        } else {
            for (auto& v : w.values) v *= ph;
        }
    }

    if (tau > 1e-14) {
        if (std::abs(std::cos(tau)) >= 0.35) {
            w = detail::harmonic_lens_route(w, tau);
        } else {
            w = detail::harmonic_lens_route(detail::harmonic_focus_zoom(w), tau - 0.5 * pi);
        }
        // dilation and zoom zero the out-of-range region; a unitary map that
        // lost mass there means the state did not fit the grid
        if (norm_in > 0.0 && std::abs(l2_norm(w) - norm_in) > 1e-7 * norm_in)
            throw numerics_error(
                "mehler_apply: state not resolvable after dilation (mass defect)");
    }
    w.time = u.time + t;
    return w;
}

// Free propagator U(t) = e^{i t Lap / 2}: multiplier e^{-i t |xi|^2 / 2}.
inline Field free_apply(const Field& psi, double t) {
    Field r = psi;
    apply_xi_multiplier(r, [&](const std::array<double, 3>& xi) {
        double xi2 = 0.0;
        for (int a = 0; a < psi.grid.dim(); ++a) xi2 += xi[a] * xi[a];
        return std::polar(1.0, -0.5 * t * xi2);
    });
    r.time = psi.time + t;
    return r;
}

namespace detail {

// multiply u by exp(-i dt_eff (x^2/2 + eps^alpha V_H - eps^beta |u|^{2 sigma}) / eps)
// with V_H built from the current density; exact because the density is
// invariant under the phase multiplication
inline void potential_stage(Field& u, const SolverConfig& cfg, const HartreeKernel& k,
                            double dt_eff) {
    const Grid& g = u.grid;
    const double eps = u.epsilon;
    Field vh = hartree_potential(k, u);
    const double ca = std::pow(eps, cfg.alpha);
    const double cb = cfg.beta ? std::pow(eps, *cfg.beta) : 0.0;
    const double sg = cfg.sigma ? *cfg.sigma : 0.0;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) x2 += g.x(j[a]) * g.x(j[a]);
        double w = 0.5 * x2 + ca * vh.values[idx].real();
        if (cb != 0.0) w -= cb * std::pow(std::norm(u.values[idx]), sg);
        u.values[idx] *= std::polar(1.0, -dt_eff * w / eps);
    });
}

inline void kinetic_stage(Field& u, double dt_eff) {
    const double eps = u.epsilon;
    apply_xi_multiplier(u, [&](const std::array<double, 3>& xi) {
        double xi2 = 0.0;
        for (int a = 0; a < u.grid.dim(); ++a) xi2 += xi[a] * xi[a];
        return std::polar(1.0, -0.5 * dt_eff * eps * xi2);
    });
}

inline void check_finite(const Field& u, const char* where) {
    const double m = u.max_abs();
    if (!std::isfinite(m))
        throw numerics_error(std::string(where) + ": state blew up (NaN/overflow), t=" +
                             std::to_string(u.time));
}

}  // namespace detail

// One Strang step: exact half potential flow, full kinetic multiplier, exact
// half potential flow.  Each substage is an L^2 isometry.
inline Field strang_step(const Field& u, const SolverConfig& cfg, const HartreeKernel& k) {
    cfg.validate(u.grid.dim());
    require(u.epsilon == cfg.epsilon, "strang_step: config epsilon differs from field");
    require(u.grid == k.grid, "strang_step: kernel grid mismatch");
    Field w = u;
    detail::potential_stage(w, cfg, k, 0.5 * cfg.dt);
    detail::kinetic_stage(w, cfg.dt);
    detail::potential_stage(w, cfg, k, 0.5 * cfg.dt);
    w.time = u.time + cfg.dt;
    detail::check_finite(w, "strang_step");
    return w;
}

// March to each snapshot with exact landing (shortened final substep).
// Interior full steps fuse the trailing and leading potential half-steps:
// the density is untouched by the phase stage, so the fused full-step
// potential is exactly the composition of the two halves.
inline std::vector<Field> evolve(const Field& f, const SolverConfig& cfg,
                                 const HartreeKernel& k, const std::vector<double>& snapshots) {
    cfg.validate(f.grid.dim());
    require(f.epsilon == cfg.epsilon, "evolve: config epsilon differs from field");
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        require(snapshots[i] >= 0.0 && snapshots[i] <= cfg.t_end + 1e-12,
                "evolve: snapshots must lie in [0, t_end]");
        if (i > 0)
            require(snapshots[i] > snapshots[i - 1], "evolve: snapshots must increase");
    }

    std::vector<Field> out;
    out.reserve(snapshots.size());
    Field u = f;
    double t = 0.0;
    long long steps_done = 0;

    for (double target : snapshots) {
        if (target <= t + 1e-13) {
            Field snap = u;
            snap.time = target;
            out.push_back(std::move(snap));
            continue;
        }
        // number of full dt steps that fit before the target
        const long long nfull =
            static_cast<long long>(std::floor((target - t) / cfg.dt + 1e-9));
        if (nfull > 0) {
            detail::potential_stage(u, cfg, k, 0.5 * cfg.dt);
            detail::kinetic_stage(u, cfg.dt);
            for (long long i = 1; i < nfull; ++i) {
                detail::potential_stage(u, cfg, k, cfg.dt);
                detail::kinetic_stage(u, cfg.dt);
                if ((i & 255) == 0) detail::check_finite(u, "evolve");
            }
            detail::potential_stage(u, cfg, k, 0.5 * cfg.dt);
            steps_done += nfull;
            t += static_cast<double>(nfull) * cfg.dt;
            if (std::abs(target - t) < 1e-12) t = target;
            u.time = t;
            detail::check_finite(u, "evolve");
        }
        const double rem = target - t;
        if (rem > 1e-13) {
            SolverConfig cshort = cfg;
            cshort.dt = rem;
            u = strang_step(u, cshort, k);
            t = target;
            u.time = t;
        }
        out.push_back(u);
    }
    (void)steps_done;
    return out;
}

}  // namespace sch

#endif
