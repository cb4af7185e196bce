#ifndef SCH_ASYMPTOTICS_HPP
#define SCH_ASYMPTOTICS_HPP

#include <functional>

#include "sch/observables.hpp"

namespace sch {

// Slowly-oscillating phase data for the g-corrected WKB profiles:
//   g(t, x) = -P(x) * I(t),  P = |x|^{-gamma} * |f|^2,
//   I(t) = int_0^t |cos tau|^{-gamma} d tau  (finite for gamma < 1).
struct PhaseTable {
    double gamma = 0.5;
    Field potential_P;

    double time_integral(double t) const { return cos_power_integral(gamma, t); }
};

inline PhaseTable build_phase_table(const Field& f, const HartreeKernel& k) {
    PhaseTable pt;
    pt.gamma = k.gamma;
    pt.potential_P = hartree_potential(k, f);
    return pt;
}

// g(t, .) as a real field; hard requirement gamma < 1 (otherwise the
// integral diverges through the focus and the long-range variant applies).
inline Field g_phase(const PhaseTable& pt, double t) {
    require(pt.gamma < 1.0, "g_phase: needs gamma < 1 (use the long-range phase)");
    Field g = pt.potential_P;
    const double it = pt.time_integral(t);
    for (auto& v : g.values) v = complexd(-v.real() * it, 0.0);
    return g;
}

// The leading-order linear profile
//   V^eps(t) phi = branch |cos t|^{-n/2} phi(x / cos t) e^{-i x^2 tan t/(2 eps)},
// branch = e^{-i n pi/2} for t in (pi/2, pi].  An L^2 isometry of phi.
inline Field vprofile_apply(const Field& phi, double t) {
    require(t >= 0.0 && t <= pi, "vprofile_apply: t must lie in [0, pi]");
    require(std::abs(t - 0.5 * pi) >= 0.05, "vprofile_apply: t inside the focus window");
    const Grid& g = phi.grid;
    const double eps = phi.epsilon;
    const double c = std::cos(t), tn = std::tan(t);
    const double norm_in = l2_norm(phi);

    Field d = spectral_dilate(phi, c);
    const double amp = std::pow(std::abs(c), -0.5 * g.dim());
    const double branch = (t > 0.5 * pi) ? -0.5 * pi * g.dim() : 0.0;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) x2 += g.x(j[a]) * g.x(j[a]);
        d.values[idx] *= amp * std::polar(1.0, -0.5 * x2 * tn / eps + branch);
    });
    if (norm_in > 0.0 && std::abs(l2_norm(d) - norm_in) > 1e-7 * norm_in)
        throw numerics_error("vprofile_apply: profile not resolvable (mass defect)");
    d.time = t;
    return d;
}

// WKB prediction with the nonlinear phase: V^eps(t)[ f e^{i g(t, .)} ], i.e.
// the phase is evaluated at the dilated argument.
inline Field wkb_profile(const Field& f, const PhaseTable& pt, double t) {
    Field h = f;
    Field g = g_phase(pt, t);
    for (std::size_t i = 0; i < h.size(); ++i)
        h.values[i] *= std::polar(1.0, g.values[i].real());
    return vprofile_apply(h, t);
}

// Type-erased scattering operator for focus predictions; `certified` mirrors
// the convergence certificate of the numerical S.
struct ScatteringHandle {
    std::function<Field(const Field&)> apply;  // one application of S
    bool certified = false;

    static ScatteringHandle identity() {
        ScatteringHandle h;
        h.apply = [](const Field& f) { return f; };
        h.certified = true;
        return h;
    }
};

// Focus-time prediction at t = pi/2 + k pi after k completed caustic
// crossings:
//   e^{-i n k pi/2} e^{-i n pi/4} eps^{-n/2} [ S^k F (f e^{i g(pi/2)}) ](x/eps).
// The e^{-i n pi/4} is the exact half-crossing phase of the linear zoom, so
// for k = 0, S = id, g = 0 this *equals* mehler_apply(f, pi/2).
inline Field focus_profile(const Field& f, const PhaseTable* pt, const ScatteringHandle& s,
                           int k, double eps) {
    require(k >= 0, "focus_profile: k must be >= 0");
    require(s.certified, "focus_profile: scattering handle lacks a convergence certificate");
    const Grid& g = f.grid;
    Field h = f;
    h.epsilon = eps;
    if (pt) {
        Field gp = g_phase(*pt, 0.5 * pi);
        for (std::size_t i = 0; i < h.size(); ++i)
            h.values[i] *= std::polar(1.0, gp.values[i].real());
    }
    if (k > 0) {
        Field ph = fourier_forward(h);
        ph.epsilon = 1.0;
        for (int i = 0; i < k; ++i) ph = s.apply(ph);
        ph.epsilon = eps;
        h = fourier_inverse(ph);
        h.epsilon = eps;
    }
    Field out = detail::harmonic_focus_zoom(h);
    const complexd maslov = std::polar(1.0, -0.5 * pi * g.dim() * static_cast<double>(k));
    for (auto& v : out.values) v *= maslov;
    out.time = 0.5 * pi + k * pi;
    return out;
}

// Outer prediction between focuses with j completed crossings (t in [0, pi],
// outside the focus window): V^eps(t)[ F^{-1} S^j F f ]; the V branch carries
// the Maslov factor for t > pi/2.
inline Field scattering_wkb_profile(const Field& f, double t, int j,
                                    const ScatteringHandle& s) {
    require(j >= 0, "scattering_wkb_profile: j must be >= 0");
    require(s.certified, "scattering_wkb_profile: uncertified scattering handle");
    Field h = f;
    if (j > 0) {
        Field ph = fourier_forward(h);
        const double eps = h.epsilon;
        ph.epsilon = 1.0;
        for (int i = 0; i < j; ++i) ph = s.apply(ph);
        ph.epsilon = eps;
        h = fourier_inverse(ph);
    }
    return vprofile_apply(h, t);
}

// Long-range (gamma = 1) logarithmic phase corrections; the underlying
// asymptotics is formal, so these are exploratory diagnostics:
//   before the focus: g^eps(t,x) = (|x|^{-1} * |f|^2)(x) log(cos t / eps),
//   after:            h^eps(t,x) = -(|x|^{-1} * |p|^2)(x) log(|cos t| / eps)
// with p the supplied after-focus profile.
inline Field longrange_phase(const Field& f, double t, double eps,
                             const Field* after_focus_profile = nullptr) {
    const Grid& g = f.grid;
    HartreeKernel k = build_kernel(g, 1.0);
    if (after_focus_profile == nullptr) {
        require(t >= 0.0 && t < 0.5 * pi, "longrange_phase: need 0 <= t < pi/2");
        const double arg = std::cos(t) / eps;
        require(arg > 0.0, "longrange_phase: log argument must be positive");
        Field p = hartree_potential(k, f);
        const double lg = std::log(arg);
        for (auto& v : p.values) v = complexd(v.real() * lg, 0.0);
        return p;
    }
    require(t > 0.5 * pi, "longrange_phase: after-focus phase needs t > pi/2");
    const double arg = std::abs(std::cos(t)) / eps;
    require(arg > 0.0, "longrange_phase: log argument must be positive");
    Field p = hartree_potential(k, *after_focus_profile);
    const double lg = std::log(arg);
    for (auto& v : p.values) v = complexd(-v.real() * lg, 0.0);
    return p;
}

// Global phase of u against a reference with matching modulus: the Maslov
// index extractor.  arg <ref, u> in (-pi, pi].
inline double maslov_extract(const Field& u, const Field& reference) {
    const double nref = l2_norm(reference);
    require(nref > 0.0, "maslov_extract: reference must be nonzero");
    require_same_grid(u, reference, "maslov_extract");
    double dist2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = std::abs(u.values[i]) - std::abs(reference.values[i]);
        dist2 += d * d;
    }
    dist2 *= std::pow(u.grid.dx(), u.grid.dim());
    require(std::sqrt(dist2) / nref <= 0.2,
            "maslov_extract: moduli too dissimilar for a phase comparison");
    const complexd ip = inner_product(reference, u);
    require(std::abs(ip) >= 0.1 * nref * l2_norm(u),
            "maslov_extract: states nearly orthogonal");
    return std::arg(ip);
}

}  // namespace sch

#endif
