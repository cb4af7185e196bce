#ifndef SCH_GAUGE_HPP
#define SCH_GAUGE_HPP

#include "sch/chirpz.hpp"

namespace sch {

enum class BoostDirection { forward, inverse };

// Plane-oscillation change of variables: the forward map sends a solution u
// to
//   u_b(t, x) = u(t, x - xi0 sin t) * exp( i (x - (xi0/2) sin t) . xi0 cos t / eps ),
// which turns data f into f * exp(i x.xi0/eps) at t = 0.  The shift is done
// spectrally so non-lattice displacements are exact for band-limited fields.
inline Field gauge_boost(const Field& u, const std::array<double, 3>& xi0, double t,
                         BoostDirection dir = BoostDirection::forward) {
    const Grid& g = u.grid;
    const double eps = u.epsilon;
    double xi0_norm = 0.0;
    for (int a = 0; a < g.dim(); ++a) xi0_norm += xi0[a] * xi0[a];
    xi0_norm = std::sqrt(xi0_norm);
    require(xi0_norm / eps < g.nyquist(),
            "gauge_boost: |xi0|/epsilon exceeds the resolvable frequency band");

    const double s = std::sin(t), c = std::cos(t);
    std::array<double, 3> shift{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) shift[a] = xi0[a] * s;

    auto phase_at = [&](const std::array<int, 3>& j) {
        double dot = 0.0;
        for (int a = 0; a < g.dim(); ++a)
            dot += (g.x(j[a]) - 0.5 * xi0[a] * s) * xi0[a] * c;
        return dot / eps;
    };

    if (dir == BoostDirection::forward) {
        Field r = spectral_shift(u, shift);
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            r.values[idx] *= std::polar(1.0, phase_at(j));
        });
        return r;
    }
    Field w = u;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        w.values[idx] *= std::polar(1.0, -phase_at(j));
    });
    std::array<double, 3> back{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) back[a] = -shift[a];
    return spectral_shift(w, back);
}

}  // namespace sch

#endif
