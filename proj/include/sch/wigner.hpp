#ifndef SCH_WIGNER_HPP
#define SCH_WIGNER_HPP

#include "sch/fft.hpp"

namespace sch {

// Discrete Wigner transform
//   W(x, xi) = (2 pi)^{-n} int u(x - eps v/2) conj(u)(x + eps v/2) e^{i xi.v} dv
// on the v-lattice dv = 2 dx / eps, which makes the eps-fine samples
// u(x +- eps v/2) land exactly on lattice nodes (pure index arithmetic, the
// same exactness spectral modulation would give, at no cost).  x may be
// coarsened by a stride; xi may be binned (bin sums preserve the marginal).
struct WignerSlice {
    Grid grid_x;   // coarsened position lattice
    Grid grid_xi;  // frequency lattice of the v-window (possibly binned)
    rvector values;  // x-major, xi-block row-major inside
    double epsilon = 1.0;
    double time = 0.0;
    double max_imag_residue = 0.0;

    std::size_t xi_count() const { return grid_xi.size(); }
    double cell_x() const { return std::pow(grid_x.dx(), grid_x.dim()); }
    double cell_xi() const { return std::pow(grid_xi.dx(), grid_xi.dim()); }

    double integral() const {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc * cell_x() * cell_xi();
    }
};

// coarsen_x must divide N; v_window (power of two >= 16, <= N) controls the
// retained correlation range |eps v / 2| <= v_window/2 * dx; xi_bins <=
// v_window bins the frequency axis.  Defaults: v_window = min(N, 1024),
// xi_bins = min(v_window, 128) for n = 2, full for n = 1.
inline WignerSlice wigner_transform(const Field& u, int coarsen_x, int v_window = 0,
                                    int xi_bins = 0, std::size_t memory_budget_doubles =
                                                         (std::size_t(1) << 26)) {
    const Grid& g = u.grid;
    const int n = g.dim();
    const int N = g.points_per_axis();
    require(n <= 2, "wigner_transform: full slices only for n <= 2");
    require(coarsen_x >= 1 && N % coarsen_x == 0,
            "wigner_transform: coarsen_x must divide N");
    const int nx = N / coarsen_x;
    require(nx >= 16 && is_pow2(static_cast<std::size_t>(nx)),
            "wigner_transform: N / coarsen_x must be a power of two >= 16");

    int W = v_window > 0 ? v_window : std::min(N, 1024);
    W = std::min(W, N);
    require(is_pow2(static_cast<std::size_t>(W)) && W >= 16,
            "wigner_transform: v_window must be a power of two >= 16");
    int B = xi_bins > 0 ? xi_bins : (n == 1 ? W : std::min(W, 128));
    require(W % B == 0 && B >= 16, "wigner_transform: xi_bins must divide v_window");

    std::size_t need = 1;
    for (int a = 0; a < n; ++a) need *= static_cast<std::size_t>(nx) * static_cast<std::size_t>(B);
    if (need > memory_budget_doubles)
        throw numerics_error("wigner_transform: memory budget exceeded; raise coarsen_x");

    const double eps = u.epsilon;
    const double dv = 2.0 * g.dx() / eps;
    const double dxi_w = 2.0 * pi / (W * dv);  // = pi * eps / (W dx) * ... dual of v
    // xi-lattice of the window: half extent pi/dv = pi eps / (2 dx)
    Grid gx(n, nx, g.half_extent());
    Grid gxi(n, B, 0.5 * W * dxi_w);

    WignerSlice out;
    out.grid_x = gx;
    out.grid_xi = gxi;
    out.epsilon = eps;
    out.time = u.time;
    out.values.assign(gx.size() * gxi.size(), 0.0);

    const double pref = std::pow(dv / (2.0 * pi), n);
    const int bin = W / B;
    const double bin_avg = 1.0 / std::pow(static_cast<double>(bin), n);

    cvector corr(static_cast<std::size_t>(n == 1 ? W : W * W));
    const std::size_t xi_block = gxi.size();

    std::array<int, 3> jc{0, 0, 0};
    for (std::size_t xflat = 0; xflat < gx.size(); ++xflat) {
        // coarse index -> fine index
        std::array<int, 3> j = gx.unindex(xflat);
        for (int a = 0; a < n; ++a) jc[a] = j[a] * coarsen_x;

        // correlation over the centered v-window.  Out-of-box samples are
        // zero, not wrapped: periodic indexing would create the classic
        // ghost peak where the two wrapped points meet in the bulk, while
        // the true state is negligible beyond the box.
        if (n == 1) {
            for (int m = 0; m < W; ++m) {
                const int mm = m - W / 2;
                const int jm = jc[0] - mm, jp = jc[0] + mm;
                corr[static_cast<std::size_t>(m)] =
                    (jm < 0 || jm >= N || jp < 0 || jp >= N)
                        ? complexd(0.0, 0.0)
                        : u.values[static_cast<std::size_t>(jm)] *
                              std::conj(u.values[static_cast<std::size_t>(jp)]);
            }
        } else {
            std::size_t c = 0;
            for (int m0 = 0; m0 < W; ++m0) {
                const int mm0 = m0 - W / 2;
                const int jm0 = jc[0] - mm0, jp0 = jc[0] + mm0;
                const bool out0 = jm0 < 0 || jm0 >= N || jp0 < 0 || jp0 >= N;
                for (int m1 = 0; m1 < W; ++m1, ++c) {
                    const int mm1 = m1 - W / 2;
                    const int jm1 = jc[1] - mm1, jp1 = jc[1] + mm1;
                    corr[c] = (out0 || jm1 < 0 || jm1 >= N || jp1 < 0 || jp1 >= N)
                                  ? complexd(0.0, 0.0)
                                  : u.values[g.index({jm0, jm1, 0})] *
                                        std::conj(u.values[g.index({jp0, jp1, 0})]);
                }
            }
        }

        // +i transform over v: centered backward DFT with checkerboards
        detail::checkerboard(corr, n, W);
        detail::raw_dft(corr, n, W, FFTW_BACKWARD);
        detail::checkerboard(corr, n, W);

        // bin and store
        double* dst = out.values.data() + xflat * xi_block;
        double max_im = 0.0;
        if (n == 1) {
            for (int l = 0; l < W; ++l) {
                max_im = std::max(max_im, std::abs(corr[static_cast<std::size_t>(l)].imag()));
                dst[l / bin] += pref * corr[static_cast<std::size_t>(l)].real() * bin_avg;
            }
        } else {
            std::size_t c = 0;
            for (int l0 = 0; l0 < W; ++l0)
                for (int l1 = 0; l1 < W; ++l1, ++c) {
                    max_im = std::max(max_im, std::abs(corr[c].imag()));
                    dst[(l0 / bin) * B + (l1 / bin)] += pref * corr[c].real() * bin_avg;
                }
        }
        out.max_imag_residue = std::max(out.max_imag_residue, max_im * pref);
    }
    return out;
}

// Fraction of |W| mass within the classical ridge band.  Trajectories from
// position-concentrated data carry momentum xi = -x tan t, so the band is
// |xi + x tan t| <= band_width (Euclidean).
inline double concentration_metric(const WignerSlice& w, double t, double band_width) {
    double tm = std::fmod(t, pi);
    if (tm < 0.0) tm += pi;
    require(std::abs(tm - 0.5 * pi) >= 0.05,
            "concentration_metric: t within 0.05 of the focus");
    const double slope = std::tan(t);
    const Grid& gx = w.grid_x;
    const Grid& gxi = w.grid_xi;
    const int n = gx.dim();
    double in_band = 0.0, total = 0.0;
    const std::size_t xi_block = gxi.size();
    for (std::size_t xflat = 0; xflat < gx.size(); ++xflat) {
        std::array<int, 3> j = gx.unindex(xflat);
        const double* blk = w.values.data() + xflat * xi_block;
        gxi.for_each([&](std::size_t l, const std::array<int, 3>& kk) {
            double d2 = 0.0;
            for (int a = 0; a < n; ++a) {
                const double d = gxi.x(kk[a]) + gx.x(j[a]) * slope;
                d2 += d * d;
            }
            const double m = std::abs(blk[l]);
            total += m;
            if (d2 <= band_width * band_width) in_band += m;
        });
    }
    return total > 0.0 ? in_band / total : 0.0;
}

}  // namespace sch

#endif
