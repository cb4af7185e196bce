#ifndef SCH_CHIRPZ_HPP
#define SCH_CHIRPZ_HPP

#include "sch/fft.hpp"

namespace sch {

// Uniformly spaced evaluation points y_k = first + k * step, k = 0..count-1.
struct ScaledTarget {
    double first = 0.0;
    double step = 0.0;
    int count = 0;
};

namespace detail {

// Bluestein chirp-z:
//   S_k = sum_{j=0}^{n-1} a_j exp( sgn*i * (j - j0) * (theta0 + k*delta) ),
// k = 0..m-1, arbitrary real theta0/delta.  With 2jk = j^2 + k^2 - (j-k)^2,
//   S_k = P_k * sum_j d_j e_{k-j},
//   d_j = a_j exp(sgn*i*((j-j0)*theta0 + j^2*delta/2)),
//   e_m = exp(-sgn*i*m^2*delta/2),
//   P_k = exp(sgn*i*(k^2*delta/2 - j0*k*delta)),
// a linear convolution done with zero-padded FFTs of length p >= n+m-1.
class chirp_z {
  public:
    chirp_z(int n_in, int m_out, double delta, int sgn)
        : n_(n_in), m_(m_out), delta_(delta), sgn_(sgn) {
        p_ = static_cast<int>(next_pow2(static_cast<std::size_t>(n_ + m_ - 1)));
        kernel_hat_.assign(static_cast<std::size_t>(p_), complexd(0.0, 0.0));
        for (int m = -(n_ - 1); m <= m_ - 1; ++m) {
            const double phase = 0.5 * delta_ * static_cast<double>(m) * static_cast<double>(m);
            const int slot = (m % p_ + p_) % p_;
            kernel_hat_[static_cast<std::size_t>(slot)] = std::polar(1.0, -sgn_ * phase);
        }
        raw_dft(kernel_hat_, 1, p_, FFTW_FORWARD);
        work_.assign(static_cast<std::size_t>(p_), complexd(0.0, 0.0));
    }

    void run(const complexd* in, complexd* out, double j0, double theta0) {
        for (int j = 0; j < n_; ++j) {
            const double jd = static_cast<double>(j);
            const double phase = (jd - j0) * theta0 + 0.5 * delta_ * jd * jd;
            work_[static_cast<std::size_t>(j)] = in[j] * std::polar(1.0, sgn_ * phase);
        }
        std::fill(work_.begin() + n_, work_.end(), complexd(0.0, 0.0));
        raw_dft(work_, 1, p_, FFTW_FORWARD);
        for (int i = 0; i < p_; ++i)
            work_[static_cast<std::size_t>(i)] *= kernel_hat_[static_cast<std::size_t>(i)];
        raw_dft(work_, 1, p_, FFTW_BACKWARD);
        const double scale = 1.0 / static_cast<double>(p_);
        for (int k = 0; k < m_; ++k) {
            const double kd = static_cast<double>(k);
            const double phase = 0.5 * delta_ * kd * kd - j0 * kd * delta_;
            out[k] = work_[static_cast<std::size_t>(k)] * (std::polar(1.0, sgn_ * phase) * scale);
        }
    }

  private:
    int n_, m_, p_, sgn_;
    double delta_;
    cvector kernel_hat_;
    cvector work_;
};

}  // namespace detail

// Evaluate the continuum-normalized Fourier sum of lattice samples at
// arbitrary uniform targets, separably per axis:
//
//   sign = -1:  out(y) = (2 pi)^{-n/2} dx^n  sum_j  u(x_j)   e^{-i x_j . y}
//   sign = +1:  out(y) = (2 pi)^{-n/2} dxi^n sum_k  v(xi_k)  e^{+i xi_k . y}
//
// i.e. the forward transform sampled off-lattice, or the band-limited trig
// interpolant of a spectrum (periodic in y).  `g` is the grid the samples
// live on; node coordinates are (j - N/2) * spacing.
inline cvector eval_fourier_sum_at(const cvector& samples, const Grid& g, int sign,
                                   const std::array<ScaledTarget, 3>& target) {
    const int dim = g.dim();
    const int n = g.points_per_axis();
    const double j0 = 0.5 * n;
    const double spacing = g.dx();

    cvector cur = samples;
    std::array<int, 3> shape{1, 1, 1};
    for (int a = 0; a < dim; ++a) shape[a] = n;

    for (int axis = dim - 1; axis >= 0; --axis) {
        const ScaledTarget& t = target[axis];
        require(t.count > 0, "eval_fourier_sum_at: empty target");
        const double theta0 = spacing * t.first;
        const double delta = spacing * t.step;
        detail::chirp_z cz(n, t.count, delta, sign);

        std::array<int, 3> out_shape = shape;
        out_shape[axis] = t.count;
        std::size_t out_total = 1;
        for (int a = 0; a < dim; ++a) out_total *= static_cast<std::size_t>(out_shape[a]);
        cvector next(out_total);

        // axes after `axis` are identical in both layouts, so the stride of
        // `axis` is shared
        std::size_t stride = 1;
        for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(shape[a]);
        const std::size_t lines = cur.size() / static_cast<std::size_t>(shape[axis]);
        cvector line_in(static_cast<std::size_t>(n)), line_out(static_cast<std::size_t>(t.count));

        for (std::size_t l = 0; l < lines; ++l) {
            const std::size_t inner = l % stride;
            const std::size_t outer = l / stride;
            const std::size_t base_in = outer * stride * static_cast<std::size_t>(shape[axis]) + inner;
            const std::size_t base_out = outer * stride * static_cast<std::size_t>(t.count) + inner;
            for (int j = 0; j < n; ++j)
                line_in[static_cast<std::size_t>(j)] = cur[base_in + static_cast<std::size_t>(j) * stride];
            cz.run(line_in.data(), line_out.data(), j0, theta0);
            for (int k = 0; k < t.count; ++k)
                next[base_out + static_cast<std::size_t>(k) * stride] = line_out[static_cast<std::size_t>(k)];
        }
        cur.swap(next);
        shape = out_shape;
    }

    const double pref = std::pow(spacing / std::sqrt(2.0 * pi), dim);
    for (auto& v : cur) v *= pref;
    return cur;
}

// Band-limited dilation u(x / c) on u's own grid (c != 0), computed through
// the spectrum.  Exact for resolved states whose periodic tails are
// negligible; callers guard via boundary mass.
inline Field spectral_dilate(const Field& u, double c) {
    require(c != 0.0, "spectral_dilate: zero scale");
    Field uh = fourier_forward(u);
    const Grid& g = u.grid;
    std::array<ScaledTarget, 3> tgt{};
    for (int a = 0; a < g.dim(); ++a)
        tgt[a] = ScaledTarget{g.x(0) / c, g.dx() / c, g.points_per_axis()};
    Field out(g, u.epsilon, u.time);
    out.values = eval_fourier_sum_at(uh.values, uh.grid, +1, tgt);
    // The trig interpolant is 2L-periodic: source coordinates outside the
    // fundamental box would wrap bulk values into the far field.  The true
    // state is negligible there (callers guard boundary mass), so zero them.
    if (std::abs(c) < 1.0) {
        const double lim = g.half_extent();
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            for (int a = 0; a < g.dim(); ++a) {
                if (std::abs(g.x(j[a]) / c) >= lim) {
                    out.values[idx] = complexd(0.0, 0.0);
                    break;
                }
            }
        });
    }
    return out;
}

// Band-limited resampling of u onto another grid of the same dimension
// (trig interpolation; targets outside u's box are zeroed).
inline Field resample_to_grid(const Field& u, const Grid& out_grid) {
    require(out_grid.dim() == u.grid.dim(), "resample_to_grid: dimension mismatch");
    if (out_grid == u.grid) return u;
    Field uh = fourier_forward(u);
    std::array<ScaledTarget, 3> tgt{};
    for (int a = 0; a < out_grid.dim(); ++a)
        tgt[a] = ScaledTarget{out_grid.x(0), out_grid.dx(), out_grid.points_per_axis()};
    Field out(out_grid, u.epsilon, u.time);
    out.values = eval_fourier_sum_at(uh.values, uh.grid, +1, tgt);
    if (out_grid.half_extent() > u.grid.half_extent()) {
        const double lim = u.grid.half_extent();
        out_grid.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            for (int a = 0; a < out_grid.dim(); ++a) {
                if (std::abs(out_grid.x(j[a])) >= lim) {
                    out.values[idx] = complexd(0.0, 0.0);
                    break;
                }
            }
        });
    }
    return out;
}

// (F u)(z * x_j) on u's grid: the focus zoom, z typically 1/epsilon.  The
// evaluated sum replicates with period 2*Nyquist; targets beyond the band,
// where the transform of a resolved state vanishes, are zeroed.
inline Field fourier_at_scaled_points(const Field& u, double z) {
    const Grid& g = u.grid;
    std::array<ScaledTarget, 3> tgt{};
    for (int a = 0; a < g.dim(); ++a)
        tgt[a] = ScaledTarget{g.x(0) * z, g.dx() * z, g.points_per_axis()};
    Field out(g, u.epsilon, u.time);
    out.values = eval_fourier_sum_at(u.values, g, -1, tgt);
    const double band = g.nyquist();
    if (std::abs(z) * g.half_extent() >= band) {
        g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
            for (int a = 0; a < g.dim(); ++a) {
                if (std::abs(g.x(j[a]) * z) >= band) {
                    out.values[idx] = complexd(0.0, 0.0);
                    break;
                }
            }
        });
    }
    return out;
}

}  // namespace sch

#endif
