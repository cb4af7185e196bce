#ifndef SCH_GRID_HPP
#define SCH_GRID_HPP

#include <array>
#include <cstdint>

#include "sch/common.hpp"

namespace sch {

// Periodic lattice on [-L, L)^n, n in {1,2,3}, N points per axis (power of
// two).  Position nodes x_j = (j - N/2) dx with dx = 2L/N; the dual lattice
// carries xi_k = (k - N/2) dxi with dxi = pi/L, so dx * dxi * N = 2*pi exactly
// and the frequency axis covers [-pi/dx, pi/dx).
class Grid {
  public:
    Grid() = default;

    Grid(int dim, int points_per_axis, double half_extent)
        : dim_(dim), n_(points_per_axis), half_extent_(half_extent) {
        require(dim >= 1 && dim <= 3, "Grid: dim must be 1, 2 or 3");
        require(points_per_axis >= 16 && is_pow2(static_cast<std::size_t>(points_per_axis)),
                "Grid: points_per_axis must be a power of two >= 16");
        require(half_extent > 0.0, "Grid: half_extent must be positive");
        dx_ = 2.0 * half_extent_ / n_;
        dxi_ = pi / half_extent_;
    }

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double half_extent() const { return half_extent_; }
    double dx() const { return dx_; }
    double dxi() const { return dxi_; }
    double nyquist() const { return pi / dx_; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
        return s;
    }

    double x(int j) const { return (j - n_ / 2) * dx_; }
    double xi(int k) const { return (k - n_ / 2) * dxi_; }

    // Row-major flat index, axis 0 slowest.
    std::size_t index(const std::array<int, 3>& j) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim_; ++a) idx = idx * n_ + static_cast<std::size_t>(j[a]);
        return idx;
    }

    std::array<int, 3> unindex(std::size_t idx) const {
        std::array<int, 3> j{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            j[a] = static_cast<int>(idx % n_);
            idx /= n_;
        }
        return j;
    }

    // The grid carrying the dual (frequency) lattice: spacing dxi, extent
    // N*dxi/2.  Its own dual is this grid again.
    Grid dual() const { return Grid(dim_, n_, 0.5 * n_ * dxi_); }

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && half_extent_ == o.half_extent_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    // Visit all lattice points: f(flat_index, multi_index).
    template <class F>
    void for_each(F&& f) const {
        std::array<int, 3> j{0, 0, 0};
        const std::size_t total = size();
        for (std::size_t idx = 0; idx < total; ++idx) {
            f(idx, j);
            for (int a = dim_ - 1; a >= 0; --a) {
                if (++j[a] < n_) break;
                j[a] = 0;
            }
        }
    }

  private:
    int dim_ = 1;
    int n_ = 16;
    double half_extent_ = 1.0;
    double dx_ = 0.125;
    double dxi_ = pi;
};

inline Grid make_grid(int dim, int points_per_axis, double half_extent) {
    return Grid(dim, points_per_axis, half_extent);
}

}  // namespace sch

#endif
