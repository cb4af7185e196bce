#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sch/wigner.hpp"

using namespace sch;

TEST(Wigner, GaussianOracle1d) {
    const double eps = 1.0 / 8.0, w = 1.0;
    Grid g = make_grid(1, 256, 8.0);
    Field u = sch_test::unit_gaussian(g, eps, w);
    WignerSlice ws = wigner_transform(u, 1, 256, 256);
    const Grid& gx = ws.grid_x;
    const Grid& gxi = ws.grid_xi;
    double worst = 0.0;
    for (int jx = 0; jx < gx.points_per_axis(); ++jx)
        for (int l = 0; l < gxi.points_per_axis(); ++l) {
            const double expect = sch_test::wigner_gaussian_1d(eps, w, gx.x(jx), gxi.x(l));
            const double got = ws.values[static_cast<std::size_t>(jx) * gxi.size() +
                                         static_cast<std::size_t>(l)];
            worst = std::max(worst, std::abs(got - expect));
        }
    EXPECT_LT(worst, 1e-6);
    EXPECT_LT(ws.max_imag_residue, 1e-10);
}

TEST(Wigner, MassAndMarginal) {
    const double eps = 1.0 / 8.0;
    Grid g = make_grid(2, 64, 6.0);
    Field u = Field::from_function(g, eps, [](const std::array<double, 3>& x) {
        return std::polar(std::exp(-0.5 * (x[0] * x[0] + 1.3 * x[1] * x[1])),
                          0.4 * x[0] - 0.2 * x[1]);
    });
    WignerSlice ws = wigner_transform(u, 2, 64, 32);
    const double m2 = std::pow(l2_norm(u), 2);
    EXPECT_NEAR(ws.integral() / m2, 1.0, 1e-6);

    // xi-marginal returns |u(x)|^2 pointwise (binning preserves sums)
    const Grid& gx = ws.grid_x;
    const double cxi = ws.cell_xi();
    double worst = 0.0;
    gx.for_each([&](std::size_t xf, const std::array<int, 3>& j) {
        double acc = 0.0;
        const double* blk = ws.values.data() + xf * ws.xi_count();
        for (std::size_t l = 0; l < ws.xi_count(); ++l) acc += blk[l];
        acc *= cxi;
        const std::size_t fine = g.index({j[0] * 2, j[1] * 2, 0});
        worst = std::max(worst, std::abs(acc - std::norm(u.values[fine])));
    });
    EXPECT_LT(worst, 1e-6);
}

TEST(Wigner, ModulationShift) {
    // u e^{i x xi0 / eps} shifts W by xi0
    const double eps = 1.0 / 8.0;
    Grid g = make_grid(1, 256, 8.0);
    Field u = sch_test::unit_gaussian(g, eps, 1.0);
    WignerSlice w0 = wigner_transform(u, 1, 256, 256);
    const double dxi = w0.grid_xi.dx();
    const int shift_cells = 24;
    const double xi0 = shift_cells * dxi;
    Field ub = u;
    g.for_each([&](std::size_t idx, const std::array<int, 3>& j) {
        ub.values[idx] *= std::polar(1.0, g.x(j[0]) * xi0 / eps);
    });
    WignerSlice wb = wigner_transform(ub, 1, 256, 256);
    double worst = 0.0;
    const int B = static_cast<int>(w0.xi_count());
    for (int jx = 0; jx < w0.grid_x.points_per_axis(); ++jx)
        for (int l = 0; l < B - shift_cells; ++l) {
            const double a = wb.values[static_cast<std::size_t>(jx) * B + l + shift_cells];
            const double b = w0.values[static_cast<std::size_t>(jx) * B + l];
            worst = std::max(worst, std::abs(a - b));
        }
    EXPECT_LT(worst, 1e-9);
}

TEST(Wigner, ConcentrationMetric) {
    const double eps = 1.0 / 16.0;
    Grid g = make_grid(1, 512, 8.0);
    Field u = sch_test::unit_gaussian(g, eps, 1.0);
    WignerSlice w0 = wigner_transform(u, 2, 512, 256);
    // band -> infinity gives 1
    EXPECT_NEAR(concentration_metric(w0, 0.0, 1e9), 1.0, 1e-12);
    // broad Gaussian at t = 0: mass sits near xi = 0
    EXPECT_GE(concentration_metric(w0, 0.0, 3.0 * std::sqrt(eps)), 0.95);
    // focus window precondition
    EXPECT_THROW(concentration_metric(w0, 0.5 * pi - 0.01, 1.0), invalid_argument_error);
}

TEST(Wigner, WkbChirpConcentratesOnRidge) {
    // f(x) e^{-i x^2 tan t/(2 eps)} at t = pi/4: mass within
    // |xi + x tan t| <= 3 sqrt(eps)
    const double eps = 1.0 / 64.0;
    const double t = pi / 4;
    Grid g = make_grid(1, 2048, 6.0);
    const double tn = std::tan(t);
    Field u = Field::from_function(g, eps, [&](const std::array<double, 3>& x) {
        const double amp = std::pow(pi, -0.25) * std::exp(-0.5 * x[0] * x[0]);
        return std::polar(amp, -0.5 * x[0] * x[0] * tn / eps);
    });
    WignerSlice ws = wigner_transform(u, 16, 1024, 512);
    const double frac = concentration_metric(ws, t, 3.0 * std::sqrt(eps));
    EXPECT_GE(frac, 0.9);
    // and the band matters: a tiny band captures much less
    EXPECT_LT(concentration_metric(ws, t, 0.003), 0.5);
}

TEST(Wigner, GuardsAndBudget) {
    Grid g = make_grid(1, 256, 8.0);
    Field u = sch_test::unit_gaussian(g, 0.25, 1.0);
    EXPECT_THROW(wigner_transform(u, 3), invalid_argument_error);  // 3 does not divide 256
    EXPECT_THROW(wigner_transform(u, 1, 256, 256, 100), numerics_error);  // budget
    Grid g3 = make_grid(3, 16, 4.0);
    Field u3(g3, 0.5);
    EXPECT_THROW(wigner_transform(u3, 1), invalid_argument_error);  // n = 3 full slice
}
