#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "sch/classify.hpp"
#include "sch/fit.hpp"
#include "sch/io.hpp"

using namespace sch;

TEST(Classify, HartreeTableCorners) {
    using W = WkbRegime;
    using F = FocusRegime;
    auto lbl = [](double a, double g) {
        return classify_regime(a, g, std::nullopt, std::nullopt, 2);
    };
    // two instances per cell of the Hartree-only table
    EXPECT_TRUE(lbl(2.0, 1.0) == (RegimeLabel{W::Linear, F::Linear}));
    EXPECT_TRUE(lbl(3.0, 0.5) == (RegimeLabel{W::Linear, F::Linear}));
    EXPECT_TRUE(lbl(2.0, 2.0) == (RegimeLabel{W::Linear, F::Nonlinear}));
    EXPECT_TRUE(lbl(1.5, 1.5) == (RegimeLabel{W::Linear, F::Nonlinear}));
    EXPECT_TRUE(lbl(1.0, 0.5) == (RegimeLabel{W::Nonlinear, F::Linear}));
    EXPECT_TRUE(lbl(1.0, 0.9) == (RegimeLabel{W::Nonlinear, F::Linear}));
    EXPECT_TRUE(lbl(1.0, 1.0) == (RegimeLabel{W::Nonlinear, F::Nonlinear}));
    EXPECT_TRUE(classify_regime(Rational{1, 1}, Rational{1, 1}, std::nullopt, std::nullopt,
                                3) == (RegimeLabel{W::Nonlinear, F::Nonlinear}));
}

TEST(Classify, CombinedTableCorners) {
    using W = WkbRegime;
    using F = FocusRegime;
    auto lbl = [](double a, double g, double b, double s, int n) {
        return classify_regime(a, g, b, s, n);
    };
    // alpha > 1 and beta > 1; both subcritical -> fully linear
    EXPECT_TRUE(lbl(2.0, 1.0, 2.0, 0.25, 2) == (RegimeLabel{W::Linear, F::Linear}));
    EXPECT_TRUE(lbl(3.0, 2.0, 1.5, 0.5, 2) == (RegimeLabel{W::Linear, F::Linear}));
    // linear WKB, nonlinear focus via alpha = gamma OR beta = sigma n
    EXPECT_TRUE(lbl(2.0, 2.0, 1.5, 0.25, 2) == (RegimeLabel{W::Linear, F::Nonlinear}));
    EXPECT_TRUE(lbl(2.0, 1.0, 1.5, 0.75, 2) == (RegimeLabel{W::Linear, F::Nonlinear}));
    // nonlinear WKB via alpha = 1 OR beta = 1, focus subcritical
    EXPECT_TRUE(lbl(1.0, 0.5, 2.0, 0.25, 2) == (RegimeLabel{W::Nonlinear, F::Linear}));
    EXPECT_TRUE(lbl(2.0, 1.0, 1.0, 0.25, 2) == (RegimeLabel{W::Nonlinear, F::Linear}));
    // both critical
    EXPECT_TRUE(lbl(1.0, 1.0, 2.0, 0.25, 2) == (RegimeLabel{W::Nonlinear, F::Nonlinear}));
    EXPECT_TRUE(lbl(2.0, 1.0, 1.0, 0.5, 2) == (RegimeLabel{W::Nonlinear, F::Nonlinear}));
}

TEST(Classify, ExactRationalsAndGuards) {
    // beta = sigma * n detected exactly through rationals that are not
    // representable in binary floating point
    Rational beta{1, 3};  // would fail a naive double comparison chain?
    Rational sigma{1, 9};
    // beta >= 1 violated: guard fires
    EXPECT_THROW(
        classify_regime(Rational{2, 1}, Rational{1, 1}, beta, sigma, 3),
        invalid_argument_error);
    // now a legal exact-critical pair: beta = 7/5, sigma = 7/15, n = 3
    RegimeLabel l = classify_regime(Rational{2, 1}, Rational{2, 3},
                                    Rational{7, 5}, Rational{7, 15}, 3);
    EXPECT_TRUE(l.focus == FocusRegime::Nonlinear);
    EXPECT_TRUE(l.wkb == WkbRegime::Linear);
    // invalid ranges
    EXPECT_THROW(classify_regime(0.5, 1.0, std::nullopt, std::nullopt, 2),
                 invalid_argument_error);
    EXPECT_THROW(classify_regime(2.0, -1.0, std::nullopt, std::nullopt, 2),
                 invalid_argument_error);
    EXPECT_THROW(classify_regime(2.0, 1.0, std::optional<double>(2.0), std::nullopt, 2),
                 invalid_argument_error);
    EXPECT_THROW(classify_regime(2.0, 1.0, std::optional<double>(2.0),
                                 std::optional<double>(1.5), 2),
                 invalid_argument_error);
}

TEST(Fit, ExactPowerLaw) {
    std::vector<double> eps{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<double> err;
    for (double e : eps) err.push_back(3.7 * std::pow(e, 1.5));
    SlopeFit f = fit_slope(eps, err);
    EXPECT_NEAR(f.slope, 1.5, 1e-12);
    EXPECT_LE(f.max_residual, 1e-12);
}

TEST(Fit, LogCorrectedFamily) {
    // c * eps * log(1/eps) over {1/8 .. 1/128}: the exact least-squares
    // slope of this family is 0.697 (the log factor flattens the fit); the
    // residual stays inside the 0.1 reporting gate
    std::vector<double> eps{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::vector<double> err;
    for (double e : eps) err.push_back(0.42 * e * std::log(1.0 / e));
    SlopeFit f = fit_slope(eps, err);
    EXPECT_NEAR(f.slope, 0.697, 0.01);
    EXPECT_LE(f.max_residual, 0.1);
}

TEST(Fit, Guards) {
    std::vector<double> e3{0.1, 0.2, 0.3};
    EXPECT_THROW(fit_slope(e3, e3), invalid_argument_error);
    std::vector<double> e4{0.1, 0.2, 0.3, 0.4};
    std::vector<double> bad{1.0, -1.0, 1.0, 1.0};
    EXPECT_THROW(fit_slope(e4, bad), invalid_argument_error);
}

TEST(Io, Hfld1BitExactRoundTrip) {
    Grid g = make_grid(2, 32, 5.5);
    Field u(g, 0.125, 0.77);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : u.values) v = complexd(dist(rng), dist(rng));
    const std::string path = "/tmp/sch_test_field.hfld";
    write_field(u, path);
    Field r = read_field(path);
    EXPECT_TRUE(r.grid == g);
    EXPECT_DOUBLE_EQ(r.epsilon, u.epsilon);
    EXPECT_DOUBLE_EQ(r.time, u.time);
    ASSERT_EQ(r.values.size(), u.values.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_EQ(std::memcmp(&r.values[i], &u.values[i], sizeof(complexd)), 0);
    }
    std::remove(path.c_str());
}

TEST(Io, CsvSeventeenDigits) {
    const double v = pi / 3.0000000001;
    const std::string s = CsvWriter::num(v);
    EXPECT_DOUBLE_EQ(std::stod(s), v);  // reparse equals original
}

TEST(Io, ConfigParsing) {
    Config c = Config::parse_string(
        "# comment line\n"
        "grid.n = 2\n"
        "solver.epsilon = 1/8   # rational value\n"
        "hartree.gamma = 0.5\n"
        "sweep.epsilons = 1/8, 1/16, 1/32\n"
        "flag.on = true\n");
    EXPECT_EQ(c.get_int("grid.n"), 2);
    EXPECT_DOUBLE_EQ(c.get_real("solver.epsilon"), 0.125);
    EXPECT_DOUBLE_EQ(c.get_real("hartree.gamma"), 0.5);
    auto list = c.get_real_list("sweep.epsilons");
    ASSERT_EQ(list.size(), 3u);
    EXPECT_DOUBLE_EQ(list[1], 1.0 / 16);
    EXPECT_TRUE(c.get_bool("flag.on", false));
    c.reject_unknown_keys();

    // unknown key reported with its line number
    Config c2 = Config::parse_string("grid.n = 2\nsolver.epsilom = 0.1\n");
    (void)c2.get_int("grid.n");
    try {
        c2.reject_unknown_keys();
        FAIL() << "unknown key accepted";
    } catch (const io_error& e) {
        EXPECT_NE(std::string(e.what()).find("solver.epsilom"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }

    // malformed line rejected with number
    try {
        Config::parse_string("grid.n 2\n");
        FAIL() << "malformed line accepted";
    } catch (const io_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    // duplicate keys rejected
    EXPECT_THROW(Config::parse_string("a.b = 1\na.b = 2\n"), io_error);
    // bad number diagnosed
    Config c3 = Config::parse_string("x.y = abc\n");
    EXPECT_THROW(c3.get_real("x.y"), io_error);
}

TEST(Io, RationalParse) {
    auto r = Rational::parse("3/2");
    ASSERT_TRUE(r);
    EXPECT_DOUBLE_EQ(r->value(), 1.5);
    EXPECT_TRUE(Rational::parse("7"));
    EXPECT_FALSE(Rational::parse("1.5"));
    EXPECT_FALSE(Rational::parse("3/0"));
    EXPECT_FALSE(Rational::parse("x/2"));
    EXPECT_TRUE((Rational{1, 3} == Rational{2, 6}));
}
