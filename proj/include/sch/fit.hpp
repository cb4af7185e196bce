#ifndef SCH_FIT_HPP
#define SCH_FIT_HPP

#include <vector>

#include "sch/common.hpp"

namespace sch {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |log(err) - fit| over the points
};

// Least-squares slope in log-log coordinates; quantifies O(eps^p) claims.
inline SlopeFit fit_slope(const std::vector<double>& epsilons,
                          const std::vector<double>& errors) {
    require(epsilons.size() == errors.size(), "fit_slope: size mismatch");
    require(epsilons.size() >= 4, "fit_slope: need at least 4 points");
    const std::size_t n = epsilons.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(epsilons[i] > 0.0 && errors[i] > 0.0,
                "fit_slope: values must be strictly positive");
        lx[i] = std::log(epsilons[i]);
        ly[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < n; ++i)
        f.max_residual = std::max(f.max_residual,
                                  std::abs(ly[i] - (f.intercept + f.slope * lx[i])));
    return f;
}

}  // namespace sch

#endif
