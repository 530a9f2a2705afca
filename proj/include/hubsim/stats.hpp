#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hubsim::stats {

// Regularized incomplete beta I_x(a, b) by the Lentz continued fraction.
// Accurate to ~1e-14 relative for moderate parameters.
double reg_inc_beta(double a, double b, double x);

// CDF of Beta(a, b) at x, clamped to [0, 1] outside the support.
double beta_cdf(double a, double b, double x);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;  // D_n, the sup distance
    double p_value = 1.0;    // asymptotic, with Stephens' effective-n correction
    size_t n = 0;
};

// One-sample two-sided KS test of `samples` against the continuous CDF `cdf`.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Pearson statistic sum (observed - n p)^2 / (n p) over cells with p > 0.
double chi_square_stat(const std::vector<int64_t>& counts, const std::vector<double>& probs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    size_t n = 0;
};

// Ordinary least squares y = intercept + slope x; stderr of the slope from
// the residual variance (needs n >= 3 for a nonzero stderr denominator).
LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hubsim::stats
