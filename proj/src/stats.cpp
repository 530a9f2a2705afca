#include "hubsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hubsim/core.hpp"

namespace hubsim::stats {

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("reg_inc_beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lf = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(lf);
    // Use the fraction on the side where it converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_cdf(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return reg_inc_beta(a, b, x);
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Jacobi-theta form, fast for small lambda where the alternating
        // series is slow: Q = 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
        double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
        double t2 = t * t;
        double t8 = t2 * t2 * t2 * t2;
        // terms t^1, t^9, t^25, t^49
        double sum = t * (1.0 + t8 * (1.0 + t8 * t8 * (1.0 + t8 * t8 * t8)));
        return 1.0 - std::sqrt(2.0 * M_PI) / lambda * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    double q = 2.0 * sum;
    return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_test needs at least one sample");
    std::sort(samples.begin(), samples.end());
    size_t n = samples.size();
    double d = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double f = cdf(samples[i]);
        double lo = f - static_cast<double>(i) / static_cast<double>(n);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
        d = std::max(d, std::max(lo, hi));
    }
    double sn = std::sqrt(static_cast<double>(n));
    double p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    return KsResult{d, p, n};
}

double chi_square_stat(const std::vector<int64_t>& counts, const std::vector<double>& probs) {
    if (counts.size() != probs.size())
        throw DomainError("chi_square_stat: counts and probs must have equal size");
    int64_t n = 0;
    for (int64_t c : counts) n += c;
    double stat = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (probs[i] <= 0.0) {
            if (counts[i] != 0)
                throw DomainError("chi_square_stat: observed count in a zero-probability cell");
            continue;
        }
        double expect = static_cast<double>(n) * probs[i];
        double diff = static_cast<double>(counts[i]) - expect;
        stat += diff * diff / expect;
    }
    return stat;
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("ols_fit needs matching x/y with at least 2 points");
    size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("ols_fit: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n = n;
    if (n > 2) {
        double rss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

}  // namespace hubsim::stats
