#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "hubsim/core.hpp"

namespace hubsim {

enum class WeightKind { basic, linear, power, table };

// Chord of the weight through the points (1, W(1)) and (a, W(a)):
// W~(n) = slope * n + intercept, and beta = intercept / slope.
struct ChordData {
    int64_t a = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double beta = 0.0;
};

// a0: smallest degree >= 2 with W(a0) > W(1). beta0: beta of the chord at a0.
struct ReferenceConstants {
    int64_t a0 = 0;
    double beta0 = 0.0;
};

// Parameter block consumed by the data-parallel kernels. Plain data so the
// kernel translation units stay independent of this header's class layout.
struct WeightRule {
    WeightKind kind = WeightKind::basic;
    double beta = 0.0;
    double p = 1.0;
    int64_t int_p = 1;        // valid when p_is_int
    bool p_is_int = true;
    const double* table = nullptr;
    int64_t table_len = 0;
    double tail_slope = 0.0;  // linear continuation past the table
    int64_t shift = 0;
    uint32_t zero_below = 1;  // degrees below this contribute weight 0 to sums
};

// Attachment weight W: degree -> positive real. Immutable and cheap to copy
// (table storage is shared). Validation strategy: positivity and convexity
// are checked eagerly on [domain_floor, 64] at construction and extended
// lazily to any degree actually evaluated; the high-water mark is atomic so
// concurrent trials can share one instance.
class WeightFunction {
public:
    static WeightFunction basic(int64_t domain_floor = 1);
    static WeightFunction linear(double beta, int64_t domain_floor = 1);
    static WeightFunction power(double p, int64_t domain_floor = 1);
    static WeightFunction table(std::vector<double> values, int64_t domain_floor = 1);

    WeightFunction(const WeightFunction& o);
    WeightFunction& operator=(const WeightFunction& o);

    // W(n). Throws DomainError below domain_floor, PositivityError /
    // ConvexityError if validation fails at the newly covered degrees.
    double operator()(int64_t n) const;

    // log W(n), usable when W(n) itself would overflow a double.
    double log_eval(int64_t n) const;

    // W'(n) = W(n + m0 - 1): the degree shift that reduces the general-m0
    // process to the single-edge one.
    WeightFunction shifted(int64_t m0) const;

    ChordData chord(int64_t a) const;
    ReferenceConstants reference_constants(int64_t search_cap = 1000000) const;

    WeightKind kind() const { return kind_; }
    double beta() const { return beta_; }
    double exponent() const { return p_; }
    bool exponent_is_integer() const { return p_is_int_; }
    int64_t domain_floor() const { return floor_; }
    int64_t shift() const { return shift_; }
    const std::vector<double>& table_values() const { return *table_; }

    // True when W(n) is an exact rational for every integer degree (doubles
    // are rationals; only a non-integer power exponent breaks exactness).
    bool rational_exact() const;

    WeightRule rule() const;

private:
    WeightFunction() = default;
    void init_validation();
    double raw(int64_t n) const;  // no validation, shift already applied
    void validate_through(int64_t n) const;

    WeightKind kind_ = WeightKind::basic;
    double beta_ = 0.0;
    double p_ = 1.0;
    int64_t int_p_ = 1;
    bool p_is_int_ = true;
    std::shared_ptr<const std::vector<double>> table_;
    double tail_slope_ = 0.0;
    int64_t floor_ = 1;
    int64_t shift_ = 0;
    // Highest degree covered by positivity/convexity validation so far.
    mutable std::atomic<int64_t> validated_{0};
};

// Monotone-fraction helper: x -> (b + c*x) / (d + e*x) is strictly increasing
// on any interval where the denominator stays positive iff b*e - c*d < 0.
// Exposed because several inequalities in the analysis reduce to it.
inline bool fraction_increasing(double b, double c, double d, double e) {
    return b * e - c * d < 0.0;
}

}  // namespace hubsim
