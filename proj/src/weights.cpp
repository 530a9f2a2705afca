#include "hubsim/weights.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace hubsim {

namespace {

constexpr int64_t kEagerWindow = 64;

// Degrees past this point are not convexity-checked value by value for the
// analytic kinds; their tails are convex by construction and the values may
// exceed double range anyway.
constexpr double kCheckCeiling = 1e300;

}  // namespace

WeightFunction WeightFunction::basic(int64_t domain_floor) {
    WeightFunction w;
    w.kind_ = WeightKind::basic;
    w.floor_ = domain_floor;
    w.init_validation();
    return w;
}

WeightFunction WeightFunction::linear(double beta, int64_t domain_floor) {
    if (!(beta > -1.0) || !std::isfinite(beta))
        throw DomainError("linear weight needs beta > -1, got " + std::to_string(beta));
    WeightFunction w;
    w.kind_ = WeightKind::linear;
    w.beta_ = beta;
    w.floor_ = domain_floor;
    w.init_validation();
    return w;
}

WeightFunction WeightFunction::power(double p, int64_t domain_floor) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw DomainError("power weight needs p >= 1, got " + std::to_string(p));
    WeightFunction w;
    w.kind_ = WeightKind::power;
    w.p_ = p;
    w.p_is_int_ = (p == std::floor(p)) && p <= 62.0;
    w.int_p_ = w.p_is_int_ ? static_cast<int64_t>(p) : 1;
    w.floor_ = domain_floor;
    w.init_validation();
    return w;
}

WeightFunction WeightFunction::table(std::vector<double> values, int64_t domain_floor) {
    if (values.size() < 2)
        throw DomainError("weight table needs at least 2 entries for a continuation slope");
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError("weight table entries must be finite");
    WeightFunction w;
    w.kind_ = WeightKind::table;
    w.tail_slope_ = values[values.size() - 1] - values[values.size() - 2];
    w.table_ = std::make_shared<const std::vector<double>>(std::move(values));
    w.floor_ = domain_floor;
    w.init_validation();
    return w;
}

WeightFunction::WeightFunction(const WeightFunction& o)
    : kind_(o.kind_),
      beta_(o.beta_),
      p_(o.p_),
      int_p_(o.int_p_),
      p_is_int_(o.p_is_int_),
      table_(o.table_),
      tail_slope_(o.tail_slope_),
      floor_(o.floor_),
      shift_(o.shift_),
      validated_(o.validated_.load(std::memory_order_relaxed)) {}

WeightFunction& WeightFunction::operator=(const WeightFunction& o) {
    kind_ = o.kind_;
    beta_ = o.beta_;
    p_ = o.p_;
    int_p_ = o.int_p_;
    p_is_int_ = o.p_is_int_;
    table_ = o.table_;
    tail_slope_ = o.tail_slope_;
    floor_ = o.floor_;
    shift_ = o.shift_;
    validated_.store(o.validated_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    return *this;
}

void WeightFunction::init_validation() {
    if (floor_ < 0)
        throw DomainError("domain_floor must be 0 or positive");
    validated_.store(floor_ - 1, std::memory_order_relaxed);
    validate_through(floor_ + kEagerWindow);
}

double WeightFunction::raw(int64_t n) const {
    switch (kind_) {
        case WeightKind::basic:
            return static_cast<double>(n);
        case WeightKind::linear:
            return static_cast<double>(n) + beta_;
        case WeightKind::power:
            if (p_is_int_) {
                // Binary exponentiation with a fixed operation sequence; the
                // SIMD kernels replay the same sequence so results match
                // bit for bit.
                double base = static_cast<double>(n);
                double acc = 1.0;
                for (int64_t e = int_p_; e != 0; e >>= 1) {
                    if (e & 1) acc *= base;
                    base *= base;
                }
                return acc;
            }
            return std::pow(static_cast<double>(n), p_);
        case WeightKind::table: {
            const auto& t = *table_;
            auto len = static_cast<int64_t>(t.size());
            if (n < len) return t[static_cast<size_t>(n)];
            // Linear continuation from the last entry with the last slope.
            // Computed in long double: the product can exceed double range
            // and the caller is entitled to see +inf rather than garbage.
            long double v = static_cast<long double>(t.back()) +
                            static_cast<long double>(tail_slope_) *
                                static_cast<long double>(n - (len - 1));
            return static_cast<double>(v);
        }
    }
    return 0.0;  // unreachable
}

void WeightFunction::validate_through(int64_t n) const {
    int64_t hi = validated_.load(std::memory_order_relaxed);
    if (n <= hi) return;
    // Re-scanning a range twice is harmless (the checks are pure), so a lost
    // race only costs time. Scanning resumes past the high-water mark.
    for (int64_t k = std::max(floor_, hi + 1); k <= n; ++k) {
        double v = raw(k + shift_);
        if (std::isnan(v))
            throw PositivityError("weight is NaN at degree " + std::to_string(k));
        if (k == 0 ? v < 0.0 : v <= 0.0)
            throw PositivityError("weight must be positive at degree " +
                                  std::to_string(k) + ", got " + std::to_string(v));
        if (v > kCheckCeiling) {
            // Past this point the value-by-value checks stop. Safe for the
            // analytic kinds and for the affine table continuation (convex
            // and growing by construction); explicit table entries must all
            // be inspected, so keep going while still inside the table.
            bool inside_table = kind_ == WeightKind::table &&
                                k + shift_ < static_cast<int64_t>(table_->size());
            if (!inside_table) break;
        }
        if (k >= floor_ + 2) {
            double a = raw(k - 2 + shift_);
            double b = raw(k - 1 + shift_);
            // Convexity as nondecreasing increments. Exact comparison: the
            // built-in kinds satisfy it exactly and tables are user data we
            // must not quietly round into shape.
            if (v - b < b - a)
                throw ConvexityError("weight is not convex around degree " +
                                     std::to_string(k - 1));
        }
    }
    // Advance the high-water mark; keep the largest seen.
    int64_t cur = validated_.load(std::memory_order_relaxed);
    while (cur < n &&
           !validated_.compare_exchange_weak(cur, n, std::memory_order_relaxed)) {
    }
}

double WeightFunction::operator()(int64_t n) const {
    if (n < floor_)
        throw DomainError("weight queried at degree " + std::to_string(n) +
                          " below domain floor " + std::to_string(floor_));
    if (n > validated_.load(std::memory_order_relaxed)) validate_through(n);
    return raw(n + shift_);
}

double WeightFunction::log_eval(int64_t n) const {
    if (n < floor_)
        throw DomainError("weight queried at degree " + std::to_string(n) +
                          " below domain floor " + std::to_string(floor_));
    if (n > validated_.load(std::memory_order_relaxed)) validate_through(n);
    int64_t m = n + shift_;
    switch (kind_) {
        case WeightKind::basic:
            return std::log(static_cast<double>(m));
        case WeightKind::linear:
            return std::log(static_cast<double>(m) + beta_);
        case WeightKind::power:
            return p_ * std::log(static_cast<double>(m));
        case WeightKind::table: {
            const auto& t = *table_;
            auto len = static_cast<int64_t>(t.size());
            if (m < len) return std::log(t[static_cast<size_t>(m)]);
            long double v = static_cast<long double>(t.back()) +
                            static_cast<long double>(tail_slope_) *
                                static_cast<long double>(m - (len - 1));
            return static_cast<double>(std::log(v));
        }
    }
    return 0.0;  // unreachable
}

WeightFunction WeightFunction::shifted(int64_t m0) const {
    if (m0 < 1) throw DomainError("shift needs m0 >= 1");
    WeightFunction w(*this);
    w.shift_ = shift_ + (m0 - 1);
    w.floor_ = std::max<int64_t>(floor_, 1);
    w.validated_.store(w.floor_ - 1, std::memory_order_relaxed);
    w.validate_through(w.floor_ + kEagerWindow);
    return w;
}

ChordData WeightFunction::chord(int64_t a) const {
    if (a < 2) throw DomainError("chord needs a >= 2");
    double w1 = (*this)(1);
    double wa = (*this)(a);
    if (wa == w1)
        throw FlatChordError("chord through degrees 1 and " + std::to_string(a) +
                             " is flat: both weights equal " + std::to_string(w1));
    ChordData c;
    c.a = a;
    c.slope = (wa - w1) / static_cast<double>(a - 1);
    c.intercept = w1 - c.slope;
    c.beta = c.intercept / c.slope;
    return c;
}

ReferenceConstants WeightFunction::reference_constants(int64_t search_cap) const {
    double w1 = (*this)(1);
    for (int64_t a = 2; a <= search_cap; ++a) {
        if ((*this)(a) > w1) {
            ChordData c = chord(a);
            return ReferenceConstants{a, c.beta};
        }
    }
    throw UnboundedSearchError(
        "weight never exceeds W(1) up to degree " + std::to_string(search_cap) +
        "; an unbounded weight is required");
}

bool WeightFunction::rational_exact() const {
    return kind_ != WeightKind::power || p_is_int_;
}

WeightRule WeightFunction::rule() const {
    WeightRule r;
    r.kind = kind_;
    r.beta = beta_;
    r.p = p_;
    r.int_p = int_p_;
    r.p_is_int = p_is_int_;
    if (table_) {
        r.table = table_->data();
        r.table_len = static_cast<int64_t>(table_->size());
    }
    r.tail_slope = tail_slope_;
    r.shift = shift_;
    r.zero_below = static_cast<uint32_t>(std::max<int64_t>(floor_, 0) == 0 ? 0 : 1);
    return r;
}

}  // namespace hubsim
