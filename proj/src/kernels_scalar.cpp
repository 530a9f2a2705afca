#include <cmath>

#include "hubsim/core.hpp"
#include "hubsim/kernels.hpp"

// Reference implementations. The AVX2 file replays the same floating-point
// operation sequences lane for lane; keep the two in sync when touching
// anything numeric here.

namespace hubsim::kernels {

namespace {

// Weight of one degree value, shift already folded in by the caller.
// Fixed op order (see the power branch in particular).
inline double rule_weight(const WeightRule& r, uint64_t n) {
    switch (r.kind) {
        case WeightKind::basic:
            return static_cast<double>(n);
        case WeightKind::linear:
            return static_cast<double>(n) + r.beta;
        case WeightKind::power: {
            if (r.p_is_int) {
                double base = static_cast<double>(n);
                double acc = 1.0;
                for (int64_t e = r.int_p; e != 0; e >>= 1) {
                    if (e & 1) acc *= base;
                    base *= base;
                }
                return acc;
            }
            return std::pow(static_cast<double>(n), r.p);
        }
        case WeightKind::table: {
            auto i = static_cast<int64_t>(n);
            if (i < r.table_len) return r.table[i];
            return r.table[r.table_len - 1] +
                   r.tail_slope * static_cast<double>(i - (r.table_len - 1));
        }
    }
    return 0.0;
}

}  // namespace

double weight_map_scalar(const WeightRule& r, const uint32_t* deg, size_t n,
                         double* out) {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double w = deg[i] < r.zero_below
                       ? 0.0
                       : rule_weight(r, deg[i] + static_cast<uint64_t>(r.shift));
        if (out) out[i] = w;
        sum += w;
    }
    return sum;
}

void dp_row_advance_scalar(const double* mass, const double* p_up, size_t n,
                           double* next) {
    double prev_up = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double up = mass[i] * p_up[i];
        double right = mass[i] - up;
        next[i] = right + prev_up;
        prev_up = up;
    }
    next[n] = prev_up;
}

void walk_advance_scalar(const WeightRule& r, WalkBatch& batch, int64_t steps) {
    const auto shift = static_cast<uint64_t>(r.shift);
    for (size_t lane = 0; lane < batch.lanes(); ++lane) {
        Xoshiro256pp g;
        for (int j = 0; j < 4; ++j) g.s[j] = batch.rng[lane * 4 + j];
        uint64_t a = batch.a[lane];
        uint64_t b = batch.b[lane];
        for (int64_t k = 0; k < steps; ++k) {
            double u = unit_double(g.next());
            double wa = rule_weight(r, a + shift);
            double wb = rule_weight(r, b + shift);
            double t = wa / (wa + wb);
            if (u < t)
                ++a;
            else
                ++b;
        }
        batch.a[lane] = a;
        batch.b[lane] = b;
        for (int j = 0; j < 4; ++j) batch.rng[lane * 4 + j] = g.s[j];
    }
}

void walk_first_hit_scalar(const WeightRule& r, WalkBatch& batch, uint64_t a_cap,
                           int64_t* hit_m) {
    const auto shift = static_cast<uint64_t>(r.shift);
    for (size_t lane = 0; lane < batch.lanes(); ++lane) {
        Xoshiro256pp g;
        for (int j = 0; j < 4; ++j) g.s[j] = batch.rng[lane * 4 + j];
        uint64_t a = batch.a[lane];
        uint64_t b = batch.b[lane];
        while (a != b && a <= a_cap) {
            double u = unit_double(g.next());
            double wa = rule_weight(r, a + shift);
            double wb = rule_weight(r, b + shift);
            double t = wa / (wa + wb);
            if (u < t)
                ++a;
            else
                ++b;
        }
        hit_m[lane] = a == b ? static_cast<int64_t>(a) : -1;
        batch.a[lane] = a;
        batch.b[lane] = b;
        for (int j = 0; j < 4; ++j) batch.rng[lane * 4 + j] = g.s[j];
    }
}

}  // namespace hubsim::kernels
