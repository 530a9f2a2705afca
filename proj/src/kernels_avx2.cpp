#ifdef HUBSIM_HAVE_AVX2

#include <immintrin.h>

#include <vector>

#include "hubsim/core.hpp"
#include "hubsim/kernels.hpp"

// AVX2 variants. Every floating-point operation sequence mirrors the scalar
// reference exactly (no FMA, no reassociation; the build forces
// -ffp-contract=off), so elementwise results and whole walk trajectories are
// bit-identical per lane. Only weight_map's sum reduction differs in order.

namespace hubsim::kernels {

namespace {

inline __m256i rotl64(__m256i x, int k) {
    return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

// Exact u64 -> double for values below 2^52: bit-or the exponent of 2^52
// onto the mantissa, then subtract 2^52.
inline __m256d u52_to_pd(__m256i x) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(x, magic)),
                         _mm256_set1_pd(0x1.0p52));
}

struct XoshiroVec {
    __m256i s0, s1, s2, s3;

    __m256i next() {
        __m256i res = _mm256_add_epi64(rotl64(_mm256_add_epi64(s0, s3), 23), s0);
        __m256i t = _mm256_slli_epi64(s1, 17);
        s2 = _mm256_xor_si256(s2, s0);
        s3 = _mm256_xor_si256(s3, s1);
        s1 = _mm256_xor_si256(s1, s2);
        s0 = _mm256_xor_si256(s0, s3);
        s2 = _mm256_xor_si256(s2, t);
        s3 = rotl64(s3, 45);
        return res;
    }
};

// Weight from an exact double-valued degree. Same op order as the scalar
// rule_weight; only kinds passing vectorizable() reach this.
inline __m256d rule_weight_pd(const WeightRule& r, __m256d x) {
    switch (r.kind) {
        case WeightKind::basic:
            return x;
        case WeightKind::linear:
            return _mm256_add_pd(x, _mm256_set1_pd(r.beta));
        case WeightKind::power: {
            __m256d base = x;
            __m256d acc = _mm256_set1_pd(1.0);
            for (int64_t e = r.int_p; e != 0; e >>= 1) {
                if (e & 1) acc = _mm256_mul_pd(acc, base);
                base = _mm256_mul_pd(base, base);
            }
            return acc;
        }
        default:
            return _mm256_setzero_pd();  // unreachable, guarded by dispatch
    }
}

inline __m256i load_lane_major(const uint64_t* rng, size_t base, int word) {
    return _mm256_set_epi64x(
        static_cast<long long>(rng[(base + 3) * 4 + word]),
        static_cast<long long>(rng[(base + 2) * 4 + word]),
        static_cast<long long>(rng[(base + 1) * 4 + word]),
        static_cast<long long>(rng[(base + 0) * 4 + word]));
}

inline void store_lane_major(uint64_t* rng, size_t base, int word, __m256i v) {
    alignas(32) uint64_t tmp[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), v);
    for (int lane = 0; lane < 4; ++lane) rng[(base + lane) * 4 + word] = tmp[lane];
}

inline __m256i load4_u64(const uint64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store4_u64(uint64_t* p, __m256i v) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

// Runs the scalar reference on the last `rem` lanes (sub-batch copy).
template <typename F>
void scalar_tail(WalkBatch& batch, size_t rem, F&& run) {
    size_t base = batch.lanes() - rem;
    WalkBatch tail;
    tail.a.assign(batch.a.begin() + base, batch.a.end());
    tail.b.assign(batch.b.begin() + base, batch.b.end());
    tail.rng.assign(batch.rng.begin() + base * 4, batch.rng.end());
    run(tail);
    std::copy(tail.a.begin(), tail.a.end(), batch.a.begin() + base);
    std::copy(tail.b.begin(), tail.b.end(), batch.b.begin() + base);
    std::copy(tail.rng.begin(), tail.rng.end(), batch.rng.begin() + base * 4);
}

}  // namespace

double weight_map_avx2(const WeightRule& r, const uint32_t* deg, size_t n,
                       double* out) {
    if (!vectorizable(r)) return weight_map_scalar(r, deg, n, out);
    const __m256d shift = _mm256_set1_pd(static_cast<double>(r.shift));
    const __m256d floor_v = _mm256_set1_pd(static_cast<double>(r.zero_below));
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i d32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(deg + i));
        __m256d d = _mm256_cvtepi32_pd(d32);
        __m256d below = _mm256_cmp_pd(d, floor_v, _CMP_LT_OQ);
        __m256d w = rule_weight_pd(r, _mm256_add_pd(d, shift));
        w = _mm256_andnot_pd(below, w);
        if (out) _mm256_storeu_pd(out + i, w);
        acc = _mm256_add_pd(acc, w);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    if (i < n) sum += weight_map_scalar(r, deg + i, n - i, out ? out + i : nullptr);
    return sum;
}

void dp_row_advance_avx2(const double* mass, const double* p_up, size_t n,
                         double* next) {
    if (n == 0) {
        next[0] = 0.0;
        return;
    }
    static thread_local std::vector<double> up_s, right_s;
    up_s.resize(n);
    right_s.resize(n);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d m = _mm256_loadu_pd(mass + i);
        __m256d up = _mm256_mul_pd(m, _mm256_loadu_pd(p_up + i));
        _mm256_storeu_pd(up_s.data() + i, up);
        _mm256_storeu_pd(right_s.data() + i, _mm256_sub_pd(m, up));
    }
    for (; i < n; ++i) {
        up_s[i] = mass[i] * p_up[i];
        right_s[i] = mass[i] - up_s[i];
    }
    next[0] = right_s[0];
    i = 1;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(right_s.data() + i),
                                  _mm256_loadu_pd(up_s.data() + i - 1));
        _mm256_storeu_pd(next + i, s);
    }
    for (; i < n; ++i) next[i] = right_s[i] + up_s[i - 1];
    next[n] = up_s[n - 1];
}

void walk_advance_avx2(const WeightRule& r, WalkBatch& batch, int64_t steps) {
    if (!vectorizable(r)) return walk_advance_scalar(r, batch, steps);
    const size_t blocks = batch.lanes() / 4;
    const __m256i shift = _mm256_set1_epi64x(r.shift);
    const __m256d scale = _mm256_set1_pd(0x1.0p-52);
    const __m256i ones = _mm256_set1_epi64x(-1);
    for (size_t blk = 0; blk < blocks; ++blk) {
        size_t base = blk * 4;
        XoshiroVec g{load_lane_major(batch.rng.data(), base, 0),
                     load_lane_major(batch.rng.data(), base, 1),
                     load_lane_major(batch.rng.data(), base, 2),
                     load_lane_major(batch.rng.data(), base, 3)};
        __m256i a = load4_u64(batch.a.data() + base);
        __m256i b = load4_u64(batch.b.data() + base);
        for (int64_t k = 0; k < steps; ++k) {
            __m256i bits = g.next();
            __m256d u = _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(bits, 12)), scale);
            __m256d wa = rule_weight_pd(r, u52_to_pd(_mm256_add_epi64(a, shift)));
            __m256d wb = rule_weight_pd(r, u52_to_pd(_mm256_add_epi64(b, shift)));
            __m256d t = _mm256_div_pd(wa, _mm256_add_pd(wa, wb));
            __m256i move_a = _mm256_castpd_si256(_mm256_cmp_pd(u, t, _CMP_LT_OQ));
            a = _mm256_sub_epi64(a, move_a);
            b = _mm256_sub_epi64(b, _mm256_andnot_si256(move_a, ones));
        }
        store4_u64(batch.a.data() + base, a);
        store4_u64(batch.b.data() + base, b);
        store_lane_major(batch.rng.data(), base, 0, g.s0);
        store_lane_major(batch.rng.data(), base, 1, g.s1);
        store_lane_major(batch.rng.data(), base, 2, g.s2);
        store_lane_major(batch.rng.data(), base, 3, g.s3);
    }
    if (size_t rem = batch.lanes() % 4)
        scalar_tail(batch, rem,
                    [&](WalkBatch& t) { walk_advance_scalar(r, t, steps); });
}

void walk_first_hit_avx2(const WeightRule& r, WalkBatch& batch, uint64_t a_cap,
                         int64_t* hit_m) {
    if (!vectorizable(r)) return walk_first_hit_scalar(r, batch, a_cap, hit_m);
    const size_t blocks = batch.lanes() / 4;
    const __m256i shift = _mm256_set1_epi64x(r.shift);
    const __m256d scale = _mm256_set1_pd(0x1.0p-52);
    const __m256i ones = _mm256_set1_epi64x(-1);
    const __m256i cap = _mm256_set1_epi64x(static_cast<long long>(a_cap));
    for (size_t blk = 0; blk < blocks; ++blk) {
        size_t base = blk * 4;
        XoshiroVec g{load_lane_major(batch.rng.data(), base, 0),
                     load_lane_major(batch.rng.data(), base, 1),
                     load_lane_major(batch.rng.data(), base, 2),
                     load_lane_major(batch.rng.data(), base, 3)};
        __m256i a = load4_u64(batch.a.data() + base);
        __m256i b = load4_u64(batch.b.data() + base);
        __m256i hits = _mm256_set1_epi64x(-1);
        __m256i active = ones;
        for (;;) {
            // Settle lanes sitting on the diagonal or past the cap, then
            // step the rest. Order matches the scalar loop condition.
            __m256i on_diag = _mm256_cmpeq_epi64(a, b);
            __m256i escaped = _mm256_cmpgt_epi64(a, cap);
            hits = _mm256_blendv_epi8(hits, a, _mm256_and_si256(active, on_diag));
            active = _mm256_andnot_si256(_mm256_or_si256(on_diag, escaped), active);
            if (_mm256_testz_si256(active, active)) break;
            XoshiroVec gn = g;
            __m256i bits = gn.next();
            g.s0 = _mm256_blendv_epi8(g.s0, gn.s0, active);
            g.s1 = _mm256_blendv_epi8(g.s1, gn.s1, active);
            g.s2 = _mm256_blendv_epi8(g.s2, gn.s2, active);
            g.s3 = _mm256_blendv_epi8(g.s3, gn.s3, active);
            __m256d u = _mm256_mul_pd(u52_to_pd(_mm256_srli_epi64(bits, 12)), scale);
            __m256d wa = rule_weight_pd(r, u52_to_pd(_mm256_add_epi64(a, shift)));
            __m256d wb = rule_weight_pd(r, u52_to_pd(_mm256_add_epi64(b, shift)));
            __m256d t = _mm256_div_pd(wa, _mm256_add_pd(wa, wb));
            __m256i move_a = _mm256_castpd_si256(_mm256_cmp_pd(u, t, _CMP_LT_OQ));
            a = _mm256_sub_epi64(a, _mm256_and_si256(move_a, active));
            b = _mm256_sub_epi64(b,
                                 _mm256_and_si256(_mm256_andnot_si256(move_a, ones), active));
        }
        store4_u64(batch.a.data() + base, a);
        store4_u64(batch.b.data() + base, b);
        alignas(32) long long hv[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(hv), hits);
        for (int lane = 0; lane < 4; ++lane) hit_m[base + lane] = hv[lane];
        store_lane_major(batch.rng.data(), base, 0, g.s0);
        store_lane_major(batch.rng.data(), base, 1, g.s1);
        store_lane_major(batch.rng.data(), base, 2, g.s2);
        store_lane_major(batch.rng.data(), base, 3, g.s3);
    }
    if (size_t rem = batch.lanes() % 4)
        scalar_tail(batch, rem, [&](WalkBatch& t) {
            walk_first_hit_scalar(r, t, a_cap, hit_m + (batch.lanes() - rem));
        });
}

}  // namespace hubsim::kernels

#endif  // HUBSIM_HAVE_AVX2
