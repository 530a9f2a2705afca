#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hubsim/weights.hpp"

// Data-parallel inner loops: weight map/reduce over degree arrays, the DP
// anti-diagonal advance, and batched two-coordinate walks. Each has a scalar
// reference implementation and (on x86-64) an AVX2 variant selected at
// runtime. Elementwise kernels are bit-identical between the two; only the
// reduction order of weight_map's sum differs.
//
// All translation units in this component are compiled with
// -ffp-contract=off so the compiler cannot fuse multiply-adds differently
// between the scalar and vector builds.
namespace hubsim::kernels {

enum class Isa { scalar, avx2 };

bool avx2_supported();

// Selected instruction set. Cached after first call. The HUBSIM_ISA
// environment variable ("scalar" or "avx2") overrides detection; forcing
// avx2 on a machine without it throws DomainError.
Isa active_isa();

// True when the batched walk / weight map has a vector path for this rule.
// Table lookups and non-integer power exponents always take the scalar path.
bool vectorizable(const WeightRule& r);

// Writes W(deg[i]) into out[i] (out may be null) and returns the sum.
// Degrees below r.zero_below contribute exactly 0. Degrees must stay below
// 2^31 (the vector path converts through signed 32-bit lanes).
double weight_map(const WeightRule& r, const uint32_t* deg, size_t n, double* out);

// One anti-diagonal advance of the first-hit DP. mass and p_up have n cells,
// next has n+1:
//   up[i]    = mass[i] * p_up[i]
//   right[i] = mass[i] - up[i]
//   next[i]  = right[i] + up[i-1]      (one-sided at the edges)
// The per-cell split is exact by construction (right + up == mass), which is
// what keeps the DP's conservation drift at rounding level.
void dp_row_advance(const double* mass, const double* p_up, size_t n, double* next);

// A batch of independent walks on pairs (a, b): with probability
// W(a) / (W(a) + W(b)) the a coordinate steps, else b. One xoshiro256++
// stream per lane; uniforms are (r >> 12) * 2^-52, identical in scalar and
// vector code.
struct WalkBatch {
    std::vector<uint64_t> a, b;
    std::vector<uint64_t> rng;  // 4 state words per lane, lane-major

    size_t lanes() const { return a.size(); }
    void seed(uint64_t master_seed, uint64_t first_stream, size_t lanes,
              uint64_t a0, uint64_t b0);
};

// Advance every lane exactly `steps` steps.
void walk_advance(const WeightRule& r, WalkBatch& batch, int64_t steps);

// Run each lane until a == b (diagonal hit) or a > a_cap (escape).
// hit_m[i] = the common coordinate value on a hit, -1 on escape.
void walk_first_hit(const WeightRule& r, WalkBatch& batch, uint64_t a_cap,
                    int64_t* hit_m);

// Per-ISA entry points, exported for the equivalence tests.
double weight_map_scalar(const WeightRule&, const uint32_t*, size_t, double*);
void dp_row_advance_scalar(const double*, const double*, size_t, double*);
void walk_advance_scalar(const WeightRule&, WalkBatch&, int64_t);
void walk_first_hit_scalar(const WeightRule&, WalkBatch&, uint64_t, int64_t*);

#ifdef HUBSIM_HAVE_AVX2
double weight_map_avx2(const WeightRule&, const uint32_t*, size_t, double*);
void dp_row_advance_avx2(const double*, const double*, size_t, double*);
void walk_advance_avx2(const WeightRule&, WalkBatch&, int64_t);
void walk_first_hit_avx2(const WeightRule&, WalkBatch&, uint64_t, int64_t*);
#endif

}  // namespace hubsim::kernels
