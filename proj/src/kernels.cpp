#include <cstdlib>
#include <string>

#include "hubsim/core.hpp"
#include "hubsim/kernels.hpp"

namespace hubsim::kernels {

bool avx2_supported() {
#ifdef HUBSIM_HAVE_AVX2
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        if (const char* env = std::getenv("HUBSIM_ISA")) {
            std::string v(env);
            if (v == "scalar") return Isa::scalar;
            if (v == "avx2") {
                if (!avx2_supported())
                    throw DomainError("HUBSIM_ISA=avx2 but AVX2 is not available");
                return Isa::avx2;
            }
            throw DomainError("HUBSIM_ISA must be 'scalar' or 'avx2', got '" + v + "'");
        }
        return avx2_supported() ? Isa::avx2 : Isa::scalar;
    }();
    return isa;
}

bool vectorizable(const WeightRule& r) {
    switch (r.kind) {
        case WeightKind::basic:
        case WeightKind::linear:
            return true;
        case WeightKind::power:
            return r.p_is_int;
        case WeightKind::table:
            return false;
    }
    return false;
}

void WalkBatch::seed(uint64_t master_seed, uint64_t first_stream, size_t n,
                     uint64_t a0, uint64_t b0) {
    a.assign(n, a0);
    b.assign(n, b0);
    rng.resize(n * 4);
    for (size_t lane = 0; lane < n; ++lane) {
        Xoshiro256pp g =
            Xoshiro256pp::seeded(stream_seed(master_seed, first_stream + lane));
        for (int j = 0; j < 4; ++j) rng[lane * 4 + j] = g.s[j];
    }
}

double weight_map(const WeightRule& r, const uint32_t* deg, size_t n, double* out) {
#ifdef HUBSIM_HAVE_AVX2
    if (active_isa() == Isa::avx2 && vectorizable(r))
        return weight_map_avx2(r, deg, n, out);
#endif
    return weight_map_scalar(r, deg, n, out);
}

void dp_row_advance(const double* mass, const double* p_up, size_t n, double* next) {
#ifdef HUBSIM_HAVE_AVX2
    if (active_isa() == Isa::avx2) return dp_row_advance_avx2(mass, p_up, n, next);
#endif
    dp_row_advance_scalar(mass, p_up, n, next);
}

void walk_advance(const WeightRule& r, WalkBatch& batch, int64_t steps) {
#ifdef HUBSIM_HAVE_AVX2
    if (active_isa() == Isa::avx2 && vectorizable(r))
        return walk_advance_avx2(r, batch, steps);
#endif
    walk_advance_scalar(r, batch, steps);
}

void walk_first_hit(const WeightRule& r, WalkBatch& batch, uint64_t a_cap,
                    int64_t* hit_m) {
#ifdef HUBSIM_HAVE_AVX2
    if (active_isa() == Isa::avx2 && vectorizable(r))
        return walk_first_hit_avx2(r, batch, a_cap, hit_m);
#endif
    walk_first_hit_scalar(r, batch, a_cap, hit_m);
}

}  // namespace hubsim::kernels
