#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "hubsim/core.hpp"
#include "hubsim/kernels.hpp"
#include "hubsim/weights.hpp"

using namespace hubsim;
using namespace hubsim::kernels;

namespace {

std::vector<uint32_t> random_degrees(size_t n, uint32_t lo, uint32_t hi, uint64_t seed) {
    Xoshiro256pp g = Xoshiro256pp::seeded(seed);
    std::vector<uint32_t> d(n);
    for (auto& v : d) v = lo + static_cast<uint32_t>(g.next() % (hi - lo + 1));
    return d;
}

std::vector<WeightRule> vector_rules() {
    return {
        WeightFunction::basic().rule(),
        WeightFunction::linear(0.5).rule(),
        WeightFunction::power(2.0).rule(),
        WeightFunction::power(7.0).rule(),
        WeightFunction::basic(0).rule(),
        WeightFunction::linear(0.25).shifted(3).rule(),
    };
}

}  // namespace

TEST_CASE("isa selection is well formed") {
    Isa isa = active_isa();
    CHECK((isa == Isa::scalar || isa == Isa::avx2));
    if (isa == Isa::avx2) CHECK(avx2_supported());
#ifndef HUBSIM_HAVE_AVX2
    CHECK(isa == Isa::scalar);
    CHECK_FALSE(avx2_supported());
#endif
}

TEST_CASE("vectorizable classification") {
    CHECK(vectorizable(WeightFunction::basic().rule()));
    CHECK(vectorizable(WeightFunction::linear(-0.5).rule()));
    CHECK(vectorizable(WeightFunction::power(4.0).rule()));
    CHECK_FALSE(vectorizable(WeightFunction::power(1.5).rule()));
    CHECK_FALSE(vectorizable(WeightFunction::table({1.0, 2.0, 5.0, 10.0}).rule()));
}

TEST_CASE("weight_map scalar semantics") {
    auto r = WeightFunction::linear(0.5).rule();
    std::vector<uint32_t> deg{0, 1, 2, 10};
    std::vector<double> out(deg.size());
    double sum = weight_map_scalar(r, deg.data(), deg.size(), out.data());
    CHECK(out[0] == 0.0);  // below zero_below
    CHECK(out[1] == 1.5);
    CHECK(out[2] == 2.5);
    CHECK(out[3] == 10.5);
    CHECK(sum == doctest::Approx(14.5));

    // Null out pointer: sum only.
    CHECK(weight_map_scalar(r, deg.data(), deg.size(), nullptr) == sum);

    // Shift folds into the argument, zero_below applies to the raw degree.
    auto rs = WeightFunction::linear(0.5).shifted(3).rule();
    std::vector<uint32_t> one{1};
    std::vector<double> o1(1);
    weight_map_scalar(rs, one.data(), 1, o1.data());
    CHECK(o1[0] == 3.5);
}

TEST_CASE("weight_map matches direct evaluation") {
    auto wf = WeightFunction::power(2.0);
    auto r = wf.rule();
    auto deg = random_degrees(997, 1, 1u << 20, 11);
    std::vector<double> out(deg.size());
    weight_map(r, deg.data(), deg.size(), out.data());
    for (size_t i = 0; i < deg.size(); i += 97)
        CHECK(out[i] == wf(static_cast<int64_t>(deg[i])));
}

TEST_CASE("dp_row_advance conserves and splits exactly") {
    size_t n = 257;
    Xoshiro256pp g = Xoshiro256pp::seeded(42);
    std::vector<double> mass(n), p_up(n), next(n + 1);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mass[i] = unit_double(g.next());
        p_up[i] = unit_double(g.next());
        total += mass[i];
    }
    dp_row_advance_scalar(mass.data(), p_up.data(), n, next.data());
    double total_next = 0.0;
    for (double v : next) total_next += v;
    CHECK(total_next == doctest::Approx(total).epsilon(1e-13));
    // Endpoints: pure right / pure up.
    CHECK(next[0] == mass[0] - mass[0] * p_up[0]);
    CHECK(next[n] == mass[n - 1] * p_up[n - 1]);
}

#ifdef HUBSIM_HAVE_AVX2

TEST_CASE("weight_map avx2 equivalence") {
    if (!avx2_supported()) return;
    for (const auto& r : vector_rules()) {
        for (size_t n : {size_t(1), size_t(4), size_t(5), size_t(1024), size_t(1003)}) {
            auto deg = random_degrees(n, 0, 1u << 20, 1234 + n);
            std::vector<double> out_s(n), out_v(n);
            double sum_s = weight_map_scalar(r, deg.data(), n, out_s.data());
            double sum_v = weight_map_avx2(r, deg.data(), n, out_v.data());
            CHECK(std::memcmp(out_s.data(), out_v.data(), n * sizeof(double)) == 0);
            CHECK(sum_v == doctest::Approx(sum_s).epsilon(1e-12));
        }
    }
}

TEST_CASE("dp_row_advance avx2 bitwise equivalence") {
    if (!avx2_supported()) return;
    Xoshiro256pp g = Xoshiro256pp::seeded(7);
    for (size_t n : {size_t(1), size_t(2), size_t(4), size_t(31), size_t(256), size_t(1001)}) {
        std::vector<double> mass(n), p_up(n), a(n + 1), b(n + 1);
        for (size_t i = 0; i < n; ++i) {
            mass[i] = unit_double(g.next());
            p_up[i] = unit_double(g.next());
        }
        dp_row_advance_scalar(mass.data(), p_up.data(), n, a.data());
        dp_row_advance_avx2(mass.data(), p_up.data(), n, b.data());
        CHECK(std::memcmp(a.data(), b.data(), (n + 1) * sizeof(double)) == 0);
    }
}

TEST_CASE("walk_advance avx2 bitwise equivalence") {
    if (!avx2_supported()) return;
    for (const auto& r : vector_rules()) {
        for (size_t lanes : {size_t(1), size_t(4), size_t(7), size_t(16)}) {
            WalkBatch s, v;
            s.seed(99, 5, lanes, 2, 1);
            v.seed(99, 5, lanes, 2, 1);
            walk_advance_scalar(r, s, 500);
            walk_advance_avx2(r, v, 500);
            CHECK(s.a == v.a);
            CHECK(s.b == v.b);
            CHECK(s.rng == v.rng);
        }
    }
}

TEST_CASE("walk_first_hit avx2 bitwise equivalence") {
    if (!avx2_supported()) return;
    for (const auto& r : vector_rules()) {
        for (size_t lanes : {size_t(4), size_t(9), size_t(32)}) {
            WalkBatch s, v;
            s.seed(1234, 0, lanes, 3, 1);
            v.seed(1234, 0, lanes, 3, 1);
            std::vector<int64_t> hs(lanes), hv(lanes);
            walk_first_hit_scalar(r, s, 50, hs.data());
            walk_first_hit_avx2(r, v, 50, hv.data());
            CHECK(hs == hv);
            CHECK(s.a == v.a);
            CHECK(s.b == v.b);
            CHECK(s.rng == v.rng);
        }
    }
}

#endif  // HUBSIM_HAVE_AVX2

TEST_CASE("walk_first_hit semantics") {
    auto r = WeightFunction::basic().rule();
    WalkBatch b;
    b.seed(5, 0, 64, 2, 1);
    std::vector<int64_t> hit(64);
    walk_first_hit(r, b, 40, hit.data());
    int hits = 0;
    for (size_t i = 0; i < 64; ++i) {
        if (hit[i] >= 0) {
            ++hits;
            CHECK(b.a[i] == b.b[i]);
            CHECK(static_cast<int64_t>(b.a[i]) == hit[i]);
            CHECK(hit[i] >= 2);
            CHECK(hit[i] <= 41);
        } else {
            CHECK(b.a[i] == 41);  // first value past the cap
            CHECK(b.b[i] < b.a[i]);
        }
    }
    CHECK(hits > 0);
    CHECK(hits < 64);  // for the basic weight roughly half the walks hit
}

TEST_CASE("walk batch seeding is stream stable") {
    WalkBatch whole, lo, hi;
    whole.seed(77, 0, 8, 2, 1);
    lo.seed(77, 0, 4, 2, 1);
    hi.seed(77, 4, 4, 2, 1);
    for (size_t i = 0; i < 16; ++i) {
        CHECK(whole.rng[i] == lo.rng[i]);
        CHECK(whole.rng[16 + i] == hi.rng[i]);
    }
    WalkBatch other;
    other.seed(78, 0, 8, 2, 1);
    CHECK(other.rng != whole.rng);
}

TEST_CASE("walk_advance statistics track the urn share") {
    // Linear weight from (1, 1): the a share converges to Beta(1 + beta, 1 + beta)
    // with mean 1/2; crude sanity check on the empirical mean.
    auto r = WeightFunction::linear(1.0).rule();
    size_t lanes = 4096;
    WalkBatch b;
    b.seed(31337, 0, lanes, 1, 1);
    walk_advance(r, b, 2000);
    double mean = 0.0;
    for (size_t i = 0; i < lanes; ++i) {
        mean += static_cast<double>(b.a[i]) / static_cast<double>(b.a[i] + b.b[i]);
        CHECK(b.a[i] + b.b[i] == 2002);
    }
    mean /= static_cast<double>(lanes);
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}
