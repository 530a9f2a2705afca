#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hubsim/graphgen.hpp"
#include "hubsim/stats.hpp"

using namespace hubsim;

namespace {

uint64_t degree_sum(const DegreeState& st) {
    const auto& d = st.degrees();
    return std::accumulate(d.begin(), d.end(), uint64_t{0});
}

int decade_of(int64_t s) {
    int d = 0;
    while (s >= 10) {
        s /= 10;
        ++d;
    }
    return d;
}

}  // namespace

TEST_CASE("single-vertex start state") {
    DegreeState st(WeightFunction::basic(), 1, 7);
    CHECK(st.vertices() == 1);
    CHECK(st.edges() == 0);
    CHECK(st.step_count() == 0);
    CHECK(st.degrees()[0] == 0);
    CHECK(st.total_weight() == 0.0);
    CHECK(st.hub().max_degree == 0);
    REQUIRE(st.hub().leaders == std::vector<int64_t>{0});
    CHECK(st.hub().last_sole_leader_change() == 0);

    RunOptions ro;
    ro.steps = 0;
    auto sum = st.run(ro);
    CHECK(sum.steps == 0);
    CHECK(sum.final_max_degree == 0);
    CHECK(sum.final_leader == 0);
    CHECK(sum.distinct_sole_leaders == 1);
    CHECK(sum.last_leader_change_step == 0);
    CHECK(sum.curve.empty());
}

TEST_CASE("construction rejects bad arguments") {
    CHECK_THROWS_AS(DegreeState(WeightFunction::basic(), 0, 1), DomainError);
    CHECK_THROWS_AS(DegreeState(WeightFunction::linear(0.5, 2), 1, 1), DomainError);
}

TEST_CASE("first attachment is forced onto vertex 0") {
    for (uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
        DegreeState st(WeightFunction::linear(0.5), 1, seed);
        auto ev = st.step();
        CHECK(ev.new_vertex == 1);
        CHECK(ev.edge_from == 1);
        CHECK(ev.target == 0);
        CHECK(st.vertices() == 2);
        CHECK(st.edges() == 1);
        CHECK(st.degrees()[0] == 1);
        CHECK(st.degrees()[1] == 1);
        CHECK(st.hub().max_degree == 1);
        REQUIRE(st.hub().leaders == std::vector<int64_t>({0, 1}));
        CHECK(st.hub().last_sole_leader_change() == -1);
    }
}

TEST_CASE("sampling from an empty or zero-weight set") {
    DegreeState st(WeightFunction::basic(), 1, 3);
    for (int i = 0; i < 50; ++i) CHECK(st.sample_target() == 0);  // uniform fallback
    DegreeState empty(WeightFunction::basic(), 2, 3);
    CHECK_THROWS_AS(empty.sample_target(), DomainError);
}

TEST_CASE("step events and handshake under one vertex per step") {
    DegreeState st(WeightFunction::basic(), 1, 11);
    for (int64_t k = 1; k <= 100; ++k) {
        auto ev = st.step();
        CHECK(ev.new_vertex == k);
        CHECK(ev.edge_from == k);
        CHECK(ev.target >= 0);
        CHECK(ev.target < k);
    }
    CHECK(st.vertices() == 101);
    CHECK(st.edges() == 100);
    CHECK(degree_sum(st) == 200);
}

TEST_CASE("handshake and totals across weight kinds") {
    struct Case {
        WeightFunction w;
        const char* name;
    };
    Case cases[] = {
        {WeightFunction::basic(), "basic"},
        {WeightFunction::linear(0.5), "linear"},
        {WeightFunction::table({1.0, 2.0, 5.0, 10.0, 17.0, 26.0}), "table"},
        {WeightFunction::power(2.0), "power"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        DegreeState st(c.w, 1, 20240601);
        RunOptions ro;
        ro.steps = 5000;
        ro.checkpoints = false;
        auto sum = st.run(ro);
        CHECK(st.vertices() == 5001);
        CHECK(st.edges() == 5000);
        CHECK(degree_sum(st) == 10000);
        CHECK(sum.final_max_degree ==
              *std::max_element(st.degrees().begin(), st.degrees().end()));
        double direct = 0.0;
        for (uint32_t d : st.degrees()) direct += d >= 1 ? c.w(d) : 0.0;
        CHECK(st.total_weight() == doctest::Approx(direct).epsilon(1e-9));
        CHECK_NOTHROW(st.resync());
    }
}

TEST_CASE("basic total weight is exactly twice the edge count") {
    DegreeState st(WeightFunction::basic(), 1, 5);
    RunOptions ro;
    ro.steps = 3000;
    ro.checkpoints = false;
    st.run(ro);
    CHECK(st.total_weight() == 6000.0);
}

TEST_CASE("vertex cadence with an interval of two") {
    DegreeState st(WeightFunction::basic(), 2, 17);
    CHECK(st.vertices() == 0);
    auto e0 = st.step();  // creates vertex 0, no older vertex to attach to
    CHECK(e0.new_vertex == 0);
    CHECK(e0.target == -1);
    auto e1 = st.step();  // no vertex due, still nothing older than vertex 0
    CHECK(e1.new_vertex == -1);
    CHECK(e1.target == -1);
    auto e2 = st.step();  // creates vertex 1, forced edge to vertex 0
    CHECK(e2.new_vertex == 1);
    CHECK(e2.edge_from == 1);
    CHECK(e2.target == 0);
    CHECK(st.vertices() == 2);
    CHECK(st.edges() == 1);
    CHECK(st.degrees()[0] == 1);
    CHECK(st.degrees()[1] == 1);
}

TEST_CASE("vertex counts follow the floor rule for larger intervals") {
    for (int64_t m0 : {2, 3, 5}) {
        CAPTURE(m0);
        DegreeState st(WeightFunction::linear(1.0), m0, 31);
        RunOptions ro;
        ro.steps = 1000;
        ro.checkpoints = false;
        auto sum = st.run(ro);
        CHECK(sum.steps == 1000);
        int64_t last_tick = 999;
        CHECK(st.vertices() == last_tick / m0 + 1);
        // Ticks before the second vertex appears add no edge.
        CHECK(st.edges() == 1000 - m0);
        CHECK(degree_sum(st) == uint64_t(2 * (1000 - m0)));
        CHECK_NOTHROW(st.resync());
    }
}

TEST_CASE("same seed reproduces a run, different seed changes it") {
    RunOptions ro;
    ro.steps = 2000;
    auto run_one = [&](uint64_t seed) {
        DegreeState st(WeightFunction::linear(0.5), 1, seed);
        auto sum = st.run(ro);
        return std::make_pair(sum, st.degrees());
    };
    auto [s1, d1] = run_one(42);
    auto [s2, d2] = run_one(42);
    auto [s3, d3] = run_one(43);
    CHECK(d1 == d2);
    CHECK(s1.final_max_degree == s2.final_max_degree);
    CHECK(s1.final_leader == s2.final_leader);
    CHECK(s1.distinct_sole_leaders == s2.distinct_sole_leaders);
    CHECK(s1.last_leader_change_step == s2.last_leader_change_step);
    REQUIRE(s1.curve.size() == s2.curve.size());
    for (size_t i = 0; i < s1.curve.size(); ++i) {
        CHECK(s1.curve[i].step == s2.curve[i].step);
        CHECK(s1.curve[i].max_degree == s2.curve[i].max_degree);
        CHECK(s1.curve[i].sole_leader == s2.curve[i].sole_leader);
    }
    CHECK(d1 != d3);
}

TEST_CASE("attachment frequencies match exact degree proportions") {
    DegreeState st(WeightFunction::basic(), 1, 424242);
    RunOptions ro;
    ro.steps = 50;
    ro.checkpoints = false;
    st.run(ro);
    auto degs = st.degrees();
    double tot = 0.0;
    for (uint32_t d : degs) tot += d;

    // Three highest-degree vertices as their own cells, everything else merged.
    std::vector<size_t> order(degs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return degs[a] != degs[b] ? degs[a] > degs[b] : a < b;
    });
    std::vector<int64_t> cell(degs.size(), 3);
    std::vector<double> probs(4, 0.0);
    for (int i = 0; i < 3; ++i) {
        cell[order[size_t(i)]] = i;
        probs[size_t(i)] = degs[order[size_t(i)]] / tot;
    }
    probs[3] = 1.0 - probs[0] - probs[1] - probs[2];

    const int n_draws = 20000;
    std::vector<int64_t> counts(4, 0);
    for (int i = 0; i < n_draws; ++i) ++counts[size_t(cell[size_t(st.sample_target())])];
    double chi2 = stats::chi_square_stat(counts, probs);
    CHECK(chi2 < 11.344866730144373);  // 99th percentile, 3 degrees of freedom
}

TEST_CASE("leader bookkeeping matches a brute-force replay") {
    std::vector<std::pair<int64_t, int64_t>> edges;
    RunOptions ro;
    ro.steps = 3000;
    ro.record_change_log = true;
    ro.edge_sink = &edges;
    DegreeState st(WeightFunction::linear(0.5), 1, 99);
    auto sum = st.run(ro);
    REQUIRE(edges.size() == 3000);

    std::vector<uint32_t> deg{0};
    uint32_t max_deg = 0;
    std::vector<int64_t> leaders{0};
    int64_t current_sole = 0, reign_start = 0, sole_changes = 0;
    std::vector<int64_t> seen{0};
    std::vector<int64_t> decades;
    std::vector<LeaderChange> events;
    auto grid = geometric_checkpoints(3000);
    size_t gi = 0;
    std::vector<Checkpoint> curve;

    for (size_t k = 0; k < edges.size(); ++k) {
        int64_t s = int64_t(k) + 1;
        auto [f, t] = edges[k];
        REQUIRE(f == int64_t(deg.size()));
        deg.push_back(0);
        ++deg[size_t(t)];
        ++deg[size_t(f)];
        uint32_t m = *std::max_element(deg.begin(), deg.end());
        std::vector<int64_t> lead;
        for (size_t i = 0; i < deg.size(); ++i)
            if (deg[i] == m) lead.push_back(int64_t(i));
        if (m != max_deg || lead != leaders) {
            events.push_back({s, leaders, lead});
            max_deg = m;
            leaders = lead;
            if (leaders.size() == 1 && leaders[0] != current_sole) {
                ++sole_changes;
                int d = decade_of(s);
                if (decades.size() <= size_t(d)) decades.resize(size_t(d) + 1, 0);
                ++decades[size_t(d)];
                current_sole = leaders[0];
                reign_start = s;
                if (std::find(seen.begin(), seen.end(), current_sole) == seen.end())
                    seen.push_back(current_sole);
            }
        }
        if (gi < grid.size() && grid[gi] == s) {
            curve.push_back({s, m, leaders.size() == 1 ? leaders[0] : -1});
            ++gi;
        }
    }

    const auto& log = st.hub().change_log;
    REQUIRE(log.size() == events.size());
    for (size_t i = 0; i < log.size(); ++i) {
        CHECK(log[i].step == events[i].step);
        CHECK(log[i].old_leaders == events[i].old_leaders);
        CHECK(log[i].new_leaders == events[i].new_leaders);
    }
    CHECK(st.hub().sole_changes == sole_changes);
    CHECK(st.hub().sole_leaders_seen == seen);
    CHECK(sum.distinct_sole_leaders == int64_t(seen.size()));
    CHECK(sum.last_leader_change_step == (leaders.size() == 1 ? reign_start : -1));
    CHECK(sum.sole_changes_per_decade == decades);
    REQUIRE(sum.curve.size() == curve.size());
    for (size_t i = 0; i < curve.size(); ++i) {
        CHECK(sum.curve[i].step == curve[i].step);
        CHECK(sum.curve[i].max_degree == curve[i].max_degree);
        CHECK(sum.curve[i].sole_leader == curve[i].sole_leader);
    }
}

TEST_CASE("checkpoint grid is geometric and hits powers of ten") {
    CHECK(geometric_checkpoints(0).empty());
    CHECK(geometric_checkpoints(1) == std::vector<int64_t>{1});
    auto g = geometric_checkpoints(100000);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());  // strictly increasing
    CHECK(g.back() == 100000);
    for (int64_t p : {1LL, 10LL, 100LL, 1000LL, 10000LL, 100000LL})
        CHECK(std::binary_search(g.begin(), g.end(), p));
    CHECK(std::binary_search(g.begin(), g.end(), 13));  // round(10^(9/8))
}

TEST_CASE("long run crosses the periodic rebuild without drift") {
    DegreeState st(WeightFunction::table({1.0, 2.0, 5.0, 10.0, 17.0, 26.0}), 1, 8);
    RunOptions ro;
    ro.steps = 70000;  // crosses the default rebuild interval
    ro.checkpoints = false;
    auto sum = st.run(ro);
    CHECK(sum.steps == 70000);
    CHECK(degree_sum(st) == 140000);
    CHECK_NOTHROW(st.resync());
}

TEST_CASE("huge weights switch sampling to the log domain") {
    WeightFunction w = WeightFunction::table({1.0, 2.0, 1e301});
    DegreeState st(w, 1, 12345);
    int64_t k = 0;
    while (!st.log_mode() && k < 500) {
        st.step();
        ++k;
    }
    REQUIRE(st.log_mode());
    CHECK(st.total_weight() == std::numeric_limits<double>::infinity());
    int64_t before = st.step_count();
    for (int i = 0; i < 200; ++i) st.step();
    CHECK(st.step_count() == before + 200);
    CHECK(st.vertices() == st.step_count() + 1);
    CHECK(st.edges() == st.step_count());
    CHECK(degree_sum(st) == uint64_t(2 * st.step_count()));
    // Degree 3 carries almost all the mass, so the first vertex to reach it
    // soaks up every later attachment.
    const auto& hub = st.hub();
    CHECK(hub.max_degree >= 100);
    CHECK_NOTHROW(st.resync());

    DegreeState st2(w, 1, 12345);
    RunOptions ro;
    ro.steps = st.step_count();
    ro.checkpoints = false;
    st2.run(ro);
    CHECK(st2.degrees() == st.degrees());
}

TEST_CASE("probability checks pass on standard kinds and reject other intervals") {
    struct Case {
        WeightFunction w;
        const char* name;
        int64_t steps;
    };
    Case cases[] = {
        {WeightFunction::basic(), "basic", 20000},
        {WeightFunction::linear(0.5), "linear", 10000},
        {WeightFunction::table({1.0, 2.0, 5.0, 10.0, 17.0, 26.0}), "table", 10000},
        {WeightFunction::power(2.0), "power", 5000},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        DegreeState st(c.w, 1, 2024);
        RunOptions ro;
        ro.steps = c.steps;
        ro.checkpoints = false;
        ro.check_comparison = true;
        ro.check_supermartingale = true;
        auto sum = st.run(ro);
        CHECK(sum.comparison_checked > 0);
        CHECK(sum.comparison_violations == 0);
        CHECK(sum.supermartingale_checked > 0);
        CHECK(sum.supermartingale_violations == 0);
    }

    DegreeState two(WeightFunction::basic(), 2, 1);
    RunOptions ro;
    ro.steps = 10;
    ro.check_comparison = true;
    CHECK_THROWS_AS(two.run(ro), DomainError);
}

TEST_CASE("watched vertices report final degrees") {
    DegreeState st(WeightFunction::basic(), 1, 55);
    RunOptions ro;
    ro.steps = 500;
    ro.checkpoints = false;
    ro.watch = {0, 5, 999999};
    auto sum = st.run(ro);
    REQUIRE(sum.watch_degrees.size() == 3);
    CHECK(sum.watch_degrees[0] == st.degrees()[0]);
    CHECK(sum.watch_degrees[1] == st.degrees()[5]);
    CHECK(sum.watch_degrees[2] == 0);
}

TEST_CASE("curve entries are nondecreasing in max degree") {
    DegreeState st(WeightFunction::power(2.0), 1, 71);
    RunOptions ro;
    ro.steps = 20000;
    auto sum = st.run(ro);
    REQUIRE(!sum.curve.empty());
    CHECK(sum.curve.back().step == 20000);
    for (size_t i = 1; i < sum.curve.size(); ++i) {
        CHECK(sum.curve[i].step > sum.curve[i - 1].step);
        CHECK(sum.curve[i].max_degree >= sum.curve[i - 1].max_degree);
    }
}
