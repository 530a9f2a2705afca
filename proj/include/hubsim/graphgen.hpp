#pragma once

#include <cstdint>
#include <vector>

#include "hubsim/core.hpp"
#include "hubsim/fenwick.hpp"
#include "hubsim/kernels.hpp"
#include "hubsim/weights.hpp"

namespace hubsim {

// One elementary step's outcome. Indices are creation-order, 0-based.
struct StepEvent {
    int64_t new_vertex = -1;  // -1 when the step added no vertex
    int64_t edge_from = -1;   // newest vertex at edge time, -1 when no edge
    int64_t target = -1;      // sampled older endpoint, -1 when no edge
};

struct LeaderChange {
    int64_t step = 0;
    std::vector<int64_t> old_leaders;
    std::vector<int64_t> new_leaders;
};

// Running argmax bookkeeping over the degree vector. Degrees only grow, so
// the leader set changes exactly when a bumped vertex reaches or passes the
// current maximum; maintenance is O(1) amortized per step.
struct HubRecord {
    uint32_t max_degree = 0;
    std::vector<int64_t> leaders;            // sorted vertices attaining max_degree
    std::vector<LeaderChange> change_log;    // filled only when requested in RunOptions
    std::vector<int64_t> sole_leaders_seen;  // distinct sole leaders, first-attainment order
    int64_t current_sole = -1;               // most recent sole-leader identity
    int64_t sole_reign_start = -1;           // step that identity became sole leader
    int64_t sole_changes = 0;                // identity handovers (first attainment excluded)
    std::vector<int64_t> sole_changes_per_decade;  // handover step in [10^k, 10^(k+1))

    // Step of the most recent sole-identity change; -1 while the lead is tied.
    int64_t last_sole_leader_change() const {
        return leaders.size() == 1 ? sole_reign_start : -1;
    }
};

struct Checkpoint {
    int64_t step = 0;
    uint32_t max_degree = 0;
    int64_t sole_leader = -1;  // -1 when the lead is tied at this step
};

struct TrialSummary {
    uint64_t seed = 0;
    int64_t steps = 0;
    uint32_t final_max_degree = 0;
    int64_t final_leader = -1;  // lowest-index leader at the end
    int64_t distinct_sole_leaders = 0;
    int64_t last_leader_change_step = -1;  // sentinel -1 when tied at the end
    std::vector<Checkpoint> curve;         // geometrically spaced, includes powers of 10
    std::vector<uint32_t> watch_degrees;   // degree of each watched vertex at the end
    std::vector<int64_t> sole_changes_per_decade;  // handovers with step in [10^k, 10^(k+1))
    int64_t comparison_checked = 0;
    int64_t comparison_violations = 0;
    int64_t supermartingale_checked = 0;
    int64_t supermartingale_violations = 0;
};

struct RunOptions {
    int64_t steps = 0;
    std::vector<int64_t> watch;       // vertex indices to report at the end
    bool checkpoints = true;          // record the (step, max degree, sole leader) curve
    bool record_change_log = false;   // keep the full leader-set change log
    bool check_comparison = false;    // attachment probability vs linear lower bound
    bool check_supermartingale = false;  // one-step certificate expectation
    int64_t resync_interval = 1 << 16;
    std::vector<std::pair<int64_t, int64_t>>* edge_sink = nullptr;  // optional edge log
};

// 1, 2, ..., geometric with ratio 10^(1/8) (hits every power of 10), capped
// at and including `steps`.
std::vector<int64_t> geometric_checkpoints(int64_t steps);

// One preferential attachment trajectory.
//
// m0 = 1 starts from one vertex of degree 0; every step adds a vertex plus
// one edge to a sampled older vertex (the first such choice is forced since
// the lone old vertex carries placeholder weight 0 -> uniform fallback).
// m0 >= 2 starts empty; elementary step t creates vertex t/m0 when t is a
// multiple of m0, and every step adds one edge from the newest vertex to a
// sampled strictly older one (no edge while no older vertex exists). Both
// endpoints gain a degree.
//
// Weighted sampling runs on a Fenwick tree over W(degree); when any weight
// exceeds 1e300 the state switches permanently to log-domain mode, storing
// log-weights and sampling by a two-pass max-shifted exponential scan.
class DegreeState {
public:
    DegreeState(const WeightFunction& w, int64_t m0, uint64_t seed);

    StepEvent step();

    // Sample among all current vertices with probability W(deg)/total.
    // Consumes one RNG draw. Uniform fallback when the total weight is zero.
    int64_t sample_target();

    TrialSummary run(const RunOptions& opt);

    // Recompute all weights, rebuild the sampling index, and verify that the
    // incrementally maintained total and max degree did not drift.
    void resync();

    const std::vector<uint32_t>& degrees() const { return degrees_; }
    int64_t vertices() const { return static_cast<int64_t>(degrees_.size()); }
    int64_t edges() const { return edges_; }
    // Elementary steps completed, as counted by step()/run(). For m0 = 1 the
    // initial vertex is part of the start state, so after n steps there are
    // n+1 vertices and n edges.
    int64_t step_count() const { return m0_ == 1 ? tick_ - 1 : tick_; }
    double total_weight() const;
    bool log_mode() const { return log_mode_; }
    int64_t m0() const { return m0_; }
    uint64_t seed() const { return seed_; }
    const HubRecord& hub() const { return hub_; }
    const WeightFunction& weight() const { return w_; }

private:
    void add_vertex();
    void bump_degree(int64_t v);
    void hub_join(int64_t v, uint32_t d);
    void reconcile_hub(uint32_t pre_max, const std::vector<int64_t>& pre_leaders);
    void enter_log_mode();
    void ensure_index_capacity(size_t cap);
    int64_t sample_among(int64_t count);
    double vertex_weight(uint32_t d) const;
    double log_weight(uint32_t d) const;

    WeightFunction w_;
    WeightRule rule_;
    int64_t m0_ = 1;
    uint64_t seed_ = 0;
    Xoshiro256pp rng_{};
    std::vector<uint32_t> degrees_;
    Fenwick fen_;
    double total_ = 0.0;
    std::vector<double> logw_;  // valid in log-domain mode
    bool log_mode_ = false;
    int64_t tick_ = 0;  // internal step index; vertex created when tick % m0 == 0
    int64_t edges_ = 0;
    HubRecord hub_;
    bool record_change_log_ = false;
    std::vector<int64_t> prev_leaders_;  // per-step snapshot scratch
};

}  // namespace hubsim
