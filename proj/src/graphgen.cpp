#include "hubsim/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hubsim {

namespace {

constexpr double kLogSwitch = 1e300;

// Count of multiples of m in [0, x).
int64_t multiples_below(int64_t x, int64_t m) { return x <= 0 ? 0 : (x + m - 1) / m; }

int decade_of(int64_t step) {
    int d = 0;
    while (step >= 10) {
        step /= 10;
        ++d;
    }
    return d;
}

// The vector kernel's horizontal sum is rounding-order dependent across
// ISAs; the stored total always comes from this plain-order accumulation of
// the (bitwise ISA-independent) mapped weights.
double plain_sum(const double* x, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

}  // namespace

std::vector<int64_t> geometric_checkpoints(int64_t steps) {
    std::vector<int64_t> out;
    if (steps < 1) return out;
    for (int j = 0;; ++j) {
        int64_t v = std::llround(std::pow(10.0, j / 8.0));
        if (v >= steps) break;
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    out.push_back(steps);
    return out;
}

DegreeState::DegreeState(const WeightFunction& w, int64_t m0, uint64_t seed)
    : w_(w), rule_(w.rule()), m0_(m0), seed_(seed), rng_(Xoshiro256pp::seeded(seed)) {
    if (m0_ < 1) throw DomainError("vertex interval must be >= 1");
    if (w_.domain_floor() > 1)
        throw DomainError("trajectories need weights with domain floor 0 or 1");
    if (m0_ == 1) {
        // Single-vertex start: vertex 0 exists before any step, and the
        // first step's attachment is forced onto it.
        add_vertex();
        tick_ = 1;
        hub_.current_sole = 0;
        hub_.sole_reign_start = 0;
        hub_.sole_leaders_seen.push_back(0);
    }
}

double DegreeState::vertex_weight(uint32_t d) const {
    return d < rule_.zero_below ? 0.0 : w_(d);
}

double DegreeState::log_weight(uint32_t d) const {
    return d < rule_.zero_below ? -std::numeric_limits<double>::infinity() : w_.log_eval(d);
}

double DegreeState::total_weight() const {
    return log_mode_ ? std::numeric_limits<double>::infinity() : total_;
}

void DegreeState::ensure_index_capacity(size_t cap) {
    if (log_mode_ || cap <= fen_.size()) return;
    std::vector<double> buf(cap, 0.0);
    kernels::weight_map(rule_, degrees_.data(), degrees_.size(), buf.data());
    total_ = plain_sum(buf.data(), degrees_.size());
    fen_.build_from(buf.data(), buf.size());
}

void DegreeState::enter_log_mode() {
    log_mode_ = true;
    logw_.resize(degrees_.size());
    for (size_t i = 0; i < degrees_.size(); ++i) logw_[i] = log_weight(degrees_[i]);
    fen_.reset(0);
    total_ = 0.0;
}

void DegreeState::hub_join(int64_t v, uint32_t d) {
    if (d > hub_.max_degree) {
        hub_.max_degree = d;
        hub_.leaders.assign(1, v);
    } else if (d == hub_.max_degree) {
        auto it = std::lower_bound(hub_.leaders.begin(), hub_.leaders.end(), v);
        if (it == hub_.leaders.end() || *it != v) hub_.leaders.insert(it, v);
    }
}

void DegreeState::add_vertex() {
    int64_t v = vertices();
    degrees_.push_back(0);
    if (!log_mode_) {
        if (static_cast<size_t>(v) >= fen_.size())
            ensure_index_capacity(std::max<size_t>(2 * fen_.size(), 16));
        double w0 = vertex_weight(0);
        if (w0 > kLogSwitch) {
            enter_log_mode();
        } else if (w0 != 0.0) {
            fen_.add(static_cast<size_t>(v), w0);
            total_ += w0;
        }
    } else {
        logw_.push_back(log_weight(0));
    }
    hub_join(v, 0);
}

void DegreeState::bump_degree(int64_t v) {
    uint32_t d = ++degrees_[static_cast<size_t>(v)];
    if (!log_mode_) {
        double wnew = vertex_weight(d);
        if (wnew > kLogSwitch) {
            enter_log_mode();
        } else {
            double wold = vertex_weight(d - 1);
            fen_.add(static_cast<size_t>(v), wnew - wold);
            total_ += wnew - wold;
        }
    } else {
        logw_[static_cast<size_t>(v)] = log_weight(d);
    }
    hub_join(v, d);
}

int64_t DegreeState::sample_among(int64_t count) {
    if (count <= 0) throw DomainError("sampling from an empty vertex set");
    double u = unit_double(rng_.next());
    if (!log_mode_) {
        double mass = fen_.prefix(static_cast<size_t>(count));
        if (!(mass > 0.0)) {
            auto idx = static_cast<int64_t>(u * static_cast<double>(count));
            return idx >= count ? count - 1 : idx;
        }
        double x = u * mass;
        double cap = std::nextafter(mass, 0.0);
        if (x > cap) x = cap;
        auto i = static_cast<int64_t>(fen_.find(x));
        return i >= count ? count - 1 : i;
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < count; ++i) mx = std::max(mx, logw_[static_cast<size_t>(i)]);
    if (mx == -std::numeric_limits<double>::infinity()) {
        auto idx = static_cast<int64_t>(u * static_cast<double>(count));
        return idx >= count ? count - 1 : idx;
    }
    double sum = 0.0;
    for (int64_t i = 0; i < count; ++i) sum += std::exp(logw_[static_cast<size_t>(i)] - mx);
    double x = u * sum;
    double acc = 0.0;
    int64_t last_positive = 0;
    for (int64_t i = 0; i < count; ++i) {
        double e = std::exp(logw_[static_cast<size_t>(i)] - mx);
        if (e > 0.0) last_positive = i;
        acc += e;
        if (x < acc) return i;
    }
    return last_positive;
}

int64_t DegreeState::sample_target() { return sample_among(vertices()); }

void DegreeState::reconcile_hub(uint32_t pre_max, const std::vector<int64_t>& pre_leaders) {
    if (hub_.max_degree == pre_max && hub_.leaders == pre_leaders) return;
    int64_t s = step_count();
    if (record_change_log_) hub_.change_log.push_back({s, pre_leaders, hub_.leaders});
    if (hub_.leaders.size() == 1) {
        int64_t sole = hub_.leaders[0];
        if (sole != hub_.current_sole) {
            if (hub_.current_sole != -1) {
                ++hub_.sole_changes;
                int d = decade_of(s);
                if (hub_.sole_changes_per_decade.size() <= static_cast<size_t>(d))
                    hub_.sole_changes_per_decade.resize(static_cast<size_t>(d) + 1, 0);
                ++hub_.sole_changes_per_decade[static_cast<size_t>(d)];
            }
            hub_.current_sole = sole;
            hub_.sole_reign_start = s;
            auto& seen = hub_.sole_leaders_seen;
            if (std::find(seen.begin(), seen.end(), sole) == seen.end()) seen.push_back(sole);
        }
    }
}

StepEvent DegreeState::step() {
    uint32_t pre_max = hub_.max_degree;
    prev_leaders_.assign(hub_.leaders.begin(), hub_.leaders.end());

    StepEvent ev;
    if (tick_ % m0_ == 0) {
        add_vertex();
        ev.new_vertex = vertices() - 1;
    }
    int64_t newest = vertices() - 1;
    if (newest > 0) {
        int64_t t = sample_among(newest);
        ev.edge_from = newest;
        ev.target = t;
        bump_degree(t);
        bump_degree(newest);
        ++edges_;
    }
    ++tick_;
    reconcile_hub(pre_max, prev_leaders_);
    return ev;
}

void DegreeState::resync() {
    size_t n = degrees_.size();
    if (!log_mode_) {
        std::vector<double> buf(std::max(fen_.size(), n), 0.0);
        kernels::weight_map(rule_, degrees_.data(), n, buf.data());
        double sum = plain_sum(buf.data(), n);
        double rel = std::fabs(sum - total_) / std::max(1.0, std::fabs(sum));
        if (rel > 1e-9) throw Error("total weight drifted from recomputed value");
        fen_.build_from(buf.data(), buf.size());
        total_ = sum;
    } else {
        for (size_t i = 0; i < n; ++i) logw_[i] = log_weight(degrees_[i]);
    }
    uint32_t m = 0;
    for (size_t i = 0; i < n; ++i) m = std::max(m, degrees_[i]);
    if (m != hub_.max_degree) throw Error("tracked max degree drifted from degree scan");
}

TrialSummary DegreeState::run(const RunOptions& opt) {
    if (opt.steps < 0) throw DomainError("step count must be >= 0");
    record_change_log_ = opt.record_change_log;

    bool checks = opt.check_comparison || opt.check_supermartingale;
    double beta0 = 0.0, alpha = 0.0, cert = 1.0;
    int64_t a0 = 0, cert_start = 0;
    if (checks) {
        if (m0_ != 1) throw DomainError("certificate checks need the one-vertex-per-step model");
        if (log_mode_) throw DomainError("certificate checks need a finite total weight");
        auto rc = w_.reference_constants();
        a0 = rc.a0;
        beta0 = rc.beta0;
        alpha = 1.0 / (4.0 + 2.0 * beta0);
        cert_start = static_cast<int64_t>(std::floor(5.0 * alpha + 1.0)) + 1;
        for (int64_t n = cert_start; n < vertices(); ++n)
            cert *= 1.0 + alpha / (static_cast<double>(n) - 5.0 * alpha);
    }

    ensure_index_capacity(static_cast<size_t>(
        vertices() + multiples_below(tick_ + opt.steps, m0_) - multiples_below(tick_, m0_)));

    std::vector<int64_t> cps;
    size_t cp_i = 0;
    if (opt.checkpoints) {
        cps = geometric_checkpoints(step_count() + opt.steps);
        while (cp_i < cps.size() && cps[cp_i] <= step_count()) ++cp_i;
    }

    TrialSummary out;
    out.seed = seed_;
    for (int64_t k = 0; k < opt.steps; ++k) {
        if (checks) {
            int64_t v = vertices();
            auto M = hub_.max_degree;
            if (opt.check_comparison && M > static_cast<uint32_t>(a0)) {
                double p = vertex_weight(M) / total_;
                double pt = (M + beta0) / (2.0 * static_cast<double>(v - 1) +
                                           static_cast<double>(v) * beta0);
                ++out.comparison_checked;
                if (p < pt) ++out.comparison_violations;
            }
            if (opt.check_supermartingale && v >= cert_start && M > static_cast<uint32_t>(a0)) {
                double p_n =
                    static_cast<double>(hub_.leaders.size()) * vertex_weight(M) / total_;
                double cert_next = cert * (1.0 + alpha / (static_cast<double>(v) - 5.0 * alpha));
                double expected = cert_next * (p_n / (M + 1.0) + (1.0 - p_n) / M);
                ++out.supermartingale_checked;
                if (expected > cert / M + 1e-12) ++out.supermartingale_violations;
            }
        }
        StepEvent ev = step();
        if (opt.edge_sink && ev.target >= 0) opt.edge_sink->emplace_back(ev.edge_from, ev.target);
        if (checks) {
            int64_t n_prev = vertices() - 1;
            if (n_prev >= cert_start)
                cert *= 1.0 + alpha / (static_cast<double>(n_prev) - 5.0 * alpha);
        }
        if (opt.resync_interval > 0 && tick_ % opt.resync_interval == 0) resync();
        if (cp_i < cps.size() && cps[cp_i] == step_count()) {
            out.curve.push_back({step_count(), hub_.max_degree,
                                 hub_.leaders.size() == 1 ? hub_.leaders[0] : -1});
            ++cp_i;
        }
    }

    out.steps = step_count();
    out.final_max_degree = hub_.max_degree;
    out.final_leader = hub_.leaders.empty() ? -1 : hub_.leaders[0];
    out.distinct_sole_leaders = static_cast<int64_t>(hub_.sole_leaders_seen.size());
    out.last_leader_change_step = hub_.last_sole_leader_change();
    out.sole_changes_per_decade = hub_.sole_changes_per_decade;
    out.watch_degrees.reserve(opt.watch.size());
    for (int64_t idx : opt.watch)
        out.watch_degrees.push_back(
            idx >= 0 && idx < vertices() ? degrees_[static_cast<size_t>(idx)] : 0);
    return out;
}

}  // namespace hubsim
