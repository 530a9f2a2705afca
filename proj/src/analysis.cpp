#include "hubsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "hubsim/core.hpp"
#include "hubsim/stats.hpp"

namespace hubsim {

double comparison_probability(int64_t m, int64_t n, double beta0) {
    if (m < 1) throw DomainError("comparison degree must be >= 1");
    if (n < 2) throw DomainError("comparison model needs >= 2 vertices");
    double den = 2.0 * static_cast<double>(n - 1) + static_cast<double>(n) * beta0;
    if (den <= 0.0) throw DomainError("comparison denominator is not positive");
    return (static_cast<double>(m) + beta0) / den;
}

CertificateSequence CertificateSequence::for_beta0(double beta0) {
    if (!(beta0 > -1.0)) throw DomainError("comparison offset must exceed -1");
    CertificateSequence c;
    c.alpha = 1.0 / (4.0 + 2.0 * beta0);
    c.start_index = static_cast<int64_t>(std::floor(5.0 * c.alpha + 1.0)) + 1;
    c.n = c.start_index;
    c.value = 1.0;
    return c;
}

void CertificateSequence::advance() {
    value *= 1.0 + alpha / (static_cast<double>(n) - 5.0 * alpha);
    ++n;
}

double CertificateSequence::value_at(int64_t target) {
    if (target < n) throw DomainError("certificate index cannot move backward");
    while (n < target) advance();
    return value;
}

ScalingFit fit_scaling_exponent(const std::vector<std::vector<Checkpoint>>& curves,
                                int64_t n_min) {
    if (curves.size() < 10) throw DomainError("scaling fit needs at least 10 curves");
    std::vector<double> x, y;
    for (const auto& curve : curves)
        for (const auto& cp : curve) {
            if (cp.step < n_min || cp.max_degree == 0) continue;
            x.push_back(std::log(static_cast<double>(cp.step)));
            y.push_back(std::log(static_cast<double>(cp.max_degree)));
        }
    if (x.size() < 3) throw DomainError("scaling fit needs >= 3 checkpoints past n_min");
    auto fit = stats::ols_fit(x, y);
    return {fit.slope, fit.slope_stderr, fit.n, curves.size()};
}

int64_t leader_at(const TrialSummary& t, int64_t n) {
    if (t.curve.empty()) {
        if (t.steps == 0) return t.final_leader;
        throw DomainError("trial recorded no checkpoints");
    }
    if (n >= t.steps) return t.curve.back().sole_leader;
    auto it = std::lower_bound(t.curve.begin(), t.curve.end(), n,
                               [](const Checkpoint& cp, int64_t v) { return cp.step < v; });
    if (it == t.curve.end() || it->step != n)
        throw DomainError("no checkpoint at the requested step");
    return it->sole_leader;
}

double agreement_fraction(const std::vector<TrialSummary>& summaries, int64_t n_a, int64_t n_b) {
    if (summaries.empty()) throw DomainError("agreement fraction needs at least one trial");
    int64_t agree = 0;
    for (const auto& t : summaries) {
        int64_t a = leader_at(t, n_a);
        if (a >= 0 && a == leader_at(t, n_b)) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(summaries.size());
}

PersistenceReport hub_persistence_report(const std::vector<TrialSummary>& summaries,
                                         int64_t n_half) {
    if (summaries.empty()) throw DomainError("persistence report needs at least one trial");
    if (n_half < 0) throw DomainError("half-time step must be >= 0");
    PersistenceReport rep;
    rep.trials = summaries.size();
    rep.n_half = n_half;
    int64_t agree = 0;
    size_t decades = 0;
    for (const auto& t : summaries) {
        if (t.steps < 2 * n_half)
            throw DomainError("every trial must span at least twice the half-time step");
        ++rep.distinct_leader_histogram[t.distinct_sole_leaders];
        int64_t a = leader_at(t, n_half);
        if (a >= 0 && a == leader_at(t, t.steps)) ++agree;
        decades = std::max(decades, t.sole_changes_per_decade.size());
    }
    rep.persistence_fraction = static_cast<double>(agree) / static_cast<double>(rep.trials);
    rep.changes_per_decade.assign(decades, 0.0);
    for (const auto& t : summaries)
        for (size_t d = 0; d < t.sole_changes_per_decade.size(); ++d)
            rep.changes_per_decade[d] += static_cast<double>(t.sole_changes_per_decade[d]);
    for (double& v : rep.changes_per_decade) v /= static_cast<double>(rep.trials);
    return rep;
}

std::vector<TrialSummary> parallel_trials(const WeightFunction& w, int64_t m0, int64_t trials,
                                          const RunOptions& opt, uint64_t master_seed,
                                          int workers) {
    if (trials < 0) throw DomainError("trial count must be >= 0");
    if (workers < 1) throw DomainError("worker count must be >= 1");
    if (opt.edge_sink) throw DomainError("an edge sink cannot be shared across trials");
    std::vector<TrialSummary> out(static_cast<size_t>(trials));
    std::atomic<int64_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto body = [&]() {
        for (;;) {
            int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= trials) return;
            {
                std::lock_guard<std::mutex> lock(err_mu);
                if (err) return;
            }
            try {
                DegreeState state(w, m0, stream_seed(master_seed, static_cast<uint64_t>(i)));
                out[static_cast<size_t>(i)] = state.run(opt);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    int spawn = static_cast<int>(std::min<int64_t>(workers, trials));
    if (spawn <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(spawn));
        for (int i = 0; i < spawn; ++i) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace hubsim
