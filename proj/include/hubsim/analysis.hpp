#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hubsim/graphgen.hpp"
#include "hubsim/weights.hpp"

namespace hubsim {

// Attachment probability a degree-m vertex would get in the n-vertex linear
// comparison model with offset beta0: (m + beta0) / (2(n-1) + n*beta0).
// A nonpositive denominator is flagged, never clamped.
double comparison_probability(int64_t m, int64_t n, double beta0);

// Multiplicative certificate C_n with C equal to 1 at the start index and
// C_{n+1} = C_n * (1 + alpha/(n - 5 alpha)) for alpha = 1/(4 + 2 beta0).
// The start index is the smallest n with n > 5 alpha + 1, which keeps every
// factor positive. C_n * n^(-alpha) converges, so C_n grows like n^alpha.
struct CertificateSequence {
    double alpha = 0.25;
    int64_t start_index = 3;
    int64_t n = 3;       // index of `value`
    double value = 1.0;  // C_n

    static CertificateSequence for_beta0(double beta0);
    void advance();                   // move from n to n+1
    double value_at(int64_t target);  // advance forward to target, return C_target
};

struct ScalingFit {
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    size_t points = 0;  // checkpoints pooled into the fit
    size_t curves = 0;
};

// Pooled least-squares slope of log max_degree against log step over all
// checkpoints with step >= n_min, across at least ten trial curves.
ScalingFit fit_scaling_exponent(const std::vector<std::vector<Checkpoint>>& curves,
                                int64_t n_min = 1000);

// Sole leader recorded at checkpoint step n (-1 when the lead was tied).
// Any n at or past the end of the trial reads the final checkpoint.
int64_t leader_at(const TrialSummary& t, int64_t n);

// Fraction of trials whose sole leader at step n_a is the same vertex as at
// step n_b. A tie at either checkpoint counts as disagreement.
double agreement_fraction(const std::vector<TrialSummary>& summaries, int64_t n_a, int64_t n_b);

struct PersistenceReport {
    std::map<int64_t, int64_t> distinct_leader_histogram;  // value -> trial count
    double persistence_fraction = 0.0;  // leader at n_half still sole leader at the end
    std::vector<double> changes_per_decade;  // mean handovers with step in [10^k, 10^(k+1))
    size_t trials = 0;
    int64_t n_half = 0;
};

// Cross-trial hub persistence summary; every trial must span >= 2 * n_half steps.
PersistenceReport hub_persistence_report(const std::vector<TrialSummary>& summaries,
                                         int64_t n_half);

// Runs independent trials with per-trial seeds derived from master_seed,
// spread over `workers` threads. Slot t always holds the trial seeded with
// stream t, so the result is identical for every worker count.
std::vector<TrialSummary> parallel_trials(const WeightFunction& w, int64_t m0, int64_t trials,
                                          const RunOptions& opt, uint64_t master_seed,
                                          int workers);

}  // namespace hubsim
