#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "hubsim/core.hpp"
#include "hubsim/weights.hpp"

namespace hubsim {

// A lattice path: consecutive points, each step +1 in exactly one coordinate.
using PathPoint = std::pair<int64_t, int64_t>;
using Path = std::vector<PathPoint>;

// One step of the two-coordinate walk: a increments iff u < W(a)/(W(a)+W(b)).
PathPoint walk_step(PathPoint s, const WeightFunction& w, double u);

// Number of up-right paths (a0,b0) -> (a1,b1); zero when unreachable.
mpz_class total_paths(int64_t a0, int64_t b0, int64_t a1, int64_t b1);

// Paths from (A,B), A > B >= 1, to (m,m), m >= A, whose interior avoids the
// diagonal. Exact integer closed form (2m-1-A-B)! (A-B) / ((m-A)! (m-B)!).
mpz_class count_admissible_paths(int64_t A, int64_t B, int64_t m);

// Exhaustive oracle: all up-right paths (a0,b0) -> (a1,b1) whose interior
// avoids the diagonal (endpoints may lie on it). Path length capped at 24.
std::vector<Path> enumerate_admissible_paths(int64_t a0, int64_t b0, int64_t a1, int64_t b1);

// Probability of a specific path: product over steps of
// W(moving coordinate) / (W(a) + W(b)). The float version multiplies the
// endpoint-determined numerator products separately from the denominators.
// The exact version needs w.rational_exact().
double path_probability(const Path& s, const WeightFunction& w);
mpq_class path_probability_exact(const Path& s, const WeightFunction& w);

// The climb-then-zigzag path (A,1),...,(A,A),(A+1,A),(A+1,A+1),...,(m,m):
// the probability-maximizing admissible path between those endpoints for
// every convex weight. Requires m >= A > 1.
Path max_prob_path(int64_t A, int64_t m);

// Probability that the walk with weight n + beta, standing at (a, b) with
// a >= b >= 1, ever reaches the diagonal: 2 * I_{1/2}(a+beta, b+beta).
// (Mixture representation: conditioned on the urn share u of the leading
// coordinate, the gap is a random walk that returns with probability
// ((1-u)/u)^(a-b), and integrating against Beta(a+beta, b+beta) telescopes
// to the incomplete-beta form.) The exact version needs integer beta >= 0.
double diagonal_return_probability(int64_t a, int64_t b, double beta);
mpq_class diagonal_return_probability_exact(int64_t a, int64_t b, int64_t beta);

struct FirstHitTable {
    int64_t A = 0, B = 0, m_max = 0;
    bool exact = false;              // rational DP ran alongside the float one
    std::vector<double> q;           // q(m) for m = A..m_max
    double cumulative = 0.0;         // sum of the tabulated q(m)
    double in_flight = 0.0;          // unabsorbed mass at the cut; crude tail bound
    double tail_bound = 0.0;         // certified bound on the diagonal mass past m_max
    bool tail_is_exact = false;      // tail_exact is the exact remainder, not a bound
    std::vector<mpq_class> q_exact;  // exact mode only
    mpq_class cumulative_exact;
    mpq_class in_flight_exact;
    mpq_class tail_exact;
};

// First-passage table of the walk from (A,B), A > B >= 1, to the diagonal:
// q(m) = probability the first diagonal point reached is (m,m). Anti-diagonal
// dynamic program; the remaining diagonal mass past m_max is bounded by the
// linear-model return probabilities of the surviving states (exact remainder
// for linear weights; for other kinds a bound through the chord model, valid
// because every surviving state's leading coordinate exceeds the chord node).
// exact_mode reruns the DP in rational arithmetic (coordinate sum <= 200).
FirstHitTable diagonal_first_hit(int64_t A, int64_t B, int64_t m_max,
                                 const WeightFunction& w, bool exact_mode);

struct DecayRow {
    int64_t A = 0;
    double q_total = 0.0;         // tabulated mass plus exact completion when available
    double certified_error = 0.0; // bound on q(A) - q_total; zero on the exact path
    double q_scaled = 0.0;        // q_total * 2^A
    bool exact = false;
    mpq_class q_exact;            // exact q(A) when exact is true
};

// q(A) across a range of starting gaps, from the exact DP cut at coordinate
// sum 2*m_cut plus the urn completion of the surviving states.
std::vector<DecayRow> q_decay_profile(int64_t a_lo, int64_t a_hi, const WeightFunction& w,
                                      int64_t m_cut = 40);

// Monte Carlo samples of the limiting newcomer share of the linear-weight
// walk from (A,1): b/(a+b) after `horizon` steps, one sample per trial.
// The limit law is Beta(1+beta, A+beta).
std::vector<double> urn_share_samples(double beta, int64_t A, int64_t trials, int64_t horizon,
                                      uint64_t master_seed);

struct CoupledRun {
    int64_t steps = 0;
    int64_t dominance_violations = 0;  // gap fell below the linear shadow's gap
    int64_t parity_violations = 0;     // gaps disagreed mod 2
    int64_t qorder_violations = 0;     // convex up-probability below the shadow's
    int64_t final_delta = 0;
    int64_t final_delta_tilde = 0;
};

// Gap process of the convex walk coupled to its chord-model shadow on one
// uniform stream: both start at (A,1) (gap A-1); a gap at 0 reflects to 1
// without consuming the draw. The up-probability ordering is only recorded
// at equal positive gaps with the leading coordinate strictly past the chord
// node, where the chord comparison is strict.
CoupledRun coupled_run(const WeightFunction& w, int64_t A, int64_t steps, uint64_t seed);

}  // namespace hubsim
