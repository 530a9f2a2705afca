#include "hubsim/pairwalk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hubsim/kernels.hpp"
#include "hubsim/stats.hpp"

namespace hubsim {

namespace {

mpz_class binom(int64_t n, int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

mpz_class factorial(int64_t n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

// W(n) as the exact rational the double evaluation produced.
mpq_class weight_q(const WeightFunction& w, int64_t n) { return mpq_class(w(n)); }

void check_path(const Path& s) {
    if (s.empty()) throw DomainError("path must contain at least its start point");
    if (s.front().first < 1 || s.front().second < 1)
        throw DomainError("path coordinates must start at 1 or above");
    for (size_t i = 1; i < s.size(); ++i) {
        int64_t da = s[i].first - s[i - 1].first;
        int64_t db = s[i].second - s[i - 1].second;
        if (!((da == 1 && db == 0) || (da == 0 && db == 1)))
            throw DomainError("path must advance one coordinate by one per step");
    }
}

}  // namespace

PathPoint walk_step(PathPoint s, const WeightFunction& w, double u) {
    if (s.first < 1 || s.second < 1) throw DomainError("walk coordinates must be >= 1");
    double wa = w(s.first), wb = w(s.second);
    double t = wa / (wa + wb);
    if (u < t) return {s.first + 1, s.second};
    return {s.first, s.second + 1};
}

mpz_class total_paths(int64_t a0, int64_t b0, int64_t a1, int64_t b1) {
    if (a1 < a0 || b1 < b0) return 0;
    return binom(a1 + b1 - a0 - b0, a1 - a0);
}

mpz_class count_admissible_paths(int64_t A, int64_t B, int64_t m) {
    if (B < 1 || A <= B) throw DomainError("start must satisfy a > b >= 1");
    if (m < A) throw DomainError("diagonal point must satisfy m >= a");
    mpz_class g = factorial(2 * m - 1 - A - B) * (A - B);
    mpz_divexact(g.get_mpz_t(), g.get_mpz_t(), factorial(m - A).get_mpz_t());
    mpz_divexact(g.get_mpz_t(), g.get_mpz_t(), factorial(m - B).get_mpz_t());
    return g;
}

std::vector<Path> enumerate_admissible_paths(int64_t a0, int64_t b0, int64_t a1, int64_t b1) {
    if (a1 < a0 || b1 < b0) throw DomainError("endpoint must dominate the start");
    if (a1 + b1 - a0 - b0 > 24) throw DomainError("enumeration capped at path length 24");
    std::vector<Path> out;
    Path cur{{a0, b0}};
    auto dfs = [&](auto&& self, int64_t a, int64_t b) -> void {
        if (a == a1 && b == b1) {
            out.push_back(cur);
            return;
        }
        if (a == b && !(a == a0 && b == b0))
            return;  // interior diagonal touch (endpoint handled above)
        if (a < a1) {
            cur.emplace_back(a + 1, b);
            self(self, a + 1, b);
            cur.pop_back();
        }
        if (b < b1) {
            cur.emplace_back(a, b + 1);
            self(self, a, b + 1);
            cur.pop_back();
        }
    };
    dfs(dfs, a0, b0);
    return out;
}

double path_probability(const Path& s, const WeightFunction& w) {
    check_path(s);
    double num = 1.0;
    for (int64_t j = s.front().first; j < s.back().first; ++j) num *= w(j);
    for (int64_t j = s.front().second; j < s.back().second; ++j) num *= w(j);
    double den = 1.0;
    for (size_t i = 0; i + 1 < s.size(); ++i) den *= w(s[i].first) + w(s[i].second);
    return num / den;
}

mpq_class path_probability_exact(const Path& s, const WeightFunction& w) {
    check_path(s);
    if (!w.rational_exact())
        throw DomainError("exact path probability needs rational weights");
    mpq_class p = 1;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        mpq_class wa = weight_q(w, s[i].first), wb = weight_q(w, s[i].second);
        mpq_class moving = s[i + 1].first > s[i].first ? wa : wb;
        p *= moving / (wa + wb);
    }
    return p;
}

Path max_prob_path(int64_t A, int64_t m) {
    if (A <= 1) throw DomainError("start gap requires a >= 2");
    if (m < A) throw DomainError("diagonal point must satisfy m >= a");
    Path s;
    for (int64_t b = 1; b <= A; ++b) s.emplace_back(A, b);
    for (int64_t t = A; t < m; ++t) {
        s.emplace_back(t + 1, t);
        s.emplace_back(t + 1, t + 1);
    }
    return s;
}

double diagonal_return_probability(int64_t a, int64_t b, double beta) {
    if (b < 1 || a < b) throw DomainError("need a >= b >= 1");
    if (beta <= -1.0) throw DomainError("beta must exceed -1");
    double h = 2.0 * stats::reg_inc_beta(static_cast<double>(a) + beta,
                                         static_cast<double>(b) + beta, 0.5);
    return h > 1.0 ? 1.0 : h;
}

mpq_class diagonal_return_probability_exact(int64_t a, int64_t b, int64_t beta) {
    if (b < 1 || a < b) throw DomainError("need a >= b >= 1");
    if (beta < 0) throw DomainError("exact return probability needs integer beta >= 0");
    int64_t p = a + beta, q = b + beta;
    mpz_class num = 0;
    for (int64_t j = p; j <= p + q - 1; ++j) num += binom(p + q - 1, j);
    mpq_class h(num, mpz_class(1) << static_cast<unsigned>(p + q - 2));
    h.canonicalize();
    return h;
}

FirstHitTable diagonal_first_hit(int64_t A, int64_t B, int64_t m_max, const WeightFunction& w,
                                 bool exact_mode) {
    if (B < 1 || A <= B) throw DomainError("start must satisfy a > b >= 1");
    if (m_max < A) throw DomainError("horizon must reach the first attainable diagonal point");
    if (exact_mode) {
        if (!w.rational_exact()) throw DomainError("exact mode needs rational weights");
        if (2 * m_max > 200) throw DomainError("exact mode capped at coordinate sum 200");
    }

    FirstHitTable res;
    res.A = A;
    res.B = B;
    res.m_max = m_max;
    res.exact = exact_mode;
    res.q.assign(static_cast<size_t>(m_max - A + 1), 0.0);

    size_t cap = static_cast<size_t>(m_max) + 2;
    std::vector<double> mass(cap, 0.0), pup(cap, 0.0), next(cap, 0.0);
    mass[static_cast<size_t>(B - 1)] = 1.0;
    for (int64_t s = A + B; s < 2 * m_max; ++s) {
        int64_t n = (s - 1) / 2;
        for (int64_t i = 0; i < n; ++i) {
            int64_t bb = i + 1, aa = s - bb;
            double wa = w(aa), wb = w(bb);
            pup[static_cast<size_t>(i)] = wb / (wa + wb);
        }
        kernels::dp_row_advance(mass.data(), pup.data(), static_cast<size_t>(n), next.data());
        if ((s + 1) % 2 == 0) {
            int64_t m = (s + 1) / 2;
            if (m >= A) res.q[static_cast<size_t>(m - A)] = next[static_cast<size_t>(n)];
            next[static_cast<size_t>(n)] = 0.0;  // mass below m = A is unreachable, zero anyway
        }
        std::swap(mass, next);
    }
    for (double v : res.q) res.cumulative += v;
    int64_t n_end = (2 * m_max - 1) / 2;
    for (int64_t i = 0; i < n_end; ++i) res.in_flight += mass[static_cast<size_t>(i)];

    // Complete or bound the diagonal mass still to come from surviving states.
    bool linear_kind = w.kind() == WeightKind::basic || w.kind() == WeightKind::linear;
    double comp = -1.0;
    if (linear_kind) {
        double bet = w.kind() == WeightKind::basic ? 0.0 : w.beta();
        comp = 0.0;
        for (int64_t i = 0; i < n_end; ++i) {
            int64_t bb = i + 1, aa = 2 * m_max - bb;
            comp += mass[static_cast<size_t>(i)] * diagonal_return_probability(aa, bb, bet);
        }
    } else {
        try {
            auto rc = w.reference_constants();
            if (m_max + 1 > rc.a0) {  // smallest surviving leading coordinate
                comp = 0.0;
                for (int64_t i = 0; i < n_end; ++i) {
                    int64_t bb = i + 1, aa = 2 * m_max - bb;
                    comp += mass[static_cast<size_t>(i)] *
                            diagonal_return_probability(aa, bb, rc.beta0);
                }
            }
        } catch (const Error&) {
            // no usable chord constants; fall back to the crude bound
        }
    }
    res.tail_bound = comp >= 0.0 ? std::min(res.in_flight, comp * (1.0 + 1e-9)) : res.in_flight;

    if (!exact_mode) return res;

    res.q_exact.assign(static_cast<size_t>(m_max - A + 1), mpq_class(0));
    std::vector<mpq_class> emass(cap, mpq_class(0)), enext(cap, mpq_class(0));
    emass[static_cast<size_t>(B - 1)] = 1;
    for (int64_t s = A + B; s < 2 * m_max; ++s) {
        int64_t n = (s - 1) / 2;
        for (int64_t i = 0; i <= n; ++i) enext[static_cast<size_t>(i)] = 0;
        for (int64_t i = 0; i < n; ++i) {
            if (emass[static_cast<size_t>(i)] == 0) continue;
            int64_t bb = i + 1, aa = s - bb;
            mpq_class wa = weight_q(w, aa), wb = weight_q(w, bb);
            mpq_class up = emass[static_cast<size_t>(i)] * wb / (wa + wb);
            enext[static_cast<size_t>(i)] += emass[static_cast<size_t>(i)] - up;
            enext[static_cast<size_t>(i + 1)] += up;
        }
        if ((s + 1) % 2 == 0) {
            int64_t m = (s + 1) / 2;
            if (m >= A) res.q_exact[static_cast<size_t>(m - A)] = enext[static_cast<size_t>(n)];
            enext[static_cast<size_t>(n)] = 0;
        }
        std::swap(emass, enext);
    }
    for (const auto& v : res.q_exact) res.cumulative_exact += v;
    for (int64_t i = 0; i < n_end; ++i) res.in_flight_exact += emass[static_cast<size_t>(i)];

    bool integer_beta = w.kind() == WeightKind::basic ||
                        (w.kind() == WeightKind::linear && w.beta() >= 0.0 &&
                         w.beta() == std::floor(w.beta()));
    if (integer_beta) {
        int64_t bint = w.kind() == WeightKind::basic ? 0 : static_cast<int64_t>(w.beta());
        for (int64_t i = 0; i < n_end; ++i) {
            if (emass[static_cast<size_t>(i)] == 0) continue;
            int64_t bb = i + 1, aa = 2 * m_max - bb;
            res.tail_exact +=
                emass[static_cast<size_t>(i)] * diagonal_return_probability_exact(aa, bb, bint);
        }
        res.tail_is_exact = true;
        res.tail_bound = res.tail_exact.get_d();
    }
    return res;
}

std::vector<DecayRow> q_decay_profile(int64_t a_lo, int64_t a_hi, const WeightFunction& w,
                                      int64_t m_cut) {
    if (a_lo < 2 || a_hi < a_lo) throw DomainError("gap range must satisfy 2 <= lo <= hi");
    if (m_cut < a_hi) throw DomainError("cut must reach the largest starting gap");
    bool exact = w.rational_exact() && 2 * m_cut <= 200;
    std::vector<DecayRow> out;
    out.reserve(static_cast<size_t>(a_hi - a_lo + 1));
    for (int64_t A = a_lo; A <= a_hi; ++A) {
        auto t = diagonal_first_hit(A, 1, m_cut, w, exact);
        DecayRow row;
        row.A = A;
        if (t.tail_is_exact) {
            row.exact = true;
            row.q_exact = t.cumulative_exact + t.tail_exact;
            row.q_total = row.q_exact.get_d();
            row.certified_error = 0.0;
        } else {
            row.q_total = t.cumulative;
            row.certified_error = t.tail_bound;
        }
        row.q_scaled = row.q_total * std::ldexp(1.0, static_cast<int>(A));
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> urn_share_samples(double beta, int64_t A, int64_t trials, int64_t horizon,
                                      uint64_t master_seed) {
    if (A < 1) throw DomainError("starting coordinate must be >= 1");
    if (trials < 1) throw DomainError("need at least one trial");
    if (horizon < 0) throw DomainError("horizon must be >= 0");
    WeightFunction lin = WeightFunction::linear(beta);
    kernels::WalkBatch batch;
    batch.seed(master_seed, 0, static_cast<size_t>(trials), static_cast<uint64_t>(A), 1);
    kernels::walk_advance(lin.rule(), batch, horizon);
    std::vector<double> out(static_cast<size_t>(trials));
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<double>(batch.b[i]) /
                 (static_cast<double>(batch.a[i]) + static_cast<double>(batch.b[i]));
    return out;
}

CoupledRun coupled_run(const WeightFunction& w, int64_t A, int64_t steps, uint64_t seed) {
    if (A < 2) throw DomainError("coupled walks start at (A,1) with A >= 2");
    if (steps < 0) throw DomainError("step count must be >= 0");
    auto rc = w.reference_constants();
    double beta0 = rc.beta0;
    CoupledRun res;
    res.steps = steps;
    int64_t s = A + 1, d = A - 1, dt = A - 1;
    auto rng = Xoshiro256pp::seeded(seed);
    for (int64_t k = 0; k < steps; ++k) {
        double u = unit_double(rng.next());
        if (d == 0) {
            d = 1;
        } else {
            int64_t a = (s + d) / 2, b = (s - d) / 2;
            double wa = w(a), wb = w(b);
            double q = wa / (wa + wb);
            if (d == dt && a > rc.a0) {
                double qt = (static_cast<double>(a) + beta0) /
                            (static_cast<double>(s) + 2.0 * beta0);
                if (q < qt) ++res.qorder_violations;
            }
            d += u < q ? 1 : -1;
        }
        if (dt == 0) {
            dt = 1;
        } else {
            int64_t at = (s + dt) / 2;
            double qt =
                (static_cast<double>(at) + beta0) / (static_cast<double>(s) + 2.0 * beta0);
            dt += u < qt ? 1 : -1;
        }
        ++s;
        if (d < dt) ++res.dominance_violations;
        if (((d ^ dt) & 1) != 0) ++res.parity_violations;
    }
    res.final_delta = d;
    res.final_delta_tilde = dt;
    return res;
}

}  // namespace hubsim
