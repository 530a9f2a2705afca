#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hubsim/analysis.hpp"
#include "hubsim/core.hpp"
#include "hubsim/graphgen.hpp"
#include "hubsim/io.hpp"
#include "hubsim/pairwalk.hpp"
#include "hubsim/weights.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

using namespace hubsim;

// ---- config file: flat `key = value` lines, # comments, CLI flags win ----

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + " has no key");
        if (!out.emplace(key, value).second)
            throw DomainError("config key repeated: " + key);
    }
    return out;
}

int64_t parse_i64(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        int64_t x = std::stoll(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw DomainError("config value for " + key + " is not an integer: " + v);
}

uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        if (!v.empty() && v[0] != '-') {
            uint64_t x = std::stoull(v, &pos);
            if (pos == v.size()) return x;
        }
    } catch (const std::exception&) {
    }
    throw DomainError("config value for " + key + " is not an unsigned integer: " + v);
}

double parse_f64(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw DomainError("config value for " + key + " is not a number: " + v);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& v, const std::string& key, Parse parse) {
    std::vector<T> out;
    size_t start = 0;
    while (start <= v.size()) {
        size_t comma = v.find(',', start);
        if (comma == std::string::npos) comma = v.size();
        std::string item = trim(v.substr(start, comma - start));
        if (item.empty()) throw DomainError("config list for " + key + " has an empty item");
        out.push_back(parse(item, key));
        start = comma + 1;
        if (comma == v.size()) break;
    }
    return out;
}

struct ConfigBinding {
    std::string key;   // matches the flag name without the leading --
    std::function<void(const std::string&)> apply;
};

ConfigBinding bind_i64(const char* key, int64_t& ref) {
    return {key, [key, &ref](const std::string& v) { ref = parse_i64(v, key); }};
}
ConfigBinding bind_u64(const char* key, uint64_t& ref) {
    return {key, [key, &ref](const std::string& v) { ref = parse_u64(v, key); }};
}
ConfigBinding bind_f64(const char* key, double& ref) {
    return {key, [key, &ref](const std::string& v) { ref = parse_f64(v, key); }};
}
ConfigBinding bind_int(const char* key, int& ref) {
    return {key, [key, &ref](const std::string& v) {
                ref = static_cast<int>(parse_i64(v, key));
            }};
}
ConfigBinding bind_str(const char* key, std::string& ref) {
    return {key, [&ref](const std::string& v) { ref = v; }};
}
ConfigBinding bind_f64_list(const char* key, std::vector<double>& ref) {
    return {key, [key, &ref](const std::string& v) {
                ref = parse_list<double>(v, key, parse_f64);
            }};
}
ConfigBinding bind_i64_list(const char* key, std::vector<int64_t>& ref) {
    return {key, [key, &ref](const std::string& v) {
                ref = parse_list<int64_t>(v, key, parse_i64);
            }};
}
ConfigBinding bind_bool(const char* key, bool& ref) {
    return {key, [key, &ref](const std::string& v) {
                if (v == "true" || v == "1")
                    ref = true;
                else if (v == "false" || v == "0")
                    ref = false;
                else
                    throw DomainError("config value for " + std::string(key) +
                                      " must be true/false/1/0: " + v);
            }};
}

// Config supplies values only where the command line did not; unknown keys error.
void apply_config(const CLI::App* cmd, const std::string& path,
                  const std::vector<ConfigBinding>& bindings) {
    if (path.empty()) return;
    auto kv = read_config(path);
    for (const auto& [key, value] : kv) {
        const ConfigBinding* hit = nullptr;
        for (const auto& b : bindings)
            if (b.key == key) {
                hit = &b;
                break;
            }
        if (!hit) throw DomainError("unknown config key: " + key);
        if (cmd->count("--" + key) > 0) continue;
        hit->apply(value);
    }
}

// ---- shared model plumbing ----

struct ModelArgs {
    std::string model = "basic";
    double beta = 0.0;
    double p = 2.0;
    std::vector<double> table;
};

void add_model_flags(CLI::App* cmd, ModelArgs& m, std::vector<ConfigBinding>& binds) {
    cmd->add_option("--model", m.model, "weight kind")
        ->check(CLI::IsMember({"basic", "linear", "power", "table"}))
        ->capture_default_str();
    cmd->add_option("--beta", m.beta, "offset of the linear kind, beta > -1")
        ->capture_default_str();
    cmd->add_option("--p", m.p, "exponent of the power kind, p >= 1")->capture_default_str();
    cmd->add_option("--table", m.table, "comma-separated weights W(1),W(2),... for the table kind")
        ->delimiter(',');
    binds.push_back(bind_str("model", m.model));
    binds.push_back(bind_f64("beta", m.beta));
    binds.push_back(bind_f64("p", m.p));
    binds.push_back(bind_f64_list("table", m.table));
}

WeightFunction make_model(const ModelArgs& m) {
    if (m.model == "basic") return WeightFunction::basic();
    if (m.model == "linear") return WeightFunction::linear(m.beta);
    if (m.model == "power") return WeightFunction::power(m.p);
    if (m.model == "table") return WeightFunction::table(m.table);
    throw DomainError("unknown model kind: " + m.model);
}

int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// HUBSIM_WORKERS wins over the flag so batch environments can cap usage.
int effective_workers(int flag) {
    if (const char* env = std::getenv("HUBSIM_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (!end || *end != '\0' || v < 1)
            throw DomainError("HUBSIM_WORKERS must be a positive integer");
        return static_cast<int>(v);
    }
    return flag;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    io::atomic_write(out_path, content);
}

std::string join_degrees(const std::vector<uint32_t>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

json path_json(const Path& path) {
    json arr = json::array();
    for (const auto& [a, b] : path) arr.push_back(json::array({a, b}));
    return arr;
}

// ---- subcommands ----

struct GenerateArgs {
    ModelArgs model;
    int64_t m0 = 1;
    int64_t steps = 1000;
    int64_t trials = 1;
    uint64_t seed = 42;
    int workers = default_workers();
    std::vector<int64_t> watch;
    std::string out, edges_out;
    std::string format = "csv";
    std::string config;
};

int run_generate(const GenerateArgs& g) {
    if (g.trials < 1) throw DomainError("trial count must be >= 1");
    if (g.format != "csv" && g.format != "json")
        throw DomainError("format must be csv or json, got " + g.format);
    auto w = make_model(g.model);
    RunOptions opt;
    opt.steps = g.steps;
    opt.watch = g.watch;
    std::vector<TrialSummary> rows;
    if (!g.edges_out.empty()) {
        if (g.trials != 1) throw DomainError("edge emission needs exactly one trial");
        std::vector<std::pair<int64_t, int64_t>> edges;
        RunOptions opt1 = opt;
        opt1.edge_sink = &edges;
        DegreeState state(w, g.m0, stream_seed(g.seed, 0));
        rows.push_back(state.run(opt1));
        io::Csv ecsv({"from", "to"});
        for (const auto& [from, to] : edges)
            ecsv.row({std::to_string(from), std::to_string(to)});
        emit(g.edges_out, ecsv.str());
    } else {
        rows = parallel_trials(w, g.m0, g.trials, opt, g.seed, effective_workers(g.workers));
    }
    if (g.format == "csv") {
        io::Csv csv({"trial", "seed", "steps", "final_max_degree", "final_leader",
                     "distinct_sole_leaders", "last_leader_change_step", "watch_degrees"});
        for (size_t t = 0; t < rows.size(); ++t) {
            const auto& r = rows[t];
            csv.row({std::to_string(t), std::to_string(r.seed), std::to_string(r.steps),
                     std::to_string(r.final_max_degree), std::to_string(r.final_leader),
                     std::to_string(r.distinct_sole_leaders),
                     std::to_string(r.last_leader_change_step), join_degrees(r.watch_degrees)});
        }
        emit(g.out, csv.str());
    } else {
        json arr = json::array();
        for (size_t t = 0; t < rows.size(); ++t) {
            const auto& r = rows[t];
            json o;
            o["trial"] = t;
            o["seed"] = r.seed;
            o["steps"] = r.steps;
            o["final_max_degree"] = r.final_max_degree;
            o["final_leader"] = r.final_leader;
            o["distinct_sole_leaders"] = r.distinct_sole_leaders;
            o["last_leader_change_step"] = r.last_leader_change_step;
            o["watch_degrees"] = r.watch_degrees;
            arr.push_back(std::move(o));
        }
        emit(g.out, arr.dump(2) + "\n");
    }
    return 0;
}

struct WalkArgs {
    ModelArgs model;
    int64_t A = 2;
    int64_t mmax = 40;
    std::string mode = "float";
    std::string out;
    std::string config;
};

int run_walk(const WalkArgs& a) {
    if (a.mode != "float" && a.mode != "exact")
        throw DomainError("mode must be float or exact, got " + a.mode);
    auto w = make_model(a.model);
    auto t = diagonal_first_hit(a.A, 1, a.mmax, w, a.mode == "exact");
    io::Csv csv({"m", "q_A_m", "cumulative", "tail_bound"});
    if (t.exact) {
        mpq_class running = 0;
        for (size_t i = 0; i < t.q_exact.size(); ++i) {
            running += t.q_exact[i];
            mpq_class left = t.cumulative_exact - running;
            double remaining = t.tail_is_exact ? mpq_class(left + t.tail_exact).get_d()
                                               : left.get_d() + t.tail_bound;
            csv.row({std::to_string(a.A + static_cast<int64_t>(i)),
                     io::format_double(t.q_exact[i].get_d()),
                     io::format_double(running.get_d()), io::format_double(remaining)});
        }
    } else {
        double running = 0.0;
        for (size_t i = 0; i < t.q.size(); ++i) {
            running += t.q[i];
            double remaining = (t.cumulative - running) + t.tail_bound;
            csv.row({std::to_string(a.A + static_cast<int64_t>(i)), io::format_double(t.q[i]),
                     io::format_double(running), io::format_double(remaining)});
        }
    }
    emit(a.out, csv.str());
    return 0;
}

struct UrnArgs {
    double beta = 0.0;
    int64_t A = 1;
    int64_t trials = 20000;
    int64_t horizon = 10000;
    uint64_t seed = 42;
    std::string out;
    std::string config;
};

int run_urn(const UrnArgs& a) {
    auto samples = urn_share_samples(a.beta, a.A, a.trials, a.horizon, a.seed);
    io::Csv csv({"trial", "share"});
    for (size_t i = 0; i < samples.size(); ++i)
        csv.row({std::to_string(i), io::format_double(samples[i])});
    emit(a.out, csv.str());
    return 0;
}

struct CouplingArgs {
    ModelArgs model;
    int64_t A = 2;
    int64_t steps = 10000;
    int64_t trials = 1000;
    uint64_t seed = 42;
    std::string out;
    std::string config;
};

int run_coupling(const CouplingArgs& a) {
    if (a.trials < 1) throw DomainError("trial count must be >= 1");
    auto w = make_model(a.model);
    io::Csv csv({"trial", "steps", "dominance_violations", "parity_violations",
                 "qorder_violations", "final_delta", "final_delta_tilde"});
    int64_t violations = 0;
    for (int64_t t = 0; t < a.trials; ++t) {
        auto r = coupled_run(w, a.A, a.steps, stream_seed(a.seed, static_cast<uint64_t>(t)));
        violations += r.dominance_violations + r.parity_violations + r.qorder_violations;
        csv.row({std::to_string(t), std::to_string(r.steps),
                 std::to_string(r.dominance_violations), std::to_string(r.parity_violations),
                 std::to_string(r.qorder_violations), std::to_string(r.final_delta),
                 std::to_string(r.final_delta_tilde)});
    }
    emit(a.out, csv.str());
    return violations > 0 ? 2 : 0;
}

struct ScalingArgs {
    ModelArgs model;
    int64_t m0 = 1;
    int64_t steps = 100000;
    int64_t trials = 50;
    int64_t nmin = 1000;
    uint64_t seed = 42;
    int workers = default_workers();
    std::string out;
    std::string config;
};

int run_scaling(const ScalingArgs& a) {
    auto w = make_model(a.model);
    RunOptions opt;
    opt.steps = a.steps;
    auto rows = parallel_trials(w, a.m0, a.trials, opt, a.seed, effective_workers(a.workers));
    std::vector<std::vector<Checkpoint>> curves;
    curves.reserve(rows.size());
    for (const auto& r : rows) curves.push_back(r.curve);
    auto fit = fit_scaling_exponent(curves, a.nmin);
    json o;
    o["exponent"] = fit.exponent;
    o["stderr"] = fit.exponent_stderr;
    o["points"] = fit.points;
    o["curves"] = fit.curves;
    emit(a.out, o.dump(2) + "\n");
    return 0;
}

struct HubsArgs {
    ModelArgs model;
    int64_t m0 = 1;
    int64_t steps = 100000;
    int64_t trials = 200;
    int64_t nhalf = 10000;
    uint64_t seed = 42;
    int workers = default_workers();
    std::string out;
    std::string config;
};

int run_hubs(const HubsArgs& a) {
    auto w = make_model(a.model);
    RunOptions opt;
    opt.steps = a.steps;
    auto rows = parallel_trials(w, a.m0, a.trials, opt, a.seed, effective_workers(a.workers));
    auto rep = hub_persistence_report(rows, a.nhalf);
    json o;
    o["persistence_fraction"] = rep.persistence_fraction;
    json hist = json::object();
    for (const auto& [value, count] : rep.distinct_leader_histogram)
        hist[std::to_string(value)] = count;
    o["distinct_leader_histogram"] = hist;
    o["changes_per_decade"] = rep.changes_per_decade;
    o["trials"] = rep.trials;
    o["n_half"] = rep.n_half;
    emit(a.out, o.dump(2) + "\n");
    return 0;
}

struct VerifyArgs {
    ModelArgs model;
    std::string suite;
    int64_t A = 2;
    int64_t steps = 100000;
    int64_t trials = 12;
    uint64_t seed = 42;
    int workers = default_workers();
    std::string out;
    std::string config;
};

int run_verify(const VerifyArgs& a) {
    if (a.trials < 1) throw DomainError("trial count must be >= 1");
    auto w = make_model(a.model);
    json o;
    o["suite"] = a.suite;
    int64_t violations = 0;
    if (a.suite == "coupling") {
        int64_t dominance = 0, parity = 0, qorder = 0;
        for (int64_t t = 0; t < a.trials; ++t) {
            auto r = coupled_run(w, a.A, a.steps, stream_seed(a.seed, static_cast<uint64_t>(t)));
            dominance += r.dominance_violations;
            parity += r.parity_violations;
            qorder += r.qorder_violations;
        }
        violations = dominance + parity + qorder;
        o["runs"] = a.trials;
        o["steps_per_run"] = a.steps;
        o["dominance_violations"] = dominance;
        o["parity_violations"] = parity;
        o["qorder_violations"] = qorder;
    } else if (a.suite == "comparison" || a.suite == "supermartingale") {
        RunOptions opt;
        opt.steps = a.steps;
        opt.check_comparison = a.suite == "comparison";
        opt.check_supermartingale = a.suite == "supermartingale";
        auto rows = parallel_trials(w, 1, a.trials, opt, a.seed, effective_workers(a.workers));
        int64_t checked = 0;
        for (const auto& r : rows) {
            checked += opt.check_comparison ? r.comparison_checked : r.supermartingale_checked;
            violations +=
                opt.check_comparison ? r.comparison_violations : r.supermartingale_violations;
        }
        o["trials"] = a.trials;
        o["states_checked"] = checked;
    } else {
        throw DomainError("suite must be comparison, supermartingale, or coupling");
    }
    o["violations"] = violations;
    emit(a.out, o.dump(2) + "\n");
    return violations > 0 ? 2 : 0;
}

struct ExactArgs {
    ModelArgs model;
    int64_t A = 2;
    int64_t B = 1;
    int64_t m = 2;
    bool list_paths = false;
    bool max_prob = false;
    std::string out;
    std::string config;
};

int run_exact(const ExactArgs& a) {
    json o;
    o["A"] = a.A;
    o["B"] = a.B;
    o["m"] = a.m;
    o["admissible"] = count_admissible_paths(a.A, a.B, a.m).get_str();
    o["total"] = total_paths(a.A, a.B, a.m, a.m).get_str();
    if (a.max_prob) {
        auto w = make_model(a.model);
        auto path = max_prob_path(a.A, a.m);
        o["max_prob_path"] = path_json(path);
        o["max_prob"] = path_probability(path, w);
        if (w.rational_exact())
            o["max_prob_exact"] = path_probability_exact(path, w).get_str();
    }
    if (a.list_paths) {
        json arr = json::array();
        for (const auto& path : enumerate_admissible_paths(a.A, a.B, a.m, a.m))
            arr.push_back(path_json(path));
        o["paths"] = arr;
    }
    emit(a.out, o.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hubsim: convex preferential attachment simulator and exact walk toolkit"};
    app.require_subcommand(1);
    int rc = 0;
    const char* config_help = "flat key = value file, # comments; flags override it";

    GenerateArgs gen;
    std::vector<ConfigBinding> gen_binds;
    auto* cgen = app.add_subcommand(
        "generate",
        "simulate trials; CSV columns: trial, seed, steps, final_max_degree, final_leader, "
        "distinct_sole_leaders, last_leader_change_step, watch_degrees (semicolon-joined)");
    add_model_flags(cgen, gen.model, gen_binds);
    cgen->add_option("--m0", gen.m0, "edges per new vertex")->capture_default_str();
    cgen->add_option("--steps", gen.steps, "elementary steps per trial")->capture_default_str();
    cgen->add_option("--trials", gen.trials, "independent trials")->capture_default_str();
    cgen->add_option("--seed", gen.seed, "master seed")->capture_default_str();
    cgen->add_option("--workers", gen.workers, "worker threads")->capture_default_str();
    cgen->add_option("--watch", gen.watch, "vertex ids whose final degree is reported")
        ->delimiter(',');
    cgen->add_option("--out", gen.out, "output path (stdout when omitted)");
    cgen->add_option("--format", gen.format, "output format, csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cgen->add_option("--emit-edges", gen.edges_out,
                     "also write edge pairs (CSV columns: from, to); single trial only");
    cgen->add_option("--config", gen.config, config_help);
    gen_binds.push_back(bind_i64("m0", gen.m0));
    gen_binds.push_back(bind_i64("steps", gen.steps));
    gen_binds.push_back(bind_i64("trials", gen.trials));
    gen_binds.push_back(bind_u64("seed", gen.seed));
    gen_binds.push_back(bind_int("workers", gen.workers));
    gen_binds.push_back(bind_i64_list("watch", gen.watch));
    gen_binds.push_back(bind_str("out", gen.out));
    gen_binds.push_back(bind_str("format", gen.format));
    gen_binds.push_back(bind_str("emit-edges", gen.edges_out));
    cgen->callback([&] {
        apply_config(cgen, gen.config, gen_binds);
        rc = run_generate(gen);
    });

    WalkArgs walk;
    std::vector<ConfigBinding> walk_binds;
    auto* cwalk = app.add_subcommand(
        "walk", "first-passage table of the two-vertex walk; CSV columns: m, q_A_m, "
                "cumulative, tail_bound");
    add_model_flags(cwalk, walk.model, walk_binds);
    cwalk->add_option("--A", walk.A, "start degree, walk begins at (A,1)")->capture_default_str();
    cwalk->add_option("--mmax", walk.mmax, "largest tabulated diagonal index")
        ->capture_default_str();
    cwalk->add_option("--mode", walk.mode, "float or exact (rational kinds only)")
        ->check(CLI::IsMember({"float", "exact"}))
        ->capture_default_str();
    cwalk->add_option("--out", walk.out, "output path (stdout when omitted)");
    cwalk->add_option("--config", walk.config, config_help);
    walk_binds.push_back(bind_i64("A", walk.A));
    walk_binds.push_back(bind_i64("mmax", walk.mmax));
    walk_binds.push_back(bind_str("mode", walk.mode));
    walk_binds.push_back(bind_str("out", walk.out));
    cwalk->callback([&] {
        apply_config(cwalk, walk.config, walk_binds);
        rc = run_walk(walk);
    });

    UrnArgs urn;
    std::vector<ConfigBinding> urn_binds;
    auto* curn = app.add_subcommand(
        "urn", "newcomer share samples of the linear-weight walk; CSV columns: trial, share");
    curn->add_option("--beta", urn.beta, "linear offset, beta > -1")->capture_default_str();
    curn->add_option("--A", urn.A, "start degree of the incumbent")->capture_default_str();
    curn->add_option("--trials", urn.trials, "independent walks")->capture_default_str();
    curn->add_option("--horizon", urn.horizon, "steps per walk")->capture_default_str();
    curn->add_option("--seed", urn.seed, "master seed")->capture_default_str();
    curn->add_option("--out", urn.out, "output path (stdout when omitted)");
    curn->add_option("--config", urn.config, config_help);
    urn_binds.push_back(bind_f64("beta", urn.beta));
    urn_binds.push_back(bind_i64("A", urn.A));
    urn_binds.push_back(bind_i64("trials", urn.trials));
    urn_binds.push_back(bind_i64("horizon", urn.horizon));
    urn_binds.push_back(bind_u64("seed", urn.seed));
    urn_binds.push_back(bind_str("out", urn.out));
    curn->callback([&] {
        apply_config(curn, urn.config, urn_binds);
        rc = run_urn(urn);
    });

    CouplingArgs coup;
    std::vector<ConfigBinding> coup_binds;
    auto* ccoup = app.add_subcommand(
        "coupling", "gap walk coupled to its chord model; CSV columns: trial, steps, "
                    "dominance_violations, parity_violations, qorder_violations, final_delta, "
                    "final_delta_tilde; exits 2 on any violation");
    add_model_flags(ccoup, coup.model, coup_binds);
    ccoup->add_option("--A", coup.A, "start degree, gap starts at A-1")->capture_default_str();
    ccoup->add_option("--steps", coup.steps, "steps per run")->capture_default_str();
    ccoup->add_option("--trials", coup.trials, "independent runs")->capture_default_str();
    ccoup->add_option("--seed", coup.seed, "master seed")->capture_default_str();
    ccoup->add_option("--out", coup.out, "output path (stdout when omitted)");
    ccoup->add_option("--config", coup.config, config_help);
    coup_binds.push_back(bind_i64("A", coup.A));
    coup_binds.push_back(bind_i64("steps", coup.steps));
    coup_binds.push_back(bind_i64("trials", coup.trials));
    coup_binds.push_back(bind_u64("seed", coup.seed));
    coup_binds.push_back(bind_str("out", coup.out));
    ccoup->callback([&] {
        apply_config(ccoup, coup.config, coup_binds);
        rc = run_coupling(coup);
    });

    ScalingArgs scal;
    std::vector<ConfigBinding> scal_binds;
    auto* cscal = app.add_subcommand(
        "scaling", "fit the max-degree growth exponent; JSON keys: exponent, stderr, points, "
                   "curves");
    add_model_flags(cscal, scal.model, scal_binds);
    cscal->add_option("--m0", scal.m0, "edges per new vertex")->capture_default_str();
    cscal->add_option("--steps", scal.steps, "steps per trial")->capture_default_str();
    cscal->add_option("--trials", scal.trials, "independent trials")->capture_default_str();
    cscal->add_option("--nmin", scal.nmin, "burn-in cutoff for the fit")->capture_default_str();
    cscal->add_option("--seed", scal.seed, "master seed")->capture_default_str();
    cscal->add_option("--workers", scal.workers, "worker threads")->capture_default_str();
    cscal->add_option("--out", scal.out, "output path (stdout when omitted)");
    cscal->add_option("--config", scal.config, config_help);
    scal_binds.push_back(bind_i64("m0", scal.m0));
    scal_binds.push_back(bind_i64("steps", scal.steps));
    scal_binds.push_back(bind_i64("trials", scal.trials));
    scal_binds.push_back(bind_i64("nmin", scal.nmin));
    scal_binds.push_back(bind_u64("seed", scal.seed));
    scal_binds.push_back(bind_int("workers", scal.workers));
    scal_binds.push_back(bind_str("out", scal.out));
    cscal->callback([&] {
        apply_config(cscal, scal.config, scal_binds);
        rc = run_scaling(scal);
    });

    HubsArgs hubs;
    std::vector<ConfigBinding> hubs_binds;
    auto* chubs = app.add_subcommand(
        "hubs", "hub persistence report; JSON keys: persistence_fraction, "
                "distinct_leader_histogram, changes_per_decade, trials, n_half");
    add_model_flags(chubs, hubs.model, hubs_binds);
    chubs->add_option("--m0", hubs.m0, "edges per new vertex")->capture_default_str();
    chubs->add_option("--steps", hubs.steps, "steps per trial")->capture_default_str();
    chubs->add_option("--trials", hubs.trials, "independent trials")->capture_default_str();
    chubs->add_option("--nhalf", hubs.nhalf, "half-time checkpoint step")->capture_default_str();
    chubs->add_option("--seed", hubs.seed, "master seed")->capture_default_str();
    chubs->add_option("--workers", hubs.workers, "worker threads")->capture_default_str();
    chubs->add_option("--out", hubs.out, "output path (stdout when omitted)");
    chubs->add_option("--config", hubs.config, config_help);
    hubs_binds.push_back(bind_i64("m0", hubs.m0));
    hubs_binds.push_back(bind_i64("steps", hubs.steps));
    hubs_binds.push_back(bind_i64("trials", hubs.trials));
    hubs_binds.push_back(bind_i64("nhalf", hubs.nhalf));
    hubs_binds.push_back(bind_u64("seed", hubs.seed));
    hubs_binds.push_back(bind_int("workers", hubs.workers));
    hubs_binds.push_back(bind_str("out", hubs.out));
    chubs->callback([&] {
        apply_config(chubs, hubs.config, hubs_binds);
        rc = run_hubs(hubs);
    });

    VerifyArgs verify;
    std::vector<ConfigBinding> verify_binds;
    auto* cver = app.add_subcommand(
        "verify", "state-by-state invariant suites; JSON report with a violations count; "
                  "exits 2 on any violation");
    cver->add_option("--suite", verify.suite, "comparison, supermartingale, or coupling")
        ->required()
        ->check(CLI::IsMember({"comparison", "supermartingale", "coupling"}));
    add_model_flags(cver, verify.model, verify_binds);
    cver->add_option("--A", verify.A, "coupling start degree")->capture_default_str();
    cver->add_option("--steps", verify.steps, "steps per trial or run")->capture_default_str();
    cver->add_option("--trials", verify.trials, "trials or coupled runs")->capture_default_str();
    cver->add_option("--seed", verify.seed, "master seed")->capture_default_str();
    cver->add_option("--workers", verify.workers, "worker threads")->capture_default_str();
    cver->add_option("--out", verify.out, "output path (stdout when omitted)");
    cver->add_option("--config", verify.config, config_help);
    verify_binds.push_back(bind_str("suite", verify.suite));
    verify_binds.push_back(bind_i64("A", verify.A));
    verify_binds.push_back(bind_i64("steps", verify.steps));
    verify_binds.push_back(bind_i64("trials", verify.trials));
    verify_binds.push_back(bind_u64("seed", verify.seed));
    verify_binds.push_back(bind_int("workers", verify.workers));
    verify_binds.push_back(bind_str("out", verify.out));
    cver->callback([&] {
        apply_config(cver, verify.config, verify_binds);
        rc = run_verify(verify);
    });

    ExactArgs exact;
    std::vector<ConfigBinding> exact_binds;
    auto* cexact = app.add_subcommand(
        "exact", "exact path combinatorics between (A,B) and the diagonal corner (m,m)");
    add_model_flags(cexact, exact.model, exact_binds);
    cexact->add_option("--A", exact.A, "first coordinate of the start")->capture_default_str();
    cexact->add_option("--B", exact.B, "second coordinate of the start")->capture_default_str();
    cexact->add_option("--m", exact.m, "diagonal index of the endpoint")->capture_default_str();
    cexact->add_flag("--list-paths", exact.list_paths, "include every admissible path");
    cexact->add_flag("--max-prob", exact.max_prob,
                     "include the climb-then-zigzag path and its probability");
    cexact->add_option("--out", exact.out, "output path (stdout when omitted)");
    cexact->add_option("--config", exact.config, config_help);
    exact_binds.push_back(bind_i64("A", exact.A));
    exact_binds.push_back(bind_i64("B", exact.B));
    exact_binds.push_back(bind_i64("m", exact.m));
    exact_binds.push_back(bind_bool("list-paths", exact.list_paths));
    exact_binds.push_back(bind_bool("max-prob", exact.max_prob));
    exact_binds.push_back(bind_str("out", exact.out));
    cexact->callback([&] {
        apply_config(cexact, exact.config, exact_binds);
        rc = run_exact(exact);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
