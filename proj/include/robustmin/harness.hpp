#pragma once

// Experiment harness: the instances x heuristics x seeded-runs protocol with
// worst-case re-estimation, Wilcoxon equivalence marking and CSV/JSON output.

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "robustmin/comparators.hpp"
#include "robustmin/core.hpp"
#include "robustmin/leh.hpp"
#include "robustmin/stats.hpp"
#include "robustmin/testbed.hpp"
#include "robustmin/voronoi2d.hpp"

#include <json.hpp>

namespace robustmin {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HeuristicSpec {
    std::string name;  // rnd | ga | vor | pso | ddre
    std::map<std::string, std::string> overrides;
};

struct ExperimentConfig {
    std::vector<std::pair<std::string, int>> problems;  // (function name, dim)
    std::vector<HeuristicSpec> heuristics;
    int runs = 50;
    std::size_t budget = 10000;
    int inner_samples = 100;
    int num_initial = 1;
    int post_samples = 100000;
    std::uint64_t base_seed = 1;
    std::string output_dir = "results";
    int workers = 1;
    bool trace = false;
    double alpha = 0.05;
};

struct RunRecord {
    std::string problem;
    int dim = 0;
    std::string heuristic;
    int run_index = 0;
    std::uint64_t seed = 0;
    double reported_value = 0.0;
    double post_value = 0.0;
    Point best_point;
    int candidates_visited = 0;
    std::size_t evaluations_used = 0;
    StopReason stop_reason = StopReason::budget_exhausted;
    double wall_time = 0.0;
    // payload for trace emission (2D runs with tracing enabled only)
    std::vector<TraceEntry> trace;
    std::vector<double> eval_coords;
    std::vector<double> eval_values;
};

struct SummaryStats {
    std::string instance;
    std::string heuristic;
    double mean = 0.0;
    double sd = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double mean_candidates = 0.0;
    double mean_evaluations = 0.0;
    bool best_flag = false;
};

inline std::string instance_label(std::string_view problem, int dim) {
    return std::string(problem) + "_" + std::to_string(dim) + "d";
}

namespace detail {

inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string join_point(const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ';';
        s += fmt_double(p[i]);
    }
    return s;
}

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string normalise_key(std::string k) {
    for (char& c : k)
        if (c == '-') c = '_';
    return k;
}

inline double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ConfigError(what + ": not a number: '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s, const std::string& what) {
    long long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ConfigError(what + ": not an integer: '" + s + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ConfigError(what + ": not an unsigned integer: '" + s + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        std::string item = trim(s.substr(start, comma - start));
        if (!item.empty()) out.push_back(std::move(item));
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view problem, int dim,
                                 std::string_view heuristic, int run) {
    std::uint64_t h = RngStream::mix(base ^ RngStream::fnv1a(problem));
    h = RngStream::mix(h ^ static_cast<std::uint64_t>(dim));
    h = RngStream::mix(h ^ RngStream::fnv1a(heuristic));
    h = RngStream::mix(h ^ static_cast<std::uint64_t>(run));
    return h;
}

namespace detail {

inline const std::vector<std::string>& heuristic_names() {
    static const std::vector<std::string> names = {"rnd", "ga", "vor", "pso", "ddre"};
    return names;
}

inline void check_keys(const HeuristicSpec& spec, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : spec.overrides) {
        bool ok = false;
        for (const char* kn : known)
            if (k == kn) ok = true;
        if (!ok)
            throw ConfigError("heuristic " + spec.name + ": unknown parameter '" + k + "'");
    }
}

inline LehGaParams ga_params_from(const HeuristicSpec& spec) {
    check_keys(spec, {"population", "generations", "elites", "tournament_size",
                      "mutation_prob", "mutation_scale"});
    LehGaParams p;
    for (const auto& [k, v] : spec.overrides) {
        if (k == "population") p.population = static_cast<int>(parse_int(v, k));
        else if (k == "generations") p.generations = static_cast<int>(parse_int(v, k));
        else if (k == "elites") p.elites = static_cast<int>(parse_int(v, k));
        else if (k == "tournament_size") p.tournament_size = static_cast<int>(parse_int(v, k));
        else if (k == "mutation_prob") p.mutation_prob = parse_double(v, k);
        else if (k == "mutation_scale") p.mutation_scale = parse_double(v, k);
    }
    return p;
}

inline int rnd_attempts_from(const HeuristicSpec& spec) {
    check_keys(spec, {"max_attempts"});
    int attempts = 1000;
    auto it = spec.overrides.find("max_attempts");
    if (it != spec.overrides.end())
        attempts = static_cast<int>(parse_int(it->second, it->first));
    if (attempts < 1) throw ConfigError("rnd: max_attempts must be >= 1");
    return attempts;
}

inline PsoParams pso_params_from(const HeuristicSpec& spec, const Problem& problem) {
    check_keys(spec, {"swarm", "iterations", "c1", "c2", "omega", "vmax"});
    PsoParams p = default_pso_params(problem);
    for (const auto& [k, v] : spec.overrides) {
        if (k == "swarm") p.swarm = static_cast<int>(parse_int(v, k));
        else if (k == "iterations") p.iterations = static_cast<int>(parse_int(v, k));
        else if (k == "c1") p.c1 = parse_double(v, k);
        else if (k == "c2") p.c2 = parse_double(v, k);
        else if (k == "omega") p.omega = parse_double(v, k);
        else if (k == "vmax") p.vmax.assign(problem.dim, parse_double(v, k));
    }
    return p;
}

inline DescentParams dd_params_from(const HeuristicSpec& spec, const Problem& problem) {
    check_keys(spec, {"hc_fraction", "band_growth", "min_step", "step_cap", "epsilon"});
    DescentParams p = default_descent_params(problem);
    for (const auto& [k, v] : spec.overrides) {
        if (k == "hc_fraction") p.hc_fraction = parse_double(v, k);
        else if (k == "band_growth") p.band_growth = parse_double(v, k);
        else if (k == "min_step") p.min_step = parse_double(v, k);
        else if (k == "step_cap") p.step_cap = parse_double(v, k);
        else if (k == "epsilon") p.epsilon = parse_double(v, k);
    }
    return p;
}

}  // namespace detail

inline SearchOutcome run_heuristic(const HeuristicSpec& spec, const Problem& problem,
                                   EvaluationLedger& ledger, RngStream& rng,
                                   int inner_samples, int num_initial) {
    if (spec.name == "rnd")
        return leh_search(problem, ledger, rng,
                          make_random_calculator(detail::rnd_attempts_from(spec)),
                          num_initial, inner_samples);
    if (spec.name == "ga")
        return leh_search(problem, ledger, rng,
                          make_ga_calculator(detail::ga_params_from(spec)), num_initial,
                          inner_samples);
    if (spec.name == "vor")
        return leh_search(problem, ledger, rng, make_voronoi_calculator(), num_initial,
                          inner_samples);
    if (spec.name == "pso")
        return pso_search(problem, ledger, rng, detail::pso_params_from(spec, problem),
                          inner_samples);
    if (spec.name == "ddre")
        return dd_restart_search(problem, ledger, rng,
                                 detail::dd_params_from(spec, problem), inner_samples);
    throw ConfigError("unknown heuristic: " + spec.name);
}

inline void validate_config(const ExperimentConfig& config) {
    if (config.problems.empty()) throw ConfigError("no problems configured");
    if (config.heuristics.empty()) throw ConfigError("no heuristics configured");
    if (config.runs < 1) throw ConfigError("runs must be >= 1");
    if (config.budget < 1) throw ConfigError("budget must be >= 1");
    if (config.inner_samples < 1) throw ConfigError("inner_samples must be >= 1");
    if (config.num_initial < 1) throw ConfigError("num_initial must be >= 1");
    if (config.post_samples < 1) throw ConfigError("post_samples must be >= 1");
    if (config.workers < 1) throw ConfigError("workers must be >= 1");

    for (const auto& [name, dim] : config.problems) {
        try {
            (void)make_problem(name, dim);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    for (const auto& spec : config.heuristics) {
        const auto& names = detail::heuristic_names();
        bool known = false;
        for (const auto& n : names) known = known || n == spec.name;
        if (!known) throw ConfigError("unknown heuristic: " + spec.name);
        for (const auto& [pname, dim] : config.problems) {
            if (spec.name == "vor" && dim != 2)
                throw ConfigError("heuristic vor requires 2D problems; got " +
                                  instance_label(pname, dim));
            Problem problem = make_problem(pname, dim);
            try {
                if (spec.name == "ga") detail::ga_params_from(spec).validate();
                else if (spec.name == "rnd") (void)detail::rnd_attempts_from(spec);
                else if (spec.name == "pso")
                    detail::pso_params_from(spec, problem).validate(problem);
                else if (spec.name == "ddre")
                    detail::dd_params_from(spec, problem).validate();
                else detail::check_keys(spec, {});
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
}

inline RunRecord run_single(const ExperimentConfig& config, const std::string& pname,
                            int dim, const HeuristicSpec& spec, int run) {
    Problem problem = make_problem(pname, dim);
    RunRecord rec;
    rec.problem = pname;
    rec.dim = dim;
    rec.heuristic = spec.name;
    rec.run_index = run;
    rec.seed = derive_seed(config.base_seed, pname, dim, spec.name, run);

    RngStream root(rec.seed);
    RngStream search_rng = root.substream("search");
    RngStream post_rng = root.substream("post");

    EvaluationLedger ledger(dim, config.budget);
    const auto t0 = std::chrono::steady_clock::now();
    SearchOutcome outcome =
        run_heuristic(spec, problem, ledger, search_rng, config.inner_samples,
                      config.num_initial);
    const auto t1 = std::chrono::steady_clock::now();

    rec.reported_value = outcome.best_value;
    rec.best_point = outcome.best_point;
    rec.candidates_visited = outcome.candidates_visited;
    rec.evaluations_used = outcome.evaluations_used;
    rec.stop_reason = outcome.stop_reason;
    rec.wall_time = std::chrono::duration<double>(t1 - t0).count();
    rec.post_value = outcome.best_point.empty()
                         ? outcome.best_value
                         : reference_worst_case(problem, outcome.best_point,
                                                config.post_samples, post_rng);
    if (config.trace && dim == 2) {
        rec.trace = std::move(outcome.trace);
        rec.eval_coords.assign(ledger.coords().begin(), ledger.coords().end());
        rec.eval_values.assign(ledger.values().begin(), ledger.values().end());
    }
    return rec;
}

inline std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    const std::size_t P = config.problems.size();
    const std::size_t H = config.heuristics.size();
    const std::size_t R = static_cast<std::size_t>(config.runs);
    const std::size_t total = P * H * R;

    std::vector<RunRecord> records(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= total) return;
            const std::size_t pi = j / (H * R);
            const std::size_t hi = (j / R) % H;
            const int run = static_cast<int>(j % R);
            try {
                records[j] = run_single(config, config.problems[pi].first,
                                        config.problems[pi].second,
                                        config.heuristics[hi], run);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    const int W = std::min<int>(config.workers, static_cast<int>(total));
    if (W <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(W);
        for (int w = 0; w < W; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

inline std::vector<SummaryStats> summarise(const std::vector<RunRecord>& records,
                                           double alpha = 0.05) {
    struct Group {
        std::string instance, heuristic;
        std::vector<double> post, candidates, evaluations;
    };
    std::vector<Group> groups;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::vector<std::string> instance_order;
    for (const auto& rec : records) {
        const std::string inst = instance_label(rec.problem, rec.dim);
        auto key = std::make_pair(inst, rec.heuristic);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, groups.size()).first;
            groups.push_back({inst, rec.heuristic, {}, {}, {}});
            bool seen = false;
            for (const auto& s : instance_order) seen = seen || s == inst;
            if (!seen) instance_order.push_back(inst);
        }
        Group& g = groups[it->second];
        g.post.push_back(rec.post_value);
        g.candidates.push_back(static_cast<double>(rec.candidates_visited));
        g.evaluations.push_back(static_cast<double>(rec.evaluations_used));
    }

    std::vector<SummaryStats> out(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const Group& g = groups[i];
        SummaryStats s;
        s.instance = g.instance;
        s.heuristic = g.heuristic;
        s.mean = mean_of(g.post);
        s.sd = sd_of(g.post);
        std::vector<double> sorted = g.post;
        std::sort(sorted.begin(), sorted.end());
        s.median = quantile_sorted(sorted, 0.5);
        s.q1 = quantile_sorted(sorted, 0.25);
        s.q3 = quantile_sorted(sorted, 0.75);
        s.mean_candidates = mean_of(g.candidates);
        s.mean_evaluations = mean_of(g.evaluations);
        out[i] = std::move(s);
    }

    // equivalence flags: best mean per instance, then rank-sum vs the best
    for (const auto& inst : instance_order) {
        std::size_t best = groups.size();
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i].instance != inst) continue;
            if (best == groups.size() || out[i].mean < out[best].mean) best = i;
        }
        if (best == groups.size()) continue;
        out[best].best_flag = true;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i].instance != inst || i == best) continue;
            RankSumResult r = wilcoxon_rank_sum(groups[i].post, groups[best].post, alpha);
            out[i].best_flag = !r.reject;
        }
    }
    return out;
}

inline std::vector<std::filesystem::path> emit_outputs(
    const std::vector<RunRecord>& records, const std::vector<SummaryStats>& stats,
    const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    using detail::csv_quote;
    using detail::fmt_double;
    if (records.empty()) throw std::invalid_argument("emit_outputs: no records");

    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());

    std::vector<fs::path> files;
    auto open_out = [&](const fs::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw IoError("cannot open " + p.string() + " for writing");
        return f;
    };
    auto finish = [&](std::ofstream& f, const fs::path& p) {
        f.flush();
        if (!f) throw IoError("write failed for " + p.string());
        files.push_back(p);
    };

    {
        const fs::path p = dir / "runs.csv";
        auto f = open_out(p);
        f << "problem,dim,heuristic,run_index,seed,reported_value,post_value,"
             "candidates_visited,evaluations_used,stop_reason,best_point\n";
        for (const auto& r : records) {
            f << csv_quote(r.problem) << ',' << r.dim << ',' << csv_quote(r.heuristic)
              << ',' << r.run_index << ',' << r.seed << ','
              << fmt_double(r.reported_value) << ',' << fmt_double(r.post_value) << ','
              << r.candidates_visited << ',' << r.evaluations_used << ','
              << to_string(r.stop_reason) << ',' << detail::join_point(r.best_point)
              << '\n';
        }
        finish(f, p);
    }
    {
        const fs::path p = dir / "summary.csv";
        auto f = open_out(p);
        f << "instance,heuristic,mean,sd,median,q1,q3,mean_candidates,mean_evaluations,"
             "best_flag\n";
        for (const auto& s : stats) {
            f << csv_quote(s.instance) << ',' << csv_quote(s.heuristic) << ','
              << fmt_double(s.mean) << ',' << fmt_double(s.sd) << ','
              << fmt_double(s.median) << ',' << fmt_double(s.q1) << ','
              << fmt_double(s.q3) << ',' << fmt_double(s.mean_candidates) << ','
              << fmt_double(s.mean_evaluations) << ','
              << (s.best_flag ? "true" : "false") << '\n';
        }
        finish(f, p);
    }
    {
        std::vector<std::string> instances;
        for (const auto& r : records) {
            const std::string inst = instance_label(r.problem, r.dim);
            bool seen = false;
            for (const auto& s : instances) seen = seen || s == inst;
            if (!seen) instances.push_back(inst);
        }
        for (const auto& inst : instances) {
            const fs::path p = dir / ("boxplot_" + inst + ".csv");
            auto f = open_out(p);
            f << "heuristic,run_index,post_value\n";
            for (const auto& r : records)
                if (instance_label(r.problem, r.dim) == inst)
                    f << csv_quote(r.heuristic) << ',' << r.run_index << ','
                      << fmt_double(r.post_value) << '\n';
            finish(f, p);
        }
    }
    {
        const fs::path p = dir / "timings.csv";
        auto f = open_out(p);
        f << "problem,dim,heuristic,run_index,wall_time\n";
        for (const auto& r : records)
            f << csv_quote(r.problem) << ',' << r.dim << ',' << csv_quote(r.heuristic)
              << ',' << r.run_index << ',' << fmt_double(r.wall_time) << '\n';
        finish(f, p);
    }
    for (const auto& r : records) {
        if (r.trace.empty() && r.eval_values.empty()) continue;
        char runbuf[16];
        std::snprintf(runbuf, sizeof(runbuf), "%03d", r.run_index);
        const fs::path p = dir / ("trace_" + instance_label(r.problem, r.dim) + "_" +
                                  r.heuristic + "_run" + runbuf + ".csv");
        auto f = open_out(p);
        f << "kind,x1,x2,value,r_leh,tau\n";
        for (std::size_t i = 0; i < r.eval_values.size(); ++i)
            f << "eval," << fmt_double(r.eval_coords[2 * i]) << ','
              << fmt_double(r.eval_coords[2 * i + 1]) << ','
              << fmt_double(r.eval_values[i]) << ",,\n";
        for (const auto& t : r.trace)
            f << "candidate," << fmt_double(t.candidate[0]) << ','
              << fmt_double(t.candidate[1]) << ",," << fmt_double(t.r_leh) << ','
              << fmt_double(t.tau) << '\n';
        finish(f, p);
    }
    {
        const fs::path p = dir / "manifest.json";
        nlohmann::json j;
        for (const auto& [name, dim] : config.problems)
            j["problems"].push_back({{"name", name}, {"dim", dim}});
        for (const auto& h : config.heuristics) {
            nlohmann::json hj{{"name", h.name}};
            for (const auto& [k, v] : h.overrides) hj["overrides"][k] = v;
            j["heuristics"].push_back(hj);
        }
        j["runs"] = config.runs;
        j["budget"] = config.budget;
        j["inner_samples"] = config.inner_samples;
        j["num_initial"] = config.num_initial;
        j["post_samples"] = config.post_samples;
        j["base_seed"] = config.base_seed;
        j["output_dir"] = config.output_dir;
        j["workers"] = config.workers;
        j["trace"] = config.trace;
        j["alpha"] = config.alpha;
        j["statistics"] =
            "best_flag: two-sided Wilcoxon rank-sum of each heuristic against the "
            "lowest-mean heuristic per instance; flagged when not rejected at alpha";
        double total_wall = 0.0;
        for (const auto& r : records) {
            total_wall += r.wall_time;
            j["seeds"].push_back({{"problem", r.problem},
                                  {"dim", r.dim},
                                  {"heuristic", r.heuristic},
                                  {"run", r.run_index},
                                  {"seed", r.seed}});
        }
        j["total_wall_time"] = total_wall;
        for (const auto& fp : files) j["files"].push_back(fp.filename().string());
        auto f = open_out(p);
        f << j.dump(2) << '\n';
        finish(f, p);
    }
    return files;
}

// Minimal INI-style config: `key = value` lines, '#' comments, repeatable
// `problem = name:dim` entries, comma lists for heuristics, and per-heuristic
// parameter sections introduced by `[heuristic.<name>]`.
inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    ExperimentConfig cfg;
    cfg.problems.clear();
    cfg.heuristics.clear();

    std::string line;
    std::string section;  // empty = global
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto heuristic_for = [&](const std::string& name) -> HeuristicSpec& {
        for (auto& h : cfg.heuristics)
            if (h.name == name) return h;
        cfg.heuristics.push_back({name, {}});
        return cfg.heuristics.back();
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail("unterminated section header");
            std::string name = detail::trim(t.substr(1, t.size() - 2));
            if (name.rfind("heuristic.", 0) != 0) fail("unknown section [" + name + "]");
            section = name.substr(10);
            if (section.empty()) fail("empty heuristic name in section header");
            heuristic_for(section);
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = detail::normalise_key(detail::trim(t.substr(0, eq)));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");

        if (!section.empty()) {
            heuristic_for(section).overrides[key] = value;
            continue;
        }
        if (key == "problem" || key == "problems") {
            for (const auto& item : detail::split_list(value)) {
                auto colon = item.find(':');
                if (colon == std::string::npos)
                    fail("problem entries take the form name:dim");
                std::string name = detail::trim(item.substr(0, colon));
                int dim = static_cast<int>(
                    detail::parse_int(detail::trim(item.substr(colon + 1)), "dim"));
                cfg.problems.emplace_back(name, dim);
            }
        } else if (key == "heuristic" || key == "heuristics") {
            for (const auto& item : detail::split_list(value)) heuristic_for(item);
        } else if (key == "runs") {
            cfg.runs = static_cast<int>(detail::parse_int(value, key));
        } else if (key == "budget") {
            cfg.budget = static_cast<std::size_t>(detail::parse_int(value, key));
        } else if (key == "inner_samples") {
            cfg.inner_samples = static_cast<int>(detail::parse_int(value, key));
        } else if (key == "num_initial") {
            cfg.num_initial = static_cast<int>(detail::parse_int(value, key));
        } else if (key == "post_samples") {
            cfg.post_samples = static_cast<int>(detail::parse_int(value, key));
        } else if (key == "seed" || key == "base_seed") {
            cfg.base_seed = detail::parse_u64(value, key);
        } else if (key == "out" || key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(detail::parse_int(value, key));
        } else if (key == "trace") {
            if (value == "true" || value == "1") cfg.trace = true;
            else if (value == "false" || value == "0") cfg.trace = false;
            else fail("trace must be true/false");
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace robustmin
