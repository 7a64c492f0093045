// Release gate: runs the benchmark protocol at full scale and checks every
// acceptance criterion, printing one PASS/FAIL line per criterion. Exits
// non-zero if any criterion fails. Expected total runtime: ~35 minutes on one
// core, dominated by the 10-dimensional LEH GA runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "robustmin/robustmin.hpp"

using namespace robustmin;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* criterion, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

constexpr std::uint64_t kBaseSeed = 20260825;

// Heuristic parameter sets used for the benchmark reproduction. The original
// study tuned the GA and descent-directions parameters per experiment but did
// not report the tuned values; these overrides are this harness's tuned
// equivalents (kept within the documented constraints: GA population x
// generations <= 100). The 2D protocol uses the library-default GA. In ten
// dimensions and above, dropping elitism and shrinking the mutation kernel
// lets mid-point crossover contract the placement population, which is what
// makes the GA engine outperform quasi-random placement there.
HeuristicSpec tuned_ga_highdim() {
    return {"ga",
            {{"elites", "0"},
             {"mutation_prob", "0.02"},
             {"mutation_scale", "0.02"}}};
}

HeuristicSpec tuned_ddre(const Problem& problem) {
    return {"ddre",
            {{"hc_fraction", "0.4"},
             {"epsilon", "0.05"},
             {"min_step", fmt_full(problem.gamma * 0.25)}}};
}

ExperimentConfig protocol_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.runs = 50;
    cfg.budget = 10000;
    cfg.inner_samples = 100;
    cfg.post_samples = 100000;
    cfg.base_seed = kBaseSeed;
    cfg.workers = 1;
    cfg.output_dir = out_dir;
    return cfg;
}

std::map<std::string, std::vector<double>> post_by_heuristic(
    const std::vector<RunRecord>& records) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& r : records) out[r.heuristic].push_back(r.post_value);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Criterion1Result {
    std::vector<RunRecord> records;
    ExperimentConfig config;
};

Criterion1Result run_criterion1(const fs::path& work) {
    ExperimentConfig cfg = protocol_config((work / "c1").string());
    cfg.problems = {{"poly2D", 2}};
    Problem poly = make_problem("poly2D", 2);
    cfg.heuristics = {{"rnd", {}}, {"ga", {}}, {"vor", {}}, {"pso", {}},
                      tuned_ddre(poly)};
    auto records = run_experiment(cfg);
    auto stats = summarise(records, cfg.alpha);
    emit_outputs(records, stats, cfg);

    struct Band {
        const char* name;
        double centre, tol;
    };
    const Band bands[] = {{"rnd", 5.26, 0.5},
                          {"ga", 5.50, 0.5},
                          {"vor", 5.52, 0.7},
                          {"pso", 5.57, 0.5},
                          {"ddre", 5.11, 0.6}};
    auto groups = post_by_heuristic(records);
    bool ok = true;
    std::string detail = "poly2D 50-run post means:";
    for (const auto& b : bands) {
        double mean = mean_of(groups.at(b.name));
        bool in_band = std::abs(mean - b.centre) <= b.tol;
        ok = ok && in_band;
        detail += " " + std::string(b.name) + "=" + fmt(mean) + (in_band ? "" : "!") +
                  " (ref " + fmt(b.centre) + "+-" + fmt(b.tol) + ")";
    }
    report("c1", ok, detail);
    return {std::move(records), std::move(cfg)};
}

void run_criterion2(const std::vector<RunRecord>& c1_records) {
    std::map<std::string, double> eval_sum, eval_n;
    std::map<std::string, int> leh_stops, leh_total;
    bool comparators_exact = true;
    for (const auto& r : c1_records) {
        eval_sum[r.heuristic] += static_cast<double>(r.evaluations_used);
        eval_n[r.heuristic] += 1.0;
        if (r.heuristic == "pso" || r.heuristic == "ddre") {
            comparators_exact =
                comparators_exact && r.evaluations_used == 10000;
        } else {
            ++leh_total[r.heuristic];
            if (r.stop_reason == StopReason::no_valid_leh) ++leh_stops[r.heuristic];
        }
    }
    bool ok = comparators_exact;
    std::string detail = "poly2D mean evals:";
    for (const char* h : {"rnd", "ga", "vor"}) {
        double mean = eval_sum[h] / eval_n[h];
        bool under = mean < 2000.0;
        double frac = static_cast<double>(leh_stops[h]) / leh_total[h];
        bool mostly = frac >= 0.9;
        ok = ok && under && mostly;
        detail += " " + std::string(h) + "=" + fmt(mean) + (under ? "" : "!") +
                  " (no_valid_leh " + fmt(100.0 * frac) + "%" + (mostly ? "" : "!") + ")";
    }
    detail += std::string("; pso/ddre evals==10000 ") +
              (comparators_exact ? "yes" : "NO");
    report("c2", ok, detail);
}

void run_criterion3(const fs::path& work) {
    struct Ref {
        const char* fn;
        double vor_ref;
    };
    const Ref refs[] = {{"ackley", 9.36}, {"mpf1", -0.61}, {"mpf2", -0.68},
                        {"rastrigin", 34.67}};
    bool ok = true;
    std::string detail = "2D vor vs pso:";
    for (const auto& ref : refs) {
        ExperimentConfig cfg =
            protocol_config((work / ("c3_" + std::string(ref.fn))).string());
        cfg.problems = {{ref.fn, 2}};
        cfg.heuristics = {{"vor", {}}, {"pso", {}}};
        auto records = run_experiment(cfg);
        auto groups = post_by_heuristic(records);
        double vor_mean = mean_of(groups.at("vor"));
        double pso_mean = mean_of(groups.at("pso"));
        double tol = std::max(0.1 * std::abs(ref.vor_ref), 1.0);
        bool ordered = vor_mean < pso_mean;
        bool near = std::abs(vor_mean - ref.vor_ref) <= tol;
        ok = ok && ordered && near;
        detail += " " + std::string(ref.fn) + ": vor=" + fmt(vor_mean) +
                  (near ? "" : "!") + " pso=" + fmt(pso_mean) +
                  (ordered ? "" : " ORDER!") + " (ref " + fmt(ref.vor_ref) + "+-" +
                  fmt(tol) + ");";
    }
    report("c3", ok, detail);
}

void run_criterion4(const fs::path& work) {
    const char* fns[] = {"ackley", "mpf1",      "mpf2",   "rastrigin",
                         "rosenbrock", "sawtooth", "sphere", "volcano"};
    bool ok = true;
    std::string detail = "10D 25-run means:";
    for (const char* fn : fns) {
        Problem problem = make_problem(fn, 10);
        ExperimentConfig cfg =
            protocol_config((work / ("c4_" + std::string(fn))).string());
        cfg.runs = 25;
        cfg.problems = {{fn, 10}};
        cfg.heuristics = {tuned_ga_highdim(), {"rnd", {}}, {"pso", {}}};
        const bool with_ddre =
            std::string(fn) == "rosenbrock" || std::string(fn) == "sphere";
        if (with_ddre) cfg.heuristics.push_back(tuned_ddre(problem));
        auto records = run_experiment(cfg);
        auto groups = post_by_heuristic(records);
        double ga = mean_of(groups.at("ga"));
        double rnd = mean_of(groups.at("rnd"));
        double pso = mean_of(groups.at("pso"));
        bool ga_rnd = ga < rnd;
        bool ga_pso = ga < pso;
        ok = ok && ga_rnd && ga_pso;
        detail += " " + std::string(fn) + ": ga=" + fmt(ga) + " rnd=" + fmt(rnd) +
                  (ga_rnd ? "" : " GA>=RND!") + " pso=" + fmt(pso) +
                  (ga_pso ? "" : " GA>=PSO!");
        if (with_ddre) {
            double ddre = mean_of(groups.at("ddre"));
            bool dd_ga = ddre < ga;
            ok = ok && dd_ga;
            detail += " ddre=" + fmt(ddre) + (dd_ga ? "" : " DDRE>=GA!");
        }
        detail += ";";
    }
    report("c4", ok, detail);
}

void run_criterion5() {
    Problem problem = make_problem("sphere", 100);

    auto one = [&](const char* heuristic) {
        std::uint64_t seed = derive_seed(kBaseSeed, "sphere", 100, heuristic, 0);
        RngStream root(seed);
        RngStream search = root.substream("search");
        RngStream post = root.substream("post");
        EvaluationLedger ledger(100, 10000);
        SearchOutcome out;
        if (std::string(heuristic) == "ga") {
            HeuristicSpec spec = tuned_ga_highdim();
            out = run_heuristic(spec, problem, ledger, search, 100, 1);
        } else {
            HeuristicSpec spec{"pso", {}};
            out = run_heuristic(spec, problem, ledger, search, 100, 1);
        }
        double post_value = out.best_point.empty()
                                ? out.best_value
                                : reference_worst_case(problem, out.best_point,
                                                       100000, post);
        return std::make_tuple(out, ledger.size(), post_value);
    };

    auto [ga_out, ga_evals, ga_post] = one("ga");
    auto [pso_out, pso_evals, pso_post] = one("pso");

    bool within_budget = ga_evals <= 10000 && ga_out.evaluations_used == ga_evals;
    bool beats_pso = ga_post < pso_post;

    bool tau_monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& t : ga_out.trace) {
        if (t.tau > prev) tau_monotone = false;
        prev = t.tau;
    }
    bool invariants = tau_monotone && !ga_out.trace.empty() &&
                      ga_out.best_value == ga_out.trace.back().tau &&
                      ga_out.candidates_visited ==
                          static_cast<int>(ga_out.trace.size()) &&
                      static_cast<std::size_t>(ga_out.best_point.size()) == 100 &&
                      problem.contains(ga_out.best_point);

    bool ok = within_budget && beats_pso && invariants;
    std::string detail = "sphere 100D single seeded run: ga evals=" +
                         std::to_string(ga_evals) + "/10000 post=" + fmt(ga_post) +
                         " pso post=" + fmt(pso_post) +
                         (beats_pso ? "" : " GA>=PSO!") +
                         (invariants ? ", ledger/tau invariants hold"
                                     : ", INVARIANT VIOLATION");
    report("c5", ok, detail);
}

void run_criterion6() {
#ifdef UNIT_TESTS_PATH
    const std::string cmd = std::string("\"") + UNIT_TESTS_PATH + "\" \"[property]\"";
    const auto t0 = std::chrono::steady_clock::now();
    int rc = std::system(cmd.c_str());
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    bool ok = rc == 0 && secs < 60.0;
    report("c6", ok,
           "property suites rc=" + std::to_string(rc) + " in " + fmt(secs) +
               "s (< 60s required)");
#else
    report("c6", false, "unit test binary path not configured at build time");
#endif
}

void run_criterion7(const Criterion1Result& c1, const fs::path& work) {
    ExperimentConfig cfg = c1.config;
    cfg.output_dir = (work / "c7_repeat").string();
    auto records = run_experiment(cfg);
    auto stats = summarise(records, cfg.alpha);
    emit_outputs(records, stats, cfg);
    std::string a = slurp(fs::path(c1.config.output_dir) / "runs.csv");
    std::string b = slurp(fs::path(cfg.output_dir) / "runs.csv");
    bool ok = !a.empty() && a == b;
    report("c7", ok,
           ok ? "repeated poly2D protocol run is byte-identical (runs.csv)"
              : "repeated run differs or runs.csv missing");
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "robustmin_acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work);

    const auto t0 = std::chrono::steady_clock::now();
    Criterion1Result c1 = run_criterion1(work);
    run_criterion2(c1.records);
    run_criterion3(work);
    run_criterion4(work);
    run_criterion5();
    run_criterion6();
    run_criterion7(c1, work);
    const auto t1 = std::chrono::steady_clock::now();

    std::printf("%d/7 criteria passed in %.1f min\n", 7 - g_failures,
                std::chrono::duration<double>(t1 - t0).count() / 60.0);
    return g_failures == 0 ? 0 : 1;
}
