// Command line front end for the robust optimisation harness.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robustmin/robustmin.hpp"

namespace {

void print_summary_table(const std::vector<robustmin::SummaryStats>& stats) {
    std::printf("%-18s %-6s %12s %12s %12s %8s %6s\n", "instance", "heur", "mean", "sd",
                "median", "evals", "best");
    for (const auto& s : stats)
        std::printf("%-18s %-6s %12.5g %12.5g %12.5g %8.1f %6s\n", s.instance.c_str(),
                    s.heuristic.c_str(), s.mean, s.sd, s.median, s.mean_evaluations,
                    s.best_flag ? "*" : "");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robustmin: robust (min-max) optimisation under implementation error"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run a benchmark experiment");
    std::string config_path, problem_list, heuristic_list, out_dir;
    int dim = -1, runs = -1, inner_samples = -1, post_samples = -1, workers = -1;
    long long budget = -1;
    std::uint64_t seed = 0;
    bool have_seed = false, trace = false;

    run->add_option("--config", config_path, "experiment config file");
    run->add_option("--problem", problem_list, "comma list of test function names");
    run->add_option("--dim", dim, "dimension for --problem entries");
    run->add_option("--heuristic", heuristic_list,
                    "comma list from rnd,ga,vor,pso,ddre");
    run->add_option("--runs", runs, "independent runs per instance/heuristic");
    run->add_option("--budget", budget, "objective evaluation budget per run");
    run->add_option("--inner-samples", inner_samples,
                    "samples per inner maximisation");
    run->add_option("--post-samples", post_samples,
                    "samples for worst-case re-estimation");
    run->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
        have_seed = true;
    });
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "parallel worker threads");
    run->add_flag("--trace", trace, "emit per-run trace files for 2D instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        robustmin::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = robustmin::parse_config_file(config_path);
        } else {
            cfg.problems.clear();
            cfg.heuristics.clear();
        }
        if (!problem_list.empty()) {
            if (dim < 1)
                throw robustmin::ConfigError("--problem requires --dim");
            cfg.problems.clear();
            for (const auto& name : robustmin::detail::split_list(problem_list))
                cfg.problems.emplace_back(name, dim);
        }
        if (!heuristic_list.empty()) {
            std::vector<robustmin::HeuristicSpec> keep;
            for (const auto& name : robustmin::detail::split_list(heuristic_list)) {
                robustmin::HeuristicSpec spec{name, {}};
                for (const auto& h : cfg.heuristics)
                    if (h.name == name) spec.overrides = h.overrides;
                keep.push_back(std::move(spec));
            }
            cfg.heuristics = std::move(keep);
        }
        if (runs > 0) cfg.runs = runs;
        if (budget > 0) cfg.budget = static_cast<std::size_t>(budget);
        if (inner_samples > 0) cfg.inner_samples = inner_samples;
        if (post_samples > 0) cfg.post_samples = post_samples;
        if (have_seed) cfg.base_seed = seed;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (workers > 0) cfg.workers = workers;
        if (trace) cfg.trace = true;

        auto records = robustmin::run_experiment(cfg);
        auto stats = robustmin::summarise(records, cfg.alpha);
        auto files = robustmin::emit_outputs(records, stats, cfg);

        print_summary_table(stats);
        std::printf("wrote %zu files to %s\n", files.size(), cfg.output_dir.c_str());
        return 0;
    } catch (const robustmin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const robustmin::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
