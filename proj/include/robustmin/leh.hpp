#pragma once

// Outer exploration loop: move the candidate to the centre of the largest
// empty hypersphere among high-cost points until no sphere of radius > gamma
// remains, plus the random-sampling and GA placement calculators.

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robustmin/core.hpp"
#include "robustmin/inner_max.hpp"

namespace robustmin {

struct LehPlacement {
    Point center;
    double radius = 0.0;
    bool found = false;
};

struct LehGaParams {
    int population = 20;
    int generations = 5;
    int elites = 1;
    int tournament_size = 2;
    double mutation_prob = 0.1;
    double mutation_scale = 0.1;  // fraction of the per-coordinate range

    void validate() const {
        if (population < 2) throw std::invalid_argument("ga: population must be >= 2");
        if (generations < 1) throw std::invalid_argument("ga: generations must be >= 1");
        if (population * generations > 100)
            throw std::invalid_argument("ga: population x generations capped at 100");
        if (elites < 0 || elites >= population)
            throw std::invalid_argument("ga: elites must be in [0, population)");
        if (tournament_size < 1 || tournament_size > population)
            throw std::invalid_argument("ga: tournament_size must be in [1, population]");
        if (mutation_prob < 0.0 || mutation_prob > 1.0)
            throw std::invalid_argument("ga: mutation_prob must be a probability");
        if (mutation_scale < 0.0) throw std::invalid_argument("ga: mutation_scale must be >= 0");
    }
};

enum class StopReason { no_valid_leh, budget_exhausted, completed };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::no_valid_leh: return "no_valid_leh";
        case StopReason::budget_exhausted: return "budget_exhausted";
        default: return "completed";
    }
}

struct TraceEntry {
    Point candidate;
    double r_leh = 0.0;  // placement radius found from this candidate (0 if none)
    double tau = 0.0;    // incumbent threshold after this candidate's inner search
};

struct SearchOutcome {
    Point best_point;
    double best_value = std::numeric_limits<double>::infinity();
    int candidates_visited = 0;
    std::size_t evaluations_used = 0;
    StopReason stop_reason = StopReason::budget_exhausted;
    std::vector<TraceEntry> trace;
};

using LehCalculator =
    std::function<LehPlacement(const HighCostSet&, const Problem&, RngStream&)>;

namespace detail {

inline LehPlacement random_leh_flat(std::span<const double> hcps, std::size_t dim,
                                    const Problem& problem, RngStream& rng,
                                    int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Point p = sample_in_box(rng, problem);
        if (all_farther_than(p, hcps, dim, problem.gamma)) {
            double radius = min_distance_to_set(p, hcps, dim).distance;
            return {std::move(p), radius, true};
        }
    }
    return {};
}

inline LehPlacement ga_leh_flat(std::span<const double> hcps, std::size_t dim,
                                const Problem& problem, RngStream& rng,
                                const LehGaParams& params) {
    params.validate();
    const int pop = params.population;
    // Fitness scans dominate the whole search at higher dimensions, so fresh
    // individuals are collected per generation and scanned in one batched pass.
    std::vector<double> scratch_pts, scratch_d2;
    auto batch_fitness = [&](const std::vector<Point>& pts, std::vector<double>& out) {
        scratch_pts.clear();
        for (const auto& p : pts) scratch_pts.insert(scratch_pts.end(), p.begin(), p.end());
        scratch_d2.resize(pts.size());
        min_squared_distances(scratch_pts, pts.size(), hcps, dim, scratch_d2.data());
        out.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) out[i] = std::sqrt(scratch_d2[i]);
    };

    std::vector<Point> population(pop);
    std::vector<double> fit(pop);
    for (int i = 0; i < pop; ++i) population[i] = sample_in_box(rng, problem);
    batch_fitness(population, fit);

    auto tournament = [&]() -> int {
        int winner = static_cast<int>(rng.uniform_index(pop));
        for (int t = 1; t < params.tournament_size; ++t) {
            int c = static_cast<int>(rng.uniform_index(pop));
            if (fit[c] > fit[winner]) winner = c;
        }
        return winner;
    };

    std::vector<int> order(pop);
    std::vector<Point> next_pop, children;
    std::vector<double> next_fit, child_fit;
    for (int g = 0; g < params.generations; ++g) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fit[a] > fit[b]; });
        next_pop.clear();
        next_fit.clear();
        for (int e = 0; e < params.elites; ++e) {
            next_pop.push_back(population[order[e]]);
            next_fit.push_back(fit[order[e]]);
        }
        children.clear();
        while (static_cast<int>(next_pop.size() + children.size()) < pop) {
            const Point& a = population[tournament()];
            const Point& b = population[tournament()];
            Point child(dim);
            for (std::size_t k = 0; k < dim; ++k) child[k] = 0.5 * (a[k] + b[k]);
            for (std::size_t k = 0; k < dim; ++k) {
                if (rng.uniform01() < params.mutation_prob)
                    child[k] += rng.normal() * params.mutation_scale *
                                (problem.upper[k] - problem.lower[k]);
            }
            problem.clamp(child);
            children.push_back(std::move(child));
        }
        batch_fitness(children, child_fit);
        for (std::size_t c = 0; c < children.size(); ++c) {
            next_pop.push_back(std::move(children[c]));
            next_fit.push_back(child_fit[c]);
        }
        population.swap(next_pop);
        fit.swap(next_fit);
    }
    int best = 0;
    for (int i = 1; i < pop; ++i)
        if (fit[i] > fit[best]) best = i;
    return {std::move(population[best]), fit[best], fit[best] > problem.gamma};
}

inline std::vector<double> flatten(const std::vector<Point>& set) {
    std::vector<double> flat;
    if (set.empty()) return flat;
    flat.reserve(set.size() * set.front().size());
    for (const auto& p : set) flat.insert(flat.end(), p.begin(), p.end());
    return flat;
}

}  // namespace detail

// First uniform box point farther than gamma from every hcp, its min distance
// as radius; gives up (found = false) after max_attempts rejections.
inline LehPlacement random_leh(const std::vector<Point>& hcps, const Problem& problem,
                               RngStream& rng, int max_attempts = 1000) {
    if (hcps.empty()) throw std::invalid_argument("random_leh: empty hcp set");
    auto flat = detail::flatten(hcps);
    return detail::random_leh_flat(flat, hcps.front().size(), problem, rng, max_attempts);
}

// Evolves box points to maximise the min distance to the hcps; returns the
// best individual of the final population. With elite carry-over (the
// default) that individual is the all-time best, making the placement radius
// monotone in generations; with elites = 0 the placement tracks the evolved
// population instead, which concentrates the search in high dimensions.
inline LehPlacement ga_leh(const std::vector<Point>& hcps, const Problem& problem,
                           RngStream& rng, const LehGaParams& params = {}) {
    if (hcps.empty()) throw std::invalid_argument("ga_leh: empty hcp set");
    auto flat = detail::flatten(hcps);
    return detail::ga_leh_flat(flat, hcps.front().size(), problem, rng, params);
}

inline LehCalculator make_random_calculator(int max_attempts = 1000) {
    return [max_attempts](const HighCostSet& h, const Problem& p, RngStream& r) {
        return detail::random_leh_flat(h.coords(), h.dim(), p, r, max_attempts);
    };
}

inline LehCalculator make_ga_calculator(const LehGaParams& params = {}) {
    return [params](const HighCostSet& h, const Problem& p, RngStream& r) {
        return detail::ga_leh_flat(h.coords(), h.dim(), p, r, params);
    };
}

// Outer LEH loop. Seeds num_initial uniform points, starts from a random
// seed, then alternates inner maximisation, threshold update, high-cost set
// refresh and LEH placement, moving to each placement centre while a sphere
// of radius > gamma exists. Returns the incumbent on either stop.
inline SearchOutcome leh_search(const Problem& problem, EvaluationLedger& ledger,
                                RngStream& rng, const LehCalculator& calculator,
                                int num_initial, int max_search) {
    if (num_initial < 1) throw std::invalid_argument("leh_search: num_initial must be >= 1");
    SearchOutcome out;
    for (int i = 0; i < num_initial && !ledger.exhausted(); ++i) {
        Point x = sample_in_box(rng, problem);
        evaluate(ledger, problem, x);
    }
    if (ledger.size() == 0) return out;  // zero budget: nothing to report

    std::size_t seed_idx = rng.uniform_index(ledger.size());
    Point x_c(ledger.point(seed_idx).begin(), ledger.point(seed_idx).end());
    double tau = std::numeric_limits<double>::infinity();
    Point x_op;
    HighCostSet hcs;
    bool center_known = true;  // the first candidate is an already-evaluated seed

    for (;;) {
        InnerResult res =
            inner_maximise(ledger, problem, rng, x_c, tau, max_search, center_known);
        center_known = false;
        if (res.exhausted) {
            // A partial estimate only seeds the incumbent when none exists;
            // otherwise it is discarded (it may understate the worst case).
            if (x_op.empty()) {
                tau = res.estimate;
                x_op = x_c;
            }
            out.trace.push_back({std::move(x_c), 0.0, tau});
            out.stop_reason = StopReason::budget_exhausted;
            break;
        }
        if (res.estimate < tau) {
            tau = res.estimate;
            x_op = x_c;
        }
        hcs.refresh(ledger, tau);
        LehPlacement pl = calculator(hcs, problem, rng);
        out.trace.push_back({std::move(x_c), pl.radius, tau});
        if (!pl.found || !(pl.radius > problem.gamma)) {
            out.stop_reason = StopReason::no_valid_leh;
            break;
        }
        x_c = std::move(pl.center);
    }
    out.best_point = std::move(x_op);
    out.best_value = tau;
    out.candidates_visited = static_cast<int>(out.trace.size());
    out.evaluations_used = ledger.size();
    return out;
}

}  // namespace robustmin
