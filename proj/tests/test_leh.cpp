#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "robustmin/leh.hpp"
#include "robustmin/testbed.hpp"

using namespace robustmin;

namespace {

Problem unit_square(double gamma) {
    Problem p;
    p.name = "unit";
    p.dim = 2;
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 1.0};
    p.gamma = gamma;
    p.objective = [](std::span<const double> x) { return x[0] + x[1]; };
    p.validate();
    return p;
}

// brute-force max-min-distance over an m x m grid of the unit square
double grid_max_min(const std::vector<Point>& hcps, int m) {
    double best = 0.0;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            Point q{static_cast<double>(i) / m, static_cast<double>(j) / m};
            double d = min_distance_to_set(q, hcps).distance;
            best = std::max(best, d);
        }
    return best;
}

}  // namespace

TEST_CASE("random placement finds room when most of the box is empty", "[leh]") {
    Problem p = unit_square(0.1);
    RngStream rng(101);
    std::vector<Point> hcps{{0.5, 0.5}};
    LehPlacement pl = random_leh(hcps, p, rng);
    REQUIRE(pl.found);
    REQUIRE(pl.radius > 0.1);
    REQUIRE(p.contains(pl.center));
    REQUIRE(pl.radius ==
            Catch::Approx(min_distance_to_set(pl.center, hcps).distance).epsilon(1e-9));
}

TEST_CASE("a grid of hcps covering the box defeats random placement", "[leh]") {
    // 4x4 grid with spacing 1/3: any square point is within ~0.236 < 0.3 of a node
    Problem p = unit_square(0.3);
    RngStream rng(103);
    std::vector<Point> hcps;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) hcps.push_back({i / 3.0, j / 3.0});
    LehPlacement pl = random_leh(hcps, p, rng);
    REQUIRE_FALSE(pl.found);
}

TEST_CASE("random placement acceptance rate matches the quarter-disc area", "[leh][property]") {
    // single hcp at the corner, gamma 0.5: acceptance probability = 1 - pi/16
    Problem p = unit_square(0.5);
    RngStream rng(107);
    std::vector<Point> hcps{{0.0, 0.0}};
    int accepted = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        LehPlacement pl = detail::random_leh_flat(std::vector<double>{0.0, 0.0}, 2, p, rng, 1);
        if (pl.found) ++accepted;
    }
    double expected = 1.0 - std::numbers::pi / 16.0;
    REQUIRE(std::fabs(static_cast<double>(accepted) / trials - expected) < 0.01);
}

TEST_CASE("GA moves toward a corner around a central hcp", "[leh]") {
    // With one central hcp the optima are the four corners (radius sqrt(0.5)).
    // The GA is capped at population x generations <= 100 individuals and
    // mid-point crossover averages across the symmetric corners, so it gets
    // near — but not onto — a corner; assert a solid fraction of the optimum
    // plus the exact consistency invariants.
    Problem p = unit_square(0.1);
    RngStream rng(109);
    std::vector<Point> hcps{{0.5, 0.5}};
    LehPlacement pl = ga_leh(hcps, p, rng);
    REQUIRE(pl.found);
    REQUIRE(pl.radius > 0.5);
    REQUIRE(pl.radius <= std::sqrt(0.5) + 1e-12);
    REQUIRE(pl.radius ==
            Catch::Approx(std::hypot(pl.center[0] - 0.5, pl.center[1] - 0.5))
                .epsilon(1e-12));
    REQUIRE(p.contains(pl.center));
}

TEST_CASE("GA with two opposite corner hcps", "[leh]") {
    Problem p = unit_square(0.1);
    RngStream rng(113);
    std::vector<Point> hcps{{0.0, 0.0}, {1.0, 1.0}};
    LehPlacement pl = ga_leh(hcps, p, rng);
    REQUIRE(pl.found);
    REQUIRE(pl.radius >= std::sqrt(0.5) - 0.05);
    REQUIRE(pl.radius <= grid_max_min(hcps, 200) + 1.0 / 200.0);
}

TEST_CASE("GA radius never beats the grid optimum by more than the resolution",
          "[leh][property]") {
    Problem p = unit_square(0.05);
    RngStream rng(127);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Point> hcps;
        int count = 5 + static_cast<int>(rng.uniform_index(40));
        for (int i = 0; i < count; ++i) hcps.push_back({rng.uniform01(), rng.uniform01()});
        LehPlacement pl = ga_leh(hcps, p, rng);
        REQUIRE(pl.radius <= grid_max_min(hcps, 200) + 1.0 / 200.0);
        REQUIRE(pl.radius ==
                Catch::Approx(min_distance_to_set(pl.center, hcps).distance).epsilon(1e-9));
    }
}

TEST_CASE("GA dominates random placement on crowded instances", "[leh][property]") {
    Problem p = unit_square(0.05);
    RngStream rng(131);
    int ga_wins = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<Point> hcps;
        for (int i = 0; i < 50; ++i) hcps.push_back({rng.uniform01(), rng.uniform01()});
        RngStream ga_rng = rng.substream("ga", t);
        RngStream rnd_rng = rng.substream("rnd", t);
        LehPlacement ga = ga_leh(hcps, p, ga_rng);
        LehPlacement rnd = random_leh(hcps, p, rnd_rng);
        if (!rnd.found || (ga.found && ga.radius >= rnd.radius)) ++ga_wins;
    }
    REQUIRE(ga_wins >= 60);
}

TEST_CASE("more generations do not hurt the mean GA radius", "[leh][property]") {
    Problem p = unit_square(0.05);
    RngStream rng(137);
    std::vector<Point> hcps;
    for (int i = 0; i < 50; ++i) hcps.push_back({rng.uniform01(), rng.uniform01()});
    auto mean_radius = [&](int generations) {
        LehGaParams params;
        params.generations = generations;
        double s = 0.0;
        const int reps = 50;
        for (int t = 0; t < reps; ++t) {
            RngStream r = rng.substream("rep", t * 10 + generations);
            s += ga_leh(hcps, p, r, params).radius;
        }
        return s / reps;
    };
    REQUIRE(mean_radius(5) >= mean_radius(1) - 0.01);
}

TEST_CASE("GA parameter validation enforces the evaluation cap", "[leh]") {
    LehGaParams params;
    params.population = 50;
    params.generations = 5;  // 250 > 100
    REQUIRE_THROWS_AS(params.validate(), std::invalid_argument);
    params.population = 20;
    params.generations = 5;
    REQUIRE_NOTHROW(params.validate());
    params.elites = 20;
    REQUIRE_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("single-evaluation budget degenerates to the seed point", "[leh]") {
    Problem p = make_problem("poly2D", 2);
    EvaluationLedger led(2, 1);
    RngStream rng(139);
    SearchOutcome out = leh_search(p, led, rng, make_random_calculator(), 1, 100);
    REQUIRE(out.stop_reason == StopReason::budget_exhausted);
    REQUIRE(out.evaluations_used == 1);
    REQUIRE(out.best_point.size() == 2);
    REQUIRE(out.best_value == p.objective(out.best_point));
}

TEST_CASE("tau trace is non-increasing and the budget is never exceeded",
          "[leh][property]") {
    RngStream seeds(149);
    for (std::size_t budget : {std::size_t{1}, std::size_t{7}, std::size_t{100},
                               std::size_t{350}, std::size_t{500}}) {
        for (const char* fn : {"poly2D", "mpf2"}) {
            Problem p = make_problem(fn, 2);
            EvaluationLedger led(2, budget);
            RngStream rng(seeds.next_u64());
            SearchOutcome out = leh_search(p, led, rng, make_random_calculator(), 1, 20);
            REQUIRE(out.evaluations_used <= budget);
            REQUIRE(out.evaluations_used == led.size());
            REQUIRE(out.candidates_visited == static_cast<int>(out.trace.size()));
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& te : out.trace) {
                REQUIRE(te.tau <= prev);
                prev = te.tau;
            }
            if (!out.trace.empty()) REQUIRE(out.best_value == out.trace.back().tau);
        }
    }
}

TEST_CASE("leh_search on poly2D stops for lack of room, well under budget", "[leh]") {
    Problem p = make_problem("poly2D", 2);
    EvaluationLedger led(2, 10000);
    RngStream rng(151);
    SearchOutcome out = leh_search(p, led, rng, make_random_calculator(), 1, 100);
    REQUIRE(out.stop_reason == StopReason::no_valid_leh);
    REQUIRE(out.evaluations_used < 2000);
    REQUIRE(out.best_value < 10.0);  // far below the seed-level values
    REQUIRE(p.contains(out.best_point));
}
