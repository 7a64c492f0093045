#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <vector>

#include "robustmin/inner_max.hpp"
#include "robustmin/testbed.hpp"

using namespace robustmin;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("full inner search uses exactly max_search samples plus the centre", "[inner]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 10000);
    RngStream rng(61);
    Point centre{0.0, 0.0};
    InnerResult res = inner_maximise(led, p, rng, centre, kInf, 100, false);
    REQUIRE_FALSE(res.curtailed);
    REQUIRE_FALSE(res.exhausted);
    REQUIRE(res.samples_used == 100);
    REQUIRE(led.size() == 101);
    REQUIRE(res.estimate > 0.0);
    REQUIRE(res.estimate <= 1.0);  // max of squared norms within the unit ball
}

TEST_CASE("estimate is the exact max over the ledger slice", "[inner][property]") {
    Problem p = make_problem("rastrigin", 4);
    EvaluationLedger led(4, 10000);
    RngStream rng(67);
    for (int rep = 0; rep < 10; ++rep) {
        Point x = sample_in_box(rng, p);
        std::size_t before = led.size();
        InnerResult res = inner_maximise(led, p, rng, x, kInf, 100, false);
        REQUIRE(led.size() - before == 101);
        double expect = -kInf;
        for (std::size_t i = before; i < led.size(); ++i)
            expect = std::max(expect, led.value(i));
        REQUIRE(res.estimate == expect);
        REQUIRE(res.estimate >= led.value(before));  // never below the centre value
    }
}

TEST_CASE("threshold exceeded at the centre curtails before any sampling", "[inner]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 10000);
    RngStream rng(71);
    Point far{4.0, 0.0};
    InnerResult res = inner_maximise(led, p, rng, far, 1.0, 100, false);
    REQUIRE(res.curtailed);
    REQUIRE(res.samples_used == 0);
    REQUIRE(res.estimate == 16.0);
    REQUIRE(led.size() == 1);  // only the centre was charged
}

TEST_CASE("curtailment stops at the first sample above the threshold", "[inner][property]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 10000);
    RngStream rng(73);
    Point x{3.5, 0.0};  // gamma-ball reaches values up to 20.25
    InnerResult res = inner_maximise(led, p, rng, x, 13.0, 100, false);
    REQUIRE(res.curtailed);
    REQUIRE(res.estimate > 13.0);
    // no appends after the first offending value
    std::size_t first_over = 0;
    while (first_over < led.size() && led.value(first_over) <= 13.0) ++first_over;
    REQUIRE(first_over == led.size() - 1);
}

TEST_CASE("already-evaluated centres are looked up, not re-charged", "[inner]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 10000);
    RngStream rng(79);
    Point x{0.5, 0.5};
    evaluate(led, p, x);
    REQUIRE(led.size() == 1);
    InnerResult res = inner_maximise(led, p, rng, x, kInf, 10, true);
    REQUIRE(led.size() == 11);  // 10 samples, no second centre evaluation
    REQUIRE(res.estimate >= 0.5);
}

TEST_CASE("budget exhaustion mid-search reports partial state", "[inner]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 5);
    RngStream rng(83);
    Point x{1.0, 1.0};
    InnerResult res = inner_maximise(led, p, rng, x, kInf, 100, false);
    REQUIRE(res.exhausted);
    REQUIRE(led.size() == 5);
    REQUIRE(res.samples_used == 4);
    REQUIRE(res.estimate >= 2.0);  // at least the centre value
}

TEST_CASE("exhaustion before the centre evaluation", "[inner]") {
    Problem p = make_problem("sphere", 2);
    EvaluationLedger led(2, 1);
    RngStream rng(89);
    evaluate(led, p, Point{0.0, 0.0});
    InnerResult res = inner_maximise(led, p, rng, Point{1.0, 0.0}, kInf, 100, false);
    REQUIRE(res.exhausted);
    REQUIRE(res.samples_used == 0);
    REQUIRE(led.size() == 1);
}

TEST_CASE("lowering the threshold never increases samples used", "[inner][property]") {
    Problem p = make_problem("rastrigin", 2);
    for (double tau_hi : {60.0, 45.0, 30.0}) {
        double tau_lo = tau_hi - 15.0;
        EvaluationLedger led_a(2, 10000), led_b(2, 10000);
        RngStream ra(97), rb(97);  // same stream for both thresholds
        Point x{2.0, 2.0};
        InnerResult hi = inner_maximise(led_a, p, ra, x, tau_hi, 100, false);
        InnerResult lo = inner_maximise(led_b, p, rb, x, tau_lo, 100, false);
        REQUIRE(lo.samples_used <= hi.samples_used);
    }
}
