#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "robustmin/core.hpp"
#include "robustmin/rng.hpp"
#include "robustmin/testbed.hpp"

using namespace robustmin;

TEST_CASE("identical seeds replay identical sequences", "[rng]") {
    RngStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams are stable and independent of parent consumption", "[rng]") {
    RngStream parent(7);
    RngStream child_before = parent.substream("search", 3);
    for (int i = 0; i < 57; ++i) parent.next_u64();
    RngStream child_after = parent.substream("search", 3);
    for (int i = 0; i < 100; ++i) REQUIRE(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("substreams with different labels or indices diverge", "[rng]") {
    RngStream parent(7);
    std::set<std::uint64_t> firsts;
    for (const char* label : {"search", "post", "a", "b"})
        for (std::uint64_t idx = 0; idx < 4; ++idx)
            firsts.insert(parent.substream(label, idx).next_u64());
    REQUIRE(firsts.size() == 16);
}

TEST_CASE("uniform01 and uniform_pos stay in their half-open ranges", "[rng][property]") {
    RngStream rng(3);
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        double v = rng.uniform_pos();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("uniform_index never reaches n", "[rng][property]") {
    RngStream rng(11);
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{17}, std::size_t{1000}}) {
        std::set<std::size_t> seen;
        for (int i = 0; i < 5000; ++i) {
            std::size_t k = rng.uniform_index(n);
            REQUIRE(k < n);
            seen.insert(k);
        }
        if (n <= 17) REQUIRE(seen.size() == n);  // every bucket reachable
    }
}

TEST_CASE("uniform moments match on [0,1]", "[rng][property]") {
    RngStream rng(5);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += rng.uniform01();
    REQUIRE(std::fabs(s / n - 0.5) < 0.005);
}

TEST_CASE("normal draws have unit scale", "[rng]") {
    RngStream rng(9);
    double s = 0.0, s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    REQUIRE(std::fabs(s / n) < 0.02);
    REQUIRE(std::fabs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("ball samples never leave the closed ball", "[rng][property]") {
    RngStream rng(13);
    for (double radius : {1e-12, 0.5, 1.0, 1e6}) {
        for (std::size_t dim : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7}}) {
            Point centre(dim, 0.25);
            for (int i = 0; i < 2000; ++i) {
                Point p = sample_in_ball(rng, centre, radius);
                double d2 = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    double t = p[k] - centre[k];
                    d2 += t * t;
                }
                REQUIRE(d2 <= radius * radius);
            }
        }
    }
}

TEST_CASE("ball sample mean norm matches n/(n+1)", "[rng][property]") {
    // For the uniform distribution on the unit n-ball, E[unit norm] = n/(n+1).
    RngStream rng(17);
    const int n = 100000;
    for (std::size_t dim : {std::size_t{1}, std::size_t{3}}) {
        Point centre(dim, 0.0);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            Point p = sample_in_ball(rng, centre, 1.0);
            double d2 = 0.0;
            for (double v : p) d2 += v * v;
            s += std::sqrt(d2);
        }
        double expected = static_cast<double>(dim) / (static_cast<double>(dim) + 1.0);
        REQUIRE(std::fabs(s / n - expected) < 0.01);
    }
}

TEST_CASE("box samples respect the bounds in every coordinate", "[rng][property]") {
    RngStream rng(21);
    Problem p = make_problem("sphere", 100);
    for (int i = 0; i < 200; ++i) {
        Point x = sample_in_box(rng, p);
        REQUIRE(x.size() == 100);
        REQUIRE(p.contains(x));
    }
}
