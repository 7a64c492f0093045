#pragma once

// Descriptive statistics and the Wilcoxon rank-sum test used to mark
// statistically-equivalent-to-best heuristics in the summary tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace robustmin {

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// linear-interpolation quantile of a sorted sample (R type 7)
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    if (sorted.size() == 1) return sorted.front();
    double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct RankSumResult {
    double statistic = 0.0;  // rank sum of the first sample (midranks)
    double p = 1.0;          // two-sided
    bool reject = false;
};

// Two-sided Mann-Whitney/Wilcoxon rank-sum. Midranks for ties; normal
// approximation with tie-corrected variance and 0.5 continuity correction
// when both samples have >= 8 observations, otherwise the exact distribution
// of the rank sum via dynamic programming over the pooled midranks.
inline RankSumResult wilcoxon_rank_sum(const std::vector<double>& a,
                                       const std::vector<double>& b, double alpha = 0.05) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0 || m == 0) throw std::invalid_argument("wilcoxon_rank_sum: empty input");
    const std::size_t N = n + m;

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(N);
    for (double x : a) pooled.emplace_back(x, 0);
    for (double x : b) pooled.emplace_back(x, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    std::vector<double> midrank(N);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < N;) {
        std::size_t j = i;
        while (j < N && pooled[j].first == pooled[i].first) ++j;
        const double t = static_cast<double>(j - i);
        const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) midrank[k] = r;
        tie_term += t * t * t - t;
        i = j;
    }
    double W = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        if (pooled[i].second == 0) W += midrank[i];

    RankSumResult res;
    res.statistic = W;

    if (std::min(n, m) >= 8) {
        const double dn = static_cast<double>(n), dm = static_cast<double>(m);
        const double dN = static_cast<double>(N);
        const double mu = dn * (dN + 1.0) / 2.0;
        const double var =
            dn * dm / 12.0 * ((dN + 1.0) - tie_term / (dN * (dN - 1.0)));
        if (var <= 0.0) {
            res.p = 1.0;
        } else {
            const double z = std::max(0.0, std::fabs(W - mu) - 0.5) / std::sqrt(var);
            res.p = std::erfc(z / std::sqrt(2.0));
        }
    } else {
        // exact: distribution of the smaller side's rank sum; midranks x2 are
        // integers, and counts for k <= 7 chosen items fit in 64 bits
        const bool a_small = n <= m;
        const std::size_t k = a_small ? n : m;
        std::vector<std::int64_t> r2(N);
        std::int64_t total2 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            r2[i] = std::llround(2.0 * midrank[i]);
            total2 += r2[i];
        }
        const std::int64_t wobs =
            a_small ? std::llround(2.0 * W) : (total2 - std::llround(2.0 * W));
        const std::int64_t smax = total2;
        std::vector<std::vector<std::uint64_t>> ways(
            k + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(smax) + 1, 0));
        ways[0][0] = 1;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t c = std::min(k, i + 1); c-- > 0;) {
                const auto& prev = ways[c];
                auto& cur = ways[c + 1];
                for (std::int64_t s = smax - r2[i]; s >= 0; --s)
                    if (prev[static_cast<std::size_t>(s)])
                        cur[static_cast<std::size_t>(s + r2[i])] +=
                            prev[static_cast<std::size_t>(s)];
            }
        }
        long double total = 0.0L, le = 0.0L, ge = 0.0L;
        for (std::int64_t s = 0; s <= smax; ++s) {
            const std::uint64_t c = ways[k][static_cast<std::size_t>(s)];
            if (!c) continue;
            total += c;
            if (s <= wobs) le += c;
            if (s >= wobs) ge += c;
        }
        res.p = static_cast<double>(
            std::min(1.0L, 2.0L * std::min(le, ge) / total));
    }
    res.reject = res.p < alpha;
    return res;
}

}  // namespace robustmin
