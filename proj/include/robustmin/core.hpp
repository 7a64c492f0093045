#pragma once

// Problem description, budgeted evaluation ledger, box/ball sampling and
// nearest-member queries shared by every search heuristic.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "robustmin/rng.hpp"

namespace robustmin {

using Point = std::vector<double>;

struct Problem {
    std::string name;
    int dim = 0;
    std::function<double(std::span<const double>)> objective;
    Point lower;
    Point upper;
    double gamma = 0.0;  // radius of the implementation-uncertainty ball

    void validate() const {
        if (dim < 1) throw std::invalid_argument(name + ": dim must be >= 1");
        if (!objective) throw std::invalid_argument(name + ": objective not set");
        if (lower.size() != static_cast<std::size_t>(dim) ||
            upper.size() != static_cast<std::size_t>(dim))
            throw std::invalid_argument(name + ": bounds do not match dim");
        for (int i = 0; i < dim; ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument(name + ": lower[i] < upper[i] violated");
        if (!(gamma > 0.0)) throw std::invalid_argument(name + ": gamma must be positive");
    }

    double diagonal() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += (upper[i] - lower[i]) * (upper[i] - lower[i]);
        return std::sqrt(s);
    }

    bool contains(std::span<const double> x) const {
        for (int i = 0; i < dim; ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return true;
    }

    void clamp(std::span<double> x) const {
        for (int i = 0; i < dim; ++i) {
            if (x[i] < lower[i]) x[i] = lower[i];
            if (x[i] > upper[i]) x[i] = upper[i];
        }
    }
};

// Append-only record of every objective evaluation, enforcing the budget.
class EvaluationLedger {
public:
    EvaluationLedger(int dim, std::size_t budget) : dim_(dim), budget_(budget) {
        if (dim < 1) throw std::invalid_argument("ledger: dim must be >= 1");
        coords_.reserve(std::min<std::size_t>(budget, 1u << 16) * dim);
        values_.reserve(std::min<std::size_t>(budget, 1u << 16));
    }

    int dim() const { return dim_; }
    std::size_t budget() const { return budget_; }
    std::size_t size() const { return values_.size(); }
    bool exhausted() const { return values_.size() >= budget_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    double value(std::size_t i) const { return values_[i]; }

    std::span<const double> coords() const { return coords_; }
    std::span<const double> values() const { return values_; }

private:
    friend std::optional<double> evaluate(EvaluationLedger&, const Problem&,
                                          std::span<const double>);

    int dim_;
    std::size_t budget_;
    std::vector<double> coords_;
    std::vector<double> values_;
};

// Sole gateway to the objective: refuses once the budget is spent.
inline std::optional<double> evaluate(EvaluationLedger& ledger, const Problem& problem,
                                      std::span<const double> x) {
    if (ledger.exhausted()) return std::nullopt;
    if (x.size() != static_cast<std::size_t>(ledger.dim_))
        throw std::invalid_argument("evaluate: point has wrong dimension");
    double y = problem.objective(x);
    ledger.coords_.insert(ledger.coords_.end(), x.begin(), x.end());
    ledger.values_.push_back(y);
    return y;
}

inline Point sample_in_box(RngStream& rng, const Problem& problem) {
    Point x(problem.dim);
    for (int i = 0; i < problem.dim; ++i) x[i] = rng.uniform(problem.lower[i], problem.upper[i]);
    return x;
}

// Uniform draw from the closed ball around `center`; containment is exact,
// not within-epsilon (a final shrink absorbs rounding on the boundary).
inline Point sample_in_ball(RngStream& rng, std::span<const double> center, double radius) {
    const std::size_t n = center.size();
    Point dir(n);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& d : dir) {
            d = rng.normal();
            norm2 += d * d;
        }
    } while (norm2 == 0.0);
    double r = radius * std::pow(rng.uniform_pos(), 1.0 / static_cast<double>(n));
    double s = r / std::sqrt(norm2);
    Point p(n);
    for (;;) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = center[i] + s * dir[i];
            double t = p[i] - center[i];
            d2 += t * t;
        }
        if (d2 <= radius * radius) return p;
        s *= 0x1.fffffffffffffp-1;  // one-ulp shrink; loop runs at most a few times
    }
}

struct NearestPoint {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
};

// Nearest member of a flat coordinate buffer (count = coords.size()/dim).
// Ties resolve to the lowest index; inner loop prunes on the running best.
inline NearestPoint min_distance_to_set(std::span<const double> x,
                                        std::span<const double> coords, std::size_t dim) {
    const std::size_t count = coords.size() / dim;
    if (count == 0) throw std::invalid_argument("min_distance_to_set: empty set");
    double best2 = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = coords.data() + j * dim;
        double d2 = 0.0;
        std::size_t i = 0;
        for (; i < dim; ++i) {
            double t = x[i] - h[i];
            d2 += t * t;
            if (d2 >= best2) break;
        }
        if (i == dim && d2 < best2) {
            best2 = d2;
            best_idx = j;
        }
    }
    return {std::sqrt(best2), best_idx};
}

inline NearestPoint min_distance_to_set(std::span<const double> x,
                                        const std::vector<Point>& set) {
    if (set.empty()) throw std::invalid_argument("min_distance_to_set: empty set");
    double best2 = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < set.size(); ++j) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double t = x[i] - set[j][i];
            d2 += t * t;
        }
        if (d2 < best2) {
            best2 = d2;
            best_idx = j;
        }
    }
    return {std::sqrt(best2), best_idx};
}

// True iff every member of the set is strictly farther than `r` from x.
// Cheap early exit: each member stops accumulating once it exceeds r.
inline bool all_farther_than(std::span<const double> x, std::span<const double> coords,
                             std::size_t dim, double r) {
    const std::size_t count = coords.size() / dim;
    const double r2 = r * r;
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = coords.data() + j * dim;
        double d2 = 0.0;
        std::size_t i = 0;
        for (; i < dim; ++i) {
            double t = x[i] - h[i];
            d2 += t * t;
            if (d2 > r2) break;
        }
        if (i == dim && d2 <= r2) return false;
    }
    return true;
}

namespace detail {

// Branchless scan specialised on the dimension so the compiler can unroll and
// vectorise the inner loop; the pruned variants above win only when early
// exits fire, which GA fitness scans over large histories rarely do.
template <int D>
inline double min_sq_dist_fixed(const double* x, const double* coords,
                                std::size_t count) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = coords + j * D;
        double d2 = 0.0;
        for (int i = 0; i < D; ++i) {
            double t = x[i] - h[i];
            d2 += t * t;
        }
        best = d2 < best ? d2 : best;
    }
    return best;
}

// Batched variant: scans the set once for a block of eight query points, so
// each set point is loaded once per block instead of once per query. Each
// lane accumulates its query's squared distance in coordinate order and the
// running minimum is taken point by point, exactly as the single-query scan
// does, so results are bitwise identical to calling min_sq_dist_fixed per
// query (per-lane IEEE ops, no reassociation; keep FP contraction disabled).
#if defined(__GNUC__) || defined(__clang__)
#define ROBUSTMIN_VEC_KERNEL 1
typedef double v4df __attribute__((vector_size(32)));

template <int D>
inline void min_sq_dist_block8(const double* xs, const double* coords,
                               std::size_t count, double* out) {
    v4df xt[D][2];
    for (int d = 0; d < D; ++d)
        for (int half = 0; half < 2; ++half)
            xt[d][half] = v4df{xs[(4 * half + 0) * D + d], xs[(4 * half + 1) * D + d],
                               xs[(4 * half + 2) * D + d], xs[(4 * half + 3) * D + d]};
    const double inf = std::numeric_limits<double>::infinity();
    v4df best_lo = {inf, inf, inf, inf}, best_hi = best_lo;
    std::size_t j = 0;
    // two set points in flight to hide the accumulation latency chains
    for (; j + 2 <= count; j += 2) {
        const double* h0 = coords + j * D;
        const double* h1 = h0 + D;
        v4df a0 = {}, b0 = {}, a1 = {}, b1 = {};
        for (int d = 0; d < D; ++d) {
            v4df hv0 = {h0[d], h0[d], h0[d], h0[d]};
            v4df hv1 = {h1[d], h1[d], h1[d], h1[d]};
            v4df t0a = xt[d][0] - hv0, t0b = xt[d][1] - hv0;
            v4df t1a = xt[d][0] - hv1, t1b = xt[d][1] - hv1;
            a0 += t0a * t0a;
            b0 += t0b * t0b;
            a1 += t1a * t1a;
            b1 += t1b * t1b;
        }
        best_lo = a0 < best_lo ? a0 : best_lo;
        best_hi = b0 < best_hi ? b0 : best_hi;
        best_lo = a1 < best_lo ? a1 : best_lo;
        best_hi = b1 < best_hi ? b1 : best_hi;
    }
    for (; j < count; ++j) {
        const double* h = coords + j * D;
        v4df a = {}, b = {};
        for (int d = 0; d < D; ++d) {
            v4df hv = {h[d], h[d], h[d], h[d]};
            v4df ta = xt[d][0] - hv, tb = xt[d][1] - hv;
            a += ta * ta;
            b += tb * tb;
        }
        best_lo = a < best_lo ? a : best_lo;
        best_hi = b < best_hi ? b : best_hi;
    }
    for (int k = 0; k < 4; ++k) {
        out[k] = best_lo[k];
        out[4 + k] = best_hi[k];
    }
}

template <int D>
inline void batch_min_sq_dist(const double* xs, std::size_t queries,
                              const double* coords, std::size_t count, double* out) {
    std::size_t q = 0;
    for (; q + 8 <= queries; q += 8)
        min_sq_dist_block8<D>(xs + q * D, coords, count, out + q);
    if (q < queries) {
        // pad the tail block with copies of its first query; padded lanes
        // compute the same value and are discarded
        double pad_xs[8 * D];
        double pad_out[8];
        const std::size_t tail = queries - q;
        for (std::size_t k = 0; k < 8; ++k) {
            const double* src = xs + (q + (k < tail ? k : 0)) * D;
            for (int d = 0; d < D; ++d) pad_xs[k * D + d] = src[d];
        }
        min_sq_dist_block8<D>(pad_xs, coords, count, pad_out);
        for (std::size_t k = 0; k < tail; ++k) out[q + k] = pad_out[k];
    }
}

#else  // portable fallback

template <int D>
inline void batch_min_sq_dist(const double* xs, std::size_t queries,
                              const double* coords, std::size_t count, double* out) {
    for (std::size_t q = 0; q < queries; ++q)
        out[q] = min_sq_dist_fixed<D>(xs + q * D, coords, count);
}

#endif

}  // namespace detail

// Minimum squared distance from x to any point of the flat set (value only,
// no argmin). Hot path of the GA calculator's fitness function.
inline double min_squared_distance(std::span<const double> x,
                                   std::span<const double> coords, std::size_t dim) {
    const std::size_t count = coords.size() / dim;
    if (count == 0) throw std::invalid_argument("min_squared_distance: empty set");
    switch (dim) {
        case 1: return detail::min_sq_dist_fixed<1>(x.data(), coords.data(), count);
        case 2: return detail::min_sq_dist_fixed<2>(x.data(), coords.data(), count);
        case 3: return detail::min_sq_dist_fixed<3>(x.data(), coords.data(), count);
        case 4: return detail::min_sq_dist_fixed<4>(x.data(), coords.data(), count);
        case 7: return detail::min_sq_dist_fixed<7>(x.data(), coords.data(), count);
        case 10: return detail::min_sq_dist_fixed<10>(x.data(), coords.data(), count);
        case 100: return detail::min_sq_dist_fixed<100>(x.data(), coords.data(), count);
        default: break;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = coords.data() + j * dim;
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double t = x[i] - h[i];
            d2 += t * t;
        }
        best = d2 < best ? d2 : best;
    }
    return best;
}

// Batched min squared distances for `queries` points stored flat in xs;
// bitwise-identical to querying min_squared_distance one point at a time.
inline void min_squared_distances(std::span<const double> xs, std::size_t queries,
                                  std::span<const double> coords, std::size_t dim,
                                  double* out) {
    const std::size_t count = coords.size() / dim;
    if (count == 0) throw std::invalid_argument("min_squared_distances: empty set");
    switch (dim) {
        case 1: detail::batch_min_sq_dist<1>(xs.data(), queries, coords.data(), count, out); return;
        case 2: detail::batch_min_sq_dist<2>(xs.data(), queries, coords.data(), count, out); return;
        case 3: detail::batch_min_sq_dist<3>(xs.data(), queries, coords.data(), count, out); return;
        case 4: detail::batch_min_sq_dist<4>(xs.data(), queries, coords.data(), count, out); return;
        case 7: detail::batch_min_sq_dist<7>(xs.data(), queries, coords.data(), count, out); return;
        case 10: detail::batch_min_sq_dist<10>(xs.data(), queries, coords.data(), count, out); return;
        case 100: detail::batch_min_sq_dist<100>(xs.data(), queries, coords.data(), count, out); return;
        default: break;
    }
    for (std::size_t q = 0; q < queries; ++q)
        out[q] = min_squared_distance({xs.data() + q * dim, dim}, coords, dim);
}

// Ledger entries with value >= threshold, kept as a flat coordinate cache.
// Refreshing with the same threshold only scans entries appended since the
// last refresh; a changed threshold forces a full rebuild.
class HighCostSet {
public:
    void refresh(const EvaluationLedger& ledger, double tau) {
        if (!primed_ || tau != tau_ || dim_ != ledger.dim()) {
            coords_.clear();
            indices_.clear();
            scanned_ = 0;
            dim_ = ledger.dim();
            tau_ = tau;
            primed_ = true;
        }
        for (std::size_t i = scanned_; i < ledger.size(); ++i) {
            if (ledger.value(i) >= tau_) {
                auto p = ledger.point(i);
                coords_.insert(coords_.end(), p.begin(), p.end());
                indices_.push_back(i);
            }
        }
        scanned_ = ledger.size();
    }

    double threshold() const { return tau_; }
    std::size_t size() const { return indices_.size(); }
    int dim() const { return dim_; }
    std::span<const double> coords() const { return coords_; }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::size_t ledger_index(std::size_t i) const { return indices_[i]; }

private:
    std::vector<double> coords_;
    std::vector<std::size_t> indices_;
    double tau_ = std::numeric_limits<double>::infinity();
    std::size_t scanned_ = 0;
    int dim_ = 0;
    bool primed_ = false;
};

}  // namespace robustmin
