#pragma once

// Inner maximisation over the gamma-uncertainty neighbourhood: estimate the
// worst-case cost at a candidate by uniform ball sampling, cutting the search
// short as soon as the running maximum proves the candidate worse than the
// incumbent threshold.

#include <limits>
#include <span>
#include <stdexcept>

#include "robustmin/core.hpp"

namespace robustmin {

struct InnerResult {
    double estimate = -std::numeric_limits<double>::infinity();
    bool curtailed = false;
    int samples_used = 0;
    bool exhausted = false;
};

namespace detail {

// Most recent ledger value for a bit-identical point (candidates re-entering
// the inner search are always the latest appends, so scan backwards).
inline double lookup_value(const EvaluationLedger& ledger, std::span<const double> x) {
    const std::size_t dim = static_cast<std::size_t>(ledger.dim());
    for (std::size_t i = ledger.size(); i-- > 0;) {
        auto p = ledger.point(i);
        std::size_t k = 0;
        while (k < dim && p[k] == x[k]) ++k;
        if (k == dim) return ledger.value(i);
    }
    throw std::logic_error("inner_maximise: centre marked evaluated but absent from ledger");
}

}  // namespace detail

// `tau` is the curtailment threshold (+inf disables it, as the comparator
// heuristics require). When `center_already_evaluated` the centre's stored
// value seeds the running maximum without a fresh evaluation; otherwise the
// centre is evaluated first and charged to the budget.
inline InnerResult inner_maximise(EvaluationLedger& ledger, const Problem& problem,
                                  RngStream& rng, std::span<const double> x_c, double tau,
                                  int max_search, bool center_already_evaluated) {
    if (max_search < 1) throw std::invalid_argument("inner_maximise: max_search must be >= 1");
    InnerResult res;
    if (center_already_evaluated) {
        res.estimate = detail::lookup_value(ledger, x_c);
    } else {
        auto v = evaluate(ledger, problem, x_c);
        if (!v) {
            res.exhausted = true;
            return res;
        }
        res.estimate = *v;
    }
    if (res.estimate > tau) {
        res.curtailed = true;
        return res;
    }
    for (int k = 0; k < max_search; ++k) {
        Point p = sample_in_ball(rng, x_c, problem.gamma);
        auto v = evaluate(ledger, problem, p);
        if (!v) {
            res.exhausted = true;
            return res;
        }
        res.samples_used = k + 1;
        if (*v > res.estimate) res.estimate = *v;
        if (res.estimate > tau) {
            res.curtailed = true;
            return res;
        }
    }
    return res;
}

}  // namespace robustmin
