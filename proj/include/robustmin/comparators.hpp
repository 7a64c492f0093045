#pragma once

// Baseline heuristics: re-starting descent-directions local search (the
// direction SOCP solved through minimum-norm-point duality) and a global-best
// PSO outer loop. Both spend the shared ledger through full inner searches.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "robustmin/core.hpp"
#include "robustmin/inner_max.hpp"
#include "robustmin/leh.hpp"

namespace robustmin {

struct DescentParams {
    double hc_fraction = 0.2;  // high-cost inclusion band, fraction of local spread
    double band_growth = 2.0;  // tightening divisor applied to hc_fraction on stall
    double min_step = 0.0;     // set from gamma via default_descent_params
    double step_cap = 0.0;     // set from the box diagonal
    double epsilon = 1e-6;     // feasibility margin for beta <= -epsilon

    void validate() const {
        if (!(hc_fraction > 0.0 && hc_fraction < 1.0))
            throw std::invalid_argument("ddre: hc_fraction must be in (0,1)");
        if (!(band_growth > 1.0)) throw std::invalid_argument("ddre: band_growth must be > 1");
        if (!(min_step > 0.0) || !(step_cap > 0.0) || !(min_step < step_cap))
            throw std::invalid_argument("ddre: need 0 < min_step < step_cap");
        if (!(epsilon > 0.0)) throw std::invalid_argument("ddre: epsilon must be positive");
    }
};

inline DescentParams default_descent_params(const Problem& problem) {
    DescentParams p;
    p.min_step = problem.gamma / 100.0;
    p.step_cap = problem.diagonal() / 4.0;
    return p;
}

struct PsoParams {
    int swarm = 10;
    int iterations = 10;
    double c1 = 1.49;
    double c2 = 1.49;
    double omega = 0.72;
    Point vmax;  // per-coordinate velocity cap; empty = half the range

    void validate(const Problem& problem) const {
        if (swarm < 1 || iterations < 1)
            throw std::invalid_argument("pso: swarm and iterations must be >= 1");
        if (swarm * iterations > 100)
            throw std::invalid_argument("pso: swarm x iterations capped at 100");
        if (!(c1 >= 0.0 && c2 >= 0.0)) throw std::invalid_argument("pso: c1, c2 must be >= 0");
        if (!vmax.empty() && vmax.size() != static_cast<std::size_t>(problem.dim))
            throw std::invalid_argument("pso: vmax does not match problem dimension");
    }
};

inline PsoParams default_pso_params(const Problem& problem) {
    PsoParams p;
    p.vmax.resize(problem.dim);
    for (int i = 0; i < problem.dim; ++i)
        p.vmax[i] = 0.5 * (problem.upper[i] - problem.lower[i]);
    return p;
}

struct DescentDirection {
    Point d;        // unit descent direction
    double beta;    // max cosine against the hcp directions (<= -epsilon)
};

namespace detail {

// Minimum-norm point of the convex hull of k n-vectors (Wolfe's algorithm).
// Returns the point w*; duality gives d* = -w*/|w*| and beta* = -|w*|.
inline std::vector<double> min_norm_point(std::span<const double> dirs, std::size_t k,
                                          std::size_t n) {
    auto vertex = [&](std::size_t j) { return dirs.subspan(j * n, n); };
    auto dot_xv = [&](const std::vector<double>& x, std::size_t j) {
        auto v = vertex(j);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * v[i];
        return s;
    };

    std::vector<std::size_t> support{0};
    std::vector<double> lambda{1.0};
    std::vector<double> x(vertex(0).begin(), vertex(0).end());

    const double tol = 1e-12;
    const int max_major = 200 + 16 * static_cast<int>(k);
    std::vector<double> sys, rhs, mu;

    for (int major = 0; major < max_major; ++major) {
        double x2 = 0.0;
        for (double v : x) x2 += v * v;
        std::size_t jbest = 0;
        double dbest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            double d = dot_xv(x, j);
            if (d < dbest) {
                dbest = d;
                jbest = j;
            }
        }
        if (dbest >= x2 - tol * (1.0 + x2)) break;  // optimality certificate
        bool present = false;
        for (auto s : support)
            if (s == jbest) present = true;
        if (!present) {
            support.push_back(jbest);
            lambda.push_back(0.0);
        }

        for (int minor = 0; minor < 2 * static_cast<int>(k) + 8; ++minor) {
            // affine minimiser over the support: [[G, 1],[1^T, 0]] [mu; c] = [0; 1]
            const std::size_t m = support.size();
            sys.assign((m + 1) * (m + 1), 0.0);
            rhs.assign(m + 1, 0.0);
            rhs[m] = 1.0;
            for (std::size_t a = 0; a < m; ++a) {
                auto va = vertex(support[a]);
                for (std::size_t b = a; b < m; ++b) {
                    auto vb = vertex(support[b]);
                    double g = 0.0;
                    for (std::size_t i = 0; i < n; ++i) g += va[i] * vb[i];
                    sys[a * (m + 1) + b] = g;
                    sys[b * (m + 1) + a] = g;
                }
                sys[a * (m + 1) + a] += 1e-14;  // ridge against affine dependence
                sys[a * (m + 1) + m] = 1.0;
                sys[m * (m + 1) + a] = 1.0;
            }
            // Gaussian elimination with partial pivoting
            mu.assign(m + 1, 0.0);
            std::vector<double> A(sys);
            std::vector<double> b(rhs);
            const std::size_t dim = m + 1;
            for (std::size_t col = 0; col < dim; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col + 1; r < dim; ++r)
                    if (std::fabs(A[r * dim + col]) > std::fabs(A[piv * dim + col])) piv = r;
                if (std::fabs(A[piv * dim + col]) < 1e-300) {
                    A[piv * dim + col] = 1e-300;  // degenerate; ridge keeps this rare
                }
                if (piv != col) {
                    for (std::size_t cc = 0; cc < dim; ++cc)
                        std::swap(A[col * dim + cc], A[piv * dim + cc]);
                    std::swap(b[col], b[piv]);
                }
                for (std::size_t r = col + 1; r < dim; ++r) {
                    double f = A[r * dim + col] / A[col * dim + col];
                    if (f == 0.0) continue;
                    for (std::size_t cc = col; cc < dim; ++cc)
                        A[r * dim + cc] -= f * A[col * dim + cc];
                    b[r] -= f * b[col];
                }
            }
            for (std::size_t r = dim; r-- > 0;) {
                double s = b[r];
                for (std::size_t cc = r + 1; cc < dim; ++cc) s -= A[r * dim + cc] * mu[cc];
                mu[r] = s / A[r * dim + r];
            }
            mu.resize(m);

            bool interior = true;
            for (double w : mu)
                if (w < -1e-12) interior = false;
            if (interior) {
                lambda = mu;
                break;
            }
            // step toward mu until the first weight hits zero, then drop it
            double theta = 1.0;
            for (std::size_t a = 0; a < m; ++a)
                if (mu[a] < lambda[a])
                    theta = std::min(theta, lambda[a] / (lambda[a] - mu[a]));
            theta = std::clamp(theta, 0.0, 1.0);
            for (std::size_t a = 0; a < m; ++a)
                lambda[a] = (1.0 - theta) * lambda[a] + theta * mu[a];
            std::vector<std::size_t> ns;
            std::vector<double> nl;
            for (std::size_t a = 0; a < m; ++a)
                if (lambda[a] > 1e-12) {
                    ns.push_back(support[a]);
                    nl.push_back(lambda[a]);
                }
            if (ns.empty()) {
                ns.push_back(support[0]);
                nl.push_back(1.0);
            }
            double lsum = 0.0;
            for (double w : nl) lsum += w;
            for (double& w : nl) w /= lsum;
            support.swap(ns);
            lambda.swap(nl);
        }

        x.assign(n, 0.0);
        for (std::size_t a = 0; a < support.size(); ++a) {
            auto v = vertex(support[a]);
            for (std::size_t i = 0; i < n; ++i) x[i] += lambda[a] * v[i];
        }
    }
    return x;
}

inline std::optional<DescentDirection> descent_direction_flat(
    std::span<const double> candidate, std::span<const double> hcps, std::size_t count,
    double epsilon) {
    const std::size_t n = candidate.size();
    std::vector<double> dirs;
    dirs.reserve(count * n);
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = hcps.data() + j * n;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double t = h[i] - candidate[i];
            norm2 += t * t;
        }
        if (norm2 == 0.0) continue;  // coincident point carries no direction
        double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) dirs.push_back((h[i] - candidate[i]) * inv);
    }
    const std::size_t k = dirs.size() / n;
    if (k == 0) return std::nullopt;

    std::vector<double> w = min_norm_point(dirs, k, n);
    double wn = 0.0;
    for (double v : w) wn += v * v;
    wn = std::sqrt(wn);
    if (wn < epsilon) return std::nullopt;  // 0 in the hull: no descent direction

    DescentDirection out;
    out.d.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.d[i] = -w[i] / wn;
    out.beta = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += out.d[i] * dirs[j * n + i];
        out.beta = std::max(out.beta, s);
    }
    if (!(out.beta <= -epsilon)) return std::nullopt;
    return out;
}

inline double step_size_flat(std::span<const double> candidate, std::span<const double> d,
                             std::span<const double> hcps, std::size_t count, double gamma,
                             double min_step, double step_cap) {
    const std::size_t n = candidate.size();
    const double g2 = gamma * gamma;
    double rho = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double* h = hcps.data() + j * n;
        double dv = 0.0, v2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = h[i] - candidate[i];
            dv += d[i] * v;
            v2 += v * v;
        }
        if (v2 >= g2) continue;  // already outside the gamma-ball
        double disc = dv * dv - v2 + g2;
        double r = dv + std::sqrt(std::max(disc, 0.0));
        rho = std::max(rho, r);
    }
    return std::clamp(rho, min_step, step_cap);
}

}  // namespace detail

// Solves min beta s.t. |d| <= 1, d.h_hat <= beta <= -epsilon over unit
// directions h_hat from the candidate to each hcp. Infeasible (nullopt) is
// the local search's stopping certificate.
inline std::optional<DescentDirection> descent_direction(std::span<const double> candidate,
                                                         const std::vector<Point>& hcps,
                                                         double epsilon) {
    if (hcps.empty()) throw std::invalid_argument("descent_direction: empty hcp set");
    for (const auto& h : hcps) {
        bool same = true;
        for (std::size_t i = 0; i < candidate.size() && same; ++i)
            same = h[i] == candidate[i];
        if (same)
            throw std::invalid_argument("descent_direction: hcp coincides with candidate");
    }
    auto flat = detail::flatten(hcps);
    return detail::descent_direction_flat(candidate, flat, hcps.size(), epsilon);
}

// Smallest step along d that takes every hcp out of the gamma-ball of the new
// candidate (distance to each hcp grows monotonically along a feasible
// descent direction), clamped to [min_step, step_cap].
inline double step_size(std::span<const double> candidate, std::span<const double> d,
                        const std::vector<Point>& hcps, double gamma, double min_step,
                        double step_cap) {
    auto flat = detail::flatten(hcps);
    return detail::step_size_flat(candidate, d, flat, hcps.size(), gamma, min_step, step_cap);
}

// Re-starting descent-directions search: full inner analysis per step, local
// high-cost band from that analysis, direction from the SOCP, step just past
// the band; infeasibility tightens the band once, then triggers a restart.
inline SearchOutcome dd_restart_search(const Problem& problem, EvaluationLedger& ledger,
                                       RngStream& rng, const DescentParams& params,
                                       int max_search) {
    params.validate();
    SearchOutcome out;
    double best = std::numeric_limits<double>::infinity();
    Point best_point;

    std::vector<double> band;  // flat coords of the current high-cost band
    while (!ledger.exhausted()) {
        Point x = sample_in_box(rng, problem);
        bool walking = true;
        while (walking) {
            const std::size_t before = ledger.size();
            InnerResult res =
                inner_maximise(ledger, problem, rng, x, std::numeric_limits<double>::infinity(),
                               max_search, false);
            if (res.exhausted) {
                if (best_point.empty() && before < ledger.size()) {
                    best = res.estimate;
                    best_point = x;
                }
                out.trace.push_back({x, 0.0, best});
                out.stop_reason = StopReason::budget_exhausted;
                out.best_point = std::move(best_point);
                out.best_value = best;
                out.candidates_visited = static_cast<int>(out.trace.size());
                out.evaluations_used = ledger.size();
                return out;
            }
            if (res.estimate < best) {
                best = res.estimate;
                best_point = x;
            }
            out.trace.push_back({x, 0.0, best});

            // local band over this candidate's ball samples (centre excluded)
            const std::size_t s0 = before + 1;
            double lmax = -std::numeric_limits<double>::infinity();
            double lmin = std::numeric_limits<double>::infinity();
            for (std::size_t i = s0; i < ledger.size(); ++i) {
                lmax = std::max(lmax, ledger.value(i));
                lmin = std::min(lmin, ledger.value(i));
            }
            std::optional<DescentDirection> dir;
            double frac = params.hc_fraction;
            for (int attempt = 0; attempt < 2 && !dir; ++attempt) {
                const double thr = lmax - frac * (lmax - lmin);
                band.clear();
                for (std::size_t i = s0; i < ledger.size(); ++i) {
                    if (ledger.value(i) < thr) continue;
                    auto p = ledger.point(i);
                    band.insert(band.end(), p.begin(), p.end());
                }
                if (!band.empty())
                    dir = detail::descent_direction_flat(x, band, band.size() / problem.dim,
                                                         params.epsilon);
                frac /= params.band_growth;
            }
            if (!dir) {
                walking = false;  // local robust minimum: restart elsewhere
                continue;
            }
            double rho = detail::step_size_flat(x, dir->d, band, band.size() / problem.dim,
                                                problem.gamma, params.min_step,
                                                params.step_cap);
            for (int i = 0; i < problem.dim; ++i) x[i] += rho * dir->d[i];
            problem.clamp(x);
        }
    }
    out.stop_reason = StopReason::budget_exhausted;
    out.best_point = std::move(best_point);
    out.best_value = best;
    out.candidates_visited = static_cast<int>(out.trace.size());
    out.evaluations_used = ledger.size();
    return out;
}

// Global-best PSO over robust estimates: every particle's fitness is a full
// inner search, velocities use inertia omega with cognitive/social pulls.
inline SearchOutcome pso_search(const Problem& problem, EvaluationLedger& ledger,
                                RngStream& rng, const PsoParams& params_in, int max_search) {
    PsoParams params = params_in;
    if (params.vmax.empty()) params.vmax = default_pso_params(problem).vmax;
    params.validate(problem);

    SearchOutcome out;
    const int S = params.swarm;
    std::vector<Point> pos(S), vel(S), pbest(S);
    std::vector<double> pbest_v(S, std::numeric_limits<double>::infinity());
    Point gbest;
    double gbest_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < S; ++i) {
        pos[i] = sample_in_box(rng, problem);
        vel[i] = Point(problem.dim, 0.0);
    }

    auto finalise = [&](StopReason reason) {
        out.stop_reason = reason;
        out.best_point = gbest;
        out.best_value = gbest_v;
        out.candidates_visited = static_cast<int>(out.trace.size());
        out.evaluations_used = ledger.size();
        return out;
    };

    for (int it = 0; it < params.iterations; ++it) {
        for (int i = 0; i < S; ++i) {
            if (ledger.exhausted()) return finalise(StopReason::budget_exhausted);
            const std::size_t before = ledger.size();
            InnerResult res =
                inner_maximise(ledger, problem, rng, pos[i],
                               std::numeric_limits<double>::infinity(), max_search, false);
            if (res.exhausted) {
                if (gbest.empty() && before < ledger.size()) {
                    gbest = pos[i];
                    gbest_v = res.estimate;
                }
                out.trace.push_back({pos[i], 0.0, gbest_v});
                return finalise(StopReason::budget_exhausted);
            }
            if (res.estimate < pbest_v[i]) {
                pbest_v[i] = res.estimate;
                pbest[i] = pos[i];
            }
            if (res.estimate < gbest_v) {
                gbest_v = res.estimate;
                gbest = pos[i];
            }
            out.trace.push_back({pos[i], 0.0, gbest_v});
        }
        if (it + 1 == params.iterations) break;
        for (int i = 0; i < S; ++i) {
            for (int k = 0; k < problem.dim; ++k) {
                double r1 = rng.uniform01();
                double r2 = rng.uniform01();
                double v = params.omega * vel[i][k] +
                           params.c1 * r1 * (pbest[i][k] - pos[i][k]) +
                           params.c2 * r2 * (gbest[k] - pos[i][k]);
                v = std::clamp(v, -params.vmax[k], params.vmax[k]);
                vel[i][k] = v;
                pos[i][k] += v;
            }
            problem.clamp(pos[i]);
        }
    }
    return finalise(ledger.exhausted() ? StopReason::budget_exhausted
                                       : StopReason::completed);
}

}  // namespace robustmin
