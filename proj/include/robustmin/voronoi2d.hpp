#pragma once

// Exact 2D LEH placement: Delaunay triangulation (incremental Bowyer-Watson)
// dualised to Voronoi vertices, which are enumerated together with their
// box-clamped images and the box corners to maximise min distance to the
// high-cost points.
//
// Robustness scheme: sites are snapped to a 2^40 grid spanning their bounding
// square (perturbation ~1e-12 of the diagonal, which also merges duplicates);
// orientation tests are then exact in __int128 and the in-circle test is
// exact in 256-bit integers behind a floating-point filter.

#include <array>
#include <cstdint>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "robustmin/core.hpp"
#include "robustmin/leh.hpp"

namespace robustmin {

struct VoronoiDiagram {
    struct Edge {
        int a = -1;       // vertex indices; b = -1 marks an unbounded ray
        int b = -1;
        int site_a = -1;  // the pair of sites this edge bisects
        int site_b = -1;
    };
    std::vector<std::array<double, 2>> sites;  // effective (deduplicated) sites
    std::vector<std::array<double, 2>> vertices;
    std::vector<Edge> edges;
};

namespace detail::vor {

using i64 = std::int64_t;
using i128 = __int128;
using int256 = boost::multiprecision::int256_t;

constexpr i64 kGrid = i64(1) << 40;   // snapping resolution
constexpr i64 kBig = i64(1) << 59;    // super-triangle extent in grid units

struct IPt {
    i64 x = 0, y = 0;
    bool operator==(const IPt&) const = default;
};

inline int sign_of(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// > 0 when a,b,c wind counterclockwise; exact (magnitudes stay below 2^124)
inline int orient(const IPt& a, const IPt& b, const IPt& c) {
    i128 v = i128(b.x - a.x) * i128(c.y - a.y) - i128(b.y - a.y) * i128(c.x - a.x);
    return sign_of(v);
}

// > 0 when d lies strictly inside the circumcircle of CCW triangle a,b,c.
// Double evaluation with a permanent-based error filter; exact 256-bit
// fallback on near-ties (cocircular inner-sample clusters are common).
inline int incircle(const IPt& a, const IPt& b, const IPt& c, const IPt& d) {
    const double adx = double(a.x - d.x), ady = double(a.y - d.y);
    const double bdx = double(b.x - d.x), bdy = double(b.y - d.y);
    const double cdx = double(c.x - d.x), cdy = double(c.y - d.y);
    const double ad2 = adx * adx + ady * ady;
    const double bd2 = bdx * bdx + bdy * bdy;
    const double cd2 = cdx * cdx + cdy * cdy;
    const double det = adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
                       ad2 * (bdx * cdy - cdx * bdy);
    const double perm = std::fabs(adx) * (std::fabs(bdy) * cd2 + std::fabs(cdy) * bd2) +
                        std::fabs(ady) * (std::fabs(bdx) * cd2 + std::fabs(cdx) * bd2) +
                        ad2 * (std::fabs(bdx) * std::fabs(cdy) +
                               std::fabs(cdx) * std::fabs(bdy));
    if (std::fabs(det) > perm * 1e-10) return det > 0 ? 1 : -1;

    const int256 Adx = a.x - d.x, Ady = a.y - d.y;
    const int256 Bdx = b.x - d.x, Bdy = b.y - d.y;
    const int256 Cdx = c.x - d.x, Cdy = c.y - d.y;
    const int256 Ad2 = Adx * Adx + Ady * Ady;
    const int256 Bd2 = Bdx * Bdx + Bdy * Bdy;
    const int256 Cd2 = Cdx * Cdx + Cdy * Cdy;
    const int256 exact = Adx * (Bdy * Cd2 - Cdy * Bd2) - Ady * (Bdx * Cd2 - Cdx * Bd2) +
                         Ad2 * (Bdx * Cdy - Cdx * Bdy);
    return exact > 0 ? 1 : (exact < 0 ? -1 : 0);
}

struct Tri {
    int v[3];   // vertex (site) indices, CCW
    int n[3];   // neighbour opposite v[i], -1 at the outer boundary
    bool alive = true;
};

struct Delaunay {
    std::vector<IPt> pts;  // 0..2 are the super-triangle corners
    std::vector<Tri> tris;

    explicit Delaunay(std::vector<IPt> sites) {
        pts.reserve(sites.size() + 3);
        pts.push_back({-kBig, -kBig});
        pts.push_back({kBig, -kBig});
        pts.push_back({0, kBig});
        tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
        for (auto& s : sites) {
            pts.push_back(s);
            insert(static_cast<int>(pts.size()) - 1);
        }
    }

    int locate(int pi) const {
        const IPt& p = pts[pi];
        int cur = -1;
        for (int i = static_cast<int>(tris.size()); i-- > 0;)
            if (tris[i].alive) {
                cur = i;
                break;
            }
        std::size_t steps = 0, cap = 4 * tris.size() + 16;
        while (cur >= 0 && steps++ < cap) {
            const Tri& t = tris[cur];
            int next = -1;
            for (int e = 0; e < 3; ++e) {
                // edge opposite v[e] runs v[e+1] -> v[e+2]
                if (orient(pts[t.v[(e + 1) % 3]], pts[t.v[(e + 2) % 3]], p) < 0) {
                    next = t.n[e];
                    break;
                }
            }
            if (next == -1) return cur;
            cur = next;
        }
        for (int i = 0; i < static_cast<int>(tris.size()); ++i) {  // robust fallback
            if (!tris[i].alive) continue;
            const Tri& t = tris[i];
            bool inside = true;
            for (int e = 0; e < 3 && inside; ++e)
                inside = orient(pts[t.v[(e + 1) % 3]], pts[t.v[(e + 2) % 3]], p) >= 0;
            if (inside) return i;
        }
        throw std::logic_error("voronoi2d: point location failed");
    }

    void insert(int pi) {
        const IPt& p = pts[pi];
        int start = locate(pi);

        // cavity: all triangles whose circumcircle strictly contains p
        std::vector<int> cavity, stack{start};
        std::vector<char> in_cavity(tris.size(), 0);
        in_cavity[start] = 1;
        while (!stack.empty()) {
            int ti = stack.back();
            stack.pop_back();
            cavity.push_back(ti);
            for (int e = 0; e < 3; ++e) {
                int nb = tris[ti].n[e];
                if (nb < 0 || in_cavity[nb] || !tris[nb].alive) continue;
                const Tri& t = tris[nb];
                if (incircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], p) > 0) {
                    in_cavity[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }

        // boundary of the cavity: directed edges whose far side is outside
        struct BEdge {
            int u, w, outside;
        };
        std::vector<BEdge> boundary;
        for (int ti : cavity) {
            const Tri& t = tris[ti];
            for (int e = 0; e < 3; ++e) {
                int nb = t.n[e];
                if (nb >= 0 && in_cavity[nb]) continue;
                boundary.push_back({t.v[(e + 1) % 3], t.v[(e + 2) % 3], nb});
            }
        }
        for (int ti : cavity) tris[ti].alive = false;

        // fan of new triangles (p, u, w), stitched to the outside and to
        // each other through a (directed edge -> triangle) map
        std::map<std::pair<int, int>, int> half;
        for (const BEdge& be : boundary) {
            Tri nt;
            nt.v[0] = pi;
            nt.v[1] = be.u;
            nt.v[2] = be.w;
            nt.n[0] = be.outside;
            nt.n[1] = -1;
            nt.n[2] = -1;
            int id = static_cast<int>(tris.size());
            tris.push_back(nt);
            if (be.outside >= 0) {
                Tri& o = tris[be.outside];
                for (int e = 0; e < 3; ++e)
                    if ((o.v[(e + 1) % 3] == be.w && o.v[(e + 2) % 3] == be.u)) o.n[e] = id;
            }
            half[{be.u, be.w}] = id;
        }
        // fan triangles share their (p, .) edges with each other: triangle
        // (p,u,w) meets the one starting at w across edge (w,p) and the one
        // ending at u across edge (p,u)
        std::map<int, int> starts, ends;
        for (auto& [edge, id] : half) {
            starts[edge.first] = id;
            ends[edge.second] = id;
        }
        for (auto& [edge, id] : half) {
            auto [u, w] = edge;
            tris[id].n[1] = starts.count(w) ? starts[w] : -1;
            tris[id].n[2] = ends.count(u) ? ends[u] : -1;
        }
    }
};

inline long double to_ld(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v)
                              : static_cast<unsigned __int128>(v);
    long double r = static_cast<long double>(static_cast<std::uint64_t>(u >> 64));
    r = r * 18446744073709551616.0L + static_cast<long double>(static_cast<std::uint64_t>(u));
    return neg ? -r : r;
}

// circumcentre of a triangle of (finite) grid points, in grid units
inline std::array<long double, 2> circumcentre(const IPt& a, const IPt& b, const IPt& c) {
    const i128 bx = b.x - a.x, by = b.y - a.y;
    const i128 cx = c.x - a.x, cy = c.y - a.y;
    const i128 b2 = bx * bx + by * by;
    const i128 c2 = cx * cx + cy * cy;
    const i128 den = 2 * (bx * cy - by * cx);  // nonzero: triangle is non-degenerate
    const long double ux = to_ld(b2 * cy - c2 * by) / to_ld(den);
    const long double uy = to_ld(c2 * bx - b2 * cx) / to_ld(den);
    return {static_cast<long double>(a.x) + ux, static_cast<long double>(a.y) + uy};
}

}  // namespace detail::vor

// Returns std::nullopt on degenerate input: fewer than 3 distinct sites after
// duplicate merging, or all sites collinear. Callers fall back to simpler
// candidate geometry (see vor_leh).
inline std::optional<VoronoiDiagram> build_voronoi(
    const std::vector<std::array<double, 2>>& sites_in) {
    using namespace detail::vor;
    if (sites_in.size() < 3) return std::nullopt;

    double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
    double miny = minx, maxy = -minx;
    for (auto& s : sites_in) {
        minx = std::min(minx, s[0]);
        maxx = std::max(maxx, s[0]);
        miny = std::min(miny, s[1]);
        maxy = std::max(maxy, s[1]);
    }
    const double side = std::max(maxx - minx, maxy - miny);
    if (!(side > 0.0)) return std::nullopt;  // all sites coincide
    const double h = side / static_cast<double>(kGrid);

    std::vector<IPt> ipts;
    std::vector<std::array<double, 2>> reps;  // first original per grid cell
    std::map<std::pair<i64, i64>, int> seen;
    for (auto& s : sites_in) {
        i64 ix = static_cast<i64>(std::llround((s[0] - minx) / h));
        i64 iy = static_cast<i64>(std::llround((s[1] - miny) / h));
        ix = std::clamp<i64>(ix, 0, kGrid);
        iy = std::clamp<i64>(iy, 0, kGrid);
        if (seen.emplace(std::make_pair(ix, iy), static_cast<int>(ipts.size())).second) {
            ipts.push_back({ix, iy});
            reps.push_back(s);
        }
    }
    if (ipts.size() < 3) return std::nullopt;

    bool noncollinear = false;
    for (std::size_t k = 2; k < ipts.size() && !noncollinear; ++k)
        noncollinear = orient(ipts[0], ipts[1], ipts[k]) != 0;
    // ipts[0] == ipts[1] cannot happen (deduplicated), so the pair is a valid base
    if (!noncollinear) return std::nullopt;

    Delaunay dt(ipts);

    VoronoiDiagram vd;
    vd.sites = reps;

    // Voronoi vertices = circumcentres of finite Delaunay triangles; merge
    // coincident centres (cocircular degeneracies) within a small tolerance.
    std::vector<int> tri_vertex(dt.tris.size(), -1);
    std::vector<std::array<long double, 2>> centres;
    std::vector<int> finite_tris;
    for (int i = 0; i < static_cast<int>(dt.tris.size()); ++i) {
        const Tri& t = dt.tris[i];
        if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
        finite_tris.push_back(i);
        centres.push_back(circumcentre(dt.pts[t.v[0]], dt.pts[t.v[1]], dt.pts[t.v[2]]));
    }
    const long double merge_eps = 1e-9L * static_cast<long double>(kGrid);
    std::vector<int> order(centres.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (centres[a][0] != centres[b][0]) return centres[a][0] < centres[b][0];
        return centres[a][1] < centres[b][1];
    });
    std::vector<int> centre_vertex(centres.size(), -1);
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        int ci = order[oi];
        if (oi > 0) {
            int pj = order[oi - 1];
            if (centre_vertex[pj] >= 0 &&
                std::fabs(static_cast<double>(centres[ci][0] - centres[pj][0])) <= merge_eps &&
                std::fabs(static_cast<double>(centres[ci][1] - centres[pj][1])) <= merge_eps) {
                centre_vertex[ci] = centre_vertex[pj];
                continue;
            }
        }
        centre_vertex[ci] = static_cast<int>(vd.vertices.size());
        vd.vertices.push_back(
            {minx + static_cast<double>(centres[ci][0]) * h,
             miny + static_cast<double>(centres[ci][1]) * h});
    }
    for (std::size_t k = 0; k < finite_tris.size(); ++k)
        tri_vertex[finite_tris[k]] = centre_vertex[k];

    // adjacency: one Voronoi edge per shared Delaunay edge between real sites
    for (int ti : finite_tris) {
        const Tri& t = dt.tris[ti];
        for (int e = 0; e < 3; ++e) {
            int nb = t.n[e];
            int sa = t.v[(e + 1) % 3], sb = t.v[(e + 2) % 3];
            if (sa < 3 || sb < 3) continue;
            if (nb >= 0 && tri_vertex[nb] >= 0) {
                if (nb < ti) continue;  // emit each finite edge once
                if (tri_vertex[nb] == tri_vertex[ti]) continue;  // merged centres
                vd.edges.push_back({tri_vertex[ti], tri_vertex[nb], sa - 3, sb - 3});
            } else {
                vd.edges.push_back({tri_vertex[ti], -1, sa - 3, sb - 3});
            }
        }
    }
    return vd;
}

namespace detail::vor {

inline void add_candidate(std::vector<Point>& out, const Problem& problem, double x,
                          double y) {
    Point p{x, y};
    problem.clamp(p);
    out.push_back(std::move(p));
}

// perpendicular-bisector intersections with the box boundary, for the
// degenerate (< 3 usable sites / collinear) fallback
inline void add_bisector_boundary_points(std::vector<Point>& out, const Problem& problem,
                                         const std::array<double, 2>& a,
                                         const std::array<double, 2>& b) {
    const double mx = 0.5 * (a[0] + b[0]), my = 0.5 * (a[1] + b[1]);
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double lo0 = problem.lower[0], hi0 = problem.upper[0];
    const double lo1 = problem.lower[1], hi1 = problem.upper[1];
    const std::array<std::array<double, 4>, 4> segs = {{
        {lo0, lo1, hi0, lo1},
        {hi0, lo1, hi0, hi1},
        {hi0, hi1, lo0, hi1},
        {lo0, hi1, lo0, lo1},
    }};
    for (const auto& s : segs) {
        const double ex = s[2] - s[0], ey = s[3] - s[1];
        const double denom = ex * dx + ey * dy;
        if (std::fabs(denom) < 1e-300) continue;
        const double t = ((mx - s[0]) * dx + (my - s[1]) * dy) / denom;
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        const double tc = std::clamp(t, 0.0, 1.0);
        add_candidate(out, problem, s[0] + tc * ex, s[1] + tc * ey);
    }
}

inline LehPlacement vor_leh_flat(std::span<const double> hcps, const Problem& problem,
                                 RngStream&) {
    if (problem.dim != 2) throw std::invalid_argument("vor_leh: problem must be 2D");
    const std::size_t count = hcps.size() / 2;
    if (count == 0) throw std::invalid_argument("vor_leh: empty hcp set");

    std::vector<std::array<double, 2>> sites(count);
    for (std::size_t i = 0; i < count; ++i) sites[i] = {hcps[2 * i], hcps[2 * i + 1]};

    std::vector<Point> candidates;
    add_candidate(candidates, problem, problem.lower[0], problem.lower[1]);
    add_candidate(candidates, problem, problem.upper[0], problem.lower[1]);
    add_candidate(candidates, problem, problem.upper[0], problem.upper[1]);
    add_candidate(candidates, problem, problem.lower[0], problem.upper[1]);

    auto vd = build_voronoi(sites);
    if (vd) {
        for (const auto& v : vd->vertices) add_candidate(candidates, problem, v[0], v[1]);
        // The constrained optimum may sit where a Voronoi edge crosses the box
        // boundary. Each edge lies on its site pair's perpendicular bisector;
        // the bisector/boundary intersections are a superset of the crossings,
        // and every candidate is scored by its true nearest-site distance, so
        // the extra points are harmless.
        for (const auto& e : vd->edges)
            add_bisector_boundary_points(candidates, problem,
                                         vd->sites[static_cast<std::size_t>(e.site_a)],
                                         vd->sites[static_cast<std::size_t>(e.site_b)]);
    } else {
        // distinct sites for the pairwise-bisector fallback
        std::vector<std::array<double, 2>> distinct;
        for (const auto& s : sites) {
            bool dup = false;
            for (const auto& d : distinct)
                if (d[0] == s[0] && d[1] == s[1]) {
                    dup = true;
                    break;
                }
            if (!dup) distinct.push_back(s);
        }
        for (std::size_t i = 0; i < distinct.size(); ++i)
            for (std::size_t j = i + 1; j < distinct.size(); ++j)
                add_bisector_boundary_points(candidates, problem, distinct[i], distinct[j]);
    }

    LehPlacement best;
    for (auto& c : candidates) {
        double r = min_distance_to_set(c, hcps, 2).distance;
        if (r > best.radius || best.center.empty()) {
            best.radius = r;
            best.center = std::move(c);
        }
    }
    best.found = best.radius > problem.gamma;
    return best;
}

}  // namespace detail::vor

// Enumerates the box corners, the Voronoi vertices (clamped into the box) and
// the Voronoi-edge/box-boundary intersections, and returns the candidate
// farthest from its nearest hcp — the three candidate classes that cover the
// constrained largest-empty-circle optimum.
inline LehPlacement vor_leh(const std::vector<Point>& hcps, const Problem& problem,
                            RngStream& rng) {
    if (hcps.empty()) throw std::invalid_argument("vor_leh: empty hcp set");
    auto flat = detail::flatten(hcps);
    return detail::vor::vor_leh_flat(flat, problem, rng);
}

inline LehCalculator make_voronoi_calculator() {
    return [](const HighCostSet& h, const Problem& p, RngStream& r) {
        return detail::vor::vor_leh_flat(h.coords(), p, r);
    };
}

}  // namespace robustmin
