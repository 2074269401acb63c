#include "pclab/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pclab/errors.hpp"

namespace pclab {
namespace {

double euclidean_norm(const Point& v) {
    return NormedSpace::euclidean(v.dim()).norm(v);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double halfspace_violation(const Halfspace& h, const Point& x) {
    return (dot(h.normal, x) - h.offset) / euclidean_norm(h.normal);
}

Point project_halfspace(const Halfspace& h, const Point& x) {
    const double excess = dot(h.normal, x) - h.offset;
    if (excess <= 0.0) return x;
    const double nn = dot(h.normal, h.normal);
    return x - h.normal * (excess / nn);
}

// Dykstra's algorithm: cyclic halfspace projections with correction terms,
// which converges to the Euclidean projection onto the intersection.
Point project_intersection(const HalfspaceIntersection& s, const Point& x0, const ProjectionOptions& opts) {
    double worst = 0.0;
    for (const auto& h : s.halfspaces) worst = std::max(worst, dot(h.normal, x0) - h.offset);
    if (worst <= 0.0) return x0;

    const std::size_t m = s.halfspaces.size();
    std::vector<Point> corrections(m, Point::zeros(x0.dim()));
    Point x = x0;
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        const Point before = x;
        for (std::size_t i = 0; i < m; ++i) {
            const Point shifted = x + corrections[i];
            x = project_halfspace(s.halfspaces[i], shifted);
            corrections[i] = shifted - x;
        }
        double violation = 0.0;
        for (const auto& h : s.halfspaces) violation = std::max(violation, halfspace_violation(h, x));
        if (euclidean_norm(x - before) <= opts.tol && violation <= opts.tol) return x;
    }
    throw ConvergenceError("halfspace projection did not converge within " +
                           std::to_string(opts.max_sweeps) + " sweeps");
}

}  // namespace

ConvexSet ConvexSet::ball(Point center, double radius) {
    if (center.dim() == 0) throw DimensionError("ball center must have dimension >= 1");
    if (!center.all_finite()) throw std::invalid_argument("ball center must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
    return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::box(Point lo, Point hi) {
    require_same_dim(lo, hi, "box bounds");
    if (lo.dim() == 0) throw DimensionError("box must have dimension >= 1");
    if (!lo.all_finite() || !hi.all_finite()) throw std::invalid_argument("box bounds must be finite");
    for (std::size_t i = 0; i < lo.dim(); ++i) {
        if (lo[i] > hi[i]) throw std::invalid_argument("box requires lo <= hi componentwise");
    }
    return ConvexSet(Box{std::move(lo), std::move(hi)});
}

ConvexSet ConvexSet::halfspaces(std::vector<Halfspace> halfspaces, Point witness) {
    if (halfspaces.empty()) throw std::invalid_argument("halfspace intersection needs at least one halfspace");
    if (witness.dim() == 0 || !witness.all_finite()) throw std::invalid_argument("witness must be a finite point");
    for (const auto& h : halfspaces) {
        require_same_dim(h.normal, witness, "halfspace normal");
        if (!h.normal.all_finite() || !std::isfinite(h.offset)) {
            throw std::invalid_argument("halfspace coefficients must be finite");
        }
        if (dot(h.normal, h.normal) == 0.0) throw std::invalid_argument("halfspace normal must be nonzero");
        if (!(dot(h.normal, witness) < h.offset)) {
            throw std::invalid_argument("witness must strictly satisfy every halfspace");
        }
    }
    return ConvexSet(HalfspaceIntersection{std::move(halfspaces), std::move(witness)});
}

std::size_t ConvexSet::dimension() const noexcept {
    return std::visit(overloaded{[](const Ball& b) { return b.center.dim(); },
                                 [](const Box& b) { return b.lo.dim(); },
                                 [](const HalfspaceIntersection& h) { return h.witness.dim(); }},
                      shape_);
}

double ConvexSet::excess(const Point& x) const {
    if (x.dim() != dimension()) throw DimensionError("set membership: dimension mismatch");
    return std::visit(
        overloaded{
            [&](const Ball& b) { return std::max(0.0, euclidean_norm(x - b.center) - b.radius); },
            [&](const Box& b) {
                double e = 0.0;
                for (std::size_t i = 0; i < x.dim(); ++i) {
                    e = std::max({e, b.lo[i] - x[i], x[i] - b.hi[i]});
                }
                return e;
            },
            [&](const HalfspaceIntersection& s) {
                double e = 0.0;
                for (const auto& h : s.halfspaces) e = std::max(e, halfspace_violation(h, x));
                return e;
            }},
        shape_);
}

Point ConvexSet::project(const Point& x, const ProjectionOptions& opts) const {
    if (x.dim() != dimension()) throw DimensionError("projection: dimension mismatch");
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const Point offset = x - b.center;
                const double r = euclidean_norm(offset);
                if (r <= b.radius) return x;
                return b.center + offset * (b.radius / r);
            },
            [&](const Box& b) {
                Point out = x;
                for (std::size_t i = 0; i < x.dim(); ++i) out[i] = std::clamp(x[i], b.lo[i], b.hi[i]);
                return out;
            },
            [&](const HalfspaceIntersection& s) { return project_intersection(s, x, opts); }},
        shape_);
}

Point ConvexSet::anchor() const {
    return std::visit(overloaded{[](const Ball& b) { return b.center; },
                                 [](const Box& b) { return (b.lo + b.hi) * 0.5; },
                                 [](const HalfspaceIntersection& h) { return h.witness; }},
                      shape_);
}

ClosestPair closest_pair(const ConvexSet& A, const ConvexSet& B, const NormedSpace& space,
                         const SetDistanceOptions& opts) {
    if (A.dimension() != space.dimension() || B.dimension() != space.dimension()) {
        throw DimensionError("set_distance: set and space dimensions differ");
    }
    Point a = A.anchor();
    Point b = B.project(a);
    double d = space.distance(a, b);
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        Point a_next = A.project(b);
        Point b_next = B.project(a_next);
        const double d_next = space.distance(a_next, b_next);
        const double moved = std::max(space.distance(a, a_next), space.distance(b, b_next));
        a = std::move(a_next);
        b = std::move(b_next);
        const bool settled = std::abs(d - d_next) <= opts.tol && moved <= opts.tol;
        d = d_next;
        if (settled) return {std::move(a), std::move(b), d, it};
    }
    throw ConvergenceError("alternating projections did not settle within " +
                           std::to_string(opts.max_iterations) + " iterations");
}

double set_distance(const ConvexSet& A, const ConvexSet& B, const NormedSpace& space,
                    const SetDistanceOptions& opts) {
    return closest_pair(A, B, space, opts).distance;
}

}  // namespace pclab
