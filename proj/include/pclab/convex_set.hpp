#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "pclab/normed_space.hpp"
#include "pclab/point.hpp"

namespace pclab {

struct Ball {
    Point center;
    double radius;
    friend bool operator==(const Ball&, const Ball&) = default;
};

struct Box {
    Point lo;
    Point hi;
    friend bool operator==(const Box&, const Box&) = default;
};

/// { x : normal . x <= offset }
struct Halfspace {
    Point normal;
    double offset;
    friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// Intersection of halfspaces. `witness` must satisfy every constraint
/// strictly; it certifies the set is nonempty.
struct HalfspaceIntersection {
    std::vector<Halfspace> halfspaces;
    Point witness;
    friend bool operator==(const HalfspaceIntersection&, const HalfspaceIntersection&) = default;
};

/// Membership slack used throughout for "x lies in S".
inline constexpr double kMembershipTol = 1e-10;

struct ProjectionOptions {
    double tol = 1e-10;
    std::size_t max_sweeps = 100000;
};

/// Closed convex subset of R^n. Membership and projection are Euclidean for
/// every ambient norm: the point sets do not depend on the norm.
class ConvexSet {
public:
    using Shape = std::variant<Ball, Box, HalfspaceIntersection>;

    /// Validating constructors; throw std::invalid_argument / DimensionError.
    static ConvexSet ball(Point center, double radius);
    static ConvexSet box(Point lo, Point hi);
    static ConvexSet halfspaces(std::vector<Halfspace> halfspaces, Point witness);

    std::size_t dimension() const noexcept;
    const Shape& shape() const noexcept { return shape_; }

    /// Euclidean excess of x over the set: 0 inside, positive outside. For
    /// halfspace intersections this is the largest normalized violation,
    /// a lower bound on the true distance.
    double excess(const Point& x) const;

    bool contains(const Point& x, double tol = kMembershipTol) const { return excess(x) <= tol; }

    /// Nearest point in the Euclidean sense. Members are returned unchanged.
    /// Balls and boxes use closed forms; halfspace intersections run Dykstra's
    /// cyclic projections and throw ConvergenceError past the sweep cap.
    Point project(const Point& x, const ProjectionOptions& opts = {}) const;

    /// A member of the set (center, midpoint, or witness).
    Point anchor() const;

    friend bool operator==(const ConvexSet&, const ConvexSet&) = default;

private:
    explicit ConvexSet(Shape shape) : shape_(std::move(shape)) {}
    Shape shape_;
};

struct SetDistanceOptions {
    double tol = 1e-8;
    std::size_t max_iterations = 100000;
};

struct ClosestPair {
    Point a;
    Point b;
    double distance;
    std::size_t iterations;
};

/// Alternating projections a <- P_A(b), b <- P_B(a) until successive
/// distances change by at most opts.tol. Distances use the space's norm.
/// Throws ConvergenceError past the iteration cap.
ClosestPair closest_pair(const ConvexSet& A, const ConvexSet& B, const NormedSpace& space,
                         const SetDistanceOptions& opts = {});

/// dist(A, B); exactly 0 when the iteration exhibits a common point.
double set_distance(const ConvexSet& A, const ConvexSet& B, const NormedSpace& space,
                    const SetDistanceOptions& opts = {});

}  // namespace pclab
