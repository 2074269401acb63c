#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "pclab/mapping.hpp"
#include "pclab/normed_space.hpp"
#include "pclab/point.hpp"

namespace pclab {

inline constexpr double kDefaultFixedPointTol = 1e-9;
inline constexpr double kDefaultGapTol = 1e-6;
inline constexpr std::size_t kDefaultMaxIterations = 10000;

/// Consecutive below-tolerance steps each parity chain needs before the
/// even/odd subsequences count as stabilized.
inline constexpr std::size_t kParityStreak = 5;

struct FixedPoint {
    Point z;
};

struct ProximityCycle {
    Point z1;
    Point z2;
    double gap;
};

struct NoConvergence {};

using OrbitVerdict = std::variant<FixedPoint, ProximityCycle, NoConvergence>;

struct OrbitTrace {
    std::vector<Point> points;
    /// self_distances[k] = d(points[k], points[k + 1])
    std::vector<double> self_distances;
    OrbitVerdict verdict = NoConvergence{};
    std::size_t iterations_used = 0;
    /// d(z, T z) for a fixed-point verdict, recomputed after stopping.
    double residual = 0.0;
    bool diverged = false;

    bool converged() const noexcept { return !std::holds_alternative<NoConvergence>(verdict); }
};

/// [d(x, y), d(Tx, Ty), ..., d(T^N x, T^N y)]
std::vector<double> pair_distance_trace(const NormedSpace& space, const Mapping& T, const Point& x,
                                        const Point& y, std::size_t N);

/// Picard iteration from x0. Stops at the first n with
/// d(T^n x0, T^{n+1} x0) <= tol whose limit candidate z = T^{n+1} x0 also has
/// d(z, T z) <= tol; verdict FixedPoint{z} with iterations_used = n.
/// Otherwise NoConvergence after N_max steps, or as soon as an iterate stops
/// being finite (diverged).
OrbitTrace run_to_fixed_point(const NormedSpace& space, const Mapping& T, const Point& x0,
                              double tol = kDefaultFixedPointTol, std::size_t N_max = kDefaultMaxIterations);

struct ProximityReport {
    Point z1;  ///< limit of the A-side parity subsequence
    Point z2;  ///< limit of the B-side parity subsequence
    double pair_distance = 0.0;
    double set_distance = 0.0;
    double gap = 0.0;  ///< pair_distance - set_distance
    std::size_t parity_iterations = 0;
    /// d(z2, T z1)
    double continuity_residual = 0.0;
    bool stabilized = false;
    bool within_gap_tol = false;
    OrbitTrace trace;
};

/// Iterates a 2-cyclic map until both parity subsequences have
/// kParityStreak consecutive same-parity steps d(x_k, x_{k+2}) < tol. Does
/// not throw on non-stabilization: the report carries stabilized == false.
ProximityReport proximity_run(const NormedSpace& space, const CyclicPair& pair, const Point& x0,
                              double tol = kDefaultFixedPointTol, std::size_t N_max = kDefaultMaxIterations,
                              double gap_tol = kDefaultGapTol);

/// proximity_run that throws ConvergenceError when the parity subsequences
/// fail to stabilize within N_max.
ProximityReport best_proximity_run(const NormedSpace& space, const CyclicPair& pair, const Point& x0,
                                   double tol = kDefaultFixedPointTol, std::size_t N_max = kDefaultMaxIterations,
                                   double gap_tol = kDefaultGapTol);

/// True iff every start reaches a fixed point and all limits lie pairwise
/// within 10 * tol. Throws ConvergenceError if any run fails to converge and
/// InvalidInputError for fewer than two starts.
bool uniqueness_probe(const NormedSpace& space, const Mapping& T, const std::vector<Point>& starts,
                      double tol = kDefaultFixedPointTol, std::size_t N_max = kDefaultMaxIterations);

/// d(T^n x, T^{n+m+1} x) for m = 0, 1, 2 at the last index n where all three
/// are available.
std::array<double, 3> telescoping_residuals(const NormedSpace& space, const std::vector<Point>& points);

}  // namespace pclab
