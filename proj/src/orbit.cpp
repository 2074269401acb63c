#include "pclab/orbit.hpp"

#include <cmath>
#include <string>

#include "pclab/convex_set.hpp"
#include "pclab/errors.hpp"
#include "pclab/kernels.hpp"

namespace pclab {

std::vector<double> pair_distance_trace(const NormedSpace& space, const Mapping& T, const Point& x,
                                        const Point& y, std::size_t N) {
    if (N < 1) throw InvalidInputError("pair_distance_trace: N must be >= 1");
    std::vector<double> out;
    out.reserve(N + 1);
    Point u = x;
    Point v = y;
    out.push_back(space.distance(u, v));
    for (std::size_t n = 1; n <= N; ++n) {
        u = T.evaluate(u);
        v = T.evaluate(v);
        out.push_back(space.distance(u, v));
    }
    return out;
}

OrbitTrace run_to_fixed_point(const NormedSpace& space, const Mapping& T, const Point& x0, double tol,
                              std::size_t N_max) {
    if (!(tol > 0.0)) throw InvalidInputError("run_to_fixed_point: tol must be positive");
    if (N_max < 1) throw InvalidInputError("run_to_fixed_point: N_max must be >= 1");
    space.require_dim(x0, "run_to_fixed_point");

    OrbitTrace trace;
    trace.points.push_back(x0);
    for (std::size_t n = 0; n < N_max; ++n) {
        Point next = T.evaluate(trace.points.back());
        if (!next.all_finite()) {
            trace.diverged = true;
            trace.iterations_used = n;
            return trace;
        }
        const double step = space.distance(trace.points.back(), next);
        trace.self_distances.push_back(step);
        trace.points.push_back(std::move(next));
        if (step <= tol) {
            const Point& z = trace.points.back();
            const double residual = space.distance(z, T.evaluate(z));
            if (residual <= tol) {
                trace.verdict = FixedPoint{z};
                trace.residual = residual;
                trace.iterations_used = n;
                return trace;
            }
        }
    }
    trace.iterations_used = N_max;
    return trace;
}

ProximityReport proximity_run(const NormedSpace& space, const CyclicPair& pair, const Point& x0, double tol,
                              std::size_t N_max, double gap_tol) {
    if (!(tol > 0.0)) throw InvalidInputError("proximity_run: tol must be positive");
    space.require_dim(x0, "proximity_run");
    const Side start_side = pair.side_of(x0);

    ProximityReport report;
    OrbitTrace& trace = report.trace;
    trace.points.push_back(x0);
    std::size_t streak[2] = {0, 0};
    std::size_t k = 0;
    while (k < N_max) {
        Point next = pair.apply(trace.points.back());
        ++k;
        if (!next.all_finite()) {
            trace.diverged = true;
            break;
        }
        trace.self_distances.push_back(space.distance(trace.points.back(), next));
        trace.points.push_back(std::move(next));
        if (k >= 2) {
            const double step = space.distance(trace.points[k - 2], trace.points[k]);
            std::size_t& s = streak[k % 2];
            s = step < tol ? s + 1 : 0;
        }
        if (streak[0] >= kParityStreak && streak[1] >= kParityStreak) {
            report.stabilized = true;
            break;
        }
    }
    trace.iterations_used = k;
    report.parity_iterations = k;

    const std::size_t last = trace.points.size() - 1;
    if (last == 0) {
        report.z1 = report.z2 = x0;
    } else {
        const Point& z_even = trace.points[last % 2 == 0 ? last : last - 1];
        const Point& z_odd = trace.points[last % 2 == 1 ? last : last - 1];
        report.z1 = start_side == Side::A ? z_even : z_odd;
        report.z2 = start_side == Side::A ? z_odd : z_even;
    }
    report.pair_distance = space.distance(report.z1, report.z2);
    report.set_distance = set_distance(pair.A(), pair.B(), space);
    report.gap = report.pair_distance - report.set_distance;
    report.within_gap_tol = std::abs(report.gap) <= gap_tol;
    if (report.stabilized) {
        report.continuity_residual = space.distance(report.z2, pair.apply(report.z1));
        trace.verdict = ProximityCycle{report.z1, report.z2, report.gap};
    }
    return report;
}

ProximityReport best_proximity_run(const NormedSpace& space, const CyclicPair& pair, const Point& x0, double tol,
                                   std::size_t N_max, double gap_tol) {
    ProximityReport report = proximity_run(space, pair, x0, tol, N_max, gap_tol);
    if (!report.stabilized) {
        throw ConvergenceError("parity subsequences did not stabilize within " + std::to_string(N_max) +
                               " iterations");
    }
    return report;
}

bool uniqueness_probe(const NormedSpace& space, const Mapping& T, const std::vector<Point>& starts, double tol,
                      std::size_t N_max) {
    if (starts.size() < 2) throw InvalidInputError("uniqueness_probe: need at least two starts");
    const std::vector<OrbitTrace> runs = kernels::batch_fixed_points(space, T, starts, tol, N_max);
    std::vector<const Point*> limits;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto* fp = std::get_if<FixedPoint>(&runs[i].verdict);
        if (!fp) throw ConvergenceError("uniqueness_probe: start " + std::to_string(i) + " did not converge");
        limits.push_back(&fp->z);
    }
    for (std::size_t i = 0; i < limits.size(); ++i) {
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            if (space.distance(*limits[i], *limits[j]) > 10.0 * tol) return false;
        }
    }
    return true;
}

std::array<double, 3> telescoping_residuals(const NormedSpace& space, const std::vector<Point>& points) {
    if (points.size() < 4) throw InvalidInputError("telescoping_residuals: need at least four points");
    const std::size_t n = points.size() - 4;
    return {space.distance(points[n], points[n + 1]), space.distance(points[n], points[n + 2]),
            space.distance(points[n], points[n + 3])};
}

}  // namespace pclab
