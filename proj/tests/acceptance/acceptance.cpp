// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 only if
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pclab/certificates.hpp"
#include "pclab/harness/config.hpp"
#include "pclab/harness/runner.hpp"
#include "pclab/mapping.hpp"
#include "pclab/orbit.hpp"
#include "pclab/rng.hpp"

using namespace pclab;

namespace {

// Pinned tolerances and budgets.
constexpr std::size_t kMuSamples = 1000;
constexpr double kMuGridStep = 1e-4;
constexpr double kMuAgreement = 1e-3;
constexpr double kMuRuntimeSeconds = 10.0;
constexpr std::size_t kSandwichSamples = 10000;
constexpr double kSandwichRel = 1e-12;
constexpr std::size_t kTautologySamples = 10000;
constexpr double kCaseBoundRel = 1e-9;
constexpr std::size_t kChainOrbits = 100;
constexpr std::size_t kChainLength = 50;
constexpr double kFixedPointTol = 1e-8;
constexpr std::size_t kFixedPointMaxIterations = 35;
constexpr double kProximityTol = 1e-8;
constexpr double kBallGapTol = 1e-6;
constexpr double kMembershipTolerance = 1e-10;
constexpr std::size_t kUniquenessStarts = 100;
constexpr double kUniquenessTol = 1e-6;
constexpr double kLimsupTol = 1e-9;

// (I - Q)^{-1} c for Q = 0.6 R(30 deg), c = (1, 0), to 40 digits.
constexpr double kRotationFixedPoint[2] = {1.497601033073316585297772899491496194094,
                                           0.9352509685062342251677799947058901318748};

struct Outcome {
    bool pass;
    std::string detail;
};

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(PCLAB_FIXTURE_DIR) / name; }

/// Seeded draws from the project's counter generator, one stream per use.
class Draw {
public:
    Draw(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
    double uniform(double lo, double hi) { return rng_.uniform(lo, hi); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_.next() % n); }
    Point point(std::size_t dim, double scale) {
        Point p = Point::zeros(dim);
        for (std::size_t i = 0; i < dim; ++i) p[i] = uniform(-scale, scale);
        return p;
    }
    NormedSpace space(std::size_t dim) {
        switch (index(3)) {
            case 0: return NormedSpace::euclidean(dim);
            case 1: return NormedSpace::p_norm(dim, 3.0);
            default: return NormedSpace::max_norm(dim);
        }
    }
    Mapping affine(std::size_t dim) {
        std::vector<double> q(dim * dim);
        for (double& v : q) v = uniform(-1.5, 1.5) / std::sqrt(static_cast<double>(dim));
        return Mapping::affine(Matrix(dim, std::move(q)), point(dim, 1.0));
    }
    Mapping mapping(std::size_t dim) {
        if (dim >= 2 && index(2) == 0) return Mapping::scaled_rotation(dim, uniform(-3.0, 3.0), uniform(0.2, 1.5));
        return affine(dim);
    }

private:
    CounterRng rng_;
};

Mapping rotation_contraction() {
    const double th = std::acos(-1.0) / 6.0;
    const double c = 0.6 * std::cos(th), s = 0.6 * std::sin(th);
    return Mapping::affine(Matrix(2, {c, -s, s, c}), {1.0, 0.0});
}

CyclicPair interval_pair() {
    return make_two_cyclic(ConvexSet::box({1.0}, {2.0}), ConvexSet::box({-2.0}, {-1.0}),
                           Mapping::affine(Matrix(1, {-0.5}), {-0.5}), Mapping::affine(Matrix(1, {-0.5}), {0.5}));
}

CyclicPair two_ball_pair() {
    return make_two_cyclic(ConvexSet::ball({0.0, 0.0}, 1.0), ConvexSet::ball({4.0, 0.0}, 1.0),
                           Mapping::affine(Matrix::scaled_identity(2, 0.5), {2.5, 0.0}),
                           Mapping::affine(Matrix::scaled_identity(2, 0.5), {-0.5, 0.0}));
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// 1 ---------------------------------------------------------------------------
Outcome mu_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Draw d(1, 0);
    const std::size_t dims[] = {1, 2, 5};
    double worst = 0.0;
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < kMuSamples; ++i) {
        const std::size_t dim = dims[d.index(3)];
        const NormedSpace space = d.space(dim);
        const Mapping T = d.mapping(dim);
        const Point x = d.point(dim, 2.0), y = d.point(dim, 2.0);
        const std::size_t n = 1 + d.index(8);
        const PairMeasure m = measure(space, T, x, y, n);
        const double rho = mu_min(m.a, m.b, m.dd);
        // Grid scan: smallest feasible rho; with a b == 0 every rho is
        // feasible and mu_min reports 0 by convention.
        double grid = 1.0;
        if (m.a * m.b > 0.0) {
            const auto steps = static_cast<long>(std::lround(2.0 / kMuGridStep));
            for (long k = 0; k <= steps; ++k) {
                const double r = -1.0 + k * kMuGridStep;
                const double rhs = m.a * m.a + m.b * m.b + 2.0 * r * m.a * m.b;
                if (m.dd * m.dd <= rhs + 4e-16 * (m.a + m.b) * (m.a + m.b)) {
                    grid = r;
                    break;
                }
            }
        } else {
            grid = 0.0;
        }
        const double diff = std::abs(rho - grid);
        worst = std::max(worst, diff);
        if (diff > kMuAgreement) ++disagreements;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {disagreements == 0 && seconds < kMuRuntimeSeconds,
            std::to_string(kMuSamples) + " samples, max |diff| " + fmt("%.3g", worst) + ", " + fmt("%.2f", seconds) +
                " s"};
}

// 2 ---------------------------------------------------------------------------
Outcome sandwich() {
    std::size_t failures = 0;
    const NormKind kinds[] = {NormKind::euclidean, NormKind::p_norm, NormKind::max_norm};
    for (std::size_t k = 0; k < 3; ++k) {
        Draw d(2, k);
        for (std::size_t i = 0; i < kSandwichSamples; ++i) {
            const std::size_t dim = 1 + d.index(6);
            const NormedSpace space(dim, kinds[k], 3.0);
            const Mapping T = d.mapping(dim);
            const PairMeasure m = measure(space, T, d.point(dim, 10.0), d.point(dim, 10.0), 1 + d.index(8));
            const double lo = (m.a - m.b) * (m.a - m.b), hi = (m.a + m.b) * (m.a + m.b), dd2 = m.dd * m.dd;
            if (dd2 < lo * (1.0 - kSandwichRel) || dd2 > hi * (1.0 + kSandwichRel)) ++failures;
        }
    }
    return {failures == 0, std::to_string(3 * kSandwichSamples) + " samples over 3 norms, " +
                               std::to_string(failures) + " violations"};
}

// 3 ---------------------------------------------------------------------------
Outcome xi_tautology() {
    Draw d(3, 0);
    std::size_t holds = 0;
    for (std::size_t i = 0; i < kTautologySamples; ++i) {
        const std::size_t dim = 1 + d.index(5);
        const NormedSpace space = d.space(dim);
        const Mapping T = d.mapping(dim);
        ParamSequences params;
        params.alpha = SequenceRule::constant(d.uniform(0.0, 2.0));
        params.beta = SequenceRule::constant(d.uniform(0.0, 0.3));
        const Point x = d.point(dim, 5.0), y = d.point(dim, 5.0);
        const std::size_t n = 1 + d.index(8);
        const PairMeasure m = measure(space, T, x, y, n);
        const double xi = xi_slack(params, n, x, y, m.a, m.b, mu_min(m.a, m.b, m.dd));
        if (holds_condition(params, space, T, x, y, n, xi, 0.0)) ++holds;
    }
    return {holds == kTautologySamples, std::to_string(holds) + "/" + std::to_string(kTautologySamples) + " hold"};
}

// 4 ---------------------------------------------------------------------------
Outcome case_bound_chain() {
    Draw d(4, 0);
    std::size_t sample_failures = 0, chain_failures = 0, samples = 0;
    ParamSequences params;
    params.alpha = SequenceRule::constant(0.3);
    params.beta = SequenceRule::constant(0.2);
    const CyclicPair cyclic[] = {interval_pair(), two_ball_pair()};
    for (std::size_t orbit_i = 0; orbit_i < kChainOrbits; ++orbit_i) {
        // Every fifth orbit runs a 2-cyclic fixture with x in A and y in B.
        const bool is_cyclic = orbit_i % 5 == 4;
        std::size_t dim;
        Mapping T = Mapping::identity(1);
        Point x, y;
        if (is_cyclic) {
            const CyclicPair& pair = cyclic[(orbit_i / 5) % 2];
            dim = pair.dimension();
            T = Mapping::cyclic(pair);
            CounterRng ra(40, 2 * orbit_i), rb(40, 2 * orbit_i + 1);
            x = sample_member(pair.A(), ra);
            y = sample_member(pair.B(), rb);
        } else {
            dim = 1 + d.index(4);
            T = d.mapping(dim);
            x = d.point(dim, 1.0);
            y = d.point(dim, 1.0);
        }
        const NormedSpace space = NormedSpace::euclidean(dim);
        const double d0 = space.distance(x, y);
        double prod = 1.0, accum = 0.0;
        for (std::size_t j = 1; j <= kChainLength; ++j) {
            const Point tx = T.evaluate(x), ty = T.evaluate(y);
            const CertificateSample s = certify_sample(space, params, j, x, y, tx, ty);
            ++samples;
            const double b2 = s.b * s.b, rhs = s.k * s.a * s.a + s.xi_prime;
            if (b2 > rhs + kCaseBoundRel * std::max(b2, rhs)) ++sample_failures;
            prod *= s.k;
            accum = accum * s.k + s.xi_prime;
            const double chain = prod * d0 * d0 + accum;
            if (b2 > chain + kCaseBoundRel * std::max(b2, chain)) ++chain_failures;
            x = tx;
            y = ty;
        }
    }
    return {sample_failures == 0 && chain_failures == 0,
            std::to_string(samples) + " steps, " + std::to_string(sample_failures) + " per-step and " +
                std::to_string(chain_failures) + " chain violations"};
}

// 5 ---------------------------------------------------------------------------
Outcome fixed_point_convergence() {
    const NormedSpace line = NormedSpace::euclidean(1), plane = NormedSpace::euclidean(2);
    const OrbitTrace t = run_to_fixed_point(line, Mapping::affine(Matrix(1, {0.5}), {1.0}), {0.0});
    const bool line_ok = t.converged() && t.iterations_used <= kFixedPointMaxIterations &&
                         std::abs(std::get<FixedPoint>(t.verdict).z[0] - 2.0) <= kFixedPointTol;
    const OrbitTrace r = run_to_fixed_point(plane, rotation_contraction(), {0.0, 0.0});
    double err = INFINITY;
    if (r.converged()) {
        const Point& z = std::get<FixedPoint>(r.verdict).z;
        err = std::max(std::abs(z[0] - kRotationFixedPoint[0]), std::abs(z[1] - kRotationFixedPoint[1]));
    }
    return {line_ok && err <= kFixedPointTol, "0.5z+1: " + std::to_string(t.iterations_used) +
                                                  " iterations; 2-D affine error " + fmt("%.3g", err)};
}

// 6 ---------------------------------------------------------------------------
bool parity_memberships_hold(const CyclicPair& pair, const std::vector<Point>& points) {
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(k % 2 == 0 ? pair.A() : pair.B()).contains(points[k], kMembershipTolerance)) return false;
    }
    return true;
}

Outcome best_proximity() {
    const NormedSpace line = NormedSpace::euclidean(1), plane = NormedSpace::euclidean(2);
    const CyclicPair iv = interval_pair(), balls = two_ball_pair();
    const ProximityReport ri = proximity_run(line, iv, {2.0});
    const bool interval_ok = ri.stabilized && std::abs(ri.z1[0] - 1.0) <= kProximityTol &&
                             std::abs(ri.z2[0] + 1.0) <= kProximityTol &&
                             std::abs(ri.pair_distance - 2.0) <= kProximityTol && ri.gap <= kProximityTol;
    const ProximityReport rb = proximity_run(plane, balls, {-0.5, 0.5});
    const bool balls_ok = rb.stabilized && std::abs(rb.pair_distance - rb.set_distance) <= kBallGapTol;
    const bool parity_ok = parity_memberships_hold(iv, ri.trace.points) && parity_memberships_hold(balls, rb.trace.points);
    return {interval_ok && balls_ok && parity_ok,
            "interval gap " + fmt("%.3g", ri.gap) + ", balls gap " + fmt("%.3g", rb.gap) +
                (parity_ok ? ", parity memberships hold" : ", parity membership violated")};
}

// 7 ---------------------------------------------------------------------------
Outcome uniqueness() {
    struct Case {
        NormedSpace space;
        Mapping T;
    };
    const Case cases[] = {{NormedSpace::euclidean(1), Mapping::affine(Matrix(1, {0.5}), {1.0})},
                          {NormedSpace::euclidean(2), rotation_contraction()}};
    double worst = 0.0;
    bool all_converged = true;
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& [space, T] = cases[c];
        std::vector<Point> limits;
        for (std::size_t i = 0; i < kUniquenessStarts; ++i) {
            CounterRng rng(7, c * kUniquenessStarts + i);
            Point x0 = Point::zeros(space.dimension());
            for (std::size_t k = 0; k < x0.dim(); ++k) x0[k] = rng.uniform(-100.0, 100.0);
            const OrbitTrace t = run_to_fixed_point(space, T, x0);
            if (!t.converged()) {
                all_converged = false;
                continue;
            }
            limits.push_back(std::get<FixedPoint>(t.verdict).z);
        }
        for (std::size_t i = 0; i < limits.size(); ++i) {
            for (std::size_t j = i + 1; j < limits.size(); ++j) worst = std::max(worst, space.distance(limits[i], limits[j]));
        }
    }
    return {all_converged && worst <= kUniquenessTol,
            std::to_string(kUniquenessStarts) + " starts x 2 fixtures, max pairwise distance " + fmt("%.3g", worst)};
}

// 8 ---------------------------------------------------------------------------
Outcome classification() {
    using namespace pclab::harness;
    const ReportRecord half = run_experiment(load_config_file(fixture("classify_halving.toml")));
    const ReportRecord rot = run_experiment(load_config_file(fixture("classify_rotation.toml")));
    const ReportRecord dbl = run_experiment(load_config_file(fixture("classify_doubling.toml")));
    const double limsup = rot.scalars.at("limsup_estimate");
    const bool ok = half.verdicts.at(0) == "beta_strict_contractive_IS" &&
                    rot.verdicts.at(0) == "asymptotically_nonexpansive" && std::abs(limsup) <= kLimsupTol &&
                    dbl.verdicts.at(0) == "unclassified";
    return {ok, "0.5 I: " + half.verdicts.at(0) + "; rotation: " + rot.verdicts.at(0) + " (limsup " +
                    fmt("%.3g", limsup) + "); 2 I: " + dbl.verdicts.at(0)};
}

// 9 ---------------------------------------------------------------------------
Outcome determinism() {
    using namespace pclab::harness;
    std::size_t configs = 0, mismatches = 0;
    for (const auto& entry : std::filesystem::directory_iterator(PCLAB_FIXTURE_DIR)) {
        if (entry.path().extension() != ".toml") continue;
        const ExperimentConfig c = load_config_file(entry.path());
        ++configs;
        if (to_csv(run_experiment(c)) != to_csv(run_experiment(c))) ++mismatches;
    }
    return {configs > 0 && mismatches == 0,
            std::to_string(configs) + " configs rerun, " + std::to_string(mismatches) + " CSV mismatches"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"mu-oracle equivalence", mu_oracle},
        {"sandwich invariant", sandwich},
        {"xi tautology", xi_tautology},
        {"case-bound chain", case_bound_chain},
        {"fixed-point convergence", fixed_point_convergence},
        {"best proximity", best_proximity},
        {"uniqueness", uniqueness},
        {"classification sanity", classification},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        if (!o.pass) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
