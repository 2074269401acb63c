#pragma once

#include <cstddef>
#include <functional>
#include <variant>

#include "pclab/mapping.hpp"
#include "pclab/normed_space.hpp"
#include "pclab/point.hpp"

namespace pclab {

// ---------------------------------------------------------------------------
// Parameter sequences alpha_n, beta_n, mu_n, gamma_n
// ---------------------------------------------------------------------------

struct ConstantSeq {
    double value;
    friend bool operator==(const ConstantSeq&, const ConstantSeq&) = default;
};

/// limit + amplitude * ratio^n
struct GeometricSeq {
    double limit;
    double amplitude;
    double ratio;
    friend bool operator==(const GeometricSeq&, const GeometricSeq&) = default;
};

/// limit + amplitude / n^power
struct HarmonicSeq {
    double limit;
    double amplitude;
    double power;
    friend bool operator==(const HarmonicSeq&, const HarmonicSeq&) = default;
};

/// Serializable sequence descriptions.
using SequenceSpec = std::variant<ConstantSeq, GeometricSeq, HarmonicSeq>;

double evaluate(const SequenceSpec& spec, std::size_t n);

/// A real sequence that may also depend on the pair (x, y).
class SequenceRule {
public:
    using Fn = std::function<double(std::size_t n, const Point& x, const Point& y)>;

    SequenceRule(SequenceSpec spec);  // NOLINT(google-explicit-constructor)
    explicit SequenceRule(Fn fn) : fn_(std::move(fn)) {}

    static SequenceRule constant(double v) { return SequenceRule(SequenceSpec{ConstantSeq{v}}); }

    double operator()(std::size_t n, const Point& x, const Point& y) const { return fn_(n, x, y); }

private:
    Fn fn_;
};

enum class MuBound { unscaled, scaled_by_distance };

struct MuPolicy {
    enum class Kind { from_data, constant, rule };

    static MuPolicy from_data() { return {Kind::from_data, SequenceRule::constant(0.0)}; }
    static MuPolicy constant(double v) { return {Kind::constant, SequenceRule::constant(v)}; }
    static MuPolicy rule(SequenceRule r) { return {Kind::rule, std::move(r)}; }

    Kind kind;
    SequenceRule values;
};

/// alpha_n, beta_n, mu_n, gamma_n evaluated at one (n, x, y).
struct Coefficients {
    double alpha = 1.0;
    double beta = 0.0;
    double mu = 0.0;
    double gamma = 0.0;
};

struct ParamSequences {
    SequenceRule alpha = SequenceRule::constant(1.0);
    SequenceRule beta = SequenceRule::constant(0.0);
    MuPolicy mu = MuPolicy::from_data();
    SequenceRule gamma = SequenceRule::constant(0.0);
    MuBound mu_bound = MuBound::unscaled;

    /// Evaluates every sequence at (n, x, y) and enforces alpha >= 0,
    /// beta in [0, 1), gamma >= 0 and, for beta > 0, the selected mu bound.
    /// `a` is d(x, y); `measured_mu` is used under MuPolicy::from_data.
    /// Throws ParameterError.
    Coefficients evaluate(std::size_t n, const Point& x, const Point& y, double a, double measured_mu) const;
};

/// Upper bound on mu for the given beta: (1 - beta) / (2 beta), divided by
/// d(x, y) for the scaled variant. +inf when beta == 0 (or a == 0, scaled).
double mu_upper_bound(double beta, double a, MuBound variant);

// ---------------------------------------------------------------------------
// Certificate quantities
// ---------------------------------------------------------------------------

/// a = d(x, y), b = d(T^n x, T^n y), dd = d(x - y, T^n x - T^n y)
struct PairMeasure {
    double a;
    double b;
    double dd;
};

PairMeasure measure(const NormedSpace& space, const Point& x, const Point& y, const Point& tn_x,
                    const Point& tn_y);
PairMeasure measure(const NormedSpace& space, const Mapping& T, const Point& x, const Point& y, std::size_t n);

/// Smallest rho in [-1, 1] with dd^2 <= a^2 + b^2 + 2 rho a b, evaluated in
/// floating point (the returned rho satisfies the inequality as computed).
/// Returns 0 when a * b == 0.
double mu_min(double a, double b, double dd);
double mu_min(const NormedSpace& space, const Mapping& T, const Point& x, const Point& y, std::size_t n);

/// (1 - beta) b^2 - (alpha + beta) a^2 - 2 mu beta a b.
///
/// The contractive condition b^2 <= alpha a^2 + beta (a^2 + b^2) + 2 mu beta a b
/// + xi + D_term is evaluated as residual <= xi + D_term, so slack and
/// condition share one rounding path.
double condition_residual(const Coefficients& c, double a, double b);

/// max(0, condition_residual)
double xi_slack(const Coefficients& c, double a, double b);
double xi_slack(const ParamSequences& params, std::size_t n, const Point& x, const Point& y, double a, double b,
                double mu);

bool holds_condition(const Coefficients& c, double a, double b, double xi, double d_term);
bool holds_condition(const ParamSequences& params, const NormedSpace& space, const Mapping& T, const Point& x,
                     const Point& y, std::size_t n, double xi, double d_term);

enum class InequalityCase { a, b, c, d };
enum class Regime { expanding, shrinking };

char to_char(InequalityCase c);

/// Regions of the (b vs a, mu) plane:
///   a: b >= a, 0 <= mu <= (1-beta)/(2 beta)    b: b < a, 0 <= mu
///   c: b >= a, (beta-1)/(2 beta) < mu < 0      d: b < a, mu < 0
/// Ties b == a go to the expanding side, mu == 0 to the mu >= 0 side; with
/// beta == 0 the mu bounds are vacuous. Throws ParameterError outside every
/// region.
InequalityCase classify_case(double a, double b, double mu, double beta);

/// Per-step factor. Expanding: (alpha + beta)/(1 - beta(1 + 2mu)) for mu >= 0,
/// (alpha + beta(1 + 2mu))/(1 - beta) for mu < 0. Shrinking swaps the two.
/// Negative values (possible only for mu < 0 with tiny alpha) are clamped to 0,
/// which keeps the bound valid. Throws ParameterError on a nonpositive
/// denominator.
double k_factor(double alpha, double beta, double mu, Regime regime);

/// b^2 <= k a^2 + xi_prime for the case's own factor and normalized slack.
struct CaseBound {
    double k;
    double xi_prime;
};

CaseBound case_bound(InequalityCase c, const Coefficients& coeffs, double xi);

/// (1 + 2 mu - beta) b^2 - (alpha + beta) a^2
double limsup_term(const Coefficients& c, double a, double b);

struct CertificateSample {
    std::size_t n = 0;
    double a = 0.0;
    double b = 0.0;
    double dd = 0.0;
    Coefficients coeffs;
    double xi = 0.0;
    double k = 0.0;
    double xi_prime = 0.0;
    InequalityCase case_tag = InequalityCase::a;
    double s_n = 0.0;
    double d_term = 0.0;
    bool finite = true;
};

/// All certificate quantities for one pair at iteration n, given the
/// precomputed iterates. A non-finite measurement yields finite == false with
/// s_n = +inf and skips parameter evaluation.
CertificateSample certify_sample(const NormedSpace& space, const ParamSequences& params, std::size_t n,
                                 const Point& x, const Point& y, const Point& tn_x, const Point& tn_y,
                                 double set_gap = 0.0);

/// Rechecks sandwich, xi >= 0 and mu in [-1, 1] to relative `rel_tol`.
bool satisfies_sample_invariants(const CertificateSample& s, double rel_tol = 1e-12);

}  // namespace pclab
