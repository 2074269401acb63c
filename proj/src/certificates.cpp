#include "pclab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pclab/errors.hpp"

namespace pclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double evaluate(const SequenceSpec& spec, std::size_t n) {
    const double nd = static_cast<double>(n);
    if (const auto* c = std::get_if<ConstantSeq>(&spec)) return c->value;
    if (const auto* g = std::get_if<GeometricSeq>(&spec)) return g->limit + g->amplitude * std::pow(g->ratio, nd);
    const auto& h = std::get<HarmonicSeq>(spec);
    return h.limit + h.amplitude / std::pow(std::max(nd, 1.0), h.power);
}

SequenceRule::SequenceRule(SequenceSpec spec)
    : fn_([spec = std::move(spec)](std::size_t n, const Point&, const Point&) { return evaluate(spec, n); }) {}

double mu_upper_bound(double beta, double a, MuBound variant) {
    if (beta <= 0.0) return kInf;
    const double unscaled = (1.0 - beta) / (2.0 * beta);
    if (variant == MuBound::unscaled) return unscaled;
    return a > 0.0 ? unscaled / a : kInf;
}

Coefficients ParamSequences::evaluate(std::size_t n, const Point& x, const Point& y, double a,
                                      double measured_mu) const {
    Coefficients c;
    c.alpha = alpha(n, x, y);
    c.beta = beta(n, x, y);
    c.gamma = gamma(n, x, y);
    c.mu = mu.kind == MuPolicy::Kind::from_data ? measured_mu : mu.values(n, x, y);

    const std::string at = " at n = " + std::to_string(n);
    if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) {
        throw ParameterError("alpha = " + fmt(c.alpha) + at + " must be finite and >= 0");
    }
    if (!(c.beta >= 0.0 && c.beta < 1.0)) {
        throw ParameterError("beta = " + fmt(c.beta) + at + " must lie in [0, 1)");
    }
    if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) {
        throw ParameterError("gamma = " + fmt(c.gamma) + at + " must be finite and >= 0");
    }
    if (!(c.mu >= -1.0 && c.mu <= 1.0)) throw ParameterError("mu = " + fmt(c.mu) + at + " must lie in [-1, 1]");
    if (x != y && c.mu > mu_upper_bound(c.beta, a, mu_bound)) {
        throw ParameterError("mu = " + fmt(c.mu) + at + " exceeds its bound " +
                             fmt(mu_upper_bound(c.beta, a, mu_bound)) +
                             (mu_bound == MuBound::unscaled ? " = (1 - beta)/(2 beta)"
                                                            : " = (1 - beta)/(2 beta d(x, y))"));
    }
    // The mu sequence is pinned to 0 on coincident points.
    if (x == y) c.mu = 0.0;
    return c;
}

PairMeasure measure(const NormedSpace& space, const Point& x, const Point& y, const Point& tn_x,
                    const Point& tn_y) {
    return {space.distance(x, y), space.distance(tn_x, tn_y), space.difference_distance(x, y, tn_x, tn_y)};
}

PairMeasure measure(const NormedSpace& space, const Mapping& T, const Point& x, const Point& y, std::size_t n) {
    return measure(space, x, y, iterate(T, x, n), iterate(T, y, n));
}

double mu_min(double a, double b, double dd) {
    const double ab = a * b;
    if (!(ab > 0.0)) return 0.0;
    double rho = std::clamp((dd * dd - a * a - b * b) / (2.0 * ab), -1.0, 1.0);
    // Step up by ulps until the inequality holds as evaluated.
    for (int guard = 0; guard < 64 && rho < 1.0 && dd * dd > a * a + b * b + 2.0 * rho * a * b; ++guard) {
        rho = std::nextafter(rho, 2.0);
    }
    return std::min(rho, 1.0);
}

double mu_min(const NormedSpace& space, const Mapping& T, const Point& x, const Point& y, std::size_t n) {
    const PairMeasure m = measure(space, T, x, y, n);
    return mu_min(m.a, m.b, m.dd);
}

double condition_residual(const Coefficients& c, double a, double b) {
    return (1.0 - c.beta) * b * b - (c.alpha + c.beta) * a * a - 2.0 * c.mu * c.beta * a * b;
}

double xi_slack(const Coefficients& c, double a, double b) { return std::max(0.0, condition_residual(c, a, b)); }

double xi_slack(const ParamSequences& params, std::size_t n, const Point& x, const Point& y, double a, double b,
                double mu) {
    return xi_slack(params.evaluate(n, x, y, a, mu), a, b);
}

bool holds_condition(const Coefficients& c, double a, double b, double xi, double d_term) {
    return condition_residual(c, a, b) <= xi + d_term;
}

bool holds_condition(const ParamSequences& params, const NormedSpace& space, const Mapping& T, const Point& x,
                     const Point& y, std::size_t n, double xi, double d_term) {
    const PairMeasure m = measure(space, T, x, y, n);
    const Coefficients c = params.evaluate(n, x, y, m.a, mu_min(m.a, m.b, m.dd));
    return holds_condition(c, m.a, m.b, xi, d_term);
}

char to_char(InequalityCase c) {
    switch (c) {
        case InequalityCase::a: return 'a';
        case InequalityCase::b: return 'b';
        case InequalityCase::c: return 'c';
        case InequalityCase::d: return 'd';
    }
    return '?';
}

InequalityCase classify_case(double a, double b, double mu, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ParameterError("classify_case: beta must lie in [0, 1)");
    const bool expanding = b >= a;
    if (mu >= 0.0) {
        if (beta > 0.0 && mu > (1.0 - beta) / (2.0 * beta)) {
            throw ParameterError("classify_case: mu = " + fmt(mu) + " above (1 - beta)/(2 beta)");
        }
        return expanding ? InequalityCase::a : InequalityCase::b;
    }
    if (beta > 0.0 && !(mu > (beta - 1.0) / (2.0 * beta))) {
        throw ParameterError("classify_case: mu = " + fmt(mu) + " not above (beta - 1)/(2 beta)");
    }
    return expanding ? InequalityCase::c : InequalityCase::d;
}

namespace {

// (alpha + beta)/(1 - beta(1 + 2mu))
double ratio_bound(double alpha, double beta, double mu) {
    const double den = 1.0 - beta * (1.0 + 2.0 * mu);
    if (!(den > 0.0)) {
        throw ParameterError("k_factor: 1 - beta(1 + 2 mu) = " + fmt(den) + " is not positive");
    }
    return (alpha + beta) / den;
}

// (alpha + beta(1 + 2mu))/(1 - beta)
double shifted_bound(double alpha, double beta, double mu) {
    if (!(beta < 1.0)) throw ParameterError("k_factor: 1 - beta is not positive");
    return (alpha + beta * (1.0 + 2.0 * mu)) / (1.0 - beta);
}

}  // namespace

double k_factor(double alpha, double beta, double mu, Regime regime) {
    const bool ratio_form = (regime == Regime::expanding) == (mu >= 0.0);
    const double k = ratio_form ? ratio_bound(alpha, beta, mu) : shifted_bound(alpha, beta, mu);
    return std::max(0.0, k);
}

CaseBound case_bound(InequalityCase c, const Coefficients& coeffs, double xi) {
    const Regime regime =
        (c == InequalityCase::a || c == InequalityCase::c) ? Regime::expanding : Regime::shrinking;
    const double k = k_factor(coeffs.alpha, coeffs.beta, coeffs.mu, regime);
    // Cases a and d divide by 1 - beta(1 + 2mu); b and c by 1 - beta.
    const double den = (c == InequalityCase::a || c == InequalityCase::d)
                           ? 1.0 - coeffs.beta * (1.0 + 2.0 * coeffs.mu)
                           : 1.0 - coeffs.beta;
    return {k, xi / den};
}

double limsup_term(const Coefficients& c, double a, double b) {
    return (1.0 + 2.0 * c.mu - c.beta) * b * b - (c.alpha + c.beta) * a * a;
}

CertificateSample certify_sample(const NormedSpace& space, const ParamSequences& params, std::size_t n,
                                 const Point& x, const Point& y, const Point& tn_x, const Point& tn_y,
                                 double set_gap) {
    CertificateSample s;
    s.n = n;
    const PairMeasure m = measure(space, x, y, tn_x, tn_y);
    s.a = m.a;
    s.b = m.b;
    s.dd = m.dd;
    if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.dd) || !std::isfinite(m.b * m.b)) {
        s.finite = false;
        s.s_n = kInf;
        s.xi = kInf;
        s.k = kInf;
        return s;
    }
    s.coeffs = params.evaluate(n, x, y, m.a, mu_min(m.a, m.b, m.dd));
    s.xi = xi_slack(s.coeffs, m.a, m.b);
    s.case_tag = classify_case(m.a, m.b, s.coeffs.mu, s.coeffs.beta);
    const CaseBound cb = case_bound(s.case_tag, s.coeffs, s.xi);
    s.k = cb.k;
    s.xi_prime = cb.xi_prime;
    s.s_n = limsup_term(s.coeffs, m.a, m.b);
    s.d_term = s.coeffs.gamma * set_gap * set_gap;
    return s;
}

bool satisfies_sample_invariants(const CertificateSample& s, double rel_tol) {
    if (!s.finite) return true;
    const double lo = (s.a - s.b) * (s.a - s.b);
    const double hi = (s.a + s.b) * (s.a + s.b);
    const double dd2 = s.dd * s.dd;
    const double slack = rel_tol * hi;
    return lo <= dd2 + slack && dd2 <= hi + slack && s.xi >= 0.0 && s.coeffs.mu >= -1.0 && s.coeffs.mu <= 1.0;
}

}  // namespace pclab
