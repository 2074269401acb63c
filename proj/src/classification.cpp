#include "pclab/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pclab/errors.hpp"
#include "pclab/rng.hpp"

namespace pclab {

PairSampler PairSampler::random(ConvexSet x_domain, ConvexSet y_domain, std::uint64_t seed, std::size_t capacity) {
    if (x_domain.dimension() != y_domain.dimension()) throw DimensionError("pair sampler: domain dimensions differ");
    PairSampler s;
    s.x_domain_ = std::move(x_domain);
    s.y_domain_ = std::move(y_domain);
    s.seed_ = seed;
    s.capacity_ = capacity;
    return s;
}

PairSampler PairSampler::fixed(std::vector<PointPair> pairs) {
    PairSampler s;
    s.capacity_ = pairs.size();
    s.fixed_ = std::move(pairs);
    return s;
}

std::size_t PairSampler::capacity() const noexcept { return capacity_; }

PointPair PairSampler::at(std::size_t i) const {
    if (i >= capacity_) throw InvalidInputError("pair sampler exhausted at index " + std::to_string(i));
    if (!x_domain_) return fixed_[i];
    CounterRng rx(seed_, 2 * i);
    CounterRng ry(seed_, 2 * i + 1);
    return {sample_member(*x_domain_, rx), sample_member(*y_domain_, ry)};
}

std::vector<PointPair> PairSampler::take(std::size_t count) const {
    if (count == 0) throw InvalidInputError("pair sampler: at least one sample is required");
    if (count > capacity_) {
        throw InvalidInputError("pair sampler exhausted: requested " + std::to_string(count) + ", capacity " +
                                std::to_string(capacity_));
    }
    std::vector<PointPair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(at(i));
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::beta_strict_pseudocontractive_IS: return "beta_strict_pseudocontractive_IS";
        case Verdict::pseudocontractive_IS: return "pseudocontractive_IS";
        case Verdict::beta_strict_contractive_IS: return "beta_strict_contractive_IS";
        case Verdict::contractive_IS: return "contractive_IS";
        case Verdict::asymptotically_nonexpansive: return "asymptotically_nonexpansive";
        case Verdict::unclassified: return "unclassified";
    }
    return "?";
}

Verdict decide_verdict(double alpha_limit, double beta_limit, double limsup_estimate, bool diverged,
                       const ClassifyOptions& opts) {
    if (diverged || !(limsup_estimate <= opts.tol)) return Verdict::unclassified;
    const double lt = opts.limit_tol;
    const bool alpha_below_one = alpha_limit < 1.0 - lt;
    const bool alpha_at_one = std::abs(alpha_limit - 1.0) <= lt;
    if (std::abs(beta_limit - 1.0) <= lt) {
        if (alpha_below_one) return Verdict::contractive_IS;
        if (alpha_at_one) return Verdict::pseudocontractive_IS;
        return Verdict::unclassified;
    }
    if (beta_limit < 1.0 - lt) {
        if (alpha_below_one) return Verdict::beta_strict_contractive_IS;
        if (alpha_at_one) {
            if (beta_limit <= lt && std::abs(limsup_estimate) <= opts.tol) return Verdict::asymptotically_nonexpansive;
            return Verdict::beta_strict_pseudocontractive_IS;
        }
    }
    return Verdict::unclassified;
}

Classification classify_mapping(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                const PairSampler& sampler, std::size_t N_max, const ClassifyOptions& opts) {
    if (N_max < 16) throw InvalidInputError("classify_mapping: N_max must be >= 16");
    const std::vector<PointPair> pairs = sampler.take(opts.samples);
    const std::vector<TailRow> tail = kernels::tail_profile(space, T, params, pairs, N_max, opts.set_gap);

    Classification out;
    out.evidence.reserve(tail.size());
    for (const auto& row : tail) {
        out.evidence.push_back(row.worst);
        if (row.diverged > 0) out.diverged = true;
    }
    const std::size_t quartile = (N_max + 3) / 4;
    out.limsup_estimate = -std::numeric_limits<double>::infinity();
    for (std::size_t k = N_max - quartile; k < N_max; ++k) {
        out.limsup_estimate = std::max(out.limsup_estimate, tail[k].worst.s_n);
    }

    out.alpha_limit = -std::numeric_limits<double>::infinity();
    out.beta_limit = -std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
        out.alpha_limit = std::max(out.alpha_limit, params.alpha(N_max, p.x, p.y));
        out.beta_limit = std::max(out.beta_limit, params.beta(N_max, p.x, p.y));
    }
    out.verdict = decide_verdict(out.alpha_limit, out.beta_limit, out.limsup_estimate, out.diverged, opts);
    return out;
}

std::vector<AlphaRow> fit_minimal_alpha(const NormedSpace& space, const Mapping& T,
                                        const std::vector<PointPair>& samples, double beta, std::size_t n_lo,
                                        std::size_t n_hi) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ParameterError("fit_minimal_alpha: beta must lie in [0, 1)");
    if (samples.empty()) throw InvalidInputError("fit_minimal_alpha: no samples");
    const bool any_distinct = std::any_of(samples.begin(), samples.end(),
                                          [&](const PointPair& p) { return space.distance(p.x, p.y) > 0.0; });
    if (!any_distinct) throw InvalidInputError("fit_minimal_alpha: every sample has d(x, y) = 0");
    return kernels::alpha_profile(space, T, samples, beta, n_lo, n_hi);
}

}  // namespace pclab
