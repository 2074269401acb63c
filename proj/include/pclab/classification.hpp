#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pclab/certificates.hpp"
#include "pclab/convex_set.hpp"
#include "pclab/kernels.hpp"

namespace pclab {

/// Seeded source of (x, y) pairs. Random samplers draw x from one set and y
/// from another (the same set for plain self-maps, A and B for cyclic maps);
/// pair i uses CounterRng streams 2i and 2i + 1.
class PairSampler {
public:
    static PairSampler random(ConvexSet x_domain, ConvexSet y_domain, std::uint64_t seed, std::size_t capacity);
    static PairSampler fixed(std::vector<PointPair> pairs);

    std::size_t capacity() const noexcept;
    PointPair at(std::size_t i) const;

    /// The first `count` pairs. Throws InvalidInputError when the sampler
    /// cannot supply them (exhaustion) or count == 0.
    std::vector<PointPair> take(std::size_t count) const;

private:
    PairSampler() = default;
    std::optional<ConvexSet> x_domain_;
    std::optional<ConvexSet> y_domain_;
    std::uint64_t seed_ = 0;
    std::size_t capacity_ = 0;
    std::vector<PointPair> fixed_;
};

enum class Verdict {
    beta_strict_pseudocontractive_IS,
    pseudocontractive_IS,
    beta_strict_contractive_IS,
    contractive_IS,
    asymptotically_nonexpansive,
    unclassified,
};

const char* to_string(Verdict v);

struct ClassifyOptions {
    std::size_t samples = 256;
    /// Threshold on the limsup estimate.
    double tol = 1e-7;
    /// Tolerance for "alpha_n -> 1" and "beta_n -> 1" (and beta -> 0).
    double limit_tol = 1e-6;
    /// dist(A, B) for cyclic maps; enters only through gamma_n * D^2.
    double set_gap = 0.0;
};

struct Classification {
    Verdict verdict = Verdict::unclassified;
    double beta_limit = 0.0;
    double alpha_limit = 0.0;
    double limsup_estimate = 0.0;
    bool diverged = false;
    /// Worst sample for each n = 1..N_max.
    std::vector<CertificateSample> evidence;
};

/// Verdict from the tail estimates, applied in order:
///   diverged or limsup > tol                      -> unclassified
///   |beta - 1| <= ltol:  alpha < 1 - ltol         -> contractive_IS
///                        |alpha - 1| <= ltol      -> pseudocontractive_IS
///   beta < 1 - ltol:     alpha < 1 - ltol         -> beta_strict_contractive_IS
///                        |alpha - 1| <= ltol, beta <= ltol, |limsup| <= tol
///                                                 -> asymptotically_nonexpansive
///                        |alpha - 1| <= ltol      -> beta_strict_pseudocontractive_IS
///   anything else                                 -> unclassified
Verdict decide_verdict(double alpha_limit, double beta_limit, double limsup_estimate, bool diverged,
                       const ClassifyOptions& opts);

/// Estimates s_n = max over sampled pairs of
/// (1 + 2 mu_n - beta_n) b_n^2 - (alpha_n + beta_n) a_n^2 for n = 1..N_max,
/// takes the maximum over the last quartile of n as the limsup estimate, and
/// reads alpha/beta limits off the largest sampled values at n = N_max.
/// Requires N_max >= 16.
Classification classify_mapping(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                const PairSampler& sampler, std::size_t N_max, const ClassifyOptions& opts = {});

/// Smallest admissible alpha_n with xi = 0 over the samples, for n in
/// [n_lo, n_hi]. Throws InvalidInputError if no sample has d(x, y) > 0 and
/// ParameterError for beta outside [0, 1).
std::vector<AlphaRow> fit_minimal_alpha(const NormedSpace& space, const Mapping& T,
                                        const std::vector<PointPair>& samples, double beta, std::size_t n_lo,
                                        std::size_t n_hi);

}  // namespace pclab
