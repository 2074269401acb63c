#pragma once

// Data-parallel certificate and orbit kernels.
//
// Every kernel here has a serial twin in pclab::reference with the same
// signature. Per-sample work is identical in both; only the loop structure
// and the reductions differ. Reductions are max/argmax with ties broken by
// the lower sample index, so results are bit-identical across thread counts.

#include <cstddef>
#include <vector>

#include "pclab/certificates.hpp"
#include "pclab/mapping.hpp"
#include "pclab/normed_space.hpp"
#include "pclab/orbit.hpp"

namespace pclab {

struct PointPair {
    Point x;
    Point y;
    friend bool operator==(const PointPair&, const PointPair&) = default;
};

/// Per-n reduction over samples.
struct TailRow {
    std::size_t n = 0;
    /// Sample attaining max s_n (lowest index on ties).
    CertificateSample worst;
    std::size_t worst_index = 0;
    double xi_max = 0.0;
    std::size_t diverged = 0;
};

struct AlphaRow {
    std::size_t n = 0;
    double alpha_hat = 0.0;
    std::size_t used_samples = 0;  ///< samples with d(x, y) > 0
};

/// Smallest alpha >= 0 for which the condition holds with xi = 0 at this
/// sample, evaluated in floating point (see fit_minimal_alpha).
double minimal_alpha(double a, double b, double mu, double beta);

namespace kernels {

/// Rows for n = 1..n_max, n-major then sample index: row (n - 1) * P + i.
std::vector<CertificateSample> certificate_table(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const std::vector<PointPair>& pairs,
                                                 std::size_t n_max, double set_gap = 0.0);

/// Worst-case s_n and max xi_n over samples for n = 1..n_max.
std::vector<TailRow> tail_profile(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                  const std::vector<PointPair>& pairs, std::size_t n_max, double set_gap = 0.0);

/// alpha_hat_n = max over samples with a > 0 of minimal_alpha, n in [n_lo, n_hi].
std::vector<AlphaRow> alpha_profile(const NormedSpace& space, const Mapping& T, const std::vector<PointPair>& pairs,
                                    double beta, std::size_t n_lo, std::size_t n_hi);

/// run_to_fixed_point from every start.
std::vector<OrbitTrace> batch_fixed_points(const NormedSpace& space, const Mapping& T,
                                           const std::vector<Point>& starts, double tol, std::size_t n_max);

/// Worker threads the kernels will use (1 without OpenMP).
int max_threads();

}  // namespace kernels

namespace reference {

std::vector<CertificateSample> certificate_table(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const std::vector<PointPair>& pairs,
                                                 std::size_t n_max, double set_gap = 0.0);

std::vector<TailRow> tail_profile(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                  const std::vector<PointPair>& pairs, std::size_t n_max, double set_gap = 0.0);

std::vector<AlphaRow> alpha_profile(const NormedSpace& space, const Mapping& T, const std::vector<PointPair>& pairs,
                                    double beta, std::size_t n_lo, std::size_t n_hi);

std::vector<OrbitTrace> batch_fixed_points(const NormedSpace& space, const Mapping& T,
                                           const std::vector<Point>& starts, double tol, std::size_t n_max);

}  // namespace reference

namespace detail {

/// Certificate rows n = 1..n_max for one pair. Stops iterating once an
/// iterate is non-finite; later rows are marked finite == false.
std::vector<CertificateSample> pair_certificates(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const PointPair& pair,
                                                 std::size_t n_max, double set_gap);

/// minimal_alpha rows for n in [n_lo, n_hi]; NaN where a == 0.
std::vector<double> pair_minimal_alphas(const NormedSpace& space, const Mapping& T, const PointPair& pair,
                                        double beta, std::size_t n_lo, std::size_t n_hi);

/// Strictly worse: larger s_n, or equal s_n with lower index.
bool worse(const CertificateSample& s, std::size_t i, const CertificateSample& t, std::size_t j);

}  // namespace detail

}  // namespace pclab
