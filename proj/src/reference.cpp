// Serial reference kernels. Straight loops, no blocking; kept to check the
// parallel kernels bit for bit and as the benchmark baseline.

#include <algorithm>
#include <cmath>
#include <limits>

#include "pclab/errors.hpp"
#include "pclab/kernels.hpp"

namespace pclab::reference {

std::vector<CertificateSample> certificate_table(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const std::vector<PointPair>& pairs,
                                                 std::size_t n_max, double set_gap) {
    const std::size_t P = pairs.size();
    std::vector<CertificateSample> table(P * n_max);
    for (std::size_t i = 0; i < P; ++i) {
        const auto rows = detail::pair_certificates(space, T, params, pairs[i], n_max, set_gap);
        for (std::size_t k = 0; k < n_max; ++k) table[k * P + i] = rows[k];
    }
    return table;
}

std::vector<TailRow> tail_profile(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                  const std::vector<PointPair>& pairs, std::size_t n_max, double set_gap) {
    const auto table = certificate_table(space, T, params, pairs, n_max, set_gap);
    const std::size_t P = pairs.size();
    std::vector<TailRow> out(n_max);
    for (std::size_t k = 0; k < n_max; ++k) {
        TailRow& r = out[k];
        r.n = k + 1;
        r.worst.n = k + 1;
        r.worst.s_n = -std::numeric_limits<double>::infinity();
        r.worst_index = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < P; ++i) {
            const CertificateSample& s = table[k * P + i];
            if (s.s_n > r.worst.s_n || r.worst_index == std::numeric_limits<std::size_t>::max()) {
                r.worst = s;
                r.worst_index = i;
            }
            r.xi_max = std::max(r.xi_max, s.xi);
            if (!s.finite) ++r.diverged;
        }
    }
    return out;
}

std::vector<AlphaRow> alpha_profile(const NormedSpace& space, const Mapping& T, const std::vector<PointPair>& pairs,
                                    double beta, std::size_t n_lo, std::size_t n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw InvalidInputError("alpha fit: need 1 <= n_lo <= n_hi");
    std::vector<AlphaRow> out;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        AlphaRow row;
        row.n = n;
        for (const auto& pair : pairs) {
            const PairMeasure m = measure(space, T, pair.x, pair.y, n);
            const double alpha = minimal_alpha(m.a, m.b, mu_min(m.a, m.b, m.dd), beta);
            if (std::isnan(alpha)) continue;
            row.alpha_hat = std::max(row.alpha_hat, alpha);
            ++row.used_samples;
        }
        out.push_back(row);
    }
    return out;
}

std::vector<OrbitTrace> batch_fixed_points(const NormedSpace& space, const Mapping& T,
                                           const std::vector<Point>& starts, double tol, std::size_t n_max) {
    std::vector<OrbitTrace> out;
    out.reserve(starts.size());
    for (const auto& s : starts) out.push_back(run_to_fixed_point(space, T, s, tol, n_max));
    return out;
}

}  // namespace pclab::reference
