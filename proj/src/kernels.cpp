#include "pclab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "pclab/errors.hpp"

namespace pclab {

double minimal_alpha(double a, double b, double mu, double beta) {
    if (!(a > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    Coefficients c;
    c.beta = beta;
    c.mu = mu;
    c.alpha = ((1.0 - beta) * b * b - beta * a * a - 2.0 * mu * beta * a * b) / (a * a);
    // The closed form can miss by a few ulps; grow the step until the
    // condition holds as evaluated. The residual is monotone in alpha.
    double step = std::max(std::abs(c.alpha), 1.0) * std::numeric_limits<double>::epsilon();
    while (condition_residual(c, a, b) > 0.0) {
        c.alpha += step;
        step *= 2.0;
    }
    return std::max(0.0, c.alpha);
}

namespace detail {

std::vector<CertificateSample> pair_certificates(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const PointPair& pair,
                                                 std::size_t n_max, double set_gap) {
    std::vector<CertificateSample> rows;
    rows.reserve(n_max);
    Point u = pair.x;
    Point v = pair.y;
    bool finite = true;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (finite) {
            u = T.evaluate(u);
            v = T.evaluate(v);
            finite = u.all_finite() && v.all_finite();
        }
        if (!finite) {
            CertificateSample s;
            s.n = n;
            s.finite = false;
            s.a = space.distance(pair.x, pair.y);
            s.b = s.dd = s.s_n = s.xi = s.k = std::numeric_limits<double>::infinity();
            rows.push_back(s);
            continue;
        }
        rows.push_back(certify_sample(space, params, n, pair.x, pair.y, u, v, set_gap));
        finite = rows.back().finite;
    }
    return rows;
}

std::vector<double> pair_minimal_alphas(const NormedSpace& space, const Mapping& T, const PointPair& pair,
                                        double beta, std::size_t n_lo, std::size_t n_hi) {
    std::vector<double> out;
    out.reserve(n_hi - n_lo + 1);
    Point u = iterate(T, pair.x, n_lo);
    Point v = iterate(T, pair.y, n_lo);
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        if (n > n_lo) {
            u = T.evaluate(u);
            v = T.evaluate(v);
        }
        const PairMeasure m = measure(space, pair.x, pair.y, u, v);
        out.push_back(minimal_alpha(m.a, m.b, mu_min(m.a, m.b, m.dd), beta));
    }
    return out;
}

bool worse(const CertificateSample& s, std::size_t i, const CertificateSample& t, std::size_t j) {
    if (s.s_n != t.s_n) return s.s_n > t.s_n;
    return i < j;
}

}  // namespace detail

namespace {

void check_range(std::size_t n_lo, std::size_t n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw InvalidInputError("alpha fit: need 1 <= n_lo <= n_hi");
}

// Fixed partition of [0, count) into at most 64 contiguous blocks. Depends
// only on count, so block-wise reductions do not depend on thread count.
struct Blocks {
    explicit Blocks(std::size_t count)
        : count(count), size(std::max<std::size_t>(1, (count + 63) / 64)), num((count + size - 1) / size) {}
    std::size_t begin(std::size_t b) const { return b * size; }
    std::size_t end(std::size_t b) const { return std::min(count, (b + 1) * size); }
    std::size_t count;
    std::size_t size;
    std::size_t num;
};

void merge_tail(std::vector<TailRow>& into, const std::vector<TailRow>& from) {
    for (std::size_t k = 0; k < into.size(); ++k) {
        TailRow& dst = into[k];
        const TailRow& src = from[k];
        if (detail::worse(src.worst, src.worst_index, dst.worst, dst.worst_index)) {
            dst.worst = src.worst;
            dst.worst_index = src.worst_index;
        }
        dst.xi_max = std::max(dst.xi_max, src.xi_max);
        dst.diverged += src.diverged;
    }
}

std::vector<TailRow> empty_tail(std::size_t n_max) {
    std::vector<TailRow> rows(n_max);
    for (std::size_t k = 0; k < n_max; ++k) {
        rows[k].n = k + 1;
        rows[k].worst.n = k + 1;
        rows[k].worst.s_n = -std::numeric_limits<double>::infinity();
        rows[k].worst_index = std::numeric_limits<std::size_t>::max();
    }
    return rows;
}

void fold_sample(std::vector<TailRow>& acc, const std::vector<CertificateSample>& rows, std::size_t index) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
        TailRow& r = acc[k];
        const CertificateSample& s = rows[k];
        if (detail::worse(s, index, r.worst, r.worst_index)) {
            r.worst = s;
            r.worst_index = index;
        }
        r.xi_max = std::max(r.xi_max, s.xi);
        if (!s.finite) ++r.diverged;
    }
}

}  // namespace

namespace kernels {

std::vector<CertificateSample> certificate_table(const NormedSpace& space, const Mapping& T,
                                                 const ParamSequences& params, const std::vector<PointPair>& pairs,
                                                 std::size_t n_max, double set_gap) {
    const std::size_t P = pairs.size();
    std::vector<CertificateSample> table(P * n_max);
    detail::parallel_for(P, [&](std::size_t i) {
        const auto rows = detail::pair_certificates(space, T, params, pairs[i], n_max, set_gap);
        for (std::size_t k = 0; k < n_max; ++k) table[k * P + i] = rows[k];
    });
    return table;
}

std::vector<TailRow> tail_profile(const NormedSpace& space, const Mapping& T, const ParamSequences& params,
                                  const std::vector<PointPair>& pairs, std::size_t n_max, double set_gap) {
    const Blocks blocks(pairs.size());
    std::vector<std::vector<TailRow>> partial(blocks.num, empty_tail(n_max));
    detail::parallel_for(blocks.num, [&](std::size_t b) {
        for (std::size_t i = blocks.begin(b); i < blocks.end(b); ++i) {
            fold_sample(partial[b], detail::pair_certificates(space, T, params, pairs[i], n_max, set_gap), i);
        }
    });
    std::vector<TailRow> out = empty_tail(n_max);
    for (const auto& p : partial) merge_tail(out, p);
    return out;
}

std::vector<AlphaRow> alpha_profile(const NormedSpace& space, const Mapping& T, const std::vector<PointPair>& pairs,
                                    double beta, std::size_t n_lo, std::size_t n_hi) {
    check_range(n_lo, n_hi);
    const std::size_t width = n_hi - n_lo + 1;
    const Blocks blocks(pairs.size());
    std::vector<std::vector<AlphaRow>> partial(blocks.num, std::vector<AlphaRow>(width));
    detail::parallel_for(blocks.num, [&](std::size_t b) {
        for (std::size_t i = blocks.begin(b); i < blocks.end(b); ++i) {
            const auto alphas = detail::pair_minimal_alphas(space, T, pairs[i], beta, n_lo, n_hi);
            for (std::size_t k = 0; k < width; ++k) {
                if (std::isnan(alphas[k])) continue;
                partial[b][k].alpha_hat = std::max(partial[b][k].alpha_hat, alphas[k]);
                ++partial[b][k].used_samples;
            }
        }
    });
    std::vector<AlphaRow> out(width);
    for (std::size_t k = 0; k < width; ++k) {
        out[k].n = n_lo + k;
        for (const auto& p : partial) {
            out[k].alpha_hat = std::max(out[k].alpha_hat, p[k].alpha_hat);
            out[k].used_samples += p[k].used_samples;
        }
    }
    return out;
}

std::vector<OrbitTrace> batch_fixed_points(const NormedSpace& space, const Mapping& T,
                                           const std::vector<Point>& starts, double tol, std::size_t n_max) {
    std::vector<OrbitTrace> out(starts.size());
    detail::parallel_for(starts.size(),
                         [&](std::size_t i) { out[i] = run_to_fixed_point(space, T, starts[i], tol, n_max); });
    return out;
}

int max_threads() {
#ifdef PCLAB_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace kernels
}  // namespace pclab
