#include "pclab/normed_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pclab/errors.hpp"

namespace pclab {

NormedSpace::NormedSpace(std::size_t dimension, NormKind kind, double p)
    : dimension_(dimension), kind_(kind), p_(kind == NormKind::p_norm ? p : (kind == NormKind::euclidean ? 2.0 : 0.0)) {
    if (dimension == 0) throw DimensionError("normed space must have dimension >= 1");
    if (kind == NormKind::p_norm && !(p >= 1.0 && std::isfinite(p))) {
        throw std::invalid_argument("p-norm requires finite p >= 1");
    }
}

double NormedSpace::norm(std::span<const double> v) const {
    if (v.size() != dimension_) {
        throw DimensionError("norm: expected dimension " + std::to_string(dimension_) + ", got " +
                             std::to_string(v.size()));
    }
    double scale = 0.0;
    for (double c : v) scale = std::max(scale, std::abs(c));
    if (kind_ == NormKind::max_norm || scale == 0.0 || !std::isfinite(scale)) return scale;

    // Scaled accumulation keeps large and tiny coordinates out of overflow/underflow.
    double sum = 0.0;
    if (kind_ == NormKind::euclidean) {
        for (double c : v) {
            const double r = c / scale;
            sum += r * r;
        }
        return scale * std::sqrt(sum);
    }
    for (double c : v) sum += std::pow(std::abs(c) / scale, p_);
    return scale * std::pow(sum, 1.0 / p_);
}

double NormedSpace::norm(const Point& v) const { return norm(v.coords()); }

double NormedSpace::distance(const Point& x, const Point& y) const {
    require_dim(x, "distance");
    require_dim(y, "distance");
    std::vector<double> diff(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) diff[i] = x[i] - y[i];
    return norm(diff);
}

double NormedSpace::difference_distance(const Point& x, const Point& y, const Point& u,
                                        const Point& v) const {
    require_dim(x, "difference_distance");
    require_dim(y, "difference_distance");
    require_dim(u, "difference_distance");
    require_dim(v, "difference_distance");
    std::vector<double> diff(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) diff[i] = (x[i] - y[i]) - (u[i] - v[i]);
    return norm(diff);
}

void NormedSpace::require_dim(const Point& x, const char* what) const {
    if (x.dim() != dimension_) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dimension_) +
                             ", got " + std::to_string(x.dim()));
    }
}

const char* to_string(NormKind kind) {
    switch (kind) {
        case NormKind::euclidean: return "euclidean";
        case NormKind::p_norm: return "p";
        case NormKind::max_norm: return "max";
    }
    return "?";
}

}  // namespace pclab
