#pragma once

#include <cstddef>
#include <span>

#include "pclab/point.hpp"

namespace pclab {

enum class NormKind { euclidean, p_norm, max_norm };

/// R^dimension with a norm and its induced metric d(x, y) = ||x - y||.
///
/// The metric is homogeneous and translation invariant for every norm kind.
class NormedSpace {
public:
    /// `p` is only read for NormKind::p_norm and must be >= 1 there.
    NormedSpace(std::size_t dimension, NormKind kind, double p = 2.0);

    static NormedSpace euclidean(std::size_t dimension) { return {dimension, NormKind::euclidean}; }
    static NormedSpace max_norm(std::size_t dimension) { return {dimension, NormKind::max_norm}; }
    static NormedSpace p_norm(std::size_t dimension, double p) { return {dimension, NormKind::p_norm, p}; }

    std::size_t dimension() const noexcept { return dimension_; }
    NormKind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }

    double norm(std::span<const double> v) const;
    double norm(const Point& v) const;

    /// d(x, y) = ||x - y||.
    double distance(const Point& x, const Point& y) const;

    /// d(x - y, u - v) = ||(x - y) - (u - v)||.
    double difference_distance(const Point& x, const Point& y, const Point& u, const Point& v) const;

    void require_dim(const Point& x, const char* what) const;

    friend bool operator==(const NormedSpace&, const NormedSpace&) = default;

private:
    std::size_t dimension_;
    NormKind kind_;
    double p_;
};

const char* to_string(NormKind kind);

}  // namespace pclab
