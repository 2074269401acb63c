#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pclab {

/// A point of a finite-dimensional real vector space.
///
/// Arithmetic results are not checked for finiteness: diverging orbits are
/// expected to overflow and are detected by the callers through all_finite().
/// Use Point::checked() at input boundaries.
class Point {
public:
    Point() = default;
    Point(std::initializer_list<double> coords) : coords_(coords) {}
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}

    static Point zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

    /// Builds a point and rejects empty or non-finite coordinates.
    static Point checked(std::vector<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    bool all_finite() const noexcept;

    Point& operator+=(const Point& rhs);
    Point& operator-=(const Point& rhs);
    Point& operator*=(double s) noexcept;

    friend Point operator+(Point lhs, const Point& rhs) { return lhs += rhs; }
    friend Point operator-(Point lhs, const Point& rhs) { return lhs -= rhs; }
    friend Point operator*(Point p, double s) { return p *= s; }
    friend Point operator*(double s, Point p) { return p *= s; }
    friend Point operator-(Point p) { return p *= -1.0; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

double dot(const Point& a, const Point& b);

/// Throws DimensionError naming `what` when the dimensions differ.
void require_same_dim(const Point& a, const Point& b, const char* what);

std::string to_string(const Point& p);

}  // namespace pclab
