#include "pclab/point.hpp"

#include <cmath>
#include <cstdio>

#include "pclab/errors.hpp"

namespace pclab {

Point Point::checked(std::vector<double> coords) {
    if (coords.empty()) throw DimensionError("point must have dimension >= 1");
    for (double c : coords) {
        if (!std::isfinite(c)) throw std::invalid_argument("point coordinates must be finite");
    }
    return Point(std::move(coords));
}

bool Point::all_finite() const noexcept {
    for (double c : coords_) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}

Point& Point::operator+=(const Point& rhs) {
    require_same_dim(*this, rhs, "point addition");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
}

Point& Point::operator-=(const Point& rhs) {
    require_same_dim(*this, rhs, "point subtraction");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (double& c : coords_) c *= s;
    return *this;
}

double dot(const Point& a, const Point& b) {
    require_same_dim(a, b, "dot product");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
    return sum;
}

void require_same_dim(const Point& a, const Point& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

std::string to_string(const Point& p) {
    std::string out = "(";
    char buf[32];
    for (std::size_t i = 0; i < p.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p[i]);
        if (i) out += ", ";
        out += buf;
    }
    return out + ")";
}

}  // namespace pclab
