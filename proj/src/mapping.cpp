#include "pclab/mapping.hpp"

#include <cmath>
#include <string>

#include "pclab/errors.hpp"
#include "pclab/rng.hpp"

namespace pclab {

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (n == 0) throw DimensionError("matrix must be at least 1x1");
    if (data_.size() != n * n) {
        throw DimensionError("matrix: expected " + std::to_string(n * n) + " entries, got " +
                             std::to_string(data_.size()));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw std::invalid_argument("matrix entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) { return scaled_identity(n, 1.0); }

Matrix Matrix::scaled_identity(std::size_t n, double s) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = s;
    return Matrix(n, std::move(d));
}

Point Matrix::apply(const Point& x) const {
    if (x.dim() != n_) throw DimensionError("matrix-vector product: dimension mismatch");
    Point out = Point::zeros(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < n_; ++c) sum += data_[r * n_ + c] * x[c];
        out[r] = sum;
    }
    return out;
}

Mapping Mapping::affine(Matrix q, Point c) {
    if (q.size() != c.dim()) throw DimensionError("affine map: matrix and offset dimensions differ");
    if (!c.all_finite()) throw std::invalid_argument("affine offset must be finite");
    const std::size_t n = c.dim();
    return Mapping(AffineMap{std::move(q), std::move(c)}, n);
}

Mapping Mapping::scaled_rotation(std::size_t dimension, double angle, double scale) {
    if (dimension < 2) throw DimensionError("scaled rotation needs dimension >= 2");
    if (!std::isfinite(angle) || !std::isfinite(scale)) throw std::invalid_argument("rotation parameters must be finite");
    return Mapping(ScaledRotation{dimension, angle, scale}, dimension);
}

Mapping Mapping::projected_affine(ConvexSet target, Matrix q, Point c) {
    if (q.size() != c.dim() || target.dimension() != c.dim()) {
        throw DimensionError("projected affine map: operand dimensions differ");
    }
    if (!c.all_finite()) throw std::invalid_argument("affine offset must be finite");
    const std::size_t n = c.dim();
    return Mapping(ProjectedAffine{std::move(target), std::move(q), std::move(c)}, n);
}

Mapping Mapping::cyclic(CyclicPair pair) {
    const std::size_t n = pair.dimension();
    return Mapping(CyclicMap{std::make_shared<const CyclicPair>(std::move(pair))}, n);
}

const CyclicPair* Mapping::cyclic_pair() const noexcept {
    if (const auto* c = std::get_if<CyclicMap>(&descriptor_)) return c->pair.get();
    return nullptr;
}

Point Mapping::evaluate(const Point& x) const {
    if (x.dim() != dimension_) {
        throw DimensionError("mapping evaluation: expected dimension " + std::to_string(dimension_) + ", got " +
                             std::to_string(x.dim()));
    }
    if (const auto* a = std::get_if<AffineMap>(&descriptor_)) return a->q.apply(x) + a->c;
    if (const auto* r = std::get_if<ScaledRotation>(&descriptor_)) {
        const double cs = std::cos(r->angle);
        const double sn = std::sin(r->angle);
        Point out = x;
        for (std::size_t i = 0; i + 1 < dimension_; i += 2) {
            out[i] = cs * x[i] - sn * x[i + 1];
            out[i + 1] = sn * x[i] + cs * x[i + 1];
        }
        return out * r->scale;
    }
    if (const auto* p = std::get_if<ProjectedAffine>(&descriptor_)) return p->target.project(p->q.apply(x) + p->c);
    return std::get<CyclicMap>(descriptor_).pair->apply(x);
}

CyclicPair::CyclicPair(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward,
                       std::optional<Tiebreak> tiebreak, bool project_images)
    : a_(std::move(A)),
      b_(std::move(B)),
      forward_(std::move(forward)),
      backward_(std::move(backward)),
      tiebreak_(tiebreak),
      project_images_(project_images) {
    const std::size_t n = a_.dimension();
    if (b_.dimension() != n || forward_.dimension() != n || backward_.dimension() != n) {
        throw DimensionError("cyclic pair: sets and mappings must share one dimension");
    }
}

CyclicPair CyclicPair::unprojected(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward,
                                   std::optional<Tiebreak> tiebreak) {
    return CyclicPair(std::move(A), std::move(B), std::move(forward), std::move(backward), tiebreak, false);
}

Side CyclicPair::side_of(const Point& x) const {
    const bool in_a = a_.contains(x);
    const bool in_b = b_.contains(x);
    if (in_a && in_b) return tiebreak_.value_or(Tiebreak::prefer_A) == Tiebreak::prefer_A ? Side::A : Side::B;
    if (in_a) return Side::A;
    if (in_b) return Side::B;
    throw DomainError("cyclic map evaluated outside A u B at " + to_string(x));
}

Point CyclicPair::apply(const Point& x) const {
    if (side_of(x) == Side::A) {
        Point y = forward_.evaluate(x);
        return project_images_ ? b_.project(y) : y;
    }
    Point y = backward_.evaluate(x);
    return project_images_ ? a_.project(y) : y;
}

CyclicPair make_two_cyclic(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward,
                           std::optional<Tiebreak> tiebreak) {
    if (A == B && !tiebreak) {
        throw InvalidInputError("make_two_cyclic: A and B coincide; a membership tiebreak is required");
    }
    return CyclicPair(std::move(A), std::move(B), std::move(forward), std::move(backward), tiebreak, true);
}

bool verify_cyclicity(const CyclicPair& pair, std::size_t samples, std::uint64_t seed) {
    for (std::size_t i = 0; i < samples; ++i) {
        CounterRng rng_a(seed, 2 * i);
        CounterRng rng_b(seed, 2 * i + 1);
        const Point a = sample_member(pair.A(), rng_a);
        const Point b = sample_member(pair.B(), rng_b);
        if (!pair.B().contains(pair.apply(a))) return false;
        if (!pair.A().contains(pair.apply(b))) return false;
    }
    return true;
}

std::vector<Point> orbit(const Mapping& T, const Point& x0, std::size_t N) {
    std::vector<Point> out;
    out.reserve(N + 1);
    out.push_back(x0);
    for (std::size_t k = 0; k < N; ++k) out.push_back(T.evaluate(out.back()));
    return out;
}

Point iterate(const Mapping& T, Point x0, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) x0 = T.evaluate(x0);
    return x0;
}

}  // namespace pclab
