#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pclab/convex_set.hpp"
#include "pclab/point.hpp"

namespace pclab {

/// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t n, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix scaled_identity(std::size_t n, double s);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
    const std::vector<double>& row_major() const noexcept { return data_; }

    Point apply(const Point& x) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

class CyclicPair;

/// x -> Q x + c
struct AffineMap {
    Matrix q;
    Point c;
};

/// x -> scale * R(angle) x, where R rotates every coordinate plane
/// (0,1), (2,3), ... by `angle`; an odd trailing coordinate is only scaled.
struct ScaledRotation {
    std::size_t dimension;
    double angle;
    double scale;
};

/// x -> P_target(Q x + c)
struct ProjectedAffine {
    ConvexSet target;
    Matrix q;
    Point c;
};

struct CyclicMap {
    std::shared_ptr<const CyclicPair> pair;
};

/// Immutable self-mapping T. Copies share cyclic pairs.
class Mapping {
public:
    using Descriptor = std::variant<AffineMap, ScaledRotation, ProjectedAffine, CyclicMap>;

    static Mapping affine(Matrix q, Point c);
    static Mapping identity(std::size_t n) { return affine(Matrix::identity(n), Point::zeros(n)); }
    static Mapping scaled_rotation(std::size_t dimension, double angle, double scale);
    static Mapping projected_affine(ConvexSet target, Matrix q, Point c);
    static Mapping cyclic(CyclicPair pair);

    std::size_t dimension() const noexcept { return dimension_; }
    const Descriptor& descriptor() const noexcept { return descriptor_; }

    /// Deterministic image of x. Cyclic maps throw DomainError outside A u B.
    Point evaluate(const Point& x) const;
    Point operator()(const Point& x) const { return evaluate(x); }

    /// The cyclic pair behind a cyclic map, or nullptr.
    const CyclicPair* cyclic_pair() const noexcept;

private:
    Mapping(Descriptor d, std::size_t dimension) : descriptor_(std::move(d)), dimension_(dimension) {}
    Descriptor descriptor_;
    std::size_t dimension_;
};

enum class Side { A, B };
enum class Tiebreak { prefer_A, prefer_B };

/// 2-cyclic self-mapping on A u B: A-side points go through `forward`, B-side
/// points through `backward`. When `project_images` is set (always, for pairs
/// from make_two_cyclic) images are projected onto the opposite set, so
/// T(A) c B and T(B) c A hold by construction.
class CyclicPair {
public:
    /// Raw constructor: no projection of images. Only useful to build pairs
    /// that may violate cyclicity, e.g. to exercise verify_cyclicity.
    static CyclicPair unprojected(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward,
                                  std::optional<Tiebreak> tiebreak);

    const ConvexSet& A() const noexcept { return a_; }
    const ConvexSet& B() const noexcept { return b_; }
    const Mapping& forward() const noexcept { return forward_; }
    const Mapping& backward() const noexcept { return backward_; }
    std::optional<Tiebreak> tiebreak() const noexcept { return tiebreak_; }
    bool projects_images() const noexcept { return project_images_; }
    std::size_t dimension() const noexcept { return a_.dimension(); }

    /// Routing side of x (membership tolerance 1e-10). Points in both sets
    /// follow the tiebreak, prefer_A when unset. Throws DomainError outside.
    Side side_of(const Point& x) const;

    Point apply(const Point& x) const;

private:
    friend CyclicPair make_two_cyclic(ConvexSet, ConvexSet, Mapping, Mapping, std::optional<Tiebreak>);
    CyclicPair(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward, std::optional<Tiebreak> tiebreak,
               bool project_images);

    ConvexSet a_;
    ConvexSet b_;
    Mapping forward_;
    Mapping backward_;
    std::optional<Tiebreak> tiebreak_;
    bool project_images_;
};

/// Builds T with T(x) = P_B(forward(x)) on A and P_A(backward(x)) on B.
/// Throws InvalidInputError when A == B and no tiebreak is given, and
/// DimensionError on mismatched operands.
CyclicPair make_two_cyclic(ConvexSet A, ConvexSet B, Mapping forward, Mapping backward,
                           std::optional<Tiebreak> tiebreak = std::nullopt);

/// Samples `samples` members of A and of B (seeded, see CounterRng) and
/// checks T(a) in B, T(b) in A to 1e-10. Zero samples is vacuously true.
bool verify_cyclicity(const CyclicPair& pair, std::size_t samples, std::uint64_t seed);

/// [x0, T x0, ..., T^N x0]
std::vector<Point> orbit(const Mapping& T, const Point& x0, std::size_t N);

/// T^n x0
Point iterate(const Mapping& T, Point x0, std::size_t n);

}  // namespace pclab
