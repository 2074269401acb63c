#include "pclab/rng.hpp"

#include <cmath>
#include <numbers>
#include <variant>

namespace pclab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::at(std::uint64_t counter) const noexcept {
    return splitmix64(key_ + counter * kGolden);
}

double CounterRng::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point sample_member(const ConvexSet& set, CounterRng& rng) {
    const std::size_t dim = set.dimension();
    const auto& shape = set.shape();
    if (const auto* ball = std::get_if<Ball>(&shape)) {
        Point dir = Point::zeros(dim);
        double norm2 = 0.0;
        while (norm2 == 0.0) {
            for (std::size_t i = 0; i < dim; ++i) dir[i] = rng.normal();
            norm2 = dot(dir, dir);
        }
        const double radius = ball->radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
        Point p = ball->center + dir * (radius / std::sqrt(norm2));
        // Rounding can push boundary samples out by an ulp.
        return set.project(p);
    }
    if (const auto* box = std::get_if<Box>(&shape)) {
        Point p = Point::zeros(dim);
        for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(box->lo[i], box->hi[i]);
        return p;
    }
    const auto& hs = std::get<HalfspaceIntersection>(shape);
    Point p = hs.witness;
    for (std::size_t i = 0; i < dim; ++i) p[i] += rng.normal();
    return set.project(p);
}

}  // namespace pclab
