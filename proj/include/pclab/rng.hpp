#pragma once

#include <cstdint>

#include "pclab/convex_set.hpp"
#include "pclab/point.hpp"

namespace pclab {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based generator: draw k of stream s under seed S is
///
///     key   = splitmix64(S ^ splitmix64(s))
///     u64_k = splitmix64(key + k * 0x9E3779B97F4A7C15)
///
/// so any draw can be recomputed without replaying earlier ones. Sample i of
/// every sampler uses stream i, which makes parallel sampling independent of
/// thread count and scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t at(std::uint64_t counter) const noexcept;
    std::uint64_t next() noexcept { return at(counter_++); }

    /// (u64 >> 11) * 2^-53, in [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Box-Muller cosine branch; consumes two draws.
    double normal() noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// A member of `set`: uniform for balls and boxes; for halfspace
/// intersections, the projection of a standard Gaussian perturbation of the
/// witness.
Point sample_member(const ConvexSet& set, CounterRng& rng);

}  // namespace pclab
