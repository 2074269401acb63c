#pragma once

// Experiment configuration: a TOML document with the sections
//
//   [space]        dimension, norm = "euclidean" | "p" | "max", p
//   [sets.NAME]    kind = "ball" | "box" | "halfspaces" with the shape's fields
//   [mapping]      kind = "affine" | "identity" | "rotation" | "projected_affine"
//                  | "cyclic"; a cyclic mapping names its sets and carries
//                  [mapping.forward] and [mapping.backward] tables
//   [params]       alpha, beta, gamma, mu, mu_bound
//   [run]          mode, starts, n_max, tol, gap_tol, samples, seed, sample_x,
//                  sample_y, betas
//
// load_config validates everything it can and reports every problem at once.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pclab/certificates.hpp"
#include "pclab/convex_set.hpp"
#include "pclab/mapping.hpp"
#include "pclab/normed_space.hpp"

namespace pclab::harness {

enum class Mode { orbit, proximity, certify, classify, sweep };

const char* to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

/// True for modes that draw random (x, y) pairs and therefore need a seed.
bool is_sampled(Mode m);

struct SpaceSpec {
    std::size_t dimension = 0;
    NormKind norm = NormKind::euclidean;
    double p = 2.0;
    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// A non-cyclic mapping. Unused fields keep their defaults.
struct MapSpec {
    std::string kind = "identity";  ///< affine | identity | rotation | projected_affine
    std::vector<std::vector<double>> matrix;
    std::vector<double> offset;
    double angle = 0.0;
    double scale = 1.0;
    std::string target;  ///< set name for projected_affine
    friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

struct MappingSpec {
    bool cyclic = false;
    MapSpec map;  ///< when !cyclic
    std::string set_a;
    std::string set_b;
    std::optional<Tiebreak> tiebreak;
    MapSpec forward;
    MapSpec backward;
    friend bool operator==(const MappingSpec&, const MappingSpec&) = default;
};

struct MuSpec {
    MuPolicy::Kind kind = MuPolicy::Kind::from_data;
    SequenceSpec sequence = ConstantSeq{0.0};  ///< constant value or rule
    friend bool operator==(const MuSpec&, const MuSpec&) = default;
};

struct ParamSpec {
    SequenceSpec alpha = ConstantSeq{1.0};
    SequenceSpec beta = ConstantSeq{0.0};
    SequenceSpec gamma = ConstantSeq{0.0};
    MuSpec mu;
    MuBound mu_bound = MuBound::unscaled;
    friend bool operator==(const ParamSpec&, const ParamSpec&) = default;
};

struct RunSpec {
    Mode mode = Mode::orbit;
    std::vector<std::vector<double>> starts;
    std::size_t n_max = 0;  ///< resolved to a mode default when omitted
    double tol = 1e-9;
    double gap_tol = 1e-6;
    std::size_t samples = 64;
    std::optional<std::uint64_t> seed;
    std::string sample_x;  ///< set names for sampled modes
    std::string sample_y;
    std::vector<double> betas;  ///< sweep values
    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct ExperimentConfig {
    SpaceSpec space;
    std::map<std::string, ConvexSet> sets;
    MappingSpec mapping;
    ParamSpec params;
    RunSpec run;
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline constexpr std::size_t kDefaultTraceLength = 32;

/// Parses and validates. Throws ConfigError (parse or validation; the latter
/// lists every issue found).
ExperimentConfig load_config(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Re-checks a config assembled or modified in code (e.g. after command-line
/// overrides). Throws ConfigError(validation).
void validate(const ExperimentConfig& config);

/// Canonical TOML text; load_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

/// 16 hex digits of FNV-1a 64 over serialize(config).
std::string digest(const ExperimentConfig& config);

// Built objects --------------------------------------------------------------

NormedSpace build_space(const ExperimentConfig& config);
Mapping build_mapping(const ExperimentConfig& config);
ParamSequences build_params(const ParamSpec& spec);

}  // namespace pclab::harness
