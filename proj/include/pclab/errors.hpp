#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pclab {

/// Operand dimensions disagree (points, sets, matrices, spaces).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point lies outside the declared domain of a mapping.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter sequences left their admissible ranges (alpha < 0, beta outside
/// [0, 1), mu above its bound, nonpositive k denominators, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs that cannot be evaluated at all: an empty sample budget, all samples
/// degenerate, a cyclic pair with indistinguishable sides.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Configuration failures. Parse failures carry a single message; validation
/// failures carry every problem found.
class ConfigError : public std::runtime_error {
public:
    enum class Kind { parse, validation };

    ConfigError(Kind kind, std::vector<std::string> issues)
        : std::runtime_error(join(issues)), kind_(kind), issues_(std::move(issues)) {}

    Kind kind() const noexcept { return kind_; }
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    Kind kind_;
    std::vector<std::string> issues_;
};

}  // namespace pclab
