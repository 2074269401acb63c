#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pclab/certificates.hpp"
#include "pclab/harness/config.hpp"

namespace pclab::harness {

/// One trace row. Orbit and proximity rows pair x = x0 with y = T x0, so
/// b = d(T^n x0, T^{n+1} x0); certify rows are n-major then sample index;
/// classify and sweep rows carry the worst sample per n.
struct TraceRow {
    std::size_t n = 0;
    double a = 0.0;
    double b = 0.0;
    double dd = 0.0;
    double mu = 0.0;
    double xi = 0.0;
    double k = 0.0;
    char case_tag = 'a';
    double s_n = 0.0;
    std::optional<double> sweep_value;  ///< beta of the sweep point
    std::optional<double> alpha_fit;    ///< minimal alpha at this n (sweep)
    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

TraceRow to_row(const CertificateSample& s);

struct ReportRecord {
    std::string config_digest;
    Mode mode = Mode::orbit;
    /// One verdict per start (orbit), per run (proximity, certify, classify)
    /// or per sweep value.
    std::vector<std::string> verdicts;
    /// False when any verdict is a failure (no_convergence, unclassified, ...).
    bool verdict_achieved = false;
    /// Key scalars by name (iteration counts, gaps, limit estimates).
    std::map<std::string, double> scalars;
    /// Limit points (fixed points, best proximity pair).
    std::map<std::string, Point> points;
    std::vector<TraceRow> rows;
};

/// A failure inside an experiment, annotated with the mode.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(Mode mode, const std::string& what)
        : std::runtime_error(std::string(to_string(mode)) + " mode: " + what), mode_(mode) {}
    Mode mode() const noexcept { return mode_; }

private:
    Mode mode_;
};

/// Deterministic in (config, seed). Throws ExperimentError for failures of
/// the underlying operations and ConfigError if the config does not validate.
ReportRecord run_experiment(const ExperimentConfig& config);

// Serialization --------------------------------------------------------------

/// Header n,a,b,dd,mu,xi,k,case,s_n (sweep reports prepend sweep_value and
/// append alpha_fit). Floats use 17 significant digits.
void write_csv(std::ostream& out, const ReportRecord& record);
std::string to_csv(const ReportRecord& record);

/// Summary document: mode, digest, verdicts, scalars and limit points (TOML).
std::string to_summary(const ReportRecord& record);

/// Whole record, rows included (JSON).
std::string to_json(const ReportRecord& record);

enum class OutputFormat { csv, json };

/// Writes trace.csv + summary.toml (csv) or report.json + summary.toml
/// (json) into `dir`, creating it. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const ReportRecord& record, const std::filesystem::path& dir,
                                                 OutputFormat format);

}  // namespace pclab::harness
