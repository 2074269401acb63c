// pclab: run orbit, proximity, certificate, classification and sweep
// experiments described by a TOML config.
//
// Exit codes: 0 verdict achieved, 2 verdict not achieved, 3 config or usage
// error, 4 runtime error. Log verbosity comes from PCLAB_LOG
// (trace, debug, info, warn, error, off; default warn).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pclab/errors.hpp"
#include "pclab/harness/config.hpp"
#include "pclab/harness/runner.hpp"
#include "pclab/kernels.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictNotAchieved = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_iter;
    std::optional<double> tol;
    std::string format = "csv";
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("pclab");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("PCLAB_LOG");
    const std::string level = env ? env : "warn";
    const auto parsed = spdlog::level::from_str(level);
    // from_str maps unknown names to off; only accept that for "off" itself.
    if (parsed == spdlog::level::off && level != "off") {
        spdlog::set_level(spdlog::level::warn);
        spdlog::warn("PCLAB_LOG='{}' is not a log level; using warn", level);
    } else {
        spdlog::set_level(parsed);
    }
}

int run(pclab::harness::Mode mode, const Options& opt) {
    using namespace pclab::harness;
    ExperimentConfig config = load_config_file(opt.config);
    spdlog::debug("loaded {} (digest {})", opt.config, digest(config));
    if (config.run.mode != mode) {
        spdlog::info("config declares mode '{}'; running '{}' as requested", to_string(config.run.mode),
                     to_string(mode));
        config.run.mode = mode;
    }
    if (opt.seed) config.run.seed = *opt.seed;
    if (opt.max_iter) config.run.n_max = *opt.max_iter;
    if (opt.tol) config.run.tol = *opt.tol;
    validate(config);

    spdlog::info("running {} with {} kernel thread(s)", to_string(mode), pclab::kernels::max_threads());
    const ReportRecord record = run_experiment(config);
    for (const auto& v : record.verdicts) spdlog::info("verdict: {}", v);

    if (!opt.out.empty()) {
        const auto format = opt.format == "json" ? OutputFormat::json : OutputFormat::csv;
        for (const auto& path : write_outputs(record, opt.out, format)) spdlog::info("wrote {}", path.string());
    }
    std::cout << (opt.format == "json" && opt.out.empty() ? to_json(record) : to_summary(record));
    return record.verdict_achieved ? kExitOk : kExitVerdictNotAchieved;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Contractive-condition certificates, orbits and best proximity points"};
    app.require_subcommand(1);
    Options opt;

    const std::pair<pclab::harness::Mode, const char*> commands[] = {
        {pclab::harness::Mode::orbit, "Picard iteration to a fixed point from every start"},
        {pclab::harness::Mode::proximity, "Best proximity pair of a 2-cyclic mapping"},
        {pclab::harness::Mode::certify, "Certificate rows for sampled pairs, n-major"},
        {pclab::harness::Mode::classify, "Classify the mapping from the limsup of s_n"},
        {pclab::harness::Mode::sweep, "Classification and minimal alpha across beta values"},
    };
    std::vector<std::pair<CLI::App*, pclab::harness::Mode>> subs;
    for (const auto& [mode, help] : commands) {
        CLI::App* sub = app.add_subcommand(pclab::harness::to_string(mode), help);
        sub->add_option("config", opt.config, "Experiment config (TOML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "Directory for trace.csv / report.json and summary.toml");
        sub->add_option("--seed", opt.seed, "Override run.seed");
        sub->add_option("--max-iter", opt.max_iter, "Override run.n_max")->check(CLI::PositiveNumber);
        sub->add_option("--tol", opt.tol, "Override run.tol")->check(CLI::PositiveNumber);
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        subs.emplace_back(sub, mode);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    pclab::harness::Mode mode = pclab::harness::Mode::orbit;
    for (const auto& [sub, m] : subs) {
        if (sub->parsed()) mode = m;
    }

    try {
        return run(mode, opt);
    } catch (const pclab::ConfigError& e) {
        for (const auto& issue : e.issues()) spdlog::error("config: {}", issue);
        return kExitConfig;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitRuntime;
    }
}
