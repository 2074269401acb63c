#include "pclab/harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "pclab/classification.hpp"
#include "pclab/errors.hpp"
#include "pclab/kernels.hpp"
#include "pclab/orbit.hpp"

namespace pclab::harness {

TraceRow to_row(const CertificateSample& s) {
    TraceRow r;
    r.n = s.n;
    r.a = s.a;
    r.b = s.b;
    r.dd = s.dd;
    r.mu = s.coeffs.mu;
    r.xi = s.xi;
    r.k = s.k;
    r.case_tag = to_char(s.case_tag);
    r.s_n = s.s_n;
    return r;
}

namespace {

struct Context {
    const ExperimentConfig& config;
    NormedSpace space;
    Mapping T;
    ParamSequences params;
};

std::vector<Point> starts_of(const ExperimentConfig& c) {
    std::vector<Point> out;
    for (const auto& s : c.run.starts) out.emplace_back(s);
    return out;
}

/// dist(A, B) for cyclic maps, 0 otherwise.
double set_gap(const Context& ctx) {
    const CyclicPair* pair = ctx.T.cyclic_pair();
    return pair ? set_distance(pair->A(), pair->B(), ctx.space) : 0.0;
}

/// Rows for x = x0, y = T x0 along one orbit: row n uses T^n x0 and
/// T^{n+1} x0, for every n whose both iterates were computed.
std::vector<std::vector<TraceRow>> orbit_rows(const Context& ctx, const std::vector<const OrbitTrace*>& traces,
                                              double gap) {
    std::vector<std::vector<TraceRow>> out;
    for (const OrbitTrace* t : traces) {
        std::vector<TraceRow> rows;
        const auto& pts = t->points;
        for (std::size_t n = 1; n + 1 < pts.size(); ++n) {
            rows.push_back(to_row(certify_sample(ctx.space, ctx.params, n, pts[0], pts[1], pts[n], pts[n + 1], gap)));
        }
        out.push_back(std::move(rows));
    }
    return out;
}

/// n-major interleave of per-start row lists (shorter lists drop out).
std::vector<TraceRow> interleave(const std::vector<std::vector<TraceRow>>& per_start) {
    std::vector<TraceRow> out;
    std::size_t longest = 0;
    for (const auto& r : per_start) longest = std::max(longest, r.size());
    for (std::size_t k = 0; k < longest; ++k) {
        for (const auto& r : per_start) {
            if (k < r.size()) out.push_back(r[k]);
        }
    }
    return out;
}

std::string indexed(const std::string& base, std::size_t i, std::size_t count) {
    return count == 1 ? base : base + "." + std::to_string(i);
}

void run_orbit(const Context& ctx, ReportRecord& rec) {
    const RunSpec& run = ctx.config.run;
    const auto starts = starts_of(ctx.config);
    const auto traces = kernels::batch_fixed_points(ctx.space, ctx.T, starts, run.tol, run.n_max);

    std::vector<const OrbitTrace*> ptrs;
    rec.verdict_achieved = true;
    std::size_t converged = 0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const OrbitTrace& t = traces[i];
        ptrs.push_back(&t);
        if (const auto* fp = std::get_if<FixedPoint>(&t.verdict)) {
            rec.verdicts.emplace_back("fixed_point");
            rec.points[indexed("z", i, traces.size())] = fp->z;
            ++converged;
        } else {
            rec.verdicts.emplace_back(t.diverged ? "diverged" : "no_convergence");
            rec.verdict_achieved = false;
        }
        rec.scalars[indexed("iterations", i, traces.size())] = static_cast<double>(t.iterations_used);
        rec.scalars[indexed("residual", i, traces.size())] = t.residual;
    }
    rec.scalars["converged_starts"] = static_cast<double>(converged);
    if (converged == traces.size() && traces.size() > 1) {
        // Largest distance between limits: the uniqueness diagnostic.
        double spread = 0.0;
        const Point& z0 = std::get<FixedPoint>(traces[0].verdict).z;
        for (const auto& t : traces) spread = std::max(spread, ctx.space.distance(z0, std::get<FixedPoint>(t.verdict).z));
        rec.scalars["limit_spread"] = spread;
    }
    rec.rows = interleave(orbit_rows(ctx, ptrs, 0.0));
}

void run_proximity(const Context& ctx, ReportRecord& rec) {
    const RunSpec& run = ctx.config.run;
    const CyclicPair& pair = *ctx.T.cyclic_pair();
    const auto starts = starts_of(ctx.config);
    std::vector<ProximityReport> reports;
    for (const auto& x0 : starts) reports.push_back(proximity_run(ctx.space, pair, x0, run.tol, run.n_max, run.gap_tol));

    rec.verdict_achieved = true;
    std::vector<const OrbitTrace*> ptrs;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const ProximityReport& r = reports[i];
        ptrs.push_back(&r.trace);
        const std::size_t m = reports.size();
        if (!r.stabilized) {
            rec.verdicts.emplace_back("no_convergence");
            rec.verdict_achieved = false;
        } else {
            rec.verdicts.emplace_back(r.within_gap_tol ? "proximity_cycle" : "gap_exceeded");
            if (!r.within_gap_tol) rec.verdict_achieved = false;
            rec.points[indexed("z1", i, m)] = r.z1;
            rec.points[indexed("z2", i, m)] = r.z2;
        }
        rec.scalars[indexed("gap", i, m)] = r.gap;
        rec.scalars[indexed("pair_distance", i, m)] = r.pair_distance;
        rec.scalars[indexed("set_distance", i, m)] = r.set_distance;
        rec.scalars[indexed("parity_iterations", i, m)] = static_cast<double>(r.parity_iterations);
        rec.scalars[indexed("continuity_residual", i, m)] = r.continuity_residual;
    }
    rec.rows = interleave(orbit_rows(ctx, ptrs, reports.empty() ? 0.0 : reports[0].set_distance));
}

std::vector<PointPair> sample_pairs(const Context& ctx) {
    const RunSpec& run = ctx.config.run;
    const auto sampler = PairSampler::random(ctx.config.sets.at(run.sample_x), ctx.config.sets.at(run.sample_y),
                                             *run.seed, run.samples);
    return sampler.take(run.samples);
}

void run_certify(const Context& ctx, ReportRecord& rec) {
    const RunSpec& run = ctx.config.run;
    const auto pairs = sample_pairs(ctx);
    const auto table = kernels::certificate_table(ctx.space, ctx.T, ctx.params, pairs, run.n_max, set_gap(ctx));

    double xi_max = 0.0, s_max = -std::numeric_limits<double>::infinity();
    std::size_t non_finite = 0;
    for (const auto& s : table) {
        rec.rows.push_back(to_row(s));
        if (!s.finite) {
            ++non_finite;
            continue;
        }
        xi_max = std::max(xi_max, s.xi);
        s_max = std::max(s_max, s.s_n);
    }
    rec.scalars["xi_max"] = xi_max;
    rec.scalars["s_max"] = s_max;
    rec.scalars["non_finite_rows"] = static_cast<double>(non_finite);
    rec.scalars["samples"] = static_cast<double>(pairs.size());
    if (non_finite > 0) rec.verdicts.emplace_back("diverged");
    else rec.verdicts.emplace_back(xi_max <= run.tol ? "holds" : "slack_required");
    rec.verdict_achieved = rec.verdicts.back() == "holds";
}

ClassifyOptions classify_options(const Context& ctx) {
    ClassifyOptions o;
    o.samples = ctx.config.run.samples;
    o.tol = ctx.config.run.tol;
    o.set_gap = set_gap(ctx);
    return o;
}

void run_classify(const Context& ctx, ReportRecord& rec) {
    const RunSpec& run = ctx.config.run;
    const auto sampler = PairSampler::random(ctx.config.sets.at(run.sample_x), ctx.config.sets.at(run.sample_y),
                                             *run.seed, run.samples);
    const Classification c = classify_mapping(ctx.space, ctx.T, ctx.params, sampler, run.n_max, classify_options(ctx));
    for (const auto& s : c.evidence) rec.rows.push_back(to_row(s));
    rec.verdicts.emplace_back(to_string(c.verdict));
    rec.verdict_achieved = c.verdict != Verdict::unclassified;
    rec.scalars["alpha_limit"] = c.alpha_limit;
    rec.scalars["beta_limit"] = c.beta_limit;
    rec.scalars["limsup_estimate"] = c.limsup_estimate;
    rec.scalars["diverged"] = c.diverged ? 1.0 : 0.0;
}

void run_sweep(const Context& ctx, ReportRecord& rec) {
    const RunSpec& run = ctx.config.run;
    const auto sampler = PairSampler::random(ctx.config.sets.at(run.sample_x), ctx.config.sets.at(run.sample_y),
                                             *run.seed, run.samples);
    const auto pairs = sampler.take(run.samples);
    const ClassifyOptions opts = classify_options(ctx);
    rec.verdict_achieved = true;
    for (std::size_t i = 0; i < run.betas.size(); ++i) {
        const double beta = run.betas[i];
        const std::string key = "sweep." + std::to_string(i) + ".";
        rec.scalars[key + "beta"] = beta;
        ParamSequences params = ctx.params;
        params.beta = SequenceRule::constant(beta);
        try {
            const Classification c = classify_mapping(ctx.space, ctx.T, params, sampler, run.n_max, opts);
            const auto alphas = fit_minimal_alpha(ctx.space, ctx.T, pairs, beta, 1, run.n_max);
            for (std::size_t k = 0; k < c.evidence.size(); ++k) {
                TraceRow row = to_row(c.evidence[k]);
                row.sweep_value = beta;
                row.alpha_fit = alphas[k].alpha_hat;
                rec.rows.push_back(row);
            }
            rec.verdicts.emplace_back(to_string(c.verdict));
            if (c.verdict == Verdict::unclassified) rec.verdict_achieved = false;
            rec.scalars[key + "limsup_estimate"] = c.limsup_estimate;
            rec.scalars[key + "alpha_fit_tail"] = alphas.back().alpha_hat;
        } catch (const ParameterError&) {
            // This beta leaves the admissible region (e.g. the mu bound).
            rec.verdicts.emplace_back("inadmissible");
            rec.verdict_achieved = false;
        }
    }
}

}  // namespace

ReportRecord run_experiment(const ExperimentConfig& config) {
    validate(config);
    ReportRecord rec;
    rec.config_digest = digest(config);
    rec.mode = config.run.mode;
    try {
        const Context ctx{config, build_space(config), build_mapping(config), build_params(config.params)};
        switch (config.run.mode) {
            case Mode::orbit: run_orbit(ctx, rec); break;
            case Mode::proximity: run_proximity(ctx, rec); break;
            case Mode::certify: run_certify(ctx, rec); break;
            case Mode::classify: run_classify(ctx, rec); break;
            case Mode::sweep: run_sweep(ctx, rec); break;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ExperimentError(config.run.mode, e.what());
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void put(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

bool is_sweep(const ReportRecord& r) { return r.mode == Mode::sweep; }

}  // namespace

void write_csv(std::ostream& out, const ReportRecord& record) { out << to_csv(record); }

std::string to_csv(const ReportRecord& record) {
    const bool sweep = is_sweep(record);
    std::string out = sweep ? "sweep_value,n,a,b,dd,mu,xi,k,case,s_n,alpha_fit\n" : "n,a,b,dd,mu,xi,k,case,s_n\n";
    for (const auto& r : record.rows) {
        if (sweep) {
            put(out, r.sweep_value.value_or(std::nan("")));
            out += ',';
        }
        out += std::to_string(r.n);
        for (double v : {r.a, r.b, r.dd, r.mu, r.xi, r.k}) {
            out += ',';
            put(out, v);
        }
        out += ',';
        out += r.case_tag;
        out += ',';
        put(out, r.s_n);
        if (sweep) {
            out += ',';
            put(out, r.alpha_fit.value_or(std::nan("")));
        }
        out += '\n';
    }
    return out;
}

std::string to_summary(const ReportRecord& record) {
    toml::table root{{"mode", to_string(record.mode)},
                     {"config_digest", record.config_digest},
                     {"verdict_achieved", record.verdict_achieved},
                     {"rows", static_cast<std::int64_t>(record.rows.size())}};
    toml::array verdicts;
    for (const auto& v : record.verdicts) verdicts.push_back(v);
    root.insert("verdicts", std::move(verdicts));
    toml::table scalars;
    for (const auto& [k, v] : record.scalars) scalars.insert(k, v);
    root.insert("scalars", std::move(scalars));
    toml::table points;
    for (const auto& [k, p] : record.points) {
        toml::array a;
        for (double v : p.values()) a.push_back(v);
        points.insert(k, std::move(a));
    }
    root.insert("points", std::move(points));
    std::ostringstream out;
    out << toml::toml_formatter(root, toml::toml_formatter::default_flags & ~toml::format_flags::indentation) << '\n';
    return out.str();
}

std::string to_json(const ReportRecord& record) {
    using nlohmann::json;
    json j;
    j["mode"] = to_string(record.mode);
    j["config_digest"] = record.config_digest;
    j["verdicts"] = record.verdicts;
    j["verdict_achieved"] = record.verdict_achieved;
    j["scalars"] = json::object();
    for (const auto& [k, v] : record.scalars) j["scalars"][k] = v;
    j["points"] = json::object();
    for (const auto& [k, p] : record.points) j["points"][k] = p.values();
    json rows = json::array();
    for (const auto& r : record.rows) {
        json row{{"n", r.n}, {"a", r.a},   {"b", r.b},   {"dd", r.dd},
                 {"mu", r.mu}, {"xi", r.xi}, {"k", r.k}, {"case", std::string(1, r.case_tag)}, {"s_n", r.s_n}};
        if (r.sweep_value) row["sweep_value"] = *r.sweep_value;
        if (r.alpha_fit) row["alpha_fit"] = *r.alpha_fit;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const ReportRecord& record, const std::filesystem::path& dir,
                                                 OutputFormat format) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto write = [&](const std::string& name, const std::string& body) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        out << body;
        written.push_back(path);
    };
    if (format == OutputFormat::csv) write("trace.csv", to_csv(record));
    else write("report.json", to_json(record));
    write("summary.toml", to_summary(record));
    return written;
}

}  // namespace pclab::harness
