#include "pclab/harness/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "pclab/errors.hpp"
#include "pclab/orbit.hpp"

namespace pclab::harness {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::orbit: return "orbit";
        case Mode::proximity: return "proximity";
        case Mode::certify: return "certify";
        case Mode::classify: return "classify";
        case Mode::sweep: return "sweep";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
    for (Mode m : {Mode::orbit, Mode::proximity, Mode::certify, Mode::classify, Mode::sweep}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

bool is_sampled(Mode m) { return m == Mode::certify || m == Mode::classify || m == Mode::sweep; }

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Reading: every accessor records a problem and returns a fallback instead of
// throwing, so one pass reports all issues.
// ---------------------------------------------------------------------------

class Reader {
public:
    std::vector<std::string> issues;

    void issue(std::string msg) { issues.push_back(std::move(msg)); }

    void check_keys(const toml::table& t, const std::string& where, std::initializer_list<std::string_view> known) {
        for (const auto& [key, node] : t) {
            bool ok = false;
            for (auto k : known) ok = ok || key.str() == k;
            if (!ok) issue(where + ": unknown key '" + std::string(key.str()) + "'");
        }
    }

    const toml::table* table(const toml::table& t, std::string_view key, const std::string& where, bool required) {
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(where + ": missing section");
            return nullptr;
        }
        if (!n->is_table()) {
            issue(where + ": expected a table");
            return nullptr;
        }
        return n->as_table();
    }

    std::optional<double> number(const toml::table& t, std::string_view key, const std::string& where,
                                 bool required) {
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(where + "." + std::string(key) + ": missing");
            return std::nullopt;
        }
        if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) return *v;
        issue(where + "." + std::string(key) + ": expected a number");
        return std::nullopt;
    }

    std::optional<std::int64_t> integer(const toml::table& t, std::string_view key, const std::string& where,
                                        bool required) {
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(where + "." + std::string(key) + ": missing");
            return std::nullopt;
        }
        if (n->is_integer()) return *n->value<std::int64_t>();
        issue(where + "." + std::string(key) + ": expected an integer");
        return std::nullopt;
    }

    std::optional<std::size_t> count(const toml::table& t, std::string_view key, const std::string& where,
                                     std::size_t min) {
        auto v = integer(t, key, where, false);
        if (!v) return std::nullopt;
        if (*v < static_cast<std::int64_t>(min)) {
            issue(where + "." + std::string(key) + " = " + std::to_string(*v) + " must be >= " + std::to_string(min));
            return std::nullopt;
        }
        return static_cast<std::size_t>(*v);
    }

    std::optional<std::string> string(const toml::table& t, std::string_view key, const std::string& where,
                                      bool required) {
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(where + "." + std::string(key) + ": missing");
            return std::nullopt;
        }
        if (auto v = n->value<std::string>(); v && n->is_string()) return *v;
        issue(where + "." + std::string(key) + ": expected a string");
        return std::nullopt;
    }

    std::optional<std::vector<double>> vector(const toml::node* n, const std::string& where) {
        if (!n || !n->is_array()) {
            issue(where + ": expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : *n->as_array()) {
            auto v = e.value<double>();
            if (!v || !(e.is_floating_point() || e.is_integer())) {
                issue(where + ": expected an array of numbers");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    std::optional<std::vector<double>> vector(const toml::table& t, std::string_view key, const std::string& where,
                                              bool required) {
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(where + "." + std::string(key) + ": missing");
            return std::nullopt;
        }
        return vector(n, where + "." + std::string(key));
    }

    /// Array of arrays; with `scalars_as_points`, bare numbers become 1-vectors.
    std::optional<std::vector<std::vector<double>>> matrix(const toml::table& t, std::string_view key,
                                                           const std::string& where, bool required,
                                                           bool scalars_as_points = false) {
        const std::string at = where + "." + std::string(key);
        const toml::node* n = t.get(key);
        if (!n) {
            if (required) issue(at + ": missing");
            return std::nullopt;
        }
        if (!n->is_array()) {
            issue(at + ": expected an array of arrays");
            return std::nullopt;
        }
        std::vector<std::vector<double>> out;
        for (const auto& e : *n->as_array()) {
            if (scalars_as_points && (e.is_floating_point() || e.is_integer())) {
                out.push_back({*e.value<double>()});
                continue;
            }
            auto row = vector(&e, at);
            if (!row) return std::nullopt;
            out.push_back(std::move(*row));
        }
        return out;
    }

    std::optional<SequenceSpec> sequence(const toml::node* n, const std::string& where) {
        if (n->is_floating_point() || n->is_integer()) return ConstantSeq{*n->value<double>()};
        if (!n->is_table()) {
            issue(where + ": expected a number or a sequence table");
            return std::nullopt;
        }
        const toml::table& t = *n->as_table();
        auto kind = string(t, "kind", where, true);
        if (!kind) return std::nullopt;
        if (*kind == "constant") {
            check_keys(t, where, {"kind", "value"});
            auto v = number(t, "value", where, true);
            if (!v) return std::nullopt;
            return ConstantSeq{*v};
        }
        if (*kind == "geometric") {
            check_keys(t, where, {"kind", "limit", "amplitude", "ratio"});
            auto l = number(t, "limit", where, true), a = number(t, "amplitude", where, true),
                 r = number(t, "ratio", where, true);
            if (!l || !a || !r) return std::nullopt;
            return GeometricSeq{*l, *a, *r};
        }
        if (*kind == "harmonic") {
            check_keys(t, where, {"kind", "limit", "amplitude", "power"});
            auto l = number(t, "limit", where, true), a = number(t, "amplitude", where, true),
                 p = number(t, "power", where, true);
            if (!l || !a || !p) return std::nullopt;
            return HarmonicSeq{*l, *a, *p};
        }
        issue(where + ".kind: unknown sequence kind '" + *kind + "' (constant, geometric, harmonic)");
        return std::nullopt;
    }
};

std::optional<NormKind> parse_norm(std::string_view s) {
    if (s == "euclidean") return NormKind::euclidean;
    if (s == "p") return NormKind::p_norm;
    if (s == "max") return NormKind::max_norm;
    return std::nullopt;
}

void read_space(Reader& r, const toml::table& root, SpaceSpec& out) {
    const toml::table* t = r.table(root, "space", "space", true);
    if (!t) return;
    r.check_keys(*t, "space", {"dimension", "norm", "p"});
    if (auto d = r.integer(*t, "dimension", "space", true)) {
        if (*d < 1) r.issue("space.dimension = " + std::to_string(*d) + " must be >= 1");
        else out.dimension = static_cast<std::size_t>(*d);
    }
    if (auto n = r.string(*t, "norm", "space", false)) {
        if (auto k = parse_norm(*n)) out.norm = *k;
        else r.issue("space.norm: unknown norm '" + *n + "' (euclidean, p, max)");
    }
    if (auto p = r.number(*t, "p", "space", out.norm == NormKind::p_norm)) {
        if (out.norm != NormKind::p_norm) r.issue("space.p: only meaningful with norm = \"p\"");
        else if (!(*p >= 1.0)) r.issue("space.p = " + fmt_double(*p) + " must be >= 1");
        else out.p = *p;
    }
}

void read_sets(Reader& r, const toml::table& root, std::map<std::string, ConvexSet>& out) {
    const toml::table* sets = r.table(root, "sets", "sets", false);
    if (!sets) return;
    for (const auto& [key, node] : *sets) {
        const std::string name(key.str());
        const std::string where = "sets." + name;
        if (!node.is_table()) {
            r.issue(where + ": expected a table");
            continue;
        }
        const toml::table& t = *node.as_table();
        auto kind = r.string(t, "kind", where, true);
        if (!kind) continue;
        try {
            std::optional<ConvexSet> set;
            if (*kind == "ball") {
                r.check_keys(t, where, {"kind", "center", "radius"});
                auto c = r.vector(t, "center", where, true);
                auto rad = r.number(t, "radius", where, true);
                if (c && rad) set = ConvexSet::ball(Point(*c), *rad);
            } else if (*kind == "box") {
                r.check_keys(t, where, {"kind", "lo", "hi"});
                auto lo = r.vector(t, "lo", where, true), hi = r.vector(t, "hi", where, true);
                if (lo && hi) set = ConvexSet::box(Point(*lo), Point(*hi));
            } else if (*kind == "halfspaces") {
                r.check_keys(t, where, {"kind", "normals", "offsets", "witness"});
                auto normals = r.matrix(t, "normals", where, true);
                auto offsets = r.vector(t, "offsets", where, true);
                auto witness = r.vector(t, "witness", where, true);
                if (normals && offsets && witness) {
                    if (normals->size() != offsets->size()) {
                        r.issue(where + ": normals and offsets differ in length");
                    } else {
                        std::vector<Halfspace> hs;
                        for (std::size_t i = 0; i < normals->size(); ++i) hs.push_back({Point((*normals)[i]), (*offsets)[i]});
                        set = ConvexSet::halfspaces(std::move(hs), Point(*witness));
                    }
                }
            } else {
                r.issue(where + ".kind: unknown set kind '" + *kind + "' (ball, box, halfspaces)");
            }
            if (!set) continue;
            out.emplace(name, std::move(*set));
        } catch (const std::exception& e) {
            r.issue(where + ": " + e.what());
        }
    }
}

const std::vector<std::string_view> kMapKinds = {"affine", "identity", "rotation", "projected_affine"};

void read_map(Reader& r, const toml::table& t, const std::string& where, MapSpec& out, bool allow_cyclic_keys) {
    auto kind = r.string(t, "kind", where, true);
    if (!kind) return;
    out.kind = *kind;
    if (!allow_cyclic_keys) {
        r.check_keys(t, where, {"kind", "matrix", "offset", "angle", "scale", "target"});
    }
    if (*kind == "affine" || *kind == "projected_affine") {
        if (auto m = r.matrix(t, "matrix", where, true)) out.matrix = *m;
        if (auto c = r.vector(t, "offset", where, true)) out.offset = *c;
        if (*kind == "projected_affine") {
            if (auto s = r.string(t, "target", where, true)) out.target = *s;
        }
    } else if (*kind == "rotation") {
        if (auto a = r.number(t, "angle", where, true)) out.angle = *a;
        if (auto s = r.number(t, "scale", where, false)) out.scale = *s;
    } else if (*kind != "identity") {
        r.issue(where + ".kind: unknown mapping kind '" + *kind + "'");
    }
}

void read_mapping(Reader& r, const toml::table& root, MappingSpec& out) {
    const toml::table* t = r.table(root, "mapping", "mapping", true);
    if (!t) return;
    auto kind = r.string(*t, "kind", "mapping", true);
    if (!kind) return;
    if (*kind != "cyclic") {
        read_map(r, *t, "mapping", out.map, false);
        return;
    }
    out.cyclic = true;
    r.check_keys(*t, "mapping", {"kind", "set_a", "set_b", "tiebreak", "forward", "backward"});
    if (auto a = r.string(*t, "set_a", "mapping", true)) out.set_a = *a;
    if (auto b = r.string(*t, "set_b", "mapping", true)) out.set_b = *b;
    if (auto tb = r.string(*t, "tiebreak", "mapping", false)) {
        if (*tb == "A") out.tiebreak = Tiebreak::prefer_A;
        else if (*tb == "B") out.tiebreak = Tiebreak::prefer_B;
        else r.issue("mapping.tiebreak: expected \"A\" or \"B\"");
    }
    if (const toml::table* f = r.table(*t, "forward", "mapping.forward", true)) {
        read_map(r, *f, "mapping.forward", out.forward, false);
    }
    if (const toml::table* b = r.table(*t, "backward", "mapping.backward", true)) {
        read_map(r, *b, "mapping.backward", out.backward, false);
    }
}

void read_params(Reader& r, const toml::table& root, ParamSpec& out) {
    const toml::table* t = r.table(root, "params", "params", false);
    if (!t) return;
    r.check_keys(*t, "params", {"alpha", "beta", "gamma", "mu", "mu_bound"});
    const std::pair<std::string_view, SequenceSpec*> seqs[] = {
        {"alpha", &out.alpha}, {"beta", &out.beta}, {"gamma", &out.gamma}};
    for (auto [key, dst] : seqs) {
        if (const toml::node* n = t->get(key)) {
            if (auto s = r.sequence(n, "params." + std::string(key))) *dst = *s;
        }
    }
    if (const toml::node* n = t->get("mu")) {
        if (n->is_string()) {
            if (*n->value<std::string>() == "from_data") out.mu = {MuPolicy::Kind::from_data, ConstantSeq{0.0}};
            else r.issue("params.mu: expected \"from_data\", a number or a sequence table");
        } else if (n->is_floating_point() || n->is_integer()) {
            out.mu = {MuPolicy::Kind::constant, ConstantSeq{*n->value<double>()}};
        } else if (auto s = r.sequence(n, "params.mu")) {
            out.mu = {MuPolicy::Kind::rule, *s};
        }
    }
    if (auto b = r.string(*t, "mu_bound", "params", false)) {
        if (*b == "unscaled") out.mu_bound = MuBound::unscaled;
        else if (*b == "scaled_by_distance") out.mu_bound = MuBound::scaled_by_distance;
        else r.issue("params.mu_bound: expected \"unscaled\" or \"scaled_by_distance\"");
    }
}

void read_run(Reader& r, const toml::table& root, RunSpec& out) {
    const toml::table* t = r.table(root, "run", "run", true);
    if (!t) return;
    r.check_keys(*t, "run", {"mode", "starts", "n_max", "tol", "gap_tol", "samples", "seed", "sample_x", "sample_y",
                             "betas"});
    if (auto m = r.string(*t, "mode", "run", true)) {
        if (auto mode = parse_mode(*m)) out.mode = *mode;
        else r.issue("run.mode: unknown mode '" + *m + "' (orbit, proximity, certify, classify, sweep)");
    }
    if (auto s = r.matrix(*t, "starts", "run", false, true)) out.starts = *s;
    if (auto n = r.count(*t, "n_max", "run", 1)) out.n_max = *n;
    if (auto v = r.number(*t, "tol", "run", false)) out.tol = *v;
    if (auto v = r.number(*t, "gap_tol", "run", false)) out.gap_tol = *v;
    if (auto n = r.count(*t, "samples", "run", 1)) out.samples = *n;
    if (const toml::node* n = t->get("seed")) {
        if (n->is_integer() && *n->value<std::int64_t>() >= 0) {
            out.seed = static_cast<std::uint64_t>(*n->value<std::int64_t>());
        } else if (n->is_string()) {
            // Seeds above 2^63 - 1 are written as decimal strings.
            const std::string s = *n->value<std::string>();
            char* end = nullptr;
            errno = 0;
            const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
            if (s.empty() || *end != '\0' || errno != 0 || s[0] == '-') r.issue("run.seed: invalid seed '" + s + "'");
            else out.seed = static_cast<std::uint64_t>(v);
        } else {
            r.issue("run.seed: expected a nonnegative integer");
        }
    }
    if (auto s = r.string(*t, "sample_x", "run", false)) out.sample_x = *s;
    if (auto s = r.string(*t, "sample_y", "run", false)) out.sample_y = *s;
    if (auto b = r.vector(*t, "betas", "run", false)) out.betas = *b;
}

/// Fills mode-dependent defaults. Only touches fields left unset.
void resolve_defaults(ExperimentConfig& c) {
    if (c.run.n_max == 0) {
        c.run.n_max = (c.run.mode == Mode::orbit || c.run.mode == Mode::proximity) ? kDefaultMaxIterations
                                                                                   : kDefaultTraceLength;
    }
    if (is_sampled(c.run.mode) && c.mapping.cyclic) {
        if (c.run.sample_x.empty()) c.run.sample_x = c.mapping.set_a;
        if (c.run.sample_y.empty()) c.run.sample_y = c.mapping.set_b;
    }
    if (c.run.sample_y.empty()) c.run.sample_y = c.run.sample_x;
}

// ---------------------------------------------------------------------------
// Building
// ---------------------------------------------------------------------------

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& row : rows) {
        if (row.size() != rows.size()) throw DimensionError("matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Matrix(rows.size(), std::move(flat));
}

const ConvexSet& lookup_set(const ExperimentConfig& c, const std::string& name, const std::string& where) {
    auto it = c.sets.find(name);
    if (it == c.sets.end()) throw InvalidInputError(where + ": undefined set '" + name + "'");
    return it->second;
}

Mapping build_map(const ExperimentConfig& c, const MapSpec& m, const std::string& where) {
    const std::size_t n = c.space.dimension;
    Mapping out = Mapping::identity(n == 0 ? 1 : n);
    if (m.kind == "identity") {
        out = Mapping::identity(n);
    } else if (m.kind == "affine") {
        out = Mapping::affine(to_matrix(m.matrix), Point(m.offset));
    } else if (m.kind == "rotation") {
        out = Mapping::scaled_rotation(n, m.angle, m.scale);
    } else if (m.kind == "projected_affine") {
        out = Mapping::projected_affine(lookup_set(c, m.target, where + ".target"), to_matrix(m.matrix),
                                        Point(m.offset));
    } else {
        throw InvalidInputError(where + ": unknown mapping kind '" + m.kind + "'");
    }
    if (out.dimension() != n) {
        throw DimensionError(where + ": dimension " + std::to_string(out.dimension()) +
                             " differs from space dimension " + std::to_string(n));
    }
    return out;
}

const char* sequence_bound_text(std::string_view name) {
    if (name == "beta") return "must lie in [0, 1)";
    if (name == "mu") return "must lie in [-1, 1]";
    return "must be >= 0";
}

bool sequence_value_ok(std::string_view name, double v) {
    if (!std::isfinite(v)) return false;
    if (name == "beta") return v >= 0.0 && v < 1.0;
    if (name == "mu") return v >= -1.0 && v <= 1.0;
    return v >= 0.0;
}

void check_sequence(std::vector<std::string>& issues, std::string_view name, const SequenceSpec& s,
                    std::size_t n_max) {
    for (std::size_t n = 1; n <= std::max<std::size_t>(n_max, 1); ++n) {
        const double v = evaluate(s, n);
        if (!sequence_value_ok(name, v)) {
            issues.push_back("params." + std::string(name) + " = " + fmt_double(v) + " at n = " + std::to_string(n) +
                             " " + sequence_bound_text(name));
            return;
        }
        // Constant sequences need one check.
        if (std::holds_alternative<ConstantSeq>(s)) return;
    }
}

std::vector<std::string> validation_issues(const ExperimentConfig& c) {
    std::vector<std::string> issues;
    const auto note = [&](std::string s) { issues.push_back(std::move(s)); };
    const std::size_t dim = c.space.dimension;
    if (dim == 0) note("space.dimension: missing or zero");
    if (c.space.norm == NormKind::p_norm && !(c.space.p >= 1.0)) note("space.p must be >= 1");

    for (const auto& [name, set] : c.sets) {
        if (dim != 0 && set.dimension() != dim) {
            note("sets." + name + ": dimension " + std::to_string(set.dimension()) + " differs from space dimension " +
                 std::to_string(dim));
        }
    }

    // Mapping: references, kinds and dimensions, checked by building it.
    const auto check_map = [&](const MapSpec& m, const std::string& where) {
        if (std::find(kMapKinds.begin(), kMapKinds.end(), m.kind) == kMapKinds.end()) {
            note(where + ".kind: unknown mapping kind '" + m.kind + "'");
            return;
        }
        if (m.kind == "projected_affine" && !c.sets.count(m.target)) {
            note(where + ".target: undefined set '" + m.target + "'");
            return;
        }
        if (dim == 0) return;
        try {
            build_map(c, m, where);
        } catch (const std::exception& e) {
            note(e.what());
        }
    };
    if (c.mapping.cyclic) {
        bool sets_ok = true;
        for (const auto& [key, name] : {std::pair{"set_a", &c.mapping.set_a}, {"set_b", &c.mapping.set_b}}) {
            if (!c.sets.count(*name)) {
                note(std::string("mapping.") + key + ": undefined set '" + *name + "'");
                sets_ok = false;
            }
        }
        check_map(c.mapping.forward, "mapping.forward");
        check_map(c.mapping.backward, "mapping.backward");
        if (sets_ok && c.mapping.set_a == c.mapping.set_b && !c.mapping.tiebreak) {
            note("mapping: set_a and set_b are the same set; a tiebreak is required");
        }
    } else {
        check_map(c.mapping.map, "mapping");
    }

    // Parameters over the horizon that will actually be evaluated.
    const std::size_t horizon = c.run.n_max;
    check_sequence(issues, "alpha", c.params.alpha, horizon);
    check_sequence(issues, "beta", c.params.beta, horizon);
    check_sequence(issues, "gamma", c.params.gamma, horizon);
    if (c.params.mu.kind != MuPolicy::Kind::from_data) check_sequence(issues, "mu", c.params.mu.sequence, horizon);

    // Run.
    const RunSpec& run = c.run;
    if (!(run.tol > 0.0)) note("run.tol = " + fmt_double(run.tol) + " must be > 0");
    if (!(run.gap_tol > 0.0)) note("run.gap_tol = " + fmt_double(run.gap_tol) + " must be > 0");
    if (run.n_max == 0) note("run.n_max must be >= 1");
    if (run.mode == Mode::orbit || run.mode == Mode::proximity) {
        if (run.starts.empty()) note(std::string("run.starts: ") + to_string(run.mode) + " mode needs at least one start");
        for (std::size_t i = 0; i < run.starts.size(); ++i) {
            if (dim != 0 && run.starts[i].size() != dim) {
                note("run.starts[" + std::to_string(i) + "]: dimension " + std::to_string(run.starts[i].size()) +
                     " differs from space dimension " + std::to_string(dim));
            }
        }
        if (run.mode == Mode::proximity && !c.mapping.cyclic) note("run.mode = proximity needs a cyclic mapping");
    }
    if (is_sampled(run.mode)) {
        if (!run.seed) note(std::string("run.seed: missing (required by ") + to_string(run.mode) + " mode)");
        if (run.samples == 0) note("run.samples must be >= 1");
        if (run.sample_x.empty()) {
            note(std::string("run.sample_x: ") + to_string(run.mode) + " mode needs a sampling set");
        } else {
            for (const auto& [key, name] : {std::pair{"sample_x", &run.sample_x}, {"sample_y", &run.sample_y}}) {
                if (!c.sets.count(*name)) note(std::string("run.") + key + ": undefined set '" + *name + "'");
            }
        }
        if ((run.mode == Mode::classify || run.mode == Mode::sweep) && run.n_max < 16) {
            note("run.n_max = " + std::to_string(run.n_max) + " must be >= 16 for " + to_string(run.mode) + " mode");
        }
    }
    if (run.mode == Mode::sweep) {
        if (run.betas.empty()) note("run.betas: sweep mode needs at least one value");
        for (double b : run.betas) {
            if (!(b >= 0.0 && b < 1.0)) note("run.betas: beta = " + fmt_double(b) + " must lie in [0, 1)");
        }
    } else if (!run.betas.empty()) {
        note("run.betas: only meaningful in sweep mode");
    }
    return issues;
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

toml::array to_array(const std::vector<double>& v) {
    toml::array a;
    for (double x : v) a.push_back(x);
    return a;
}

toml::array to_array(const std::vector<std::vector<double>>& rows) {
    toml::array a;
    for (const auto& r : rows) a.push_back(to_array(r));
    return a;
}

toml::array to_array(const Point& p) { return to_array(p.values()); }

toml::table sequence_table(const SequenceSpec& s) {
    return std::visit(
        [](const auto& v) -> toml::table {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantSeq>) {
                return toml::table{{"kind", "constant"}, {"value", v.value}};
            } else if constexpr (std::is_same_v<T, GeometricSeq>) {
                return toml::table{{"kind", "geometric"}, {"limit", v.limit}, {"amplitude", v.amplitude},
                                   {"ratio", v.ratio}};
            } else {
                return toml::table{{"kind", "harmonic"}, {"limit", v.limit}, {"amplitude", v.amplitude},
                                   {"power", v.power}};
            }
        },
        s);
}

void insert_sequence(toml::table& t, std::string_view key, const SequenceSpec& s) {
    if (const auto* c = std::get_if<ConstantSeq>(&s)) t.insert(key, c->value);
    else t.insert(key, sequence_table(s));
}

toml::table map_table(const MapSpec& m) {
    toml::table t{{"kind", m.kind}};
    if (m.kind == "affine" || m.kind == "projected_affine") {
        t.insert("matrix", to_array(m.matrix));
        t.insert("offset", to_array(m.offset));
        if (m.kind == "projected_affine") t.insert("target", m.target);
    } else if (m.kind == "rotation") {
        t.insert("angle", m.angle);
        t.insert("scale", m.scale);
    }
    return t;
}

toml::table set_table(const ConvexSet& s) {
    return std::visit(
        [](const auto& v) -> toml::table {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return toml::table{{"kind", "ball"}, {"center", to_array(v.center)}, {"radius", v.radius}};
            } else if constexpr (std::is_same_v<T, Box>) {
                return toml::table{{"kind", "box"}, {"lo", to_array(v.lo)}, {"hi", to_array(v.hi)}};
            } else {
                toml::array normals, offsets;
                for (const auto& h : v.halfspaces) {
                    normals.push_back(to_array(h.normal));
                    offsets.push_back(h.offset);
                }
                return toml::table{{"kind", "halfspaces"}, {"normals", normals}, {"offsets", offsets},
                                   {"witness", to_array(v.witness)}};
            }
        },
        s.shape());
}

}  // namespace

ExperimentConfig load_config(std::string_view text) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "line " << e.source().begin.line << ", column " << e.source().begin.column << ": " << e.description();
        throw ConfigError(ConfigError::Kind::parse, {msg.str()});
    }

    Reader r;
    r.check_keys(root, "config", {"space", "sets", "mapping", "params", "run"});
    ExperimentConfig c;
    read_space(r, root, c.space);
    read_sets(r, root, c.sets);
    read_mapping(r, root, c.mapping);
    read_params(r, root, c.params);
    read_run(r, root, c.run);
    resolve_defaults(c);

    // Semantic checks only make sense once the syntax is clean; they would
    // mostly repeat the same problem otherwise.
    if (r.issues.empty()) r.issues = validation_issues(c);
    if (!r.issues.empty()) throw ConfigError(ConfigError::Kind::validation, std::move(r.issues));
    return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(ConfigError::Kind::parse, {"cannot open config file '" + path.string() + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

void validate(const ExperimentConfig& config) {
    auto issues = validation_issues(config);
    if (!issues.empty()) throw ConfigError(ConfigError::Kind::validation, std::move(issues));
}

std::string serialize(const ExperimentConfig& c) {
    toml::table root;

    toml::table space{{"dimension", static_cast<std::int64_t>(c.space.dimension)},
                      {"norm", to_string(c.space.norm)}};
    if (c.space.norm == NormKind::p_norm) space.insert("p", c.space.p);
    root.insert("space", std::move(space));

    if (!c.sets.empty()) {
        toml::table sets;
        for (const auto& [name, set] : c.sets) sets.insert(name, set_table(set));
        root.insert("sets", std::move(sets));
    }

    if (c.mapping.cyclic) {
        toml::table m{{"kind", "cyclic"}, {"set_a", c.mapping.set_a}, {"set_b", c.mapping.set_b}};
        if (c.mapping.tiebreak) m.insert("tiebreak", *c.mapping.tiebreak == Tiebreak::prefer_A ? "A" : "B");
        m.insert("forward", map_table(c.mapping.forward));
        m.insert("backward", map_table(c.mapping.backward));
        root.insert("mapping", std::move(m));
    } else {
        root.insert("mapping", map_table(c.mapping.map));
    }

    toml::table params;
    insert_sequence(params, "alpha", c.params.alpha);
    insert_sequence(params, "beta", c.params.beta);
    insert_sequence(params, "gamma", c.params.gamma);
    switch (c.params.mu.kind) {
        case MuPolicy::Kind::from_data: params.insert("mu", "from_data"); break;
        case MuPolicy::Kind::constant: params.insert("mu", evaluate(c.params.mu.sequence, 1)); break;
        case MuPolicy::Kind::rule: params.insert("mu", sequence_table(c.params.mu.sequence)); break;
    }
    params.insert("mu_bound", c.params.mu_bound == MuBound::unscaled ? "unscaled" : "scaled_by_distance");
    root.insert("params", std::move(params));

    const RunSpec& r = c.run;
    toml::table run{{"mode", to_string(r.mode)},
                    {"n_max", static_cast<std::int64_t>(r.n_max)},
                    {"tol", r.tol},
                    {"gap_tol", r.gap_tol},
                    {"samples", static_cast<std::int64_t>(r.samples)}};
    if (!r.starts.empty()) run.insert("starts", to_array(r.starts));
    if (r.seed) {
        if (*r.seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            run.insert("seed", static_cast<std::int64_t>(*r.seed));
        } else {
            run.insert("seed", std::to_string(*r.seed));
        }
    }
    if (!r.sample_x.empty()) run.insert("sample_x", r.sample_x);
    if (!r.sample_y.empty()) run.insert("sample_y", r.sample_y);
    if (!r.betas.empty()) run.insert("betas", to_array(r.betas));
    root.insert("run", std::move(run));

    std::ostringstream out;
    out << toml::toml_formatter(root, toml::toml_formatter::default_flags & ~toml::format_flags::indentation) << '\n';
    return out.str();
}

std::string digest(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

NormedSpace build_space(const ExperimentConfig& c) { return NormedSpace(c.space.dimension, c.space.norm, c.space.p); }

Mapping build_mapping(const ExperimentConfig& c) {
    if (!c.mapping.cyclic) return build_map(c, c.mapping.map, "mapping");
    return Mapping::cyclic(make_two_cyclic(lookup_set(c, c.mapping.set_a, "mapping.set_a"),
                                           lookup_set(c, c.mapping.set_b, "mapping.set_b"),
                                           build_map(c, c.mapping.forward, "mapping.forward"),
                                           build_map(c, c.mapping.backward, "mapping.backward"), c.mapping.tiebreak));
}

ParamSequences build_params(const ParamSpec& spec) {
    ParamSequences p;
    p.alpha = spec.alpha;
    p.beta = spec.beta;
    p.gamma = spec.gamma;
    switch (spec.mu.kind) {
        case MuPolicy::Kind::from_data: p.mu = MuPolicy::from_data(); break;
        case MuPolicy::Kind::constant: p.mu = MuPolicy::constant(evaluate(spec.mu.sequence, 1)); break;
        case MuPolicy::Kind::rule: p.mu = MuPolicy::rule(spec.mu.sequence); break;
    }
    p.mu_bound = spec.mu_bound;
    return p;
}

}  // namespace pclab::harness
