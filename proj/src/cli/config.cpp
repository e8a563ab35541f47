/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "mvlevy/cli/config.hpp"

#include "mvlevy/cli/output.hpp"
#include "mvlevy/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mvlevy::cli {

std::vector<double> TimeGrid::values() const {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k)
        t[k] = count == 1 ? start
                          : start * std::pow(stop / start, static_cast<double>(k) / static_cast<double>(count - 1));
    return t;
}

namespace {

/// Walks one YAML map, converting fields and rejecting unknown keys.
class Fields {
public:
    Fields(const YAML::Node &node, std::string prefix, const std::set<std::string> &overridden)
        : node_(node), prefix_(std::move(prefix)), overridden_(overridden) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) fail(prefix_.empty() ? "<root>" : prefix_, node_, "expected a block of key: value fields");
    }

    std::string path(const std::string &key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    [[noreturn]] void fail(const std::string &field, const YAML::Node &at, const std::string &what) const {
        int line = -1;
        std::string where;
        if (overridden_.count(field)) {
            where = " (from --set)";
        } else if (at && at.Mark().line >= 0) {
            line = at.Mark().line + 1;
            where = " (line " + std::to_string(line) + ")";
        }
        throw ConfigError("field '" + field + "'" + where + ": " + what, field, line);
    }

    YAML::Node child(const std::string &key) {
        seen_.insert(key);
        return node_ && node_.IsMap() ? node_[key] : YAML::Node();
    }

    template <class T>
    bool get(const std::string &key, T &out) {
        const YAML::Node v = child(key);
        if (!v || v.IsNull()) return false;
        out = convert<T>(path(key), v);
        return true;
    }

    template <class T>
    T convert(const std::string &field, const YAML::Node &v) const {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.IsScalar()) fail(field, v, "expected a string");
            return v.Scalar();
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.IsScalar()) fail(field, v, "expected a number");
            try {
                return v.as<double>();
            } catch (const YAML::Exception &) {
                fail(field, v, "expected a number, got '" + v.Scalar() + "'");
            }
        } else if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t> ||
                             std::is_same_v<T, int>) {
            if (!v.IsScalar()) fail(field, v, "expected an integer");
            const std::string &s = v.Scalar();
            if (std::is_unsigned_v<T> && !s.empty() && s[0] == '-')
                fail(field, v, "expected a nonnegative integer, got '" + s + "'");
            try {
                return v.as<T>();
            } catch (const YAML::Exception &) {
                fail(field, v, "expected an integer, got '" + s + "'");
            }
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            return convert<double>(field, v);
        } else if constexpr (std::is_same_v<T, std::pair<double, double>>) {
            if (!v.IsSequence() || v.size() != 2) fail(field, v, "expected a pair [p, q]");
            return {convert<double>(field, v[0]), convert<double>(field, v[1])};
        } else {
            using E = typename T::value_type;
            if (!v.IsSequence()) fail(field, v, "expected a list");
            T out;
            for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<E>(field, v[i]));
            return out;
        }
    }

    const YAML::Node &node() const { return node_; }

    void finish() const {
        if (!node_ || !node_.IsMap()) return;
        for (const auto &kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) fail(path(key), kv.first, "unknown field");
        }
    }

    void require(bool ok, const std::string &key, const std::string &what) const {
        if (!ok) fail(path(key), node_ && node_.IsMap() && node_[key] ? node_[key] : node_, what);
    }

private:
    YAML::Node node_;
    std::string prefix_;
    const std::set<std::string> &overridden_;
    std::set<std::string> seen_;
};

const std::set<std::string> kModelKinds{"brownian",        "isotropic_stable", "cylindrical_stable",
                                        "tempered_stable", "truncated_stable", "superposition"};
const std::set<std::string> kDrifts{"zero", "linear", "mean_reverting", "sign", "singular_power"};
const std::set<std::string> kChecks{"gradient", "smoothing", "continuity"};

double model_alpha(const ModelConfig &m) {
    if (m.kind == "brownian") return 2.0;
    if (m.kind == "superposition") {
        double a = 0.0;
        for (const auto &c : m.components) a = std::max(a, model_alpha(c));
        return a;
    }
    return m.alpha;
}

void parse_model(Fields &f, ModelConfig &m, const std::set<std::string> &ov, std::size_t depth) {
    f.get("kind", m.kind);
    f.require(kModelKinds.count(m.kind) > 0, "kind", "unknown model kind '" + m.kind + "'");
    f.get("dim", m.dim);
    f.require(m.dim >= 1 && m.dim <= 8, "dim", "dimension must be between 1 and 8");
    f.get("alpha", m.alpha);
    f.get("variance", m.variance);
    f.get("rate", m.rate);
    f.get("height", m.height);
    const bool stable = m.kind != "brownian" && m.kind != "superposition";
    f.require(!stable || (m.alpha > 1.0 && m.alpha < 2.0), "alpha", "alpha must lie in (1, 2)");
    f.require(m.variance > 0.0, "variance", "variance must be positive");
    f.require(m.rate > 0.0, "rate", "tempering rate must be positive");
    f.require(m.height > 0.0, "height", "truncation height must be positive");
    const YAML::Node comps = f.child("components");
    if (comps && !comps.IsNull()) {
        if (!comps.IsSequence()) f.fail(f.path("components"), comps, "expected a list of model blocks");
        if (depth > 0) f.fail(f.path("components"), comps, "superpositions cannot be nested");
        for (std::size_t i = 0; i < comps.size(); ++i) {
            Fields c(comps[i], f.path("components") + "[" + std::to_string(i) + "]", ov);
            ModelConfig sub;
            sub.dim = m.dim;
            parse_model(c, sub, ov, depth + 1);
            c.require(sub.dim == m.dim, "dim", "component dimension differs from the superposition");
            c.finish();
            m.components.push_back(std::move(sub));
        }
    }
    f.require(m.kind != "superposition" || m.components.size() >= 2, "components",
              "a superposition needs at least two components");
    f.require(m.kind == "superposition" || m.components.empty(), "components",
              "only a superposition has components");
}

void apply_override(YAML::Node root, const std::string &assignment, std::set<std::string> &overridden) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value", assignment);
    const std::string key = assignment.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::Exception &e) {
        throw ConfigError("override '" + assignment + "': " + e.msg, key);
    }
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) {
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component", key);
        parts.push_back(part);
    }
    std::vector<YAML::Node> chain{root};
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        YAML::Node next = chain.back()[parts[i]];
        if (next.IsDefined() && !next.IsNull() && !next.IsMap())
            throw ConfigError("override '" + key + "': '" + parts[i] + "' is not a block", key);
        if (!next.IsDefined() || next.IsNull()) chain.back()[parts[i]] = YAML::Node(YAML::NodeType::Map);
        chain.push_back(chain.back()[parts[i]]);
    }
    chain.back()[parts.back()] = value;
    overridden.insert(key);
}

} // namespace

ExperimentConfig parse_config(const std::string &text, const std::vector<std::string> &overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        throw ConfigError("malformed config (line " + std::to_string(e.mark.line + 1) + "): " + e.msg, {},
                          e.mark.line + 1);
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    std::set<std::string> ov;
    if (!root.IsMap()) throw ConfigError("config must be a block of key: value fields", {}, 1);
    for (const auto &o : overrides) apply_override(root, o, ov);

    ExperimentConfig cfg;
    Fields top(root, "", ov);
    top.get("seed", cfg.seed);

    Fields model(top.child("model"), "model", ov);
    parse_model(model, cfg.model, ov, 0);
    model.finish();
    const double alpha = model_alpha(cfg.model);

    auto &d = cfg.drift;
    Fields drift(top.child("drift"), "drift", ov);
    drift.get("name", d.name);
    drift.require(kDrifts.count(d.name) > 0, "name", "unknown drift '" + d.name + "'");
    drift.get("rate", d.rate);
    drift.get("exponent", d.exponent);
    drift.get("radius", d.radius);
    drift.get("p", d.p);
    drift.get("q", d.q);
    drift.get("mollify", d.mollify);
    drift.require(d.mollify >= 0, "mollify", "mollification index must be nonnegative");
    drift.require(d.exponent > 0.0 && d.exponent * d.p < 1.0, "exponent",
                  "singular exponent a needs a > 0 and a p < 1");
    drift.require(d.radius > 0.0, "radius", "radius must be positive");
    drift.require(d.p >= 1.0 && d.q >= 1.0, "p", "envelope exponents must be at least 1");
    drift.require((d.name != "sign" && d.name != "singular_power") || cfg.model.dim == 1, "name",
                  "drift '" + d.name + "' is defined in dimension 1 only");
    drift.finish();

    auto &s = cfg.solver;
    Fields solver(top.child("solver"), "solver", ov);
    solver.get("horizon", s.horizon);
    solver.require(s.horizon > 0.0 && std::isfinite(s.horizon), "horizon", "horizon must be positive");
    double dt = 0.0;
    if (solver.get("dt", dt)) s.dt = dt;
    solver.require(!s.dt || (*s.dt > 0.0 && *s.dt <= s.horizon), "dt", "time step must lie in (0, horizon]");
    if (s.dt) {
        const double n = s.horizon / *s.dt;
        solver.require(std::abs(n - std::round(n)) <= 1e-9 * n, "dt", "horizon must be an integer number of steps");
    }
    solver.get("particles", s.particles);
    solver.require(s.particles >= 2, "particles", "at least 2 particles are required");
    solver.get("theta", s.theta);
    solver.require(s.theta >= 1.0 && s.theta < alpha, "theta", "theta must lie in [1, alpha)");
    solver.get("cutoff", s.cutoff);
    solver.require(s.cutoff > 0.0 && s.cutoff <= 1.0, "cutoff", "small-jump cutoff must lie in (0, 1]");
    solver.finish();

    auto &in = cfg.init;
    Fields init(top.child("init"), "init", ov);
    init.get("kind", in.kind);
    init.require(in.kind == "dirac" || in.kind == "normal", "kind", "init kind must be dirac or normal");
    init.get("mean", in.mean);
    init.require(in.mean.empty() || in.mean.size() == cfg.model.dim, "mean", "mean must have one entry per dimension");
    init.get("scale", in.scale);
    init.require(in.scale > 0.0, "scale", "scale must be positive");
    init.finish();

    auto &p = cfg.probe;
    Fields probe(top.child("probe"), "probe", ov);
    probe.get("ks_level", p.ks_level);
    probe.require(p.ks_level > 0.0 && p.ks_level < 1.0, "ks_level", "level must lie in (0, 1)");
    probe.get("snapshots", p.snapshots);
    probe.require(p.snapshots >= 1, "snapshots", "at least one snapshot is required");
    {
        Fields f(probe.child("picard"), "probe.picard", ov);
        f.get("tol", p.picard.tol);
        f.require(p.picard.tol > 0.0, "tol", "tolerance must be positive");
        f.get("max_iter", p.picard.max_iter);
        f.require(p.picard.max_iter >= 1, "max_iter", "at least one iteration is required");
        f.finish();
    }
    {
        auto &k = p.kernel;
        Fields f(probe.child("kernel"), "probe.kernel", ov);
        f.get("checks", k.checks);
        for (const auto &c : k.checks) f.require(kChecks.count(c) > 0, "checks", "unknown check '" + c + "'");
        f.get("p", k.p);
        f.require(k.p >= 1.0, "p", "p must be at least 1");
        f.get("orders", k.orders);
        for (int o : k.orders) f.require(o == 1 || o == 2, "orders", "derivative orders are 1 or 2");
        f.get("gamma", k.gamma);
        f.require(k.gamma > 0.0, "gamma", "gamma must be positive");
        f.get("beta", k.beta);
        f.get("theta", k.theta);
        f.require(k.theta >= 0.0, "theta", "theta must be nonnegative");
        {
            Fields t(f.child("times"), "probe.kernel.times", ov);
            // Unset ends follow the model: the kernel width t^{1/alpha} sweeps
            // [0.01, 0.25], stretched to two decades of t when that is shorter.
            if (!t.get("start", k.times.start)) k.times.start = std::pow(0.01, alpha);
            if (!t.get("stop", k.times.stop)) k.times.stop = std::max(100.0 * k.times.start, std::pow(0.25, alpha));
            t.get("count", k.times.count);
            t.require(k.times.start > 0.0 && k.times.stop > k.times.start, "stop", "need 0 < start < stop");
            t.require(k.times.count >= 2, "count", "at least two times are required");
            t.finish();
        }
        f.get("extent", k.extent);
        f.require(k.extent > 0.0, "extent", "extent must be positive");
        f.get("resolution", k.resolution);
        f.require(k.resolution >= 16 && (k.resolution & (k.resolution - 1)) == 0, "resolution",
                  "resolution must be a power of two >= 16");
        f.get("min_width", k.min_width);
        f.get("max_width", k.max_width);
        f.require(k.min_width > 0.0 && k.max_width >= k.min_width, "max_width", "need 0 < min_width <= max_width");
        f.get("tolerance", k.tolerance);
        f.require(k.tolerance > 0.0, "tolerance", "tolerance must be positive");
        f.finish();
    }
    {
        auto &k = p.krylov;
        Fields f(probe.child("krylov"), "probe.krylov", ov);
        f.get("cells", k.cells);
        for (const auto &[cp, cq] : k.cells)
            f.require(cp >= 1.0 && cq >= 1.0, "cells", "cell exponents must be at least 1");
        f.get("widths", k.widths);
        for (double w : k.widths) f.require(w > 0.0 && w <= 1.0, "widths", "widths must lie in (0, 1]");
        double r = 0.0;
        if (f.get("ball_radius", r)) k.ball_radius = r;
        f.require(!k.ball_radius || *k.ball_radius > 0.0, "ball_radius", "ball radius must be positive");
        f.get("extent", k.extent);
        f.require(k.extent > 0.0, "extent", "extent must be positive");
        f.get("resolution", k.resolution);
        f.require(k.resolution >= 16 && (k.resolution & (k.resolution - 1)) == 0, "resolution",
                  "resolution must be a power of two >= 16");
        f.get("max_over_median", k.max_over_median);
        f.require(k.max_over_median > 1.0, "max_over_median", "bound must exceed 1");
        f.finish();
    }
    {
        auto &a = p.admissible;
        Fields f(probe.child("admissible"), "probe.admissible", ov);
        f.get("alpha", a.alpha);
        for (double v : a.alpha) f.require(v > 1.0 && v <= 2.0, "alpha", "alpha must lie in (1, 2]");
        f.get("dim", a.dim);
        for (int v : a.dim) f.require(v >= 1, "dim", "dimension must be positive");
        f.get("p", a.p);
        for (double v : a.p) f.require(v >= 1.0, "p", "p must be at least 1");
        f.get("q", a.q);
        for (double v : a.q) f.require(v >= 1.0, "q", "q must be at least 1");
        f.finish();
    }
    probe.finish();

    Fields out(top.child("output"), "output", ov);
    out.get("dir", cfg.output.dir);
    out.require(!cfg.output.dir.empty(), "dir", "output directory must not be empty");
    out.get("format", cfg.output.format);
    out.require(cfg.output.format == "csv", "format", "the only output format is csv");
    out.finish();
    top.finish();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

// ------------------------------------------------------------ echo

namespace {

void emit_model(YAML::Emitter &e, const ModelConfig &m) {
    e << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << m.kind;
    e << YAML::Key << "dim" << YAML::Value << m.dim;
    e << YAML::Key << "alpha" << YAML::Value << format_double(m.alpha);
    e << YAML::Key << "variance" << YAML::Value << format_double(m.variance);
    e << YAML::Key << "rate" << YAML::Value << format_double(m.rate);
    e << YAML::Key << "height" << YAML::Value << format_double(m.height);
    if (!m.components.empty()) {
        e << YAML::Key << "components" << YAML::Value << YAML::BeginSeq;
        for (const auto &c : m.components) emit_model(e, c);
        e << YAML::EndSeq;
    }
    e << YAML::EndMap;
}

template <class T>
void emit_list(YAML::Emitter &e, const char *key, const std::vector<T> &v) {
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto &x : v) {
        if constexpr (std::is_same_v<T, double>)
            e << format_double(x);
        else
            e << x;
    }
    e << YAML::EndSeq;
}

} // namespace

std::string to_yaml(const ExperimentConfig &cfg) {
    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "seed" << YAML::Value << cfg.seed;
    e << YAML::Key << "model" << YAML::Value;
    emit_model(e, cfg.model);

    const auto &d = cfg.drift;
    e << YAML::Key << "drift" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << d.name;
    e << YAML::Key << "rate" << YAML::Value << format_double(d.rate);
    e << YAML::Key << "exponent" << YAML::Value << format_double(d.exponent);
    e << YAML::Key << "radius" << YAML::Value << format_double(d.radius);
    e << YAML::Key << "p" << YAML::Value << format_double(d.p);
    e << YAML::Key << "q" << YAML::Value << format_double(d.q);
    e << YAML::Key << "mollify" << YAML::Value << d.mollify;
    e << YAML::EndMap;

    const auto &s = cfg.solver;
    e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "horizon" << YAML::Value << format_double(s.horizon);
    e << YAML::Key << "dt" << YAML::Value << format_double(s.dt.value_or(s.horizon / 512.0));
    e << YAML::Key << "particles" << YAML::Value << s.particles;
    e << YAML::Key << "theta" << YAML::Value << format_double(s.theta);
    e << YAML::Key << "cutoff" << YAML::Value << format_double(s.cutoff);
    e << YAML::EndMap;

    e << YAML::Key << "init" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << cfg.init.kind;
    emit_list(e, "mean", cfg.init.mean);
    e << YAML::Key << "scale" << YAML::Value << format_double(cfg.init.scale);
    e << YAML::EndMap;

    const auto &p = cfg.probe;
    e << YAML::Key << "probe" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "ks_level" << YAML::Value << format_double(p.ks_level);
    e << YAML::Key << "snapshots" << YAML::Value << p.snapshots;
    e << YAML::Key << "picard" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "tol" << YAML::Value << format_double(p.picard.tol);
    e << YAML::Key << "max_iter" << YAML::Value << p.picard.max_iter;
    e << YAML::EndMap;
    const auto &k = p.kernel;
    e << YAML::Key << "kernel" << YAML::Value << YAML::BeginMap;
    emit_list(e, "checks", k.checks);
    e << YAML::Key << "p" << YAML::Value << format_double(k.p);
    emit_list(e, "orders", k.orders);
    e << YAML::Key << "gamma" << YAML::Value << format_double(k.gamma);
    e << YAML::Key << "beta" << YAML::Value << format_double(k.beta);
    e << YAML::Key << "theta" << YAML::Value << format_double(k.theta);
    e << YAML::Key << "times" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "start" << YAML::Value << format_double(k.times.start);
    e << YAML::Key << "stop" << YAML::Value << format_double(k.times.stop);
    e << YAML::Key << "count" << YAML::Value << k.times.count;
    e << YAML::EndMap;
    e << YAML::Key << "extent" << YAML::Value << format_double(k.extent);
    e << YAML::Key << "resolution" << YAML::Value << k.resolution;
    e << YAML::Key << "min_width" << YAML::Value << format_double(k.min_width);
    e << YAML::Key << "max_width" << YAML::Value << format_double(k.max_width);
    e << YAML::Key << "tolerance" << YAML::Value << format_double(k.tolerance);
    e << YAML::EndMap;
    const auto &kr = p.krylov;
    e << YAML::Key << "krylov" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "cells" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto &[cp, cq] : kr.cells)
        e << YAML::Flow << YAML::BeginSeq << format_double(cp) << format_double(cq) << YAML::EndSeq;
    e << YAML::EndSeq;
    emit_list(e, "widths", kr.widths);
    if (kr.ball_radius) e << YAML::Key << "ball_radius" << YAML::Value << format_double(*kr.ball_radius);
    e << YAML::Key << "extent" << YAML::Value << format_double(kr.extent);
    e << YAML::Key << "resolution" << YAML::Value << kr.resolution;
    e << YAML::Key << "max_over_median" << YAML::Value << format_double(kr.max_over_median);
    e << YAML::EndMap;
    const auto &a = p.admissible;
    e << YAML::Key << "admissible" << YAML::Value << YAML::BeginMap;
    emit_list(e, "alpha", a.alpha);
    emit_list(e, "dim", a.dim);
    emit_list(e, "p", a.p);
    emit_list(e, "q", a.q);
    e << YAML::EndMap;
    e << YAML::EndMap;

    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "dir" << YAML::Value << cfg.output.dir;
    e << YAML::Key << "format" << YAML::Value << cfg.output.format;
    e << YAML::EndMap;
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

// ------------------------------------------------------------ builders

LevyModel build_model(const ModelConfig &m) {
    if (m.kind == "brownian") return LevyModel::brownian(m.dim, m.variance);
    if (m.kind == "isotropic_stable") return LevyModel::isotropic_stable(m.dim, m.alpha);
    if (m.kind == "cylindrical_stable") return LevyModel::cylindrical_stable(m.dim, m.alpha);
    if (m.kind == "tempered_stable") return LevyModel::tempered_stable(m.dim, m.alpha, m.rate);
    if (m.kind == "truncated_stable") return LevyModel::truncated_stable(m.dim, m.alpha, m.height);
    if (m.kind == "superposition") {
        std::vector<LevyModel> parts;
        for (const auto &c : m.components) parts.push_back(build_model(c));
        return LevyModel::superposition(std::move(parts));
    }
    throw ConfigError("unknown model kind '" + m.kind + "'", "model.kind");
}

DriftSpec build_drift(const DriftConfig &d, std::size_t dim, double horizon) {
    DriftSpec base = [&] {
        if (d.name == "zero") return zero_drift(dim);
        if (d.name == "linear") return linear_drift(dim, d.rate);
        if (d.name == "mean_reverting") return mean_reverting_drift(dim, d.rate);
        if (d.name == "sign") return sign_drift();
        if (d.name == "singular_power") return singular_power_drift(d.exponent, d.radius, d.p, d.q, horizon);
        throw ConfigError("unknown drift '" + d.name + "'", "drift.name");
    }();
    if (d.mollify == 0) return base;
    MollifyOptions opts;
    opts.horizon = horizon;
    return mollify_drift(base, d.mollify, opts);
}

SolverConfig build_solver(const ExperimentConfig &cfg) {
    SolverConfig s = SolverConfig::with_default_step(cfg.solver.horizon, cfg.solver.particles, cfg.solver.theta, cfg.seed);
    if (cfg.solver.dt) s.dt = *cfg.solver.dt;
    s.small_jump_cutoff = cfg.solver.cutoff;
    return s;
}

EmpiricalMeasure build_init(const ExperimentConfig &cfg) {
    const std::size_t d = cfg.model.dim, n = cfg.solver.particles;
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    // A stream id far above any particle index keeps the initial law independent of the noise.
    RandomStream rng(cfg.seed, std::uint64_t{1} << 62);
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index a = 0; a < p.cols(); ++a) {
            const double m = cfg.init.mean.empty() ? 0.0 : cfg.init.mean[static_cast<std::size_t>(a)];
            p(i, a) = cfg.init.kind == "normal" ? m + cfg.init.scale * rng.normal() : m;
        }
    return EmpiricalMeasure(std::move(p));
}

} // namespace mvlevy::cli
