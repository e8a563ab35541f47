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

#include "mvlevy/cli/commands.hpp"

#include "mvlevy/cli/output.hpp"
#include "mvlevy/error.hpp"
#include "mvlevy/kernels.hpp"
#include "mvlevy/krylov.hpp"
#include "mvlevy/probes.hpp"
#include "mvlevy/sampler.hpp"
#include "mvlevy/stats.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace mvlevy::cli {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> position_columns(std::vector<std::string> lead, std::size_t dim) {
    for (std::size_t a = 1; a <= dim; ++a) lead.push_back("x" + std::to_string(a));
    return lead;
}

std::vector<std::size_t> snapshot_nodes(std::size_t steps, std::size_t snapshots) {
    std::vector<std::size_t> nodes;
    const std::size_t m = std::min(snapshots, steps);
    for (std::size_t j = 1; j <= m; ++j) nodes.push_back(steps * j / m);
    return nodes;
}

void write_ensembles(const fs::path &path, const std::string &header, const LawCurve &curve,
                     const std::vector<std::size_t> &nodes) {
    const std::size_t d = curve.at(0).dim();
    CsvWriter csv(path, header, position_columns({"t", "particle"}, d));
    for (std::size_t k : nodes) {
        const auto &mu = curve.at(k);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            csv << curve.times()[k] << i;
            for (std::size_t a = 0; a < d; ++a)
                csv << mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
            csv.end_row();
        }
    }
}

void require_regular(const DriftSpec &drift) {
    if (!drift.is_lipschitz())
        throw ArgumentError("drift '" + drift.name +
                            "' has no Lipschitz modulus; set drift.mollify to a positive index to use its "
                            "mollified family");
}

// Bounded measurable drifts can be time-stepped for occupation estimates; singular ones cannot.
void require_bounded(const DriftSpec &drift) {
    if (drift.is_lipschitz()) return;
    if (drift.envelope && drift.envelope->singular)
        throw ArgumentError("drift '" + drift.name +
                            "' is singular; set drift.mollify to a positive index to use its mollified family");
}

// ------------------------------------------------------------ simulate

int simulate(const ExperimentConfig &cfg, const std::string &header, std::ostream &log) {
    const auto model = build_model(cfg.model);
    const auto solver = build_solver(cfg);
    const auto drift = build_drift(cfg.drift, model.dim(), solver.horizon);
    require_regular(drift);
    const auto init = build_init(cfg);
    const auto times = solver.times();
    // Measure-dependent drifts are frozen at the initial law.
    const auto curve = solve_frozen(model, drift, LawCurve::constant(init, times), init, solver);
    const auto nodes = snapshot_nodes(solver.steps(), cfg.probe.snapshots);
    const fs::path dir = cfg.output.dir;
    write_ensembles(dir / "ensembles.csv", header, curve, nodes);

    // Drift-free runs are checked against X_0 + L_t sampled in one step.
    const bool drift_free = cfg.drift.name == "zero";
    const auto plan = std::make_shared<const SamplerPlan>(model, solver.small_jump_cutoff);
    CsvWriter ks(dir / "ks.csv", header, {"t", "axis", "statistic", "p_value", "status"});
    bool failed = false;
    const std::size_t d = model.dim(), n = init.size();
    for (std::size_t k : nodes) {
        Eigen::MatrixXd direct(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        if (drift_free) {
            kernels::parallel_for(n, [&](std::size_t i) {
                RandomStream rng(cfg.seed ^ 0x5DEECE66DULL, (std::uint64_t{1} << 40) + i);
                std::vector<double> x(d);
                for (std::size_t a = 0; a < d; ++a)
                    x[a] = init.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
                plan->add_increment(rng, times[k], x);
                for (std::size_t a = 0; a < d; ++a) direct(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = x[a];
            });
        }
        for (std::size_t a = 0; a < d; ++a) {
            if (!drift_free) {
                ks << times[k] << a + 1 << std::nan("") << std::nan("") << "SKIP";
                ks.end_row();
                continue;
            }
            std::vector<double> em(n), ref(n);
            for (std::size_t i = 0; i < n; ++i) {
                em[i] = curve.at(k).particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
                ref[i] = direct(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
            }
            const auto r = ks_two_sample(em, ref);
            const bool pass = r.p_value >= cfg.probe.ks_level;
            failed |= !pass;
            ks << times[k] << a + 1 << r.statistic << r.p_value << (pass ? "PASS" : "FAIL");
            ks.end_row();
        }
    }
    log << "simulate: " << n << " particles of " << model.describe() << " with drift " << drift.name << " to T = "
        << format_double(solver.horizon) << (drift_free ? (failed ? ", KS FAIL" : ", KS PASS") : "") << "\n";
    return failed ? ProbeFailure : Success;
}

// --------------------------------------------------------------- picard

int picard(const ExperimentConfig &cfg, const std::string &header, std::ostream &log) {
    const auto model = build_model(cfg.model);
    const auto solver = build_solver(cfg);
    const auto drift = build_drift(cfg.drift, model.dim(), solver.horizon);
    require_regular(drift);
    const auto init = build_init(cfg);
    const auto state = picard_iterate(model, drift, init, solver, cfg.probe.picard.tol, cfg.probe.picard.max_iter);
    const double residual = fixed_point_residual(model, drift, init, state.current, solver);
    const fs::path dir = cfg.output.dir;

    CsvWriter gaps(dir / "picard_gaps.csv", header, {"n", "gap", "ratio", "theta_moment"});
    for (std::size_t n = 0; n < state.gaps.size(); ++n) {
        const double ratio = n > 0 && state.gaps[n - 1] > 0.0 ? state.gaps[n] / state.gaps[n - 1] : std::nan("");
        gaps << n + 1 << state.gaps[n] << ratio << state.theta_moments[n];
        gaps.end_row();
    }
    write_ensembles(dir / "picard_ensembles.csv", header, state.current,
                    snapshot_nodes(solver.steps(), cfg.probe.snapshots));

    YAML::Emitter e;
    e << YAML::BeginMap;
    e << YAML::Key << "iteration" << YAML::Value << state.iteration;
    e << YAML::Key << "converged" << YAML::Value << state.converged;
    e << YAML::Key << "diverged" << YAML::Value << state.diverged;
    e << YAML::Key << "tolerance" << YAML::Value << format_double(cfg.probe.picard.tol);
    e << YAML::Key << "final_gap" << YAML::Value << format_double(state.gaps.back());
    e << YAML::Key << "epsilon" << YAML::Value << format_double(state.epsilon);
    e << YAML::Key << "k1" << YAML::Value << format_double(state.k1);
    e << YAML::Key << "t0" << YAML::Value << format_double(state.t0);
    e << YAML::Key << "fixed_point_residual" << YAML::Value << format_double(residual);
    e << YAML::Key << "gaps" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double g : state.gaps) e << format_double(g);
    e << YAML::EndSeq;
    e << YAML::Key << "theta_moments" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double m : state.theta_moments) e << format_double(m);
    e << YAML::EndSeq;
    e << YAML::Key << "report" << YAML::Value << state.report;
    e << YAML::EndMap;
    write_text(dir / "picard_summary.yaml", header, std::string(e.c_str()) + "\n");

    log << "picard: " << state.report << ", fixed-point residual " << format_double(residual) << "\n";
    return state.diverged ? ProbeFailure : Success;
}

// --------------------------------------------------------- kernel-probe

int kernel_probe(const ExperimentConfig &cfg, const std::string &header, std::ostream &log) {
    const auto model = build_model(cfg.model);
    const auto &k = cfg.probe.kernel;
    const auto grid = GridSpec::cube(model.dim(), k.extent, k.resolution);
    const auto panel = dilation_panel(grid, k.min_width, k.max_width);
    const auto times = k.times.values();
    const fs::path dir = cfg.output.dir;

    struct Row {
        std::string check;
        double parameter;
        RateProbeReport report;
    };
    std::vector<Row> rows;
    for (const auto &check : k.checks) {
        if (check == "gradient") {
            for (int order : k.orders)
                rows.push_back({check, static_cast<double>(order), gradient_bound_probe(model, k.p, times, panel, order)});
        } else if (check == "smoothing") {
            rows.push_back({check, k.gamma, smoothing_probe(model, k.p, k.gamma, k.beta, times, panel)});
        } else {
            rows.push_back({check, k.theta, strong_continuity_probe(model, k.p, k.theta, times, panel)});
        }
    }

    CsvWriter detail(dir / "kernel_probe.csv", header, {"check", "parameter", "t", "ratio", "fitted"});
    CsvWriter summary(dir / "kernel_probe_summary.csv", header,
                      {"check", "parameter", "p", "slope", "expected", "tolerance", "status"});
    bool failed = false;
    for (const auto &r : rows) {
        for (std::size_t i = 0; i < r.report.times.size(); ++i) {
            detail << r.check << r.parameter << r.report.times[i] << r.report.ratios[i]
                   << (r.report.fitted[i] ? 1 : 0);
            detail.end_row();
        }
        const bool pass = std::abs(r.report.slope - r.report.expected_slope) <= k.tolerance;
        failed |= !pass;
        summary << r.check << r.parameter << k.p << r.report.slope << r.report.expected_slope << k.tolerance
                << (pass ? "PASS" : "FAIL");
        summary.end_row();
        log << "kernel-probe " << r.check << " (" << format_double(r.parameter) << "): slope "
            << format_double(r.report.slope) << ", expected " << format_double(r.report.expected_slope)
            << (pass ? " PASS" : " FAIL") << "\n";
    }
    return failed ? ProbeFailure : Success;
}

// --------------------------------------------------------- krylov-check

int krylov_check(const ExperimentConfig &cfg, const std::string &header, std::ostream &log) {
    const auto model = build_model(cfg.model);
    const auto solver = build_solver(cfg);
    const auto drift = build_drift(cfg.drift, model.dim(), solver.horizon);
    require_bounded(drift);
    const auto &kr = cfg.probe.krylov;
    const auto grid = GridSpec::cube(model.dim(), kr.extent, kr.resolution);
    const auto panel = standard_panel(grid, solver.horizon);
    const auto init = build_init(cfg);
    const auto law = LawCurve::constant(init, solver.times());
    KrylovOptions options;
    options.ball_radius = kr.ball_radius;
    const auto mean = init.mean();
    options.start.assign(mean.data(), mean.data() + mean.size());
    options.law = &law;
    const auto cells = krylov_sweep(model, drift, kr.cells, panel, kr.widths, grid, solver, options);

    const fs::path dir = cfg.output.dir;
    CsvWriter detail(dir / "krylov.csv", header,
                     {"f_id", "p", "q", "gate", "lhs", "drift_mass", "f_norm", "ratio"});
    CsvWriter sweep(dir / "krylov_sweep.csv", header,
                    {"p", "q", "gate", "gate_message", "panel_max", "panel_median", "trend_slope", "status"});
    bool failed = false;
    for (const auto &c : cells) {
        for (const auto *report : {&c.report, &c.trend})
            for (const auto &e : report->panel) {
                detail << e.f_id << e.p << e.q << (e.gate ? "admissible" : "inadmissible") << e.lhs << e.drift_mass
                       << e.f_norm << e.ratio;
                detail.end_row();
            }
        std::string status = "FLAGGED";
        if (c.gate) {
            const bool pass = c.panel_max <= kr.max_over_median * c.panel_median;
            failed |= !pass;
            status = pass ? "PASS" : "FAIL";
        }
        sweep << c.p << c.q << (c.gate ? "admissible" : "inadmissible") << c.gate_message << c.panel_max
              << c.panel_median << c.trend_slope << status;
        sweep.end_row();
        log << "krylov-check (p, q) = (" << format_double(c.p) << ", " << format_double(c.q) << "): "
            << c.gate_message << ", panel max/median " << format_double(c.panel_max / c.panel_median)
            << ", trend slope " << format_double(c.trend_slope) << " " << status << "\n";
    }
    return failed ? ProbeFailure : Success;
}

// ----------------------------------------------------------- admissible

std::string verdict(const AdmissibleResult &r) {
    if (!r.admissible) return "inadmissible";
    std::ostringstream os;
    os << "admissible, \xCE\xB3\xE2\x88\x88(" << r.gamma_window->first << "," << r.gamma_window->second << ")";
    return os.str();
}

int admissible(const ExperimentConfig &cfg, const std::string &header, std::ostream &log) {
    const auto &a = cfg.probe.admissible;
    CsvWriter csv(fs::path(cfg.output.dir) / "admissible.csv", header,
                  {"alpha", "dim", "p", "q", "admissible", "gamma_low", "gamma_high", "krylov_gate", "verdict"});
    for (double alpha : a.alpha)
        for (int dim : a.dim)
            for (double p : a.p)
                for (double q : a.q) {
                    const auto r = admissible_pq(alpha, dim, p, q);
                    const bool gate = krylov_pq_check(alpha, dim, p, q);
                    const double lo = r.gamma_window ? r.gamma_window->first : std::nan("");
                    const double hi = r.gamma_window ? r.gamma_window->second : std::nan("");
                    csv << alpha << dim << p << q << (r.admissible ? 1 : 0) << lo << hi << (gate ? 1 : 0)
                        << verdict(r);
                    csv.end_row();
                    log << "alpha=" << format_double(alpha) << " d=" << dim << " p=" << format_double(p)
                        << " q=" << format_double(q) << ": " << verdict(r) << "\n";
                }
    return Success;
}

} // namespace

int run_command(const std::string &command, const ExperimentConfig &cfg, std::ostream &log) {
    const std::string header = make_header(command, to_yaml(cfg));
    if (command == "simulate") return simulate(cfg, header, log);
    if (command == "picard") return picard(cfg, header, log);
    if (command == "kernel-probe") return kernel_probe(cfg, header, log);
    if (command == "krylov-check") return krylov_check(cfg, header, log);
    if (command == "admissible") return admissible(cfg, header, log);
    throw ConfigError("unknown subcommand '" + command + "'");
}

int run_guarded(const std::string &command, const ExperimentConfig &cfg, std::ostream &log, std::ostream &err) {
    try {
        return run_command(command, cfg, log);
    } catch (const NumericalError &e) {
        err << "mvlevy: " << e.category() << " error: " << e.what() << "\n";
        return NumericalFailure;
    } catch (const Error &e) {
        err << "mvlevy: " << e.category() << " error: " << e.what() << "\n";
        return ConfigFailure;
    }
}

} // namespace mvlevy::cli
