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

#include "mvlevy/solver.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace mvlevy {

// ------------------------------------------------------------- config

SolverConfig SolverConfig::with_default_step(double horizon, std::size_t particles, double theta,
                                             std::uint64_t seed) {
    SolverConfig cfg;
    cfg.horizon = horizon;
    cfg.dt = horizon / 512.0;
    cfg.particles = particles;
    cfg.theta = theta;
    cfg.seed = seed;
    return cfg;
}

std::size_t SolverConfig::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

std::vector<double> SolverConfig::times() const {
    const std::size_t n = steps();
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * dt;
    t[n] = horizon;
    return t;
}

void SolverConfig::validate(const LevyModel &model) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("solver time step must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("solver horizon must be positive");
    if (particles < 2) throw ArgumentError("solver needs at least 2 particles");
    const double alpha = model.alpha();
    if (!(theta >= 1.0 && theta < alpha))
        throw ArgumentError("theta must lie in [1, alpha)");
    const double n = horizon / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n) || std::round(n) < 1.0)
        throw ArgumentError("horizon must be an integer number of time steps");
}

// ---------------------------------------------------------- law curves

LawCurve::LawCurve(std::vector<double> times, std::vector<EmpiricalMeasure> laws)
    : times_(std::move(times)), laws_(std::move(laws)) {
    if (times_.size() != laws_.size()) throw ArgumentError("law curve needs one law per time node");
    for (std::size_t k = 1; k < times_.size(); ++k)
        if (!(times_[k] > times_[k - 1])) throw ArgumentError("law curve times must increase");
}

LawCurve LawCurve::constant(const EmpiricalMeasure &law, std::span<const double> times) {
    return LawCurve(std::vector<double>(times.begin(), times.end()), std::vector<EmpiricalMeasure>(times.size(), law));
}

// --------------------------------------------------------------- solver

namespace {

std::string describe_point(double t, std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << t << ", x=(";
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ")";
    return os.str();
}

void check_law_curve(const LawCurve &law, std::span<const double> times, std::size_t dim) {
    if (law.size() != times.size())
        throw ArgumentError("law curve has " + std::to_string(law.size()) + " nodes, the solver grid has " +
                            std::to_string(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(law.times()[k] - times[k]) > 1e-12 * std::max(1.0, times[k]))
            throw ArgumentError("law curve is not defined at solver node " + std::to_string(k));
        if (law.at(k).dim() != dim) throw ArgumentError("law curve dimension does not match the model");
    }
}

} // namespace

LawCurve solve_frozen(const LevyModel &model, const DriftSpec &drift, const LawCurve &law,
                      const EmpiricalMeasure &init, const SolverConfig &cfg) {
    cfg.validate(model);
    const std::size_t d = model.dim();
    if (drift.dim != d) throw ArgumentError("drift dimension does not match the model");
    if (init.dim() != d) throw ArgumentError("initial law dimension does not match the model");
    if (init.size() != cfg.particles)
        throw ArgumentError("initial ensemble has " + std::to_string(init.size()) + " particles, expected " +
                            std::to_string(cfg.particles));
    const auto times = cfg.times();
    check_law_curve(law, times, d);
    const std::size_t steps = cfg.steps();

    std::vector<BoundDrift> bound(steps);
    for (std::size_t k = 0; k < steps; ++k) bound[k] = drift.bind(times[k], law.at(k));

    const auto plan = std::make_shared<const SamplerPlan>(model, cfg.small_jump_cutoff);
    std::vector<Eigen::MatrixXd> nodes(steps + 1, Eigen::MatrixXd(static_cast<Eigen::Index>(cfg.particles),
                                                                  static_cast<Eigen::Index>(d)));
    nodes[0] = init.particles();

    auto advance = [&](std::size_t i) {
        RandomStream rng(cfg.seed, i);
        const auto row = static_cast<Eigen::Index>(i);
        std::vector<double> x(d), b(d);
        for (std::size_t a = 0; a < d; ++a) x[a] = init.particles()(row, static_cast<Eigen::Index>(a));
        for (std::size_t k = 0; k < steps; ++k) {
            bound[k](x, b);
            const double h = times[k + 1] - times[k];
            for (std::size_t a = 0; a < d; ++a) {
                if (!std::isfinite(b[a]))
                    throw NumericalError("drift '" + drift.name + "' is not finite at " + describe_point(times[k], x));
                x[a] += b[a] * h;
            }
            plan->add_increment(rng, h, x);
            for (std::size_t a = 0; a < d; ++a) nodes[k + 1](row, static_cast<Eigen::Index>(a)) = x[a];
        }
    };
    if (cfg.parallel) {
        kernels::parallel_for(cfg.particles, advance);
    } else {
        for (std::size_t i = 0; i < cfg.particles; ++i) advance(i);
    }

    std::vector<EmpiricalMeasure> laws;
    laws.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k == 0 || init.uniform_weights())
            laws.emplace_back(k == 0 ? init : EmpiricalMeasure(std::move(nodes[k])));
        else
            laws.emplace_back(std::move(nodes[k]), init.weights());
    }
    return LawCurve(times, std::move(laws));
}

GapProfile sup_gap(const LawCurve &a, const LawCurve &b, double theta) {
    if (a.size() != b.size()) throw ArgumentError("gap needs law curves on the same nodes");
    std::vector<double> w(a.size());
    kernels::parallel_for(a.size(), [&](std::size_t k) { w[k] = wasserstein_theta(a.at(k), b.at(k), theta); });
    GapProfile g;
    g.running.resize(w.size());
    double run = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) g.running[k] = run = std::max(run, w[k]);
    g.sup = run;
    return g;
}

// --------------------------------------------------------------- Picard

double contraction_estimate(std::span<const double> gaps) {
    std::vector<double> ratios;
    for (std::size_t n = 1; n < gaps.size(); ++n)
        if (gaps[n] > 0.0 && gaps[n - 1] > 0.0) ratios.push_back(gaps[n] / gaps[n - 1]);
    if (ratios.empty()) return 0.0;
    // The first ratio is transient dominated; keep it only when it is alone.
    const std::size_t first = ratios.size() > 1 ? 1 : 0;
    double acc = 0.0;
    for (std::size_t k = first; k < ratios.size(); ++k) acc += std::log(ratios[k]);
    return std::exp(acc / static_cast<double>(ratios.size() - first));
}

double fit_k1(const std::vector<std::vector<double>> &profiles, std::span<const double> times, double theta) {
    double num = 0.0, den = 0.0;
    for (std::size_t n = 1; n < profiles.size(); ++n)
        for (std::size_t k = 1; k < times.size(); ++k) {
            const double prev = profiles[n - 1][k], cur = profiles[n][k];
            if (!(prev > 0.0)) continue;
            const double ratio = std::pow(cur / prev, theta);
            const double tau = std::pow(times[k], theta / 2.0);
            num += ratio * tau;
            den += tau * tau;
        }
    return den > 0.0 ? num / den : 0.0;
}

PicardState picard_iterate(const LevyModel &model, const DriftSpec &drift, const EmpiricalMeasure &init,
                           const SolverConfig &cfg, double tol, std::size_t max_iter) {
    if (!drift.is_lipschitz())
        throw ArgumentError("Picard iteration needs a Lipschitz drift; mollify '" + drift.name + "' first");
    if (!(tol > 0.0)) throw ArgumentError("Picard tolerance must be positive");
    if (max_iter < 1) throw ArgumentError("Picard needs at least one iteration");
    cfg.validate(model);
    const auto times = cfg.times();

    PicardState state;
    LawCurve previous = LawCurve::constant(init, times);
    std::size_t rising = 0;
    for (std::size_t n = 1; n <= max_iter; ++n) {
        LawCurve next = solve_frozen(model, drift, previous, init, cfg);
        auto gap = sup_gap(next, previous, cfg.theta);
        double moment = 0.0;
        for (const auto &mu : next.laws()) moment = std::max(moment, theta_moment(mu, cfg.theta));
        state.gaps.push_back(gap.sup);
        state.profiles.push_back(std::move(gap.running));
        state.theta_moments.push_back(moment);
        state.iteration = n;
        previous = std::move(next);
        if (gap.sup < tol) {
            state.converged = true;
            break;
        }
        if (n >= 3) {
            rising = state.gaps[n - 1] >= state.gaps[n - 2] ? rising + 1 : 0;
            if (rising >= 3) {
                state.diverged = true;
                break;
            }
        }
    }
    state.current = std::move(previous);
    state.epsilon = contraction_estimate(state.gaps);
    state.k1 = fit_k1(state.profiles, times, cfg.theta);
    state.t0 = state.k1 > 0.0 ? std::min(cfg.horizon, std::pow(state.k1, -2.0 / cfg.theta)) : cfg.horizon;

    std::ostringstream os;
    os.precision(6);
    if (state.converged)
        os << "converged after " << state.iteration << " iterations, gap " << state.gaps.back();
    else if (state.diverged)
        os << "diverged: gap ratio >= 1 for 3 consecutive iterations ending at n = " << state.iteration
           << ", gap " << state.gaps.back();
    else
        os << "not converged after " << state.iteration << " iterations, gap " << state.gaps.back();
    os << ", epsilon " << state.epsilon;
    state.report = os.str();
    return state;
}

double fixed_point_residual(const LevyModel &model, const DriftSpec &drift, const EmpiricalMeasure &init,
                            const LawCurve &curve, const SolverConfig &cfg) {
    return sup_gap(solve_frozen(model, drift, curve, init, cfg), curve, cfg.theta).sup;
}

// --------------------------------------------------------- integrability

double drift_integral(const DriftSpec &drift, const LawCurve &paths, double delta) {
    if (!(delta > 0.0)) throw ArgumentError("integrability exponent must be positive");
    if (paths.size() < 2) throw ArgumentError("drift integral needs at least two time nodes");
    std::vector<double> node(paths.size());
    kernels::parallel_for(paths.size(), [&](std::size_t k) {
        const auto &mu = paths.at(k);
        const auto b = drift.bind(paths.times()[k], mu);
        const std::size_t d = mu.dim();
        std::vector<double> x(d), v(d), terms(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            for (std::size_t a = 0; a < d; ++a)
                x[a] = mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
            b(x, v);
            double r = 0.0;
            for (double c : v) r += c * c;
            terms[i] = mu.weights()[i] * std::pow(std::sqrt(r), delta);
        }
        node[k] = kernels::ordered_sum(terms);
    });
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < node.size(); ++k)
        total += 0.5 * (node[k] + node[k + 1]) * (paths.times()[k + 1] - paths.times()[k]);
    return total;
}

IntegrabilityReport drift_integrability_report(std::span<const DriftSpec> drifts, std::span<const LawCurve> ensembles,
                                               double delta) {
    if (drifts.size() != ensembles.size()) throw ArgumentError("one ensemble per drift is required");
    IntegrabilityReport r;
    for (std::size_t n = 0; n < drifts.size(); ++n) {
        r.values.push_back(drift_integral(drifts[n], ensembles[n], delta));
        r.value = std::max(r.value, r.values.back());
    }
    const auto &v = r.values;
    const std::size_t m = v.size();
    r.unbounded_growth = m >= 3 && v[m - 1] >= 2.0 * v[m - 2] && v[m - 2] >= 2.0 * v[m - 3] && v[m - 3] > 0.0;
    return r;
}

} // namespace mvlevy
