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

#include "mvlevy/sampler.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mvlevy {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd cholesky(const Eigen::MatrixXd &m, const char *what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + ": Cholesky failed");
    return llt.matrixL();
}

} // namespace

double symmetric_stable(RandomStream &rng, double alpha) {
    const double v = kPi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

double positive_stable(RandomStream &rng, double beta) {
    const double u = rng.uniform();
    const double w = rng.exponential();
    const double a = std::sin((1.0 - beta) * kPi * u) *
                     std::pow(std::sin(beta * kPi * u), beta / (1.0 - beta)) /
                     std::pow(std::sin(kPi * u), 1.0 / (1.0 - beta));
    return std::pow(a / w, (1.0 - beta) / beta);
}

SamplerPlan::SamplerPlan(const LevyModel &model, double cutoff, std::size_t budget)
    : model_(model), cutoff_(cutoff), budget_(budget) {
    if (!(cutoff > 0.0 && cutoff <= 1.0))
        throw ArgumentError("small-jump cutoff must lie in (0, 1]");
    const auto d = static_cast<Eigen::Index>(model_.dim());
    if (model_.has_gaussian()) gaussian_chol_ = cholesky(model_.gaussian_cov(), "gaussian covariance");
    for (const auto &c : model_.components()) components_.emplace_back(c, cutoff, budget);
    if (!model_.jump()) return;

    const JumpSpec &jump = *model_.jump();
    const auto &mu = jump.spherical();
    alpha_ = jump.alpha();
    const bool pure_stable = jump.rho().kind() == RadialModulator::Kind::Unit;

    if (pure_stable && mu.is_uniform() && mu.dim() >= 2) {
        isotropic_rate_ = mu.total_mass() * jump.cos_constant() * sphere_abs_moment(mu.dim(), alpha_);
        return;
    }
    if (pure_stable && jump.is_symmetric()) {
        // Group ±e atoms: each pair contributes W K |<ξ,e>|^α to Φ.
        for (const auto &atom : mu.atoms()) {
            Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(atom.direction.data(), d);
            auto same_line = [&](const Axis &axis) {
                return std::abs(std::abs(axis.direction.dot(e)) - 1.0) <= 1e-12;
            };
            auto it = std::find_if(axes_.begin(), axes_.end(), same_line);
            if (it == axes_.end())
                axes_.push_back({e, atom.weight * jump.cos_constant()});
            else
                it->rate += atom.weight * jump.cos_constant();
        }
        return;
    }

    CompoundPoisson cp{jump, 0.0, {}, {}, {}, 0.0};
    const double eps = cutoff_;
    cp.proposal_rate = mu.total_mass() * jump.rho().sup() * std::pow(eps, -alpha_) / alpha_;
    if (!mu.is_uniform() || mu.dim() == 1) {
        double acc = 0.0;
        for (const auto &atom : mu.atoms()) cp.cumulative.push_back(acc += atom.weight);
    }
    cp.small_chol = cholesky(mu.second_moment() * jump.small_jump_variance(eps), "small-jump covariance");
    cp.drift = -mu.first_moment() * jump.mid_first_moment(eps);
    cp.fourth_moment_bound = mu.total_mass() * jump.rho().sup() * std::pow(eps, 4.0 - alpha_) / (4.0 - alpha_);
    poisson_.push_back(std::move(cp));
}

void SamplerPlan::add_compound_poisson(const CompoundPoisson &cp, RandomStream &rng, double dt,
                                       std::span<double> out) const {
    const auto d = out.size();
    const JumpSpec &jump = cp.jump;
    const auto &mu = jump.spherical();
    const double sup = jump.rho().sup();

    // Gaussian replacement of the small jumps and the compensator.
    const double sqdt = std::sqrt(dt);
    std::vector<double> z(d);
    for (auto &v : z) v = rng.normal();
    for (std::size_t i = 0; i < d; ++i) {
        double acc = cp.drift[static_cast<Eigen::Index>(i)] * dt;
        for (std::size_t k = 0; k <= i; ++k)
            acc += cp.small_chol(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * sqdt * z[k];
        out[i] += acc;
    }

    // Envelope proposals arrive as a Poisson process of rate `proposal_rate`.
    const double horizon = cp.proposal_rate * dt;
    double clock = rng.exponential();
    std::size_t proposals = 0;
    std::vector<double> dir(d);
    while (clock < horizon) {
        if (++proposals > budget_)
            throw NumericalError("jump sampler exceeded its proposal budget (" + std::to_string(budget_) +
                                 ")", static_cast<double>(proposals));
        const double r = cutoff_ * std::pow(rng.uniform(), -1.0 / alpha_);
        const bool accept = jump.rho()(r) >= sup * rng.uniform();
        if (accept) {
            if (cp.cumulative.empty()) {
                double norm2 = 0.0;
                for (auto &v : dir) {
                    v = rng.normal();
                    norm2 += v * v;
                }
                const double scale = r / std::sqrt(norm2);
                for (std::size_t i = 0; i < d; ++i) out[i] += scale * dir[i];
            } else {
                const double pick = rng.uniform() * cp.cumulative.back();
                auto it = std::upper_bound(cp.cumulative.begin(), cp.cumulative.end(), pick);
                const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cp.cumulative.begin()),
                                                       cp.cumulative.size() - 1);
                const auto &e = mu.atoms()[idx].direction;
                for (std::size_t i = 0; i < d; ++i) out[i] += r * e[i];
            }
        }
        clock += rng.exponential();
    }
}

void SamplerPlan::add_increment(RandomStream &rng, double dt, std::span<double> out) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("increment length dt must be positive");
    if (out.size() != dim()) throw ArgumentError("increment buffer has the wrong dimension");
    const auto d = out.size();

    if (gaussian_chol_.size() > 0) {
        const double sqdt = std::sqrt(dt);
        std::vector<double> z(d);
        for (auto &v : z) v = rng.normal();
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k <= i; ++k)
                acc += gaussian_chol_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * z[k];
            out[i] += sqdt * acc;
        }
    }
    if (isotropic_rate_ > 0.0) {
        // Sub-Gaussian representation: sqrt(A) G with G ~ N(0, 2I) and A positive (α/2)-stable.
        const double scale = std::pow(isotropic_rate_ * dt, 1.0 / alpha_) *
                             std::sqrt(2.0 * positive_stable(rng, alpha_ / 2));
        for (std::size_t i = 0; i < d; ++i) out[i] += scale * rng.normal();
    }
    for (const auto &axis : axes_) {
        const double x = std::pow(axis.rate * dt, 1.0 / alpha_) * symmetric_stable(rng, alpha_);
        for (std::size_t i = 0; i < d; ++i) out[i] += x * axis.direction[static_cast<Eigen::Index>(i)];
    }
    for (const auto &cp : poisson_) add_compound_poisson(cp, rng, dt, out);
    for (const auto &c : components_) c.add_increment(rng, dt, out);
}

double SamplerPlan::cutoff_bias(double t, std::span<const double> xi) const {
    double norm2 = 0.0;
    for (double x : xi) norm2 += x * x;
    double bias = 0.0;
    for (const auto &cp : poisson_) bias += t * norm2 * norm2 / 24.0 * cp.fourth_moment_bound;
    for (const auto &c : components_) bias += c.cutoff_bias(t, xi);
    return bias;
}

IncrementStream::IncrementStream(const LevyModel &model, std::uint64_t seed, std::uint64_t stream_id,
                                 double cutoff)
    : plan_(std::make_shared<const SamplerPlan>(model, cutoff)), rng_(seed, stream_id) {}

IncrementStream::IncrementStream(std::shared_ptr<const SamplerPlan> plan, std::uint64_t seed,
                                 std::uint64_t stream_id)
    : plan_(std::move(plan)), rng_(seed, stream_id) {
    if (!plan_) throw ArgumentError("increment stream needs a sampler plan");
}

std::vector<double> IncrementStream::sample_increment(double dt) {
    std::vector<double> out(plan_->dim(), 0.0);
    plan_->add_increment(rng_, dt, out);
    return out;
}

void IncrementStream::sample_increment(double dt, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    plan_->add_increment(rng_, dt, out);
}

Eigen::MatrixXd PathGrid::positions() const {
    Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(increments.rows() + 1, increments.cols());
    for (Eigen::Index k = 0; k < increments.rows(); ++k) pos.row(k + 1) = pos.row(k) + increments.row(k);
    return pos;
}

PathGrid sample_path(IncrementStream &stream, std::span<const double> times) {
    if (times.size() < 2 || times.front() != 0.0)
        throw ArgumentError("path times must start at 0 and contain at least two points");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw ArgumentError("path times must be strictly increasing");
    const auto d = stream.model().dim();
    PathGrid path;
    path.times.assign(times.begin(), times.end());
    path.increments.resize(static_cast<Eigen::Index>(times.size() - 1), static_cast<Eigen::Index>(d));
    std::vector<double> inc(d);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        stream.sample_increment(times[k + 1] - times[k], inc);
        for (std::size_t i = 0; i < d; ++i)
            path.increments(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = inc[i];
    }
    return path;
}

MomentScalingReport moment_scaling_probe(const LevyModel &model, std::span<const double> t_grid,
                                         std::size_t num_samples, std::uint64_t seed, double cutoff) {
    if (t_grid.size() < 4) throw ArgumentError("moment scaling probe needs at least 4 times");
    if (num_samples < 2) throw ArgumentError("moment scaling probe needs at least 2 samples");
    const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*lo > 0.0)) throw ArgumentError("probe times must be positive");
    if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw ArgumentError("probe times must span at least two decades");

    auto plan = std::make_shared<const SamplerPlan>(model, cutoff);
    MomentScalingReport report;
    report.alpha = model.alpha();
    std::vector<double> inc(model.dim());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        IncrementStream stream(plan, seed, j);
        std::vector<double> norms(num_samples);
        for (auto &n : norms) {
            stream.sample_increment(t_grid[j], inc);
            double s = 0.0;
            for (double x : inc) s += x * x;
            n = std::sqrt(s);
        }
        const auto [mean, var] = mean_and_variance(norms);
        report.times.push_back(t_grid[j]);
        report.mean_abs.push_back(mean);
        report.std_error.push_back(std::sqrt(var / static_cast<double>(num_samples)));
    }
    const auto fit = loglog_fit(report.times, report.mean_abs);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.constant = std::exp(fit.intercept);
    report.passed = report.slope <= 1.0 / report.alpha + 0.1 && std::isfinite(report.constant);
    return report;
}

} // namespace mvlevy
