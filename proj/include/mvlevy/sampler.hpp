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

#pragma once

#include "mvlevy/levy_model.hpp"
#include "mvlevy/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace mvlevy {

inline constexpr double kDefaultSmallJumpCutoff = 1e-3;

/// Immutable, thread-shareable sampling recipe for one model and cutoff.
/// Built once, then used by any number of IncrementStreams.
class SamplerPlan {
public:
    /// Throws ArgumentError unless cutoff ∈ (0, 1].
    explicit SamplerPlan(const LevyModel &model, double small_jump_cutoff = kDefaultSmallJumpCutoff,
                         std::size_t proposal_budget = std::size_t{1} << 26);

    const LevyModel &model() const { return model_; }
    double small_jump_cutoff() const { return cutoff_; }
    std::size_t dim() const { return model_.dim(); }

    /// Adds one draw of L_dt to `out`.
    void add_increment(RandomStream &rng, double dt, std::span<double> out) const;

    /// Upper bound on |E e^{i<ξ,L_t>} - e^{-tΦ(ξ)}| caused by the Gaussian
    /// replacement of jumps below the cutoff; zero for exactly sampled laws.
    double cutoff_bias(double t, std::span<const double> xi) const;

private:
    struct Axis {
        Eigen::VectorXd direction;
        double rate; ///< X = (rate dt)^{1/α} S with E e^{isS} = e^{-|s|^α}
    };
    struct CompoundPoisson {
        JumpSpec jump;
        double proposal_rate;           ///< envelope intensity of jumps above the cutoff
        std::vector<double> cumulative; ///< atom weights, cumulative; empty when uniform
        Eigen::MatrixXd small_chol;     ///< Cholesky factor of the small-jump covariance per unit time
        Eigen::VectorXd drift;          ///< compensator of jumps in (cutoff, 1] per unit time
        double fourth_moment_bound;     ///< ∫_{|y|<=ε} |y|^4 ν(dy)
    };

    void add_compound_poisson(const CompoundPoisson &cp, RandomStream &rng, double dt,
                              std::span<double> out) const;

    LevyModel model_;
    double cutoff_;
    std::size_t budget_;

    Eigen::MatrixXd gaussian_chol_; ///< empty when no gaussian part
    std::vector<Axis> axes_;        ///< symmetric atomic stable parts
    double isotropic_rate_ = 0.0;   ///< sub-Gaussian isotropic stable part, 0 if absent
    double alpha_ = 0.0;
    std::vector<CompoundPoisson> poisson_;
    std::vector<SamplerPlan> components_;
};

/// Standard symmetric α-stable variate with E e^{isS} = e^{-|s|^α}
/// (Chambers–Mallows–Stuck).
double symmetric_stable(RandomStream &rng, double alpha);

/// Positive β-stable variate with E e^{-λA} = e^{-λ^β}, β ∈ (0, 1) (Kanter).
double positive_stable(RandomStream &rng, double beta);

/// Counter-based stream of increments of one model.  Equal (seed, stream id,
/// model, cutoff) give identical sequences.  Single owner; not thread-safe.
class IncrementStream {
public:
    IncrementStream(const LevyModel &model, std::uint64_t seed, std::uint64_t stream_id,
                    double small_jump_cutoff = kDefaultSmallJumpCutoff);
    IncrementStream(std::shared_ptr<const SamplerPlan> plan, std::uint64_t seed,
                    std::uint64_t stream_id);

    const LevyModel &model() const { return plan_->model(); }
    const SamplerPlan &plan() const { return *plan_; }
    double small_jump_cutoff() const { return plan_->small_jump_cutoff(); }
    std::uint64_t seed() const { return rng_.seed(); }
    std::uint64_t stream_id() const { return rng_.stream_id(); }

    /// One draw of L_dt; throws ArgumentError unless dt > 0.
    std::vector<double> sample_increment(double dt);
    void sample_increment(double dt, std::span<double> out);

private:
    std::shared_ptr<const SamplerPlan> plan_;
    RandomStream rng_;
};

/// Increments of one path on a time grid; row k is L_{t_{k+1}} - L_{t_k}.
struct PathGrid {
    std::vector<double> times;
    Eigen::MatrixXd increments;

    /// Cumulative positions, (num_steps + 1) × d, starting at the origin.
    Eigen::MatrixXd positions() const;
};

/// Throws ArgumentError unless `times` starts at 0 and strictly increases.
PathGrid sample_path(IncrementStream &stream, std::span<const double> times);

struct MomentScalingReport {
    std::vector<double> times;
    std::vector<double> mean_abs;
    std::vector<double> std_error;
    double slope = 0.0;
    double intercept = 0.0;
    double constant = 0.0; ///< fitted M in E|L_t| ≈ M t^slope
    double alpha = 0.0;
    bool passed = false;
};

/// Monte Carlo E|L_t| on `t_grid` and its log-log slope; passes iff the
/// slope is at most 1/α + 0.1 and M is finite.
MomentScalingReport moment_scaling_probe(const LevyModel &model, std::span<const double> t_grid,
                                         std::size_t num_samples, std::uint64_t seed = 1,
                                         double small_jump_cutoff = kDefaultSmallJumpCutoff);

} // namespace mvlevy
