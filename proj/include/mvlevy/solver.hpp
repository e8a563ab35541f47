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

#include "mvlevy/drift.hpp"
#include "mvlevy/levy_model.hpp"
#include "mvlevy/measure.hpp"
#include "mvlevy/sampler.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvlevy {

/// Frozen-law Euler–Maruyama with exact Lévy increments.
struct SolverConfig {
    double dt = 1.0 / 512;
    double horizon = 1.0;
    std::size_t particles = 1000;
    double theta = 1.0;
    std::uint64_t seed = 1;
    double small_jump_cutoff = kDefaultSmallJumpCutoff;
    bool parallel = true; ///< false runs the serial reference loop

    /// dt = horizon / 512.
    static SolverConfig with_default_step(double horizon, std::size_t particles, double theta = 1.0,
                                          std::uint64_t seed = 1);
    std::size_t steps() const;
    std::vector<double> times() const;
    /// Throws ArgumentError on dt <= 0, N < 2, θ outside [1, α), or a horizon
    /// that is not an integer number of steps.
    void validate(const LevyModel &model) const;
};

/// Particle clouds at the solver's time nodes.  Row i of every node is the
/// same particle, so a curve produced by the solver also stores the paths.
class LawCurve {
public:
    LawCurve() = default;
    LawCurve(std::vector<double> times, std::vector<EmpiricalMeasure> laws);
    /// The same law at every node.
    static LawCurve constant(const EmpiricalMeasure &law, std::span<const double> times);

    std::size_t size() const { return times_.size(); }
    const std::vector<double> &times() const { return times_; }
    const EmpiricalMeasure &at(std::size_t k) const { return laws_.at(k); }
    const std::vector<EmpiricalMeasure> &laws() const { return laws_; }

private:
    std::vector<double> times_;
    std::vector<EmpiricalMeasure> laws_;
};

/// Particle paths of dX = b(t, X, μ_t) dt + dL with μ frozen to `law`.
/// Particle i draws its noise from stream i of cfg.seed, so runs are
/// reproducible and independent of the worker count.
LawCurve solve_frozen(const LevyModel &model, const DriftSpec &drift, const LawCurve &law,
                      const EmpiricalMeasure &init, const SolverConfig &cfg);

/// sup_k W_θ(a_k, b_k) together with the running sup profile.
struct GapProfile {
    double sup = 0.0;
    std::vector<double> running; ///< sup_{s <= t_k}
};
GapProfile sup_gap(const LawCurve &a, const LawCurve &b, double theta);

struct PicardState {
    std::size_t iteration = 0;         ///< index n of `current`
    LawCurve current;                  ///< μ^{(n)}
    std::vector<double> gaps;          ///< gaps[n-1] = sup_t W_θ(μ^{(n)}, μ^{(n-1)})
    std::vector<std::vector<double>> profiles; ///< running sup per iteration
    std::vector<double> theta_moments; ///< sup_t θ-moment of μ^{(n)}
    double epsilon = 0.0;              ///< geometric-mean contraction ratio
    double k1 = 0.0;                   ///< fitted constant of ratio <= K1 t^{θ/2}
    double t0 = 0.0;                   ///< min(T, K1^{-2/θ})
    bool converged = false;
    bool diverged = false;
    std::string report;
};

/// Distributional Picard iteration from μ^{(0)} = law of `init` held
/// constant, with common random numbers across iterations.  Stops when the
/// gap falls below tol, after max_iter iterations, or when the gap ratio is
/// at least 1 for three consecutive iterations past n = 2 (diverged).
PicardState picard_iterate(const LevyModel &model, const DriftSpec &drift, const EmpiricalMeasure &init,
                           const SolverConfig &cfg, double tol, std::size_t max_iter);

/// Geometric mean of successive gap ratios from the second ratio on
/// (the first alone when there is no other); zero gaps are skipped.
double contraction_estimate(std::span<const double> gaps);

/// K1 by least squares through the origin of running-gap ratios against
/// t^{θ/2}, pooled over iterations and truncated horizons.
double fit_k1(const std::vector<std::vector<double>> &profiles, std::span<const double> times, double theta);

/// sup_t W_θ between the curve and one more frozen solve driven by it.
double fixed_point_residual(const LevyModel &model, const DriftSpec &drift, const EmpiricalMeasure &init,
                            const LawCurve &curve, const SolverConfig &cfg);

/// Monte Carlo E ∫_0^T |b(s, X_s, μ_s)|^δ ds by the trapezoid rule, with
/// paths and laws taken from `paths`.
double drift_integral(const DriftSpec &drift, const LawCurve &paths, double delta);

struct IntegrabilityReport {
    std::vector<double> values; ///< one per member of the drift family
    double value = 0.0;         ///< sup over the family
    bool unbounded_growth = false; ///< the value doubled at each step over the last three members
};

/// Integrability of a drift family along the ensembles it generated.
IntegrabilityReport drift_integrability_report(std::span<const DriftSpec> drifts, std::span<const LawCurve> ensembles,
                                               double delta);

} // namespace mvlevy
