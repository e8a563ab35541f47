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
#include "mvlevy/grid.hpp"
#include "mvlevy/levy_model.hpp"
#include "mvlevy/solver.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvlevy {

/// f(t, x) = scale · shape(t, x): piecewise constant in time over M equal
/// cells of [start, end], multilinear in x between grid nodes, zero outside
/// the time window and outside the grid.
class SpaceTimeFunction {
public:
    /// Throws ArgumentError on an empty slice list, mixed grids, start >= end
    /// or negative values.
    SpaceTimeFunction(std::vector<GridFunction> slices, double start, double end, std::string label = {});
    /// Samples fn(t, x) at the midpoints of `cells` equal time cells.
    static SpaceTimeFunction sample(const GridSpec &grid, double start, double end, std::size_t cells,
                                    const std::function<double(double, std::span<const double>)> &fn,
                                    std::string label = {});

    double operator()(double t, std::span<const double> x) const { return scale_ * shape(t, x); }
    double shape(double t, std::span<const double> x) const;
    SpaceTimeFunction scaled(double c) const;

    double scale() const { return scale_; }
    double start() const { return start_; }
    double end() const { return end_; }
    const std::string &label() const { return label_; }
    const std::vector<GridFunction> &slices() const { return slices_; }
    /// Mixed L^q([start, end]; L^p) norm of the shape.
    double shape_norm(double p, double q) const;
    double norm(double p, double q) const { return scale_ * shape_norm(p, q); }

private:
    std::vector<GridFunction> slices_;
    double start_, end_;
    double scale_ = 1.0;
    std::string label_;
};

struct KrylovOptions {
    std::optional<double> ball_radius; ///< τ = first grid exit from this ball; absent means τ = T
    std::vector<double> start;         ///< starting point, origin when empty
    const LawCurve *law = nullptr;     ///< frozen law for measure-dependent drifts
};

/// Monte Carlo estimates shared by every (p, q): E ∫_0^{T∧τ} shape(s, X_s) ds
/// per panel member and E ∫_0^{T∧τ} |b(s, X_s)| ds.
struct KrylovSample {
    std::vector<double> shape_lhs;
    double drift_mass = 0.0;
    std::size_t paths = 0;
};

KrylovSample krylov_sample(const LevyModel &model, const DriftSpec &drift, std::span<const SpaceTimeFunction> panel,
                           const SolverConfig &cfg, const KrylovOptions &options = {});

struct KrylovEntry {
    std::string f_id;
    double p = 0.0, q = 0.0;
    bool gate = false;
    double lhs = 0.0, drift_mass = 0.0, f_norm = 0.0, ratio = 0.0;
};

struct KrylovReport {
    std::vector<KrylovEntry> panel;
    double panel_max = 0.0;
    double panel_median = 0.0;
};

/// Ratios lhs / ((1 + drift_mass) ‖f‖) of a sample; the gate is recorded, not enforced.
KrylovReport krylov_report(const KrylovSample &sample, std::span<const SpaceTimeFunction> panel, double alpha,
                           int dim, double p, double q);

/// Simulates and reports; throws GateError for an inadmissible (p, q).
KrylovReport krylov_ratio(const LevyModel &model, const DriftSpec &drift, std::span<const SpaceTimeFunction> panel,
                          const SolverConfig &cfg, double p, double q, const KrylovOptions &options = {});

/// Twenty Gaussian bumps: widths {0.05, 0.1, 0.2, 0.4, 0.8} × centers
/// {0, 0.5} along the first axis × time supports {[0, T], [T/2, T]}.
std::vector<SpaceTimeFunction> standard_panel(const GridSpec &grid, double horizon);

/// Gaussian bumps of width w at the origin supported on [0, w^α].
std::vector<SpaceTimeFunction> shrinking_panel(const GridSpec &grid, double alpha, std::span<const double> widths);

struct SweepCell {
    double p = 0.0, q = 0.0;
    bool gate = false;
    std::string gate_message;
    double panel_max = 0.0, panel_median = 0.0;
    std::vector<double> trend_ratios; ///< ratio per shrinking width
    double trend_slope = 0.0;         ///< d log ratio / d log(1/w); positive means growth
    KrylovReport report;              ///< per-function entries of the panel
    KrylovReport trend;               ///< per-function entries of the shrinking bumps
};

/// Runs every cell, admissible or not, reusing one sample of paths.
std::vector<SweepCell> krylov_sweep(const LevyModel &model, const DriftSpec &drift,
                                    std::span<const std::pair<double, double>> cells,
                                    std::span<const SpaceTimeFunction> panel, std::span<const double> widths,
                                    const GridSpec &grid, const SolverConfig &cfg, const KrylovOptions &options = {});

} // namespace mvlevy
