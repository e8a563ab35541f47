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

#include "mvlevy/grid.hpp"
#include "mvlevy/kernel.hpp"
#include "mvlevy/measure.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvlevy {

/// b(t, ·, μ) with t and μ fixed; writes b into `out`.
using BoundDrift = std::function<void(std::span<const double> x, std::span<double> out)>;

enum class MeasureDependence { MeasureFree, Convolution, Opaque };

/// b(t, x, μ) = outer(t, x, ∫ kernel(x, y) μ(dy)) with a finite feature vector.
struct ConvolutionStructure {
    std::size_t features = 0;
    std::function<void(std::span<const double> x, std::span<const double> y, std::span<double> out)> kernel;
    /// kernel(x, y) does not depend on x, so the feature average is shared by all x.
    bool kernel_ignores_x = false;
    std::function<void(double t, std::span<const double> x, std::span<const double> feature, std::span<double> out)>
        outer;
};

/// Domination |b(t, x, μ)| <= G(t, x) + K with G in L^q([S,T]; L^p).
struct DriftEnvelope {
    std::function<double(double t, std::span<const double> x)> singular; ///< G; may be empty (G = 0)
    MixedNormSpec norm;

    double operator()(double t, std::span<const double> x) const { return singular ? singular(t, x) : 0.0; }
};

/// Drift coefficient b(t, x, μ) together with its structural data.
struct DriftSpec {
    std::string name;
    std::size_t dim = 1;
    MeasureDependence dependence = MeasureDependence::MeasureFree;
    /// Used when dependence == MeasureFree.
    std::function<void(double t, std::span<const double> x, std::span<double> out)> measure_free;
    /// Used when dependence == Convolution.
    std::optional<ConvolutionStructure> convolution;
    /// Used when dependence == Opaque.
    std::function<void(double t, std::span<const double> x, const EmpiricalMeasure &mu, std::span<double> out)> opaque;

    double bounded_part = 0.0; ///< K
    std::optional<DriftEnvelope> envelope;
    /// K(t) in |b(t,x,μ) - b(t,y,ν)| <= K(t)(|x - y| + W_θ(μ, ν)); present for regular drifts.
    std::function<double(double t)> lipschitz_modulus;
    /// Points of non-smoothness of x ↦ b in d = 1 (used by mollification).
    std::vector<double> breakpoints;
    /// Overrides the structural evaluation in bind(); set by mollify_drift.
    std::function<BoundDrift(double t, const EmpiricalMeasure &mu)> binder;

    /// b(t, ·, μ) with any measure integral evaluated once.
    BoundDrift bind(double t, const EmpiricalMeasure &mu) const;
    std::vector<double> evaluate(double t, std::span<const double> x, const EmpiricalMeasure &mu) const;
    bool is_lipschitz() const { return static_cast<bool>(lipschitz_modulus); }
};

DriftSpec zero_drift(std::size_t dim);
/// b = -rate x.
DriftSpec linear_drift(std::size_t dim, double rate = 1.0);
/// b = -rate (x - mean(μ)).
DriftSpec mean_reverting_drift(std::size_t dim, double rate = 1.0);
/// b = sign(x) in d = 1; bounded by K = 1, no Lipschitz modulus.
DriftSpec sign_drift();
/// b = |x|^{-exponent} 1_{|x| <= radius} in d = 1, envelope G = b, K = 0.
DriftSpec singular_power_drift(double exponent = 0.5, double radius = 1.0, double p = 1.9, double q = 8.0,
                               double horizon = 1.0);

struct MollifyOptions {
    double horizon = 1.0;         ///< times sampled for the Lipschitz estimate lie in [0, horizon]
    double probe_radius = 4.0;    ///< positions sampled in [-r, r]^d
    std::size_t lipschitz_samples = 2000;
    std::uint64_t seed = 11;
};

/// b^n: truncation of |b| at level n, then convolution in x with a Gaussian
/// of standard deviation 1/n, with μ replaced by μ * N(0, n^{-2} I).  The
/// result carries a sampled Lipschitz modulus (difference quotients × 2) and
/// the envelope (G * φ_n, K).  Throws UnsupportedError for opaque drifts.
DriftSpec mollify_drift(const DriftSpec &base, int n, const MollifyOptions &options = {});

/// sign * φ_n in closed form: erf(n x / √2).
double mollified_sign(double x, int n);

struct InvariantCheck {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst = 0.0; ///< max of |b| - (G + K), or of the Lipschitz quotient over K(t)
    bool passed = false;
};

/// Spot-checks |b(t,x,μ)| <= G(t,x) + K on random triples.
InvariantCheck check_envelope(const DriftSpec &drift, std::size_t samples, double horizon = 1.0,
                              double radius = 4.0, std::uint64_t seed = 5);
/// Spot-checks the Lipschitz bound with θ-Wasserstein measure distances.
InvariantCheck check_lipschitz(const DriftSpec &drift, std::size_t samples, double theta = 1.0,
                               double horizon = 1.0, double radius = 4.0, std::uint64_t seed = 6);

/// Envelope G sampled at the midpoints of M equal time cells of its norm window.
std::vector<GridFunction> envelope_slices(const DriftEnvelope &envelope, const GridSpec &grid, std::size_t slices);

} // namespace mvlevy
