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

#include "mvlevy/fft.hpp"
#include "mvlevy/grid.hpp"
#include "mvlevy/levy_model.hpp"

#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace mvlevy {

/// Φ sampled on the dual grid in FFT index order.  Evaluating Φ can be costly
/// (quadrature per frequency), so probes build one table and reuse it for
/// every t.  Radial models are evaluated once per distinct |ξ|.
class SymbolGrid {
public:
    SymbolGrid(const LevyModel &model, GridSpec grid);

    const GridSpec &grid() const { return grid_; }
    std::span<const std::complex<double>> values() const { return values_; }
    /// max |e^{-tΦ(ξ)}| over frequencies with some index at the Nyquist edge.
    double nyquist_tail(double t) const;

private:
    GridSpec grid_;
    std::vector<std::complex<double>> values_;
};

/// Transition density p_t on the grid by Fourier inversion of e^{-tΦ}.
/// Throws ResolutionError when e^{-tΦ} exceeds 1e-12 on the Nyquist edge.
GridFunction heat_kernel(const LevyModel &model, double t, const GridSpec &grid);
GridFunction heat_kernel(const SymbolGrid &symbol, double t);

/// P_t f = p_t * f computed spectrally; t = 0 returns f.
GridFunction semigroup_apply(const LevyModel &model, double t, const GridFunction &f);
GridFunction semigroup_apply(const SymbolGrid &symbol, double t, const GridFunction &f);

struct BesselNormSpec {
    double beta = 0.0;
    double p = 2.0; ///< in (1, ∞) or infinity
};

/// ‖(I - Δ)^{β/2} f‖_p via the multiplier (1 + |ξ|²)^{β/2}.
/// Throws UnsupportedError for β > 0 with p = ∞.
double bessel_norm(const GridFunction &f, const BesselNormSpec &spec);

/// (I - Δ)^{β/2} f on the grid; β may be negative.
GridFunction bessel_potential(const GridFunction &f, double beta);

struct MixedNormSpec {
    double p = 2.0;
    double q = 2.0;
    double start = 0.0;
    double end = 1.0;
};

/// Time-outer L^q of the spatial L^p norm.  Slice i is the value at the
/// midpoint of the i-th of M equal cells of [start, end].
double mixed_norm(std::span<const GridFunction> slices, const MixedNormSpec &spec);

/// ∂u/∂x_axis computed spectrally (Nyquist mode dropped).
GridFunction derivative(const GridFunction &u, std::size_t axis);

/// ‖∇^k u‖_p for k ∈ {1, 2}: pointwise Euclidean norm of the gradient, or
/// Frobenius norm of the Hessian.
double derivative_norm(const GridFunction &u, int order, double p);

namespace spectral {

/// Forward transform of a real grid function.
fft::Buffer transform(const GridFunction &f);
/// Real part of the normalized inverse transform.
GridFunction real_inverse(fft::Buffer spectrum, const GridSpec &grid);

} // namespace spectral

} // namespace mvlevy
