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
#include "mvlevy/levy_model.hpp"

#include <span>
#include <vector>

namespace mvlevy {

/// Log-log fit of t ↦ sup_f R(t, f) for one rate probe.
struct RateProbeReport {
    std::vector<double> times;
    std::vector<double> ratios;   ///< sup over the panel at each t
    std::vector<bool> fitted;     ///< whether t entered the fit
    double slope = 0.0;
    double intercept = 0.0;
    double constant = 0.0;        ///< exp(intercept), the fitted M or C
    double expected_slope = 0.0;  ///< the rate being probed
    bool passed = false;
};

/// Centered Gaussian bumps exp(-|x|²/(2w²)) with w log-spaced by `factor`
/// from min_width up to max_width.  Taking the sup of a scale-free ratio over
/// such a panel recovers the operator rate that no single f exhibits.
std::vector<GridFunction> dilation_panel(const GridSpec &grid, double min_width, double max_width,
                                         double factor = 1.189207115002721);

/// sup_f ‖∇^k P_t f‖_p / ‖f‖_p; passes iff slope >= -k/α - 0.1.
RateProbeReport gradient_bound_probe(const LevyModel &model, double p, std::span<const double> t_grid,
                                     std::span<const GridFunction> f_panel, int order = 1);

/// sup_f ‖P_t f‖_{β+γ,p} / ‖f‖_{β,p}; passes iff slope >= -γ/α - 0.1.
RateProbeReport smoothing_probe(const LevyModel &model, double p, double gamma, double beta,
                                std::span<const double> t_grid, std::span<const GridFunction> f_panel);

/// sup_f ‖P_t f - f‖_p / ‖f‖_{θ,p}; passes iff slope >= θ/α - 0.1 (θ = 0 passes).
RateProbeReport strong_continuity_probe(const LevyModel &model, double p, double theta,
                                        std::span<const double> t_grid,
                                        std::span<const GridFunction> f_panel);

} // namespace mvlevy
