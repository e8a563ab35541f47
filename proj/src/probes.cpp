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

#include "mvlevy/probes.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/kernel.hpp"
#include "mvlevy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mvlevy {

namespace {

void check_panel(const LevyModel &model, std::span<const double> t_grid, std::span<const GridFunction> panel) {
    if (panel.empty()) throw ArgumentError("probe needs a non-empty function panel");
    if (t_grid.size() < 2) throw ArgumentError("probe needs at least two times");
    const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
    if (!(*lo > 0.0)) throw ArgumentError("probe times must be positive");
    if (*hi / *lo < 100.0 * (1.0 - 1e-12)) throw ArgumentError("probe times must span at least two decades");
    for (const auto &f : panel) {
        if (!(f.grid() == panel.front().grid())) throw ArgumentError("probe panel mixes grids");
        if (f.lp_norm(2.0) == 0.0) throw ArgumentError("probe panel contains a zero function");
    }
    if (panel.front().dim() != model.dim()) throw ArgumentError("probe grid and model dimensions differ");
}

/// Evaluates ratio(t, f) over the panel, takes the sup per t and fits the
/// slope over times resolved by the grid (t^{1/α} at least four cells).
RateProbeReport run_probe(const LevyModel &model, std::span<const double> t_grid,
                          std::span<const GridFunction> panel,
                          const std::function<double(const SymbolGrid &, double, std::size_t)> &ratio) {
    const GridSpec &grid = panel.front().grid();
    const SymbolGrid symbol(model, grid);
    double cell = grid.spacing(0);
    for (std::size_t a = 1; a < grid.dim(); ++a) cell = std::max(cell, grid.spacing(a));

    RateProbeReport report;
    std::vector<double> fit_t, fit_r;
    for (double t : t_grid) {
        double sup = 0.0;
        for (std::size_t i = 0; i < panel.size(); ++i) sup = std::max(sup, ratio(symbol, t, i));
        const bool resolved = std::pow(t, 1.0 / model.alpha()) >= 4.0 * cell;
        report.times.push_back(t);
        report.ratios.push_back(sup);
        report.fitted.push_back(resolved);
        if (resolved) {
            fit_t.push_back(t);
            fit_r.push_back(sup);
        }
    }
    if (fit_t.size() < 2)
        throw ArgumentError("probe: fewer than two times are resolved by the grid (t^{1/alpha} < 4 cells)");
    const auto fit = loglog_fit(fit_t, fit_r);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.constant = std::exp(fit.intercept);
    return report;
}

} // namespace

std::vector<GridFunction> dilation_panel(const GridSpec &grid, double min_width, double max_width, double factor) {
    if (!(min_width > 0.0) || !(max_width >= min_width) || !(factor > 1.0))
        throw ArgumentError("dilation panel needs 0 < min_width <= max_width and factor > 1");
    std::vector<GridFunction> panel;
    for (double w = min_width; w <= max_width * (1.0 + 1e-12); w *= factor) {
        panel.push_back(GridFunction::sample(grid, [w](std::span<const double> x) {
            double r2 = 0.0;
            for (double c : x) r2 += c * c;
            return std::exp(-r2 / (2.0 * w * w));
        }));
    }
    return panel;
}

RateProbeReport gradient_bound_probe(const LevyModel &model, double p, std::span<const double> t_grid,
                                     std::span<const GridFunction> f_panel, int order) {
    check_panel(model, t_grid, f_panel);
    if (order != 1 && order != 2) throw ArgumentError("gradient probe supports orders 1 and 2");
    std::vector<double> base(f_panel.size());
    for (std::size_t i = 0; i < f_panel.size(); ++i) base[i] = f_panel[i].lp_norm(p);
    auto report = run_probe(model, t_grid, f_panel, [&](const SymbolGrid &s, double t, std::size_t i) {
        return derivative_norm(semigroup_apply(s, t, f_panel[i]), order, p) / base[i];
    });
    report.expected_slope = -order / model.alpha();
    report.passed = report.slope >= report.expected_slope - 0.1;
    return report;
}

RateProbeReport smoothing_probe(const LevyModel &model, double p, double gamma, double beta,
                                std::span<const double> t_grid, std::span<const GridFunction> f_panel) {
    check_panel(model, t_grid, f_panel);
    if (!(gamma >= 0.0) || !(beta >= 0.0)) throw ArgumentError("smoothing probe needs gamma, beta >= 0");
    std::vector<double> base(f_panel.size());
    for (std::size_t i = 0; i < f_panel.size(); ++i) base[i] = bessel_norm(f_panel[i], {beta, p});
    auto report = run_probe(model, t_grid, f_panel, [&](const SymbolGrid &s, double t, std::size_t i) {
        return bessel_norm(semigroup_apply(s, t, f_panel[i]), {beta + gamma, p}) / base[i];
    });
    report.expected_slope = -gamma / model.alpha();
    report.passed = report.slope >= report.expected_slope - 0.1;
    return report;
}

RateProbeReport strong_continuity_probe(const LevyModel &model, double p, double theta,
                                        std::span<const double> t_grid, std::span<const GridFunction> f_panel) {
    check_panel(model, t_grid, f_panel);
    if (!(theta >= 0.0 && theta <= 1.0)) throw ArgumentError("strong continuity probe needs theta in [0, 1]");
    std::vector<double> base(f_panel.size());
    for (std::size_t i = 0; i < f_panel.size(); ++i) base[i] = bessel_norm(f_panel[i], {theta, p});
    auto report = run_probe(model, t_grid, f_panel, [&](const SymbolGrid &s, double t, std::size_t i) {
        return (semigroup_apply(s, t, f_panel[i]) - f_panel[i]).lp_norm(p) / base[i];
    });
    report.expected_slope = theta / model.alpha();
    report.passed = theta == 0.0 || report.slope >= report.expected_slope - 0.1;
    return report;
}

} // namespace mvlevy
