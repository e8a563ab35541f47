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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvlevy/error.hpp"
#include "mvlevy/krylov.hpp"

#include <cmath>
#include <vector>

using namespace mvlevy;

namespace {

SolverConfig config(std::size_t n, double dt = 1.0 / 256, std::uint64_t seed = 1) {
    SolverConfig c;
    c.dt = dt;
    c.particles = n;
    c.seed = seed;
    return c;
}

const GridSpec kGrid = GridSpec::cube(1, 8.0, 4096);

SpaceTimeFunction constant_one() {
    return SpaceTimeFunction::sample(kGrid, 0.0, 1.0, 1, [](double, std::span<const double>) { return 1.0; }, "one");
}

SpaceTimeFunction bump(double w) {
    return SpaceTimeFunction::sample(
        kGrid, 0.0, 1.0, 1, [w](double, std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0] / (w * w)); },
        "bump");
}

} // namespace

TEST_CASE("space-time functions interpolate their slices") {
    const auto f = SpaceTimeFunction::sample(kGrid, 0.0, 1.0, 4, [](double t, std::span<const double> x) {
        return (1 + t) * (9 + x[0]);
    });
    const double cell_time[] = {0.125, 0.375, 0.625, 0.875};
    for (int c = 0; c < 4; ++c) {
        const double x = 0.123;
        CHECK(f.shape(0.25 * c + 0.1, std::vector<double>{x}) == doctest::Approx((1 + cell_time[c]) * (9 + x)));
    }
    CHECK(f.shape(1.5, std::vector<double>{0.0}) == 0.0);
    CHECK(f.shape(0.5, std::vector<double>{9.0}) == 0.0);
    CHECK_THROWS_AS(SpaceTimeFunction::sample(kGrid, 0.0, 1.0, 1, [](double, std::span<const double>) { return -1.0; }),
                    ArgumentError);
    CHECK_THROWS_AS(SpaceTimeFunction::sample(kGrid, 1.0, 1.0, 1, [](double, std::span<const double>) { return 1.0; }),
                    ArgumentError);
}

TEST_CASE("indicator of a large ball gives the horizon") {
    const std::vector<SpaceTimeFunction> panel{constant_one()};
    const auto s = krylov_sample(LevyModel::brownian(1), zero_drift(1), panel, config(2000));
    CHECK(s.shape_lhs[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.drift_mass == 0.0);
}

TEST_CASE("stopping at the exit of a ball shortens the occupation time") {
    const std::vector<SpaceTimeFunction> panel{constant_one()};
    double previous = 0.0;
    for (double r : {0.25, 0.5, 1.0, 4.0}) {
        KrylovOptions options;
        options.ball_radius = r;
        const auto s = krylov_sample(LevyModel::brownian(1), zero_drift(1), panel, config(4000), options);
        CHECK(s.shape_lhs[0] > previous);
        previous = s.shape_lhs[0];
        // E[τ] = r^2 for Brownian motion leaving (-r, r); the grid exit overshoots slightly.
        if (r <= 0.25) CHECK(s.shape_lhs[0] == doctest::Approx(r * r).epsilon(0.15));
    }
    CHECK(previous == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Gaussian bump occupation matches the Brownian closed form") {
    std::vector<SpaceTimeFunction> panel;
    const std::vector<double> widths{0.1, 0.3, 1.0};
    for (double w : widths) panel.push_back(bump(w));
    const auto s = krylov_sample(LevyModel::brownian(1), zero_drift(1), panel, config(20000, 1.0 / 512));
    for (std::size_t j = 0; j < widths.size(); ++j) {
        const double w = widths[j];
        CHECK(s.shape_lhs[j] == doctest::Approx(2 * w * (std::sqrt(w * w + 1) - w)).epsilon(0.03));
    }
}

TEST_CASE("the ratio is exactly homogeneous in f") {
    const std::vector<SpaceTimeFunction> panel{bump(0.3), bump(0.3).scaled(1e6), bump(0.3).scaled(1e-7)};
    const auto r = krylov_ratio(LevyModel::isotropic_stable(1, 1.5), sign_drift(), panel, config(500), 4, 8);
    CHECK(r.panel[1].ratio == r.panel[0].ratio);
    CHECK(r.panel[2].ratio == r.panel[0].ratio);
    CHECK(r.panel[1].lhs == doctest::Approx(1e6 * r.panel[0].lhs));
    CHECK(r.panel[1].f_norm == doctest::Approx(1e6 * r.panel[0].f_norm));
    CHECK(r.panel[0].drift_mass > 0.0);
}

TEST_CASE("inadmissible cells and degenerate functions are refused") {
    const std::vector<SpaceTimeFunction> panel{bump(0.3)};
    CHECK_THROWS_AS(krylov_ratio(LevyModel::brownian(1), zero_drift(1), panel, config(10), 1.2, 1.2), GateError);
    const std::vector<SpaceTimeFunction> zero{SpaceTimeFunction::sample(
        kGrid, 0.0, 1.0, 1, [](double, std::span<const double>) { return 0.0; })};
    CHECK_THROWS_AS(krylov_ratio(LevyModel::brownian(1), zero_drift(1), zero, config(10), 4, 4), ArgumentError);
    KrylovOptions options;
    options.ball_radius = -1.0;
    CHECK_THROWS_AS(krylov_sample(LevyModel::brownian(1), zero_drift(1), panel, config(10), options), ArgumentError);
    CHECK_THROWS_AS(krylov_sample(LevyModel::brownian(1), mean_reverting_drift(1), panel, config(10)), ArgumentError);
}

TEST_CASE("standard panel covers widths, centers and time windows") {
    const auto grid = GridSpec::cube(1, 4.0, 1024);
    const auto panel = standard_panel(grid, 1.0);
    CHECK(panel.size() == 20);
    for (const auto &f : panel) CHECK(f.shape_norm(4, 4) > 0.0);
    const std::vector<double> widths{1.0, 0.5};
    const auto shrink = shrinking_panel(grid, 1.5, widths);
    CHECK(shrink[1].end() == doctest::Approx(std::pow(0.5, 1.5)));
}

TEST_CASE("sweep separates admissible and inadmissible exponents") {
    const auto grid = GridSpec::cube(1, 4.0, 2048);
    const auto panel = standard_panel(grid, 1.0);
    const std::vector<double> widths{1.0, 0.5, 0.25, 0.125, 0.0625};
    const std::vector<std::pair<double, double>> cells{{4.0, 4.0}, {1.2, 1.2}};
    const auto sweep =
        krylov_sweep(LevyModel::brownian(1), zero_drift(1), cells, panel, widths, grid, config(5000, 1.0 / 1024));
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].gate);
    CHECK(sweep[0].trend_slope < 0.1);
    CHECK(sweep[0].panel_max / sweep[0].panel_median < 10.0);
    CHECK_FALSE(sweep[1].gate);
    CHECK(sweep[1].trend_slope > 0.25);
}
