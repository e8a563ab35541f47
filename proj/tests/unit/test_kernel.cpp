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
#include "mvlevy/kernel.hpp"
#include "mvlevy/probes.hpp"
#include "mvlevy/quadrature.hpp"
#include "mvlevy/sampler.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

using namespace mvlevy;
using std::numbers::pi;

namespace {

GridFunction gaussian(const GridSpec &g, double var) {
    return GridFunction::sample(g, [var](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return std::exp(-r2 / (2 * var)) / std::pow(2 * pi * var, x.size() / 2.0);
    });
}

double sup_diff(const GridFunction &a, const GridFunction &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("grid geometry and validation") {
    const auto g = GridSpec::cube(2, 4.0, 32);
    CHECK(g.size() == 1024);
    CHECK(g.spacing(0) == 0.25);
    CHECK(g.coordinate(0, 0) == -4.0);
    CHECK(g.coordinate(1, 16) == 0.0);
    CHECK(g.frequency(0, 1) == doctest::Approx(pi / 4));
    CHECK(g.frequency(0, 31) == doctest::Approx(-pi / 4));
    CHECK_THROWS_AS(GridSpec({1.0}, {24}), ArgumentError);
    CHECK_THROWS_AS(GridSpec({1.0}, {8}), ArgumentError);
    CHECK_THROWS_AS(GridSpec({0.0}, {16}), ArgumentError);
}

TEST_CASE("grid functions round-trip through binary files") {
    const auto g = GridSpec::cube(2, 3.0, 16);
    const auto f = gaussian(g, 0.7);
    const auto path = std::filesystem::temp_directory_path() / "mvlevy_grid_roundtrip.bin";
    f.write_binary(path);
    const auto h = GridFunction::read_binary(path);
    CHECK(h.grid() == g);
    CHECK(sup_diff(f, h) == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("Brownian heat kernel is the Gaussian density") {
    const auto g = GridSpec::cube(1, 16.0, 4096);
    for (double t : {0.1, 1.0}) {
        const auto p = heat_kernel(LevyModel::brownian(1), t, g);
        CHECK(sup_diff(p, gaussian(g, t)) < 1e-6);
        CHECK(std::abs(p.integral() - 1.0) < 1e-6);
    }
    const auto g2 = GridSpec::cube(2, 10.0, 256);
    const auto p2 = heat_kernel(LevyModel::brownian(2, 0.5), 1.0, g2);
    CHECK(sup_diff(p2, gaussian(g2, 0.5)) < 1e-6);
}

TEST_CASE("stable heat kernel at the origin matches the quadrature oracle") {
    const double a = 1.5, t = 1.0;
    const auto g = GridSpec::cube(1, 256.0, 1 << 16);
    const auto p = heat_kernel(LevyModel::isotropic_stable(1, a), t, g);
    auto integrand = [&](double s) { return std::exp(-t * std::pow(s, a)); };
    const double oracle = quad::half_line(integrand, 0.0).value / pi;
    CHECK(std::abs(oracle - std::tgamma(1 + 1 / a) / pi) < 1e-12);
    CHECK(std::abs(p[g.size() / 2] - oracle) < 1e-6);
    CHECK(std::abs(p.integral() - 1.0) < 1e-6);
}

TEST_CASE("under-resolved kernels are refused") {
    const auto g = GridSpec::cube(1, 16.0, 64);
    CHECK_THROWS_AS(heat_kernel(LevyModel::isotropic_stable(1, 1.5), 1e-3, g), ResolutionError);
}

TEST_CASE("semigroup acts on Gaussians by adding variance and composes") {
    const auto g = GridSpec::cube(1, 16.0, 1024);
    const auto f = gaussian(g, 0.3);
    const auto m = LevyModel::brownian(1);
    CHECK(sup_diff(semigroup_apply(m, 0.5, f), gaussian(g, 0.8)) < 1e-10);
    const auto s = LevyModel::isotropic_stable(1, 1.5);
    const auto twice = semigroup_apply(s, 0.2, semigroup_apply(s, 0.3, f));
    CHECK(sup_diff(twice, semigroup_apply(s, 0.5, f)) < 1e-12);
    CHECK(sup_diff(semigroup_apply(s, 0.0, f), f) == 0.0);
}

TEST_CASE("asymmetric semigroup is the expectation of f(x - L_t)") {
    const auto m = LevyModel::general_stable(1.5, SphericalMeasure::from_atoms(1, {{{1.0}, 1.0}}));
    const auto g = GridSpec::cube(1, 64.0, 1 << 14);
    const auto f = gaussian(g, 1.0);
    const double t = 0.5;
    const auto u = semigroup_apply(m, t, f);
    IncrementStream noise(m, 17, 0, 0.05);
    std::vector<double> l(200000);
    for (auto &v : l) v = noise.sample_increment(t)[0];
    for (std::size_t j : {g.size() / 2 - 256, g.size() / 2, g.size() / 2 + 256}) {
        const double x = g.coordinate(0, j);
        double acc = 0.0;
        for (double v : l) acc += std::exp(-(x - v) * (x - v) / 2) / std::sqrt(2 * pi);
        CHECK(std::abs(acc / static_cast<double>(l.size()) - u[j]) < 3e-3);
    }
}

TEST_CASE("Bessel norms: beta = 0 is the Lp norm and p = 2 obeys Parseval") {
    const auto g = GridSpec::cube(1, 16.0, 2048);
    const double var = 0.5;
    const auto f = gaussian(g, var);
    CHECK(bessel_norm(f, {0.0, 3.0}) == doctest::Approx(f.lp_norm(3.0)).epsilon(1e-10));
    // ‖f‖²_{β,2} = (1/2π) ∫ (1 + ξ²)^β e^{-var ξ²} dξ for this f.
    const double beta = 1.3;
    const auto r = quad::half_line([&](double s) { return std::pow(1 + s * s, beta) * std::exp(-var * s * s); }, 0.0);
    CHECK(bessel_norm(f, {beta, 2.0}) == doctest::Approx(std::sqrt(r.value / pi)).epsilon(1e-9));
    const auto up = bessel_potential(bessel_potential(f, 0.7), -0.7);
    CHECK(sup_diff(up, f) < 1e-12);
}

TEST_CASE("spectral derivatives and mixed norms") {
    const auto g = GridSpec::cube(1, 16.0, 1024);
    const auto f = gaussian(g, 1.0);
    const auto df = derivative(f, 0);
    const auto exact = GridFunction::sample(g, [](std::span<const double> x) {
        return -x[0] * std::exp(-x[0] * x[0] / 2) / std::sqrt(2 * pi);
    });
    CHECK(sup_diff(df, exact) < 1e-10);
    CHECK(derivative_norm(f, 1, 2.0) == doctest::Approx(exact.lp_norm(2.0)).epsilon(1e-9));
    std::vector<GridFunction> slices{f, f, f, f};
    CHECK(mixed_norm(slices, {2.0, 3.0, 0.0, 2.0}) == doctest::Approx(f.lp_norm(2.0) * std::cbrt(2.0)).epsilon(1e-12));
    CHECK(mixed_norm(slices, {2.0, std::numeric_limits<double>::infinity(), 0.0, 2.0}) ==
          doctest::Approx(f.lp_norm(2.0)));
}

TEST_CASE("Brownian gradient probe recovers the t^{-1/2} rate") {
    const auto g = GridSpec::cube(1, 8.0, 8192);
    const auto panel = dilation_panel(g, 0.01, 1.0);
    std::vector<double> t;
    for (int k = 0; k <= 8; ++k) t.push_back(1e-4 * std::pow(10.0, k * 0.25));
    const auto r = gradient_bound_probe(LevyModel::brownian(1), 2.0, t, panel, 1);
    CHECK(std::abs(r.slope + 0.5) < 0.05);
    const auto c = strong_continuity_probe(LevyModel::brownian(1), 2.0, 1.0, t, panel);
    CHECK(std::abs(c.slope - 0.5) < 0.1);
    CHECK_THROWS_AS(gradient_bound_probe(LevyModel::brownian(1), 2.0, std::vector<double>{1e-3, 2e-3}, panel),
                    ArgumentError);
}
