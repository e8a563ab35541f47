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
#include "mvlevy/levy_model.hpp"
#include "mvlevy/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace mvlevy;
using std::numbers::pi;

namespace {

double k_oracle(double a) { return -std::tgamma(-a) * std::cos(pi * a / 2); }
double j_oracle(double a) { return std::tgamma(-a) * std::sin(pi * a / 2); }

/// ∫_0^∞ (1 - cos rs) r^{-1-α} e^{-cr} dr in closed form.
double tempered_oracle(double a, double c, double s) {
    return std::tgamma(-a) * (std::pow(c, a) - std::pow(c * c + s * s, a / 2) * std::cos(a * std::atan(s / c)));
}

/// ∫_0^1 (1 - cos rs) r^{-1-α} dr by its power series.
double truncated_oracle(double a, double s) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -(s * s) / ((2.0 * k - 1) * (2.0 * k));
        sum += -term / (2.0 * k - a);
    }
    return sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("stable constants match their Gamma-function closed forms") {
    for (double a : {1.05, 1.2, 1.5, 1.8, 1.95}) {
        CHECK(rel(stable_cos_constant(a), k_oracle(a)) < 1e-12);
        CHECK(rel(stable_sin_constant(a), j_oracle(a)) < 1e-12);
    }
}

TEST_CASE("Brownian symbol is half the quadratic form") {
    Eigen::MatrixXd a(2, 2);
    a << 2.0, 0.5, 0.5, 1.0;
    const auto m = LevyModel::gaussian(a);
    const std::vector<double> xi{0.3, -1.7};
    const double expected = 0.5 * (2.0 * 0.09 + 2 * 0.5 * 0.3 * -1.7 + 1.0 * 1.7 * 1.7);
    CHECK(std::abs(symbol(m, xi).real() - expected) < 1e-14);
    CHECK(symbol(m, xi).imag() == 0.0);
}

TEST_CASE("isotropic stable symbol is |xi|^alpha in d = 1, 2, 3") {
    for (std::size_t d : {1, 2, 3}) {
        const auto m = LevyModel::isotropic_stable(d, 1.5);
        RandomStream rng(d, 0);
        for (int k = 0; k < 5; ++k) {
            std::vector<double> xi(d);
            double r2 = 0.0;
            for (auto &x : xi) {
                x = 3.0 * rng.normal();
                r2 += x * x;
            }
            const auto phi = symbol(m, xi);
            CHECK(rel(phi.real(), std::pow(r2, 0.75)) < 1e-8);
            CHECK(std::abs(phi.imag()) < 1e-12);
        }
    }
}

TEST_CASE("radial symbol agrees with the vector symbol and is homogeneous") {
    const auto m = LevyModel::isotropic_stable(2, 1.3);
    const std::vector<double> xi{0.6, 0.8};
    CHECK(rel(radial_symbol(m, 1.0), symbol(m, xi).real()) < 1e-9);
    for (double c : {0.1, 2.0, 50.0}) CHECK(rel(radial_symbol(m, c), std::pow(c, 1.3) * radial_symbol(m, 1.0)) < 1e-8);
}

TEST_CASE("cylindrical symbol is a sum over axes") {
    const double a = 1.5;
    const auto m = LevyModel::cylindrical_stable(2, a);
    const std::vector<double> xi{0.7, -2.1};
    const double expected = 2.0 * k_oracle(a) * (std::pow(0.7, a) + std::pow(2.1, a));
    CHECK(rel(symbol(m, xi).real(), expected) < 1e-10);
}

TEST_CASE("one-sided stable symbol carries the compensated imaginary part") {
    const double a = 1.5;
    const auto mu = SphericalMeasure::from_atoms(1, {{{1.0}, 1.0}});
    const auto m = LevyModel::general_stable(a, mu);
    CHECK_FALSE(m.is_symmetric());
    for (double s : {-3.0, -0.4, 0.25, 2.0}) {
        const auto phi = symbol(m, std::vector<double>{s});
        CHECK(rel(phi.real(), k_oracle(a) * std::pow(std::abs(s), a)) < 1e-10);
        const double j = (s > 0 ? 1.0 : -1.0) * j_oracle(a) * std::pow(std::abs(s), a) - s / (a - 1);
        CHECK(rel(phi.imag(), j) < 1e-9);
    }
}

TEST_CASE("tempered stable symbol matches the closed form") {
    for (double a : {1.2, 1.5, 1.8})
        for (double c : {0.5, 1.0, 3.0}) {
            const auto m = LevyModel::tempered_stable(1, a, c);
            for (double s : {0.01, 0.3, 1.0, 7.0, 60.0}) {
                const double expected = tempered_oracle(a, c, s) / k_oracle(a);
                CHECK(rel(symbol(m, std::vector<double>{s}).real(), expected) < 1e-9);
            }
        }
}

TEST_CASE("truncated stable symbol matches the series") {
    const double a = 1.5;
    const auto m = LevyModel::truncated_stable(1, a, 1.0);
    for (double s : {0.05, 0.5, 2.0, 4.0}) {
        const double expected = truncated_oracle(a, s) / k_oracle(a);
        CHECK(rel(symbol(m, std::vector<double>{s}).real(), expected) < 1e-9);
    }
}

TEST_CASE("superposition adds symbols and takes the largest index") {
    const auto b = LevyModel::brownian(1, 0.5);
    const auto s = LevyModel::isotropic_stable(1, 1.4);
    const auto m = LevyModel::superposition({b, s});
    CHECK(m.alpha() == 2.0);
    const std::vector<double> xi{1.3};
    CHECK(rel(symbol(m, xi).real(), symbol(b, xi).real() + symbol(s, xi).real()) < 1e-13);
    const auto m2 = LevyModel::superposition({LevyModel::isotropic_stable(1, 1.2), s});
    CHECK(m2.alpha() == 1.4);
}

TEST_CASE("symbol lower bound holds for the built-in classes") {
    for (const auto &m : {LevyModel::brownian(2), LevyModel::isotropic_stable(2, 1.5),
                          LevyModel::cylindrical_stable(2, 1.5), LevyModel::tempered_stable(1, 1.5, 1.0),
                          LevyModel::truncated_stable(1, 1.5)}) {
        const auto r = symbol_lower_bound_check(m, 200);
        CHECK_MESSAGE(r.passed, m.describe());
        CHECK(r.min_ratio > 0.0);
    }
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(LevyModel::isotropic_stable(1, 2.0), ModelError);
    CHECK_THROWS_AS(LevyModel::isotropic_stable(1, 1.0), ModelError);
    CHECK_THROWS_AS(LevyModel::general_stable(1.5, SphericalMeasure::from_atoms(2, {{{1.0, 0.0}, 1.0}})),
                    ModelError);
    CHECK_THROWS_AS(SphericalMeasure::from_atoms(2, {{{1.0, 1.0}, 1.0}}), ModelError);
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(LevyModel::gaussian(bad), ModelError);
    CHECK_THROWS_AS(symbol(LevyModel::brownian(2), std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("admissibility window and occupation gate") {
    const auto r = admissible_pq(2.0, 1, 4.0, 4.0);
    REQUIRE(r.admissible);
    CHECK(std::abs(r.gamma_window->first - 1.25) < 1e-15);
    CHECK(std::abs(r.gamma_window->second - 1.5) < 1e-15);
    CHECK_FALSE(admissible_pq(2.0, 1, 1.5, 4.0).admissible);
    // Boundary p = d/(α-1) is excluded.
    CHECK_FALSE(krylov_pq_check(1.5, 1, 2.0, 1e9));
    CHECK(krylov_gate_failure(1.5, 1, 2.0, 10.0)->find("p > d/(alpha-1)") != std::string::npos);
    CHECK(krylov_gate_failure(1.5, 1, 4.0, 5.0)->find("q > p*alpha") != std::string::npos);
    CHECK_FALSE(krylov_gate_failure(1.5, 1, 4.0, 8.0));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(krylov_pq_check(1.5, 1, inf, 3.5));
    CHECK_FALSE(krylov_pq_check(1.5, 1, inf, 3.0));
}

TEST_CASE("gate agrees with a dense scan over gamma") {
    RandomStream rng(99, 0);
    int disagreements = 0;
    for (int k = 0; k < 2000; ++k) {
        const double alpha = 1.0 + rng.uniform();
        const int d = 1 + static_cast<int>(rng.uniform() * 3);
        const double p = 1.0 + 40.0 * rng.uniform();
        const double q = 1.0 + 40.0 * rng.uniform();
        bool found = false;
        for (int j = 1; j < 20000 && !found; ++j) {
            const double g = 1.0 + (alpha - 1.0) * j / 20000.0;
            found = p > d / (g - 1.0) && q > alpha / (alpha - g);
        }
        disagreements += found != krylov_pq_check(alpha, d, p, q);
        disagreements += found != admissible_pq(alpha, d, p, q).admissible;
    }
    CHECK(disagreements == 0);
}
