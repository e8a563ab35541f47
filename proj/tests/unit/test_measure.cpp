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
#include "mvlevy/measure.hpp"
#include "mvlevy/rng.hpp"
#include "mvlevy/transport.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

using namespace mvlevy;

namespace {

Eigen::MatrixXd cloud(RandomStream &rng, std::size_t n, std::size_t d, double shift = 0.0) {
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index k = 0; k < p.cols(); ++k) p(i, k) = shift + rng.normal();
    return p;
}

/// Weights j/K with integer j >= 1 summing to 1.
std::vector<double> lattice_weights(RandomStream &rng, std::size_t n, int k) {
    std::vector<int> units(n, 1);
    for (int left = k - static_cast<int>(n); left > 0; --left) ++units[static_cast<std::size_t>(rng.uniform() * n)];
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = units[i] / static_cast<double>(k);
    return w;
}

/// Brute force over permutations of a uniform N-point problem.
double brute_force(const EmpiricalMeasure &a, const EmpiricalMeasure &b, double theta) {
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            c += std::pow((a.particles().row(static_cast<Eigen::Index>(i)) -
                           b.particles().row(static_cast<Eigen::Index>(perm[i])))
                              .norm(),
                          theta);
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::pow(best / static_cast<double>(a.size()), 1.0 / theta);
}

/// Splits atom i into round(w_i K) copies of mass 1/K.
EmpiricalMeasure expand(const EmpiricalMeasure &mu, int k) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (int c = 0; c < static_cast<int>(std::lround(mu.weights()[i] * k)); ++c)
            rows.push_back(static_cast<Eigen::Index>(i));
    Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), mu.particles().cols());
    for (std::size_t r = 0; r < rows.size(); ++r) p.row(static_cast<Eigen::Index>(r)) = mu.particles().row(rows[r]);
    return EmpiricalMeasure(std::move(p));
}

} // namespace

TEST_CASE("measures validate their weights") {
    Eigen::MatrixXd p(2, 1);
    p << 0.0, 1.0;
    CHECK_THROWS_AS(EmpiricalMeasure(p, {0.5, 0.6}), ArgumentError);
    CHECK_THROWS_AS(EmpiricalMeasure(p, {-0.5, 1.5}), ArgumentError);
    CHECK_THROWS_AS(EmpiricalMeasure(p, {1.0}), ArgumentError);
    const EmpiricalMeasure mu(p, {0.25, 0.75});
    CHECK(mu.mean()(0) == 0.75);
    CHECK_FALSE(mu.uniform_weights());
    CHECK(theta_moment(mu, 1.0) == 0.75);
}

TEST_CASE("Hungarian matches permutation brute force") {
    RandomStream rng(1, 0);
    for (int rep = 0; rep < 30; ++rep) {
        const auto a = EmpiricalMeasure(cloud(rng, 6, 2));
        const auto b = EmpiricalMeasure(cloud(rng, 6, 2, 0.5));
        WassersteinOptions lp;
        lp.method = WassersteinMethod::ExactLP;
        for (double theta : {1.0, 1.5, 2.0})
            CHECK(std::abs(wasserstein(a, b, theta, lp).value - brute_force(a, b, theta)) < 1e-10);
    }
}

TEST_CASE("weighted coupling matches the expanded assignment problem") {
    RandomStream rng(2, 0);
    const int k = 12;
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = EmpiricalMeasure(cloud(rng, 4, 2), lattice_weights(rng, 4, k));
        const auto b = EmpiricalMeasure(cloud(rng, 5, 2), lattice_weights(rng, 5, k));
        WassersteinOptions lp;
        lp.method = WassersteinMethod::ExactLP;
        const auto ea = expand(a, k), eb = expand(b, k);
        const auto cost = [&] {
            Eigen::MatrixXd c(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) c(i, j) = (ea.particles().row(i) - eb.particles().row(j)).norm();
            return c;
        }();
        const double oracle = transport::hungarian(cost).cost / k;
        CHECK(std::abs(wasserstein(a, b, 1.0, lp).value - oracle) < 1e-10);
    }
}

TEST_CASE("one-dimensional quantile coupling equals the exact LP with weights") {
    RandomStream rng(3, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        std::vector<double> wa(n), wb(m);
        for (auto &w : wa) w = rng.uniform();
        for (auto &w : wb) w = rng.uniform();
        const double sa = std::accumulate(wa.begin(), wa.end(), 0.0), sb = std::accumulate(wb.begin(), wb.end(), 0.0);
        for (auto &w : wa) w /= sa;
        for (auto &w : wb) w /= sb;
        const EmpiricalMeasure a(cloud(rng, n, 1), wa), b(cloud(rng, m, 1, 0.3), wb);
        WassersteinOptions q, lp;
        q.method = WassersteinMethod::Quantile1D;
        lp.method = WassersteinMethod::ExactLP;
        for (double theta : {1.0, 2.0})
            CHECK(std::abs(wasserstein(a, b, theta, q).value - wasserstein(a, b, theta, lp).value) < 1e-10);
    }
}

TEST_CASE("Wasserstein basics: identity, shifts, method selection") {
    RandomStream rng(4, 0);
    const auto p = cloud(rng, 300, 2);
    const EmpiricalMeasure a(p);
    Eigen::MatrixXd shifted = p;
    shifted.col(0).array() += 0.7;
    const EmpiricalMeasure b(shifted);
    CHECK(wasserstein_theta(a, a, 1.0) == 0.0);
    CHECK(wasserstein_theta(a, b, 1.0) == doctest::Approx(0.7).epsilon(1e-9));
    const auto big = EmpiricalMeasure(cloud(rng, 1500, 2));
    const auto r = wasserstein(big, big, 1.0);
    CHECK(r.method == WassersteinMethod::Sliced);
    CHECK(r.approximate);
    CHECK(wasserstein(a, b, 1.0).method == WassersteinMethod::ExactLP);
    CHECK_THROWS_AS(wasserstein_theta(a, b, 0.5), ArgumentError);
}

TEST_CASE("Wasserstein obeys the triangle inequality") {
    RandomStream rng(5, 0);
    for (int rep = 0; rep < 30; ++rep) {
        const EmpiricalMeasure a(cloud(rng, 7, 2)), b(cloud(rng, 7, 2, 0.5)), c(cloud(rng, 7, 2, -0.4));
        CHECK(wasserstein_theta(a, c, 1.5) <= wasserstein_theta(a, b, 1.5) + wasserstein_theta(b, c, 1.5) + 1e-12);
    }
}

TEST_CASE("density estimate integrates to one and flags leaked mass") {
    RandomStream rng(6, 0);
    const EmpiricalMeasure mu(cloud(rng, 2000, 1));
    const auto h = silverman_bandwidth(mu);
    CHECK(h[0] == doctest::Approx(1.06 * std::pow(2000.0, -0.2)).epsilon(0.1));
    const auto g = GridSpec::cube(1, 8.0, 512);
    const auto rho = density_estimate(mu, g);
    CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(density_estimate(mu, GridSpec::cube(1, 1.0, 64)), CoverageError);
}

TEST_CASE("measures round-trip through CSV and binary files") {
    RandomStream rng(7, 0);
    const EmpiricalMeasure mu(cloud(rng, 5, 3), {0.1, 0.2, 0.3, 0.15, 0.25});
    const auto dir = std::filesystem::temp_directory_path();
    mu.write_csv(dir / "mvlevy_mu.csv", "a comment");
    mu.write_binary(dir / "mvlevy_mu.bin");
    for (const auto &back : {EmpiricalMeasure::read_csv(dir / "mvlevy_mu.csv"),
                             EmpiricalMeasure::read_binary(dir / "mvlevy_mu.bin")}) {
        CHECK(back.particles() == mu.particles());
        CHECK(back.weights() == mu.weights());
    }
    std::filesystem::remove(dir / "mvlevy_mu.csv");
    std::filesystem::remove(dir / "mvlevy_mu.bin");
}
