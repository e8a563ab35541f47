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
#include "mvlevy/kernels.hpp"
#include "mvlevy/sampler.hpp"
#include "mvlevy/stats.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

using namespace mvlevy;

namespace {

/// N increments of length t, row-major.  The coarse cutoff keeps unit-time
/// compound Poisson draws cheap; its bias is far below the tolerances used.
std::vector<double> draw(const LevyModel &model, double t, std::size_t n, std::uint64_t seed = 5) {
    const auto plan = std::make_shared<const SamplerPlan>(model, 0.05);
    std::vector<RandomStream> streams;
    for (std::size_t i = 0; i < n; ++i) streams.emplace_back(seed, i);
    std::vector<double> out(n * model.dim());
    kernels::increments_omp(*plan, streams, t, out);
    return out;
}

double cf_error(const LevyModel &model, const std::vector<double> &x, double t, const std::vector<double> &xi) {
    const auto ecf = empirical_cf(x, model.dim(), xi);
    return std::abs(ecf - std::exp(-t * symbol(model, xi)));
}

} // namespace

TEST_CASE("symmetric stable variates have the stable characteristic function") {
    RandomStream rng(1, 0);
    const std::size_t n = 200000;
    for (double a : {1.1, 1.5, 1.9}) {
        std::vector<double> s(n);
        for (auto &v : s) v = symmetric_stable(rng, a);
        for (double u : {0.2, 1.0, 2.5}) {
            const auto ecf = empirical_cf(s, 1, std::vector<double>{u});
            CHECK(std::abs(ecf - std::exp(-std::pow(u, a))) < 0.01);
        }
    }
}

TEST_CASE("positive stable variates have the stable Laplace transform") {
    RandomStream rng(2, 0);
    const std::size_t n = 200000;
    for (double b : {0.55, 0.75, 0.95}) {
        std::vector<double> a(n);
        for (auto &v : a) v = positive_stable(rng, b);
        for (double lambda : {0.3, 1.0, 3.0}) {
            double acc = 0.0;
            for (double v : a) acc += std::exp(-lambda * v);
            CHECK(std::abs(acc / static_cast<double>(n) - std::exp(-std::pow(lambda, b))) < 0.01);
        }
    }
}

TEST_CASE("increments match exp(-t Phi) across the model classes") {
    const std::size_t n = 200000;
    const double tol = 0.012;
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.3, 0.3, 0.5;
    std::vector<LevyModel> models{
        LevyModel::brownian(1),
        LevyModel::gaussian(cov),
        LevyModel::isotropic_stable(1, 1.5),
        LevyModel::isotropic_stable(2, 1.5),
        LevyModel::cylindrical_stable(2, 1.5),
        LevyModel::tempered_stable(1, 1.5, 1.0),
        LevyModel::truncated_stable(1, 1.5),
        LevyModel::general_stable(1.5, SphericalMeasure::from_atoms(1, {{{1.0}, 1.0}})),
        LevyModel::superposition({LevyModel::brownian(1, 0.5), LevyModel::isotropic_stable(1, 1.5)}),
    };
    for (const auto &m : models) {
        for (double t : {0.1, 1.0}) {
            const auto x = draw(m, t, n);
            for (double s : {0.3, 1.0, 2.0}) {
                std::vector<double> xi(m.dim(), 0.0);
                xi[0] = s;
                if (m.dim() > 1) xi[1] = -0.5 * s;
                CHECK_MESSAGE(cf_error(m, x, t, xi) < tol, m.describe() << " t=" << t << " s=" << s);
            }
        }
    }
}

TEST_CASE("asymmetric increments reproduce the imaginary part of the symbol") {
    const auto m = LevyModel::general_stable(1.5, SphericalMeasure::from_atoms(1, {{{1.0}, 1.0}}));
    const auto x = draw(m, 1.0, 200000, 11);
    const std::vector<double> xi{0.8};
    const auto ecf = empirical_cf(x, 1, xi);
    const auto exact = std::exp(-symbol(m, xi));
    CHECK(std::abs(exact.imag()) > 0.1);
    CHECK(std::abs(ecf.imag() - exact.imag()) < 0.01);
}

TEST_CASE("small-jump cutoff bias bound is small for the default cutoff") {
    SamplerPlan plan(LevyModel::isotropic_stable(1, 1.5));
    CHECK(plan.cutoff_bias(1.0, std::vector<double>{2.0}) < 1e-3);
    CHECK_THROWS_AS(SamplerPlan(LevyModel::isotropic_stable(1, 1.5), 0.0), ArgumentError);
    CHECK_THROWS_AS(SamplerPlan(LevyModel::isotropic_stable(1, 1.5), 2.0), ArgumentError);
}

TEST_CASE("increment streams are reproducible and paths accumulate increments") {
    const auto m = LevyModel::tempered_stable(1, 1.5, 1.0);
    IncrementStream a(m, 9, 4), b(m, 9, 4);
    for (int k = 0; k < 10; ++k) CHECK(a.sample_increment(0.01) == b.sample_increment(0.01));
    IncrementStream c(m, 9, 5);
    const std::vector<double> times{0.0, 0.1, 0.3, 1.0};
    const auto path = sample_path(c, times);
    const auto pos = path.positions();
    CHECK(pos.rows() == 4);
    CHECK(pos(0, 0) == 0.0);
    CHECK(pos(3, 0) == doctest::Approx(path.increments.sum()));
    CHECK_THROWS_AS(sample_path(c, std::vector<double>{0.1, 0.2}), ArgumentError);
}

TEST_CASE("moment scaling recovers the self-similarity index") {
    std::vector<double> t;
    for (int k = 0; k <= 6; ++k) t.push_back(std::pow(10.0, -3.0 + 0.5 * k));
    const auto b = moment_scaling_probe(LevyModel::brownian(1), t, 20000);
    CHECK(std::abs(b.slope - 0.5) < 0.03);
    CHECK(b.passed);
    const auto s = moment_scaling_probe(LevyModel::isotropic_stable(1, 1.5), t, 20000);
    CHECK(std::abs(s.slope - 1.0 / 1.5) < 0.05);
}
