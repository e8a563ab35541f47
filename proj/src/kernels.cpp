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

#include "mvlevy/kernels.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/sampler.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace mvlevy::kernels {

namespace {

constexpr std::size_t kBlock = 4096;

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

void ecf_block(std::span<const double> samples, std::size_t dim, std::span<const double> xi,
               std::size_t block, double &re, double &im) {
    const std::size_t n = samples.size() / dim;
    const std::size_t lo = block * kBlock, hi = std::min(n, lo + kBlock);
    re = 0.0;
    im = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        double phase = 0.0;
        for (std::size_t k = 0; k < dim; ++k) phase += xi[k] * samples[i * dim + k];
        re += std::cos(phase);
        im += std::sin(phase);
    }
}

std::complex<double> ecf_finish(const std::vector<double> &re, const std::vector<double> &im,
                                std::size_t n) {
    return {ordered_sum(re) / static_cast<double>(n), ordered_sum(im) / static_cast<double>(n)};
}

void kde_point(std::span<const double> points, std::span<const double> weights, std::size_t dim,
               std::span<const double> h, const double *x, double &out) {
    const std::size_t n = weights.size();
    double norm = 1.0;
    for (std::size_t k = 0; k < dim; ++k) norm *= h[k] * std::sqrt(2.0 * std::numbers::pi);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double u = (x[k] - points[i * dim + k]) / h[k];
            e += u * u;
        }
        acc += weights[i] * std::exp(-0.5 * e);
    }
    out = acc / norm;
}

void check_kde(std::span<const double> points, std::span<const double> weights, std::size_t dim,
               std::span<const double> h, std::span<const double> eval, std::span<double> out) {
    if (dim == 0 || points.size() != weights.size() * dim || h.size() != dim ||
        eval.size() != out.size() * dim)
        throw ArgumentError("kernel density estimate: shape mismatch");
}

} // namespace

double ordered_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const auto half = x.size() / 2;
    return ordered_sum(x.first(half)) + ordered_sum(x.subspan(half));
}

std::complex<double> ecf_serial(std::span<const double> samples, std::size_t dim,
                                std::span<const double> xi) {
    const std::size_t n = samples.size() / dim;
    std::vector<double> re(block_count(n)), im(block_count(n));
    for (std::size_t b = 0; b < re.size(); ++b) ecf_block(samples, dim, xi, b, re[b], im[b]);
    return ecf_finish(re, im, n);
}

std::complex<double> ecf_omp(std::span<const double> samples, std::size_t dim,
                             std::span<const double> xi) {
    const std::size_t n = samples.size() / dim;
    std::vector<double> re(block_count(n)), im(block_count(n));
    parallel_for(re.size(), [&](std::size_t b) { ecf_block(samples, dim, xi, b, re[b], im[b]); });
    return ecf_finish(re, im, n);
}

void increments_serial(const SamplerPlan &plan, std::span<RandomStream> streams, double dt,
                       std::span<double> out) {
    const std::size_t d = plan.dim();
    if (out.size() != streams.size() * d) throw ArgumentError("increment batch: shape mismatch");
    for (std::size_t i = 0; i < streams.size(); ++i) {
        auto row = out.subspan(i * d, d);
        std::fill(row.begin(), row.end(), 0.0);
        plan.add_increment(streams[i], dt, row);
    }
}

void increments_omp(const SamplerPlan &plan, std::span<RandomStream> streams, double dt,
                    std::span<double> out) {
    const std::size_t d = plan.dim();
    if (out.size() != streams.size() * d) throw ArgumentError("increment batch: shape mismatch");
    parallel_for(streams.size(), [&](std::size_t i) {
        auto row = out.subspan(i * d, d);
        std::fill(row.begin(), row.end(), 0.0);
        plan.add_increment(streams[i], dt, row);
    });
}

void kde_serial(std::span<const double> points, std::span<const double> weights, std::size_t dim,
                std::span<const double> h, std::span<const double> eval, std::span<double> out) {
    check_kde(points, weights, dim, h, eval, out);
    for (std::size_t j = 0; j < out.size(); ++j) kde_point(points, weights, dim, h, &eval[j * dim], out[j]);
}

void kde_omp(std::span<const double> points, std::span<const double> weights, std::size_t dim,
             std::span<const double> h, std::span<const double> eval, std::span<double> out) {
    check_kde(points, weights, dim, h, eval, out);
    parallel_for(out.size(), [&](std::size_t j) { kde_point(points, weights, dim, h, &eval[j * dim], out[j]); });
}

} // namespace mvlevy::kernels
