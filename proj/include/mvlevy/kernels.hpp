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

#include "mvlevy/rng.hpp"

#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

namespace mvlevy {
class SamplerPlan;
}

/// Hot loops in two flavours: a serial reference and an OpenMP version.
/// Both partition work identically and reduce in a fixed order, so their
/// results agree bit for bit whatever the thread count.
namespace mvlevy::kernels {

/// Pairwise sum in a fixed association order.
double ordered_sum(std::span<const double> x);

/// Runs fn(i) for i in [0, n) on the OpenMP team; the first exception thrown
/// by any iteration is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t n, Fn &&fn) {
    std::exception_ptr error;
    std::mutex guard;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

std::complex<double> ecf_serial(std::span<const double> samples, std::size_t dim,
                                std::span<const double> xi);
std::complex<double> ecf_omp(std::span<const double> samples, std::size_t dim,
                             std::span<const double> xi);

/// out row i = one increment of length dt drawn from streams[i].
void increments_serial(const SamplerPlan &plan, std::span<RandomStream> streams, double dt,
                       std::span<double> out);
void increments_omp(const SamplerPlan &plan, std::span<RandomStream> streams, double dt,
                    std::span<double> out);

/// Separable Gaussian kernel density estimate of a weighted cloud at the
/// `eval` points (row-major, `dim` columns each).
void kde_serial(std::span<const double> points, std::span<const double> weights, std::size_t dim,
                std::span<const double> bandwidth, std::span<const double> eval, std::span<double> out);
void kde_omp(std::span<const double> points, std::span<const double> weights, std::size_t dim,
             std::span<const double> bandwidth, std::span<const double> eval, std::span<double> out);

} // namespace mvlevy::kernels
