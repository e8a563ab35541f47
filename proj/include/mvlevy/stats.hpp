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

#include <complex>
#include <span>
#include <utility>

namespace mvlevy {

/// Sample mean and unbiased variance (Welford).
std::pair<double, double> mean_and_variance(std::span<const double> x);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; ///< root-mean-square residual
};

/// Ordinary least squares y ≈ slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
/// Least squares on (log x, log y); every value must be positive.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Kolmogorov distribution tail Q(λ) = 2 Σ_{k>=1} (-1)^{k-1} e^{-2k²λ²}.
double kolmogorov_tail(double lambda);

/// (1/N) Σ_n exp(i<ξ, x_n>) for N samples stored row-major with `dim` columns.
std::complex<double> empirical_cf(std::span<const double> samples, std::size_t dim,
                                  std::span<const double> xi);

} // namespace mvlevy
