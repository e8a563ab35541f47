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

#include <functional>
#include <vector>

namespace mvlevy::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;

    Result &operator+=(const Result &other) {
        value += other.value;
        error += other.error;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss–Kronrod (21 point) on a finite interval.
Result gauss_kronrod(const Integrand &f, double a, double b, double rel_tol = 1e-12,
                     unsigned max_depth = 12);

/// Adaptive Gauss–Kronrod after splitting [a, b] into pieces of length at most
/// `max_piece`; used for oscillatory integrands with a known period.
Result piecewise(const Integrand &f, double a, double b, double max_piece, double rel_tol = 1e-12);

/// Double-exponential (tanh-sinh) rule for integrable endpoint singularities.
Result endpoint_singular(const Integrand &f, double a, double b, double rel_tol = 1e-12);

/// ∫_a^∞ f for smooth f with at least integrable algebraic decay.
Result half_line(const Integrand &f, double a, double rel_tol = 1e-12);

/// ∫_a^∞ g(r) cos(ω r) dr and ∫_a^∞ g(r) sin(ω r) dr for smooth decaying g, ω > 0.
Result cos_transform_tail(const Integrand &g, double a, double omega);
Result sin_transform_tail(const Integrand &g, double a, double omega);

/// Nodes and weights with Σ w_k f(z_k) ≈ E f(Z), Z ~ N(0, 1), exact for
/// polynomials of degree < 2m (Golub–Welsch).
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermite gauss_hermite(std::size_t m);

/// Throws NumericalError when |error| exceeds rel_tol·|value| + abs_tol.
void require_converged(const Result &r, double rel_tol, double abs_tol, const char *what);

} // namespace mvlevy::quad
