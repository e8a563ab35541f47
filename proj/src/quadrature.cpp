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

#include "mvlevy/quadrature.hpp"

#include "mvlevy/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace mvlevy::quad {

namespace bq = boost::math::quadrature;

Result gauss_kronrod(const Integrand &f, double a, double b, double rel_tol, unsigned max_depth) {
    Result r;
    if (a == b) return r;
    double l1 = 0.0;
    r.value = bq::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth, rel_tol, &r.error, &l1);
    return r;
}

Result piecewise(const Integrand &f, double a, double b, double max_piece, double rel_tol) {
    Result total;
    if (!(b > a)) return total;
    const double span = b - a;
    const auto pieces = static_cast<long>(std::ceil(span / max_piece));
    const long count = std::max<long>(pieces, 1);
    const double h = span / static_cast<double>(count);
    for (long i = 0; i < count; ++i) {
        const double lo = a + h * static_cast<double>(i);
        const double hi = (i + 1 == count) ? b : a + h * static_cast<double>(i + 1);
        total += gauss_kronrod(f, lo, hi, rel_tol, 8);
    }
    return total;
}

Result endpoint_singular(const Integrand &f, double a, double b, double rel_tol) {
    thread_local bq::tanh_sinh<double> integrator;
    Result r;
    if (a == b) return r;
    double l1 = 0.0;
    r.value = integrator.integrate([&](double x) { return f(x); }, a, b, rel_tol, &r.error, &l1);
    return r;
}

Result half_line(const Integrand &f, double a, double rel_tol) {
    thread_local bq::exp_sinh<double> integrator;
    Result r;
    double l1 = 0.0;
    r.value = integrator.integrate([&](double x) { return f(x); }, a,
                                   std::numeric_limits<double>::infinity(), rel_tol, &r.error,
                                   &l1);
    return r;
}

namespace {

bq::ooura_fourier_cos<double> &cos_integrator() {
    thread_local bq::ooura_fourier_cos<double> integrator(1e-12, 8);
    return integrator;
}

bq::ooura_fourier_sin<double> &sin_integrator() {
    thread_local bq::ooura_fourier_sin<double> integrator(1e-12, 8);
    return integrator;
}

} // namespace

Result cos_transform_tail(const Integrand &g, double a, double omega) {
    // ∫_a^∞ g(r) cos(ωr) dr = cos(ωa) ∫_0^∞ g(a+v) cos(ωv) dv − sin(ωa) ∫_0^∞ g(a+v) sin(ωv) dv
    auto shifted = [&](double v) { return g(a + v); };
    const auto [c, c_err] = cos_integrator().integrate(shifted, omega);
    const auto [s, s_err] = sin_integrator().integrate(shifted, omega);
    const double ca = std::cos(omega * a), sa = std::sin(omega * a);
    Result r;
    r.value = ca * c - sa * s;
    r.error = std::abs(ca) * std::abs(c) * c_err + std::abs(sa) * std::abs(s) * s_err;
    return r;
}

Result sin_transform_tail(const Integrand &g, double a, double omega) {
    // ∫_a^∞ g(r) sin(ωr) dr = sin(ωa) ∫ g(a+v) cos(ωv) dv + cos(ωa) ∫ g(a+v) sin(ωv) dv
    auto shifted = [&](double v) { return g(a + v); };
    const auto [c, c_err] = cos_integrator().integrate(shifted, omega);
    const auto [s, s_err] = sin_integrator().integrate(shifted, omega);
    const double ca = std::cos(omega * a), sa = std::sin(omega * a);
    Result r;
    r.value = sa * c + ca * s;
    r.error = std::abs(sa) * std::abs(c) * c_err + std::abs(ca) * std::abs(s) * s_err;
    return r;
}

GaussHermite gauss_hermite(std::size_t m) {
    if (m == 0) throw ArgumentError("Gauss-Hermite rule needs at least one node");
    // Jacobi matrix of the probabilists' Hermite polynomials.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(m); ++k)
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussHermite rule;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
        rule.nodes.push_back(eig.eigenvalues()[k]);
        const double v = eig.eigenvectors()(0, k);
        rule.weights.push_back(v * v);
    }
    return rule;
}

void require_converged(const Result &r, double rel_tol, double abs_tol, const char *what) {
    if (!std::isfinite(r.value) || r.error > rel_tol * std::abs(r.value) + abs_tol) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge (value " << r.value << ", residual "
            << r.error << ")";
        throw NumericalError(msg.str(), r.error);
    }
}

} // namespace mvlevy::quad
