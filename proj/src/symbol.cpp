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

#include "mvlevy/error.hpp"
#include "mvlevy/levy_model.hpp"
#include "mvlevy/quadrature.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mvlevy {

namespace {

constexpr double kTol = 1e-8;
constexpr double kPi = std::numbers::pi;

/// 2 sin²(x/2) / x², stable near zero.
double half_sinc_sq(double x) {
    if (std::abs(x) < 1e-4) return 0.5 - x * x / 24.0;
    const double s = std::sin(x / 2);
    return 2.0 * s * s / (x * x);
}

/// (x - sin x) / x³, stable near zero.
double x_minus_sin_over_cube(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return 1.0 / 6 - x2 * (1.0 / 120 - x2 * (1.0 / 5040 - x2 * (1.0 / 362880 - x2 / 39916800.0)));
    }
    return (x - std::sin(x)) / (x * x * x);
}

void check(const quad::Result &r, const char *what) { quad::require_converged(r, kTol, 1e-300, what); }

/// ∫_0^a (1 - cos rs) r^{-1-α} ρ(r) dr; the r^{1-α} singularity is left to
/// the double-exponential rule.
double cos_head(double s, double a, double alpha, const RadialModulator &rho) {
    auto f = [&](double r) { return half_sinc_sq(r * s) * std::pow(r, 1.0 - alpha) * rho(r); };
    auto r = quad::endpoint_singular(f, 0.0, a, 1e-12);
    check(r, "radial cosine integral (head)");
    return s * s * r.value;
}

/// ∫_0^a (rs - sin rs) r^{-1-α} ρ(r) dr.
double sin_head(double s, double a, double alpha, const RadialModulator &rho) {
    auto f = [&](double r) { return x_minus_sin_over_cube(r * s) * std::pow(r, 2.0 - alpha) * rho(r); };
    auto r = quad::endpoint_singular(f, 0.0, a, 1e-12);
    check(r, "radial sine integral (head)");
    return s * s * s * r.value;
}

/// Radius past which e^{-cr} r^{-1-α} contributes less than 1e-17 in total.
double exponential_cutoff(double rate, double alpha) {
    double e = 1.0;
    while (std::exp(-rate * e) * std::pow(e, -1.0 - alpha) * 2.0 / rate > 1e-17) e *= 2.0;
    return e;
}

} // namespace

double stable_cos_constant(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw ModelError("stable constant needs alpha in (1, 2)");
    // ∫_0^1 (1 - cos u) u^{-1-α} + ∫_1^∞ u^{-1-α} - ∫_1^∞ cos u u^{-1-α}
    const double head = cos_head(1.0, 1.0, alpha, RadialModulator::unit());
    auto g = [alpha](double u) { return std::pow(u, -1.0 - alpha); };
    auto tail = quad::cos_transform_tail(g, 1.0, 1.0);
    check(tail, "stable cosine constant (tail)");
    return head + 1.0 / alpha - tail.value;
}

double stable_sin_constant(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw ModelError("stable constant needs alpha in (1, 2)");
    const double head = sin_head(1.0, 1.0, alpha, RadialModulator::unit());
    auto g = [alpha](double u) { return std::pow(u, -1.0 - alpha); };
    auto tail = quad::sin_transform_tail(g, 1.0, 1.0);
    check(tail, "stable sine constant (tail)");
    return head + 1.0 / (alpha - 1.0) - tail.value;
}

double JumpSpec::radial_cos(double s) const {
    s = std::abs(s);
    if (s == 0.0) return 0.0;
    const double alpha = alpha_;
    const double c = rho_.parameter();
    auto power = [alpha](double r) { return std::pow(r, -1.0 - alpha); };
    switch (rho_.kind()) {
    case RadialModulator::Kind::Unit:
        return cos_constant_ * std::pow(s, alpha);
    case RadialModulator::Kind::Indicator: {
        const double R = rho_.radius();
        if (s * R <= 8 * kPi) {
            const double a = std::min(R, 1.0 / s);
            double value = cos_head(s, a, alpha, RadialModulator::unit());
            if (a < R) {
                auto f = [&](double r) { return (1.0 - std::cos(r * s)) * power(r); };
                auto r = quad::piecewise(f, a, R, kPi / s, 1e-12);
                check(r, "truncated radial cosine integral");
                value += r.value;
            }
            return c * value;
        }
        auto tail = quad::cos_transform_tail(power, R, s);
        check(tail, "truncated radial cosine integral (tail)");
        return c * (cos_constant_ * std::pow(s, alpha) - std::pow(R, -alpha) / alpha + tail.value);
    }
    case RadialModulator::Kind::Exponential: {
        const double a = std::min(1.0, 1.0 / s);
        double value = cos_head(s, a, alpha, rho_);
        auto g = [&](double r) { return power(r) * std::exp(-c * r); };
        const double end = exponential_cutoff(c, alpha);
        if (s < 1.0 && end * s < 1e4) {
            auto f = [&](double r) { return (1.0 - std::cos(r * s)) * g(r); };
            auto r = quad::piecewise(f, a, std::max(end, a), std::max(kPi / s, 1.0), 1e-12);
            check(r, "tempered radial cosine integral");
            value += r.value;
        } else {
            auto mass = quad::half_line(g, a, 1e-12);
            check(mass, "tempered radial mass");
            auto tail = quad::cos_transform_tail(g, a, s);
            check(tail, "tempered radial cosine integral (tail)");
            value += mass.value - tail.value;
        }
        return value;
    }
    }
    return 0.0;
}

double JumpSpec::radial_sin(double s) const {
    if (s == 0.0) return 0.0;
    const double sign = s < 0 ? -1.0 : 1.0;
    s = std::abs(s);
    const double alpha = alpha_;
    if (rho_.kind() == RadialModulator::Kind::Unit)
        return sign * (sin_constant_ * std::pow(s, alpha) - s / (alpha - 1.0));

    auto g = [&](double r) { return std::pow(r, -1.0 - alpha) * rho_(r); };
    const double end = rho_.support_end();
    const double r1 = std::min(1.0, end);
    const double a = std::min(r1, 1.0 / s);
    double value = sin_head(s, a, alpha, rho_);
    if (a < r1) {
        auto f = [&](double r) { return (r * s - std::sin(r * s)) * g(r); };
        auto r = quad::piecewise(f, a, r1, kPi / s, 1e-12);
        check(r, "radial sine integral (compensated part)");
        value += r.value;
    }
    if (end > 1.0) {
        quad::Result r;
        if (std::isfinite(end)) {
            r = quad::piecewise([&](double x) { return std::sin(x * s) * g(x); }, 1.0, end,
                                kPi / s, 1e-12);
        } else if (const double stop = exponential_cutoff(rho_.parameter(), alpha);
                   s >= 1.0 || stop * s >= 1e4) {
            r = quad::sin_transform_tail(g, 1.0, s);
        } else {
            r = quad::piecewise([&](double x) { return std::sin(x * s) * g(x); }, 1.0,
                                std::max(stop, 1.0), std::max(kPi / s, 1.0), 1e-12);
        }
        check(r, "radial sine integral (large jumps)");
        value -= r.value;
    }
    return sign * value;
}

double JumpSpec::small_jump_variance(double eps) const {
    if (!(eps > 0.0)) throw ArgumentError("cutoff must be positive");
    const double alpha = alpha_;
    switch (rho_.kind()) {
    case RadialModulator::Kind::Unit: return std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
    case RadialModulator::Kind::Indicator:
        return rho_.parameter() * std::pow(std::min(eps, rho_.radius()), 2.0 - alpha) / (2.0 - alpha);
    case RadialModulator::Kind::Exponential: {
        const double kappa = 1.0 / (2.0 - alpha);
        const double c = rho_.parameter();
        auto r = quad::gauss_kronrod([&](double v) { return std::exp(-c * eps * std::pow(v, kappa)); },
                                     0.0, 1.0, 1e-12);
        check(r, "small-jump variance");
        return std::pow(eps, 2.0 - alpha) * kappa * r.value;
    }
    }
    return 0.0;
}

double JumpSpec::tail_mass(double eps) const {
    if (!(eps > 0.0)) throw ArgumentError("cutoff must be positive");
    const double alpha = alpha_;
    switch (rho_.kind()) {
    case RadialModulator::Kind::Unit: return std::pow(eps, -alpha) / alpha;
    case RadialModulator::Kind::Indicator: {
        const double R = rho_.radius();
        if (eps >= R) return 0.0;
        return rho_.parameter() * (std::pow(eps, -alpha) - std::pow(R, -alpha)) / alpha;
    }
    case RadialModulator::Kind::Exponential: {
        const double c = rho_.parameter();
        auto r = quad::half_line([&](double x) { return std::pow(x, -1.0 - alpha) * std::exp(-c * x); },
                                 eps, 1e-12);
        check(r, "jump tail mass");
        return r.value;
    }
    }
    return 0.0;
}

double JumpSpec::mid_first_moment(double eps) const {
    if (!(eps > 0.0)) throw ArgumentError("cutoff must be positive");
    if (eps >= 1.0) return 0.0;
    const double alpha = alpha_;
    switch (rho_.kind()) {
    case RadialModulator::Kind::Unit: return (std::pow(eps, 1.0 - alpha) - 1.0) / (alpha - 1.0);
    case RadialModulator::Kind::Indicator: {
        const double top = std::min(1.0, rho_.radius());
        if (eps >= top) return 0.0;
        return rho_.parameter() * (std::pow(eps, 1.0 - alpha) - std::pow(top, 1.0 - alpha)) / (alpha - 1.0);
    }
    case RadialModulator::Kind::Exponential: {
        const double c = rho_.parameter();
        auto r = quad::gauss_kronrod([&](double x) { return std::pow(x, -alpha) * std::exp(-c * x); },
                                     eps, 1.0, 1e-12);
        check(r, "first moment of mid-size jumps");
        return r.value;
    }
    }
    return 0.0;
}

namespace {

/// Jump part of Φ for one JumpSpec.
std::complex<double> jump_symbol(const JumpSpec &jump, std::span<const double> xi) {
    const auto &mu = jump.spherical();
    if (mu.is_uniform() && mu.dim() >= 2) {
        double norm2 = 0.0;
        for (double x : xi) norm2 += x * x;
        const double zeta = std::sqrt(norm2);
        if (zeta == 0.0) return 0.0;
        const double alpha = jump.alpha();
        const double d = static_cast<double>(mu.dim());
        if (jump.rho().kind() == RadialModulator::Kind::Unit)
            return mu.total_mass() * jump.cos_constant() * std::pow(zeta, alpha) *
                   sphere_abs_moment(mu.dim(), alpha);
        // θ_1 = sin φ has density ∝ cos^{d-2} φ on (-π/2, π/2); I is even.
        const double norm = std::sqrt(kPi) * std::exp(std::lgamma((d - 1) / 2) - std::lgamma(d / 2)) / 2;
        auto f = [&](double phi) {
            return jump.radial_cos(zeta * std::sin(phi)) * std::pow(std::cos(phi), d - 2);
        };
        auto r = quad::gauss_kronrod(f, 0.0, kPi / 2, 1e-10);
        check(r, "zonal average of the radial symbol");
        return mu.total_mass() * r.value / norm;
    }
    double re = 0.0, im = 0.0;
    const bool symmetric = jump.is_symmetric();
    for (const auto &atom : mu.atoms()) {
        double s = 0.0;
        for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * atom.direction[k];
        re += atom.weight * jump.radial_cos(s);
        if (!symmetric) im += atom.weight * jump.radial_sin(s);
    }
    return {re, im};
}

} // namespace

std::complex<double> symbol(const LevyModel &model, std::span<const double> xi) {
    if (xi.size() != model.dim())
        throw ArgumentError("symbol: frequency has dimension " + std::to_string(xi.size()) +
                            ", model has " + std::to_string(model.dim()));
    std::complex<double> value = 0.0;
    if (model.has_gaussian()) {
        const auto d = static_cast<Eigen::Index>(xi.size());
        const Eigen::Map<const Eigen::VectorXd> v(xi.data(), d);
        value += 0.5 * v.dot(model.gaussian_cov() * v);
    }
    if (model.jump()) value += jump_symbol(*model.jump(), xi);
    for (const auto &c : model.components()) value += symbol(c, xi);
    return value;
}

double radial_symbol(const LevyModel &model, double xi_norm) {
    if (!model.is_radial()) throw ArgumentError("radial_symbol: model is not rotation invariant");
    std::vector<double> xi(model.dim(), 0.0);
    xi[0] = xi_norm;
    return symbol(model, xi).real();
}

} // namespace mvlevy
