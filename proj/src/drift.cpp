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

#include "mvlevy/drift.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/quadrature.hpp"
#include "mvlevy/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace mvlevy {

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Tensor Gauss–Hermite nodes for E f(Z), Z ~ N(0, I_d).
struct TensorRule {
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
};

TensorRule tensor_hermite(std::size_t dim) {
    const auto rule = quad::gauss_hermite(dim == 1 ? 24 : dim == 2 ? 10 : 6);
    TensorRule t;
    std::vector<std::size_t> idx(dim, 0);
    const std::size_t m = rule.nodes.size();
    for (;;) {
        std::vector<double> z(dim);
        double w = 1.0;
        for (std::size_t a = 0; a < dim; ++a) {
            z[a] = rule.nodes[idx[a]];
            w *= rule.weights[idx[a]];
        }
        t.nodes.push_back(std::move(z));
        t.weights.push_back(w);
        std::size_t a = 0;
        while (a < dim && ++idx[a] == m) idx[a++] = 0;
        if (a == dim) break;
    }
    return t;
}

std::shared_ptr<const EmpiricalMeasure> share(const EmpiricalMeasure &mu) {
    return std::make_shared<const EmpiricalMeasure>(mu);
}

/// A random cloud for invariant spot checks.
EmpiricalMeasure random_cloud(RandomStream &rng, std::size_t dim, double radius) {
    const std::size_t n = 8;
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    const double spread = 0.25 + 1.75 * rng.uniform();
    std::vector<double> shift(dim);
    for (auto &s : shift) s = radius * (2.0 * rng.uniform() - 1.0) / 2;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index k = 0; k < p.cols(); ++k) p(i, k) = shift[static_cast<std::size_t>(k)] + spread * rng.normal();
    return EmpiricalMeasure(std::move(p));
}

void random_point(RandomStream &rng, double radius, std::span<double> x) {
    for (auto &v : x) v = radius * (2.0 * rng.uniform() - 1.0);
}

} // namespace

BoundDrift DriftSpec::bind(double t, const EmpiricalMeasure &mu) const {
    if (binder) return binder(t, mu);
    switch (dependence) {
    case MeasureDependence::MeasureFree:
        if (!measure_free) throw ArgumentError("drift '" + name + "' has no evaluator");
        return [f = measure_free, t](std::span<const double> x, std::span<double> out) { f(t, x, out); };
    case MeasureDependence::Convolution: {
        if (!convolution) throw ArgumentError("drift '" + name + "' lacks its convolution structure");
        if (mu.dim() != dim) throw ArgumentError("drift '" + name + "': measure dimension mismatch");
        const auto &c = *convolution;
        if (c.kernel_ignores_x) {
            std::vector<double> feature(c.features, 0.0), tmp(c.features);
            const std::vector<double> origin(dim, 0.0);
            std::vector<double> y(dim);
            for (std::size_t i = 0; i < mu.size(); ++i) {
                for (std::size_t k = 0; k < dim; ++k)
                    y[k] = mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                c.kernel(origin, y, tmp);
                for (std::size_t f = 0; f < c.features; ++f) feature[f] += mu.weights()[i] * tmp[f];
            }
            return [outer = c.outer, t, feature](std::span<const double> x, std::span<double> out) {
                outer(t, x, feature, out);
            };
        }
        return [c, t, m = share(mu), d = dim](std::span<const double> x, std::span<double> out) {
            std::vector<double> feature(c.features, 0.0), tmp(c.features), y(d);
            for (std::size_t i = 0; i < m->size(); ++i) {
                for (std::size_t k = 0; k < d; ++k)
                    y[k] = m->particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
                c.kernel(x, y, tmp);
                for (std::size_t f = 0; f < c.features; ++f) feature[f] += m->weights()[i] * tmp[f];
            }
            c.outer(t, x, feature, out);
        };
    }
    case MeasureDependence::Opaque:
        if (!opaque) throw ArgumentError("drift '" + name + "' has no evaluator");
        return [f = opaque, t, m = share(mu)](std::span<const double> x, std::span<double> out) { f(t, x, *m, out); };
    }
    throw ArgumentError("unknown drift dependence");
}

std::vector<double> DriftSpec::evaluate(double t, std::span<const double> x, const EmpiricalMeasure &mu) const {
    if (x.size() != dim) throw ArgumentError("drift '" + name + "': position has the wrong dimension");
    std::vector<double> out(dim, 0.0);
    bind(t, mu)(x, out);
    return out;
}

// -------------------------------------------------------------- built-ins

DriftSpec zero_drift(std::size_t dim) {
    DriftSpec d;
    d.name = "zero";
    d.dim = dim;
    d.measure_free = [](double, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    d.envelope = DriftEnvelope{};
    d.lipschitz_modulus = [](double) { return 0.0; };
    return d;
}

DriftSpec linear_drift(std::size_t dim, double rate) {
    DriftSpec d;
    d.name = "linear";
    d.dim = dim;
    d.measure_free = [rate](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = -rate * x[k];
    };
    d.lipschitz_modulus = [rate](double) { return std::abs(rate); };
    return d;
}

DriftSpec mean_reverting_drift(std::size_t dim, double rate) {
    DriftSpec d;
    d.name = "mean_reverting";
    d.dim = dim;
    d.dependence = MeasureDependence::Convolution;
    ConvolutionStructure c;
    c.features = dim;
    c.kernel = [](std::span<const double>, std::span<const double> y, std::span<double> out) {
        std::copy(y.begin(), y.end(), out.begin());
    };
    c.kernel_ignores_x = true;
    c.outer = [rate](double, std::span<const double> x, std::span<const double> mean, std::span<double> out) {
        for (std::size_t k = 0; k < x.size(); ++k) out[k] = -rate * (x[k] - mean[k]);
    };
    d.convolution = std::move(c);
    d.lipschitz_modulus = [rate](double) { return std::abs(rate); };
    return d;
}

DriftSpec sign_drift() {
    DriftSpec d;
    d.name = "sign";
    d.dim = 1;
    d.measure_free = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
    };
    d.bounded_part = 1.0;
    d.envelope = DriftEnvelope{{}, {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0, 1.0}};
    d.breakpoints = {0.0};
    return d;
}

DriftSpec singular_power_drift(double exponent, double radius, double p, double q, double horizon) {
    if (!(exponent > 0.0) || !(radius > 0.0)) throw ArgumentError("singular drift needs positive exponent and radius");
    if (!(exponent * p < 1.0))
        throw ArgumentError("singular drift |x|^-a is in L^p near 0 only when a p < 1");
    auto g = [exponent, radius](double x) {
        const double r = std::abs(x);
        if (r > radius) return 0.0;
        return r == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(r, -exponent);
    };
    DriftSpec d;
    d.name = "singular_power";
    d.dim = 1;
    d.measure_free = [g](double, std::span<const double> x, std::span<double> out) {
        out[0] = x[0] == 0.0 ? 0.0 : g(x[0]);
    };
    d.envelope = DriftEnvelope{[g](double, std::span<const double> x) { return g(x[0]); }, {p, q, 0.0, horizon}};
    d.breakpoints = {-radius, 0.0, radius};
    return d;
}

double mollified_sign(double x, int n) { return std::erf(static_cast<double>(n) * x / std::numbers::sqrt2); }

// ---------------------------------------------------------- mollification

namespace {

/// Points in (a, b) where |g| crosses `level`, found by scanning and bisection.
/// Truncation leaves a kink there that adaptive quadrature resolves poorly.
void add_level_crossings(const std::function<double(double)> &g, double a, double b, double level,
                         std::vector<double> &cuts) {
    constexpr int scan = 32;
    // Clipped values can land an ulp below the level.
    auto side = [&](double y) { return std::abs(g(y)) >= level * (1.0 - 1e-12); };
    double prev = a + 1e-12 * (b - a);
    bool prev_side = side(prev);
    for (int k = 1; k <= scan; ++k) {
        const double y = k == scan ? b - 1e-12 * (b - a) : a + (b - a) * k / scan;
        const bool cur = side(y);
        if (cur != prev_side) {
            double l = prev, r = y;
            for (int it = 0; it < 60 && r - l > 1e-15 * (1.0 + std::abs(l)); ++it) {
                const double mid = 0.5 * (l + r);
                (side(mid) == prev_side ? l : r) = mid;
            }
            cuts.push_back(0.5 * (l + r));
        }
        prev = y;
        prev_side = cur;
    }
}

/// ∫ g(x - z) φ_σ(z) dz in d = 1, split at the breakpoints of g and, when
/// g is truncated at `level`, at its level crossings.  Non-smooth g (any
/// breakpoints) uses tanh-sinh, which tolerates steep piece ends.
double convolve_1d(const std::function<double(double)> &g, double x, double sigma,
                   const std::vector<double> &breakpoints, bool singular,
                   double level = std::numeric_limits<double>::infinity()) {
    const double lo = x - 8.0 * sigma, hi = x + 8.0 * sigma;
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    if (std::isfinite(level)) {
        const std::size_t pieces = cuts.size() - 1;
        for (std::size_t k = 0; k < pieces; ++k) add_level_crossings(g, cuts[k], cuts[k + 1], level, cuts);
        std::sort(cuts.begin(), cuts.end());
    }
    const double c = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto f = [&](double y) {
        const double u = (x - y) / sigma;
        return g(y) * c * std::exp(-0.5 * u * u);
    };
    quad::Result total;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        total += singular ? quad::endpoint_singular(f, cuts[k], cuts[k + 1], 1e-12)
                          : quad::gauss_kronrod(f, cuts[k], cuts[k + 1], 1e-13, 15);
    quad::require_converged(total, 1e-7, 1e-12, "drift mollification");
    return total.value;
}

} // namespace

DriftSpec mollify_drift(const DriftSpec &base, int n, const MollifyOptions &options) {
    if (n < 1) throw ArgumentError("mollification index n must be at least 1");
    if (base.dependence == MeasureDependence::Opaque)
        throw UnsupportedError("drift '" + base.name +
                               "' has opaque measure dependence; only measure-free and convolution-type drifts "
                               "can be mollified");
    const double sigma = 1.0 / n;
    const double level = n;
    const std::size_t dim = base.dim;
    const auto rule = std::make_shared<const TensorRule>(tensor_hermite(dim));

    DriftSpec out;
    out.name = base.name + "_mollified_" + std::to_string(n);
    out.dim = dim;
    out.dependence = base.dependence;
    out.bounded_part = base.bounded_part;
    out.breakpoints = {};

    // μ ↦ μ * N(0, σ² I) through Gauss–Hermite nodes attached to each particle.
    auto smoothed = [rule, sigma](const EmpiricalMeasure &mu) {
        const std::size_t m = rule->weights.size();
        Eigen::MatrixXd p(static_cast<Eigen::Index>(mu.size() * m), static_cast<Eigen::Index>(mu.dim()));
        std::vector<double> w(mu.size() * m);
        for (std::size_t i = 0; i < mu.size(); ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const auto row = static_cast<Eigen::Index>(i * m + k);
                for (std::size_t a = 0; a < mu.dim(); ++a)
                    p(row, static_cast<Eigen::Index>(a)) =
                        mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) + sigma * rule->nodes[k][a];
                w[i * m + k] = mu.weights()[i] * rule->weights[k];
            }
        double total = 0.0;
        for (double v : w) total += v;
        for (auto &v : w) v /= total;
        return EmpiricalMeasure(std::move(p), std::move(w));
    };

    out.binder = [base, rule, sigma, level, dim, smoothed](double t, const EmpiricalMeasure &mu) -> BoundDrift {
        const BoundDrift inner = base.dependence == MeasureDependence::MeasureFree ? base.bind(t, mu)
                                                                                   : base.bind(t, smoothed(mu));
        auto truncated = [inner, level, dim](std::span<const double> x, std::span<double> v) {
            inner(x, v);
            const double r = norm(v);
            if (!std::isfinite(r) || r > level) {
                if (!std::isfinite(r)) {
                    // Points of infinite value are measure-zero; clip them to the level.
                    for (auto &c : v) c = std::isfinite(c) ? c : (c > 0 ? level : -level);
                }
                const double rr = norm(v);
                if (rr > level)
                    for (auto &c : v) c *= level / rr;
            }
            (void)dim;
        };
        if (dim == 1) {
            return [truncated, sigma, level, breaks = base.breakpoints](std::span<const double> x,
                                                                        std::span<double> v) {
                auto g = [&](double y) {
                    double val[1];
                    const double pos[1] = {y};
                    truncated(pos, val);
                    return val[0];
                };
                v[0] = convolve_1d(g, x[0], sigma, breaks, !breaks.empty(), level);
            };
        }
        return [truncated, sigma, rule, dim](std::span<const double> x, std::span<double> v) {
            std::fill(v.begin(), v.end(), 0.0);
            std::vector<double> y(dim), val(dim);
            for (std::size_t k = 0; k < rule->weights.size(); ++k) {
                for (std::size_t a = 0; a < dim; ++a) y[a] = x[a] - sigma * rule->nodes[k][a];
                truncated(y, val);
                for (std::size_t a = 0; a < dim; ++a) v[a] += rule->weights[k] * val[a];
            }
        };
    };

    if (base.envelope) {
        DriftEnvelope env = *base.envelope;
        if (env.singular) {
            const auto g = base.envelope->singular;
            if (dim == 1) {
                env.singular = [g, sigma, breaks = base.breakpoints](double t, std::span<const double> x) {
                    return convolve_1d([&](double y) {
                        const double pos[1] = {y};
                        return g(t, pos);
                    }, x[0], sigma, breaks, true);
                };
            } else {
                env.singular = [g, sigma, rule, dim](double t, std::span<const double> x) {
                    std::vector<double> y(dim);
                    double acc = 0.0;
                    for (std::size_t k = 0; k < rule->weights.size(); ++k) {
                        for (std::size_t a = 0; a < dim; ++a) y[a] = x[a] - sigma * rule->nodes[k][a];
                        acc += rule->weights[k] * g(t, y);
                    }
                    return acc;
                };
            }
        }
        out.envelope = std::move(env);
    }

    // Lipschitz modulus from sampled difference quotients, times 2.
    RandomStream rng(options.seed, static_cast<std::uint64_t>(n));
    double worst = 0.0;
    std::vector<double> x(dim), y(dim), bx(dim), by(dim);
    const bool measure_free = base.dependence == MeasureDependence::MeasureFree;
    for (std::size_t s = 0; s < options.lipschitz_samples; ++s) {
        const double t = options.horizon * rng.uniform();
        random_point(rng, options.probe_radius, x);
        const double step = sigma * std::pow(10.0, -2.0 + 3.0 * rng.uniform());
        double dn = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
            y[a] = x[a] + step * rng.normal();
            dn += (y[a] - x[a]) * (y[a] - x[a]);
        }
        const auto mu = random_cloud(rng, dim, options.probe_radius);
        double wdist = 0.0;
        EmpiricalMeasure nu = mu;
        if (!measure_free) {
            Eigen::MatrixXd moved = mu.particles();
            for (Eigen::Index i = 0; i < moved.rows(); ++i)
                for (Eigen::Index a = 0; a < moved.cols(); ++a) moved(i, a) += step * rng.normal();
            nu = EmpiricalMeasure(std::move(moved));
            wdist = wasserstein_theta(mu, nu, 1.0);
        }
        out.binder(t, mu)(x, bx);
        out.binder(t, nu)(y, by);
        double diff = 0.0;
        for (std::size_t a = 0; a < dim; ++a) diff += (bx[a] - by[a]) * (bx[a] - by[a]);
        const double denom = std::sqrt(dn) + wdist;
        if (denom > 0.0) worst = std::max(worst, std::sqrt(diff) / denom);
    }
    if (!std::isfinite(worst)) throw NumericalError("mollified drift has no finite sampled Lipschitz modulus");
    const double modulus = 2.0 * worst;
    out.lipschitz_modulus = [modulus](double) { return modulus; };
    return out;
}

// -------------------------------------------------------------- invariants

InvariantCheck check_envelope(const DriftSpec &drift, std::size_t samples, double horizon, double radius,
                              std::uint64_t seed) {
    if (!drift.envelope) throw ArgumentError("drift '" + drift.name + "' declares no envelope");
    RandomStream rng(seed, 0);
    InvariantCheck check;
    check.samples = samples;
    check.worst = -std::numeric_limits<double>::infinity();
    std::vector<double> x(drift.dim), b(drift.dim);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = horizon * rng.uniform();
        random_point(rng, radius, x);
        const auto mu = random_cloud(rng, drift.dim, radius);
        drift.bind(t, mu)(x, b);
        const double excess = norm(b) - ((*drift.envelope)(t, x) + drift.bounded_part);
        check.worst = std::max(check.worst, excess);
        // Slack for the quadrature error of mollified drifts and envelopes.
        if (excess > 1e-9 * (1.0 + norm(b))) ++check.violations;
    }
    check.passed = check.violations == 0;
    return check;
}

InvariantCheck check_lipschitz(const DriftSpec &drift, std::size_t samples, double theta, double horizon,
                               double radius, std::uint64_t seed) {
    if (!drift.is_lipschitz()) throw ArgumentError("drift '" + drift.name + "' declares no Lipschitz modulus");
    RandomStream rng(seed, 0);
    InvariantCheck check;
    check.samples = samples;
    std::vector<double> x(drift.dim), y(drift.dim), bx(drift.dim), by(drift.dim);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = horizon * rng.uniform();
        random_point(rng, radius, x);
        random_point(rng, radius, y);
        const auto mu = random_cloud(rng, drift.dim, radius);
        const auto nu = random_cloud(rng, drift.dim, radius);
        drift.bind(t, mu)(x, bx);
        drift.bind(t, nu)(y, by);
        double diff = 0.0, dist = 0.0;
        for (std::size_t a = 0; a < drift.dim; ++a) {
            diff += (bx[a] - by[a]) * (bx[a] - by[a]);
            dist += (x[a] - y[a]) * (x[a] - y[a]);
        }
        const double bound = drift.lipschitz_modulus(t) * (std::sqrt(dist) + wasserstein_theta(mu, nu, theta));
        const double quotient = bound > 0.0 ? std::sqrt(diff) / bound : (diff > 0.0 ? INFINITY : 0.0);
        check.worst = std::max(check.worst, quotient);
        if (std::sqrt(diff) > bound * (1.0 + 1e-6)) ++check.violations;
    }
    check.passed = check.violations == 0;
    return check;
}

std::vector<GridFunction> envelope_slices(const DriftEnvelope &envelope, const GridSpec &grid, std::size_t slices) {
    if (slices == 0) throw ArgumentError("envelope needs at least one time slice");
    std::vector<GridFunction> out;
    const double h = (envelope.norm.end - envelope.norm.start) / static_cast<double>(slices);
    for (std::size_t i = 0; i < slices; ++i) {
        const double t = envelope.norm.start + (static_cast<double>(i) + 0.5) * h;
        out.push_back(GridFunction::sample(grid, [&](std::span<const double> x) {
            const double v = envelope(t, x);
            return std::isfinite(v) ? v : 0.0;
        }));
    }
    return out;
}

} // namespace mvlevy
