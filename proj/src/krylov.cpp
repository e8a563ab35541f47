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

#include "mvlevy/krylov.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/kernel.hpp"
#include "mvlevy/kernels.hpp"
#include "mvlevy/sampler.hpp"
#include "mvlevy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace mvlevy {

// ------------------------------------------------------ space-time functions

SpaceTimeFunction::SpaceTimeFunction(std::vector<GridFunction> slices, double start, double end, std::string label)
    : slices_(std::move(slices)), start_(start), end_(end), label_(std::move(label)) {
    if (slices_.empty()) throw ArgumentError("space-time function needs at least one time slice");
    if (!(start < end)) throw ArgumentError("space-time function needs start < end");
    for (const auto &s : slices_) {
        if (!(s.grid() == slices_.front().grid())) throw ArgumentError("space-time slices must share one grid");
        for (double v : s.values())
            if (v < 0.0) throw ArgumentError("occupation test functions must be nonnegative");
    }
}

SpaceTimeFunction SpaceTimeFunction::sample(const GridSpec &grid, double start, double end, std::size_t cells,
                                            const std::function<double(double, std::span<const double>)> &fn,
                                            std::string label) {
    if (cells == 0) throw ArgumentError("space-time function needs at least one time cell");
    std::vector<GridFunction> slices;
    const double h = (end - start) / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double t = start + (static_cast<double>(i) + 0.5) * h;
        slices.push_back(GridFunction::sample(grid, [&](std::span<const double> x) { return fn(t, x); }));
    }
    return SpaceTimeFunction(std::move(slices), start, end, std::move(label));
}

double SpaceTimeFunction::shape(double t, std::span<const double> x) const {
    if (t < start_ || t > end_) return 0.0;
    const std::size_t m = slices_.size();
    const auto cell = std::min(m - 1, static_cast<std::size_t>((t - start_) / (end_ - start_) * static_cast<double>(m)));
    const GridFunction &f = slices_[cell];
    const GridSpec &g = f.grid();
    const std::size_t d = g.dim();
    if (x.size() != d) throw ArgumentError("space-time function evaluated at a point of the wrong dimension");
    // Multilinear interpolation over the 2^d corners of the enclosing cell.
    std::size_t base = 0;
    double frac[8];
    std::size_t stride[8];
    std::size_t s = 1;
    for (std::size_t a = d; a-- > 0;) {
        const double u = (x[a] + g.extent()[a]) / g.spacing(a);
        const auto n = g.resolution()[a];
        if (!(u >= 0.0) || u > static_cast<double>(n - 1)) return 0.0;
        const auto j = std::min(n - 2, static_cast<std::size_t>(u));
        frac[a] = u - static_cast<double>(j);
        stride[a] = s;
        base += j * s;
        s *= n;
    }
    double acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
        double w = 1.0;
        std::size_t idx = base;
        for (std::size_t a = 0; a < d; ++a) {
            if (corner >> a & 1U) {
                w *= frac[a];
                idx += stride[a];
            } else {
                w *= 1.0 - frac[a];
            }
        }
        if (w != 0.0) acc += w * f[idx];
    }
    return acc;
}

SpaceTimeFunction SpaceTimeFunction::scaled(double c) const {
    if (!(c > 0.0)) throw ArgumentError("scaling factor must be positive");
    SpaceTimeFunction out = *this;
    out.scale_ *= c;
    return out;
}

double SpaceTimeFunction::shape_norm(double p, double q) const {
    return mixed_norm(slices_, MixedNormSpec{p, q, start_, end_});
}

// ------------------------------------------------------------- sampling

KrylovSample krylov_sample(const LevyModel &model, const DriftSpec &drift, std::span<const SpaceTimeFunction> panel,
                           const SolverConfig &cfg, const KrylovOptions &options) {
    cfg.validate(model);
    const std::size_t d = model.dim();
    if (drift.dim != d) throw ArgumentError("drift dimension does not match the model");
    if (d > 8) throw UnsupportedError("occupation estimates are limited to d <= 8");
    for (const auto &f : panel)
        if (f.slices().front().dim() != d) throw ArgumentError("test function dimension does not match the model");
    std::vector<double> start = options.start.empty() ? std::vector<double>(d, 0.0) : options.start;
    if (start.size() != d) throw ArgumentError("starting point has the wrong dimension");
    if (options.ball_radius && !(*options.ball_radius > 0.0)) throw ArgumentError("ball radius must be positive");

    const auto times = cfg.times();
    const std::size_t steps = cfg.steps();
    std::vector<BoundDrift> bound(steps + 1);
    if (drift.dependence != MeasureDependence::MeasureFree && !drift.binder) {
        if (!options.law) throw ArgumentError("measure-dependent drift '" + drift.name + "' needs a law curve");
    }
    const EmpiricalMeasure dirac = EmpiricalMeasure::dirac(start);
    for (std::size_t k = 0; k <= steps; ++k) bound[k] = drift.bind(times[k], options.law ? options.law->at(k) : dirac);

    const auto plan = std::make_shared<const SamplerPlan>(model, cfg.small_jump_cutoff);
    const std::size_t nf = panel.size();
    const std::size_t n = cfg.particles;
    std::vector<double> lhs(n * nf), mass(n);
    const double r2 = options.ball_radius ? *options.ball_radius * *options.ball_radius : 0.0;

    auto path = [&](std::size_t i) {
        RandomStream rng(cfg.seed, i);
        std::vector<double> x = start, b(d), prev_f(nf), cur_f(nf);
        double prev_b = 0.0;
        auto eval = [&](std::size_t k, std::vector<double> &fv, double &bn) {
            for (std::size_t j = 0; j < nf; ++j) fv[j] = panel[j].shape(times[k], x);
            bound[k](x, b);
            double s = 0.0;
            for (double c : b) s += c * c;
            bn = std::sqrt(s);
        };
        eval(0, prev_f, prev_b);
        double acc_mass = 0.0;
        std::vector<double> acc(nf, 0.0);
        for (std::size_t k = 0; k < steps; ++k) {
            const double h = times[k + 1] - times[k];
            for (std::size_t a = 0; a < d; ++a) {
                if (!std::isfinite(b[a])) throw NumericalError("drift '" + drift.name + "' is not finite on a path");
                x[a] += b[a] * h;
            }
            plan->add_increment(rng, h, x);
            double cur_b = 0.0;
            eval(k + 1, cur_f, cur_b);
            for (std::size_t j = 0; j < nf; ++j) acc[j] += 0.5 * h * (prev_f[j] + cur_f[j]);
            acc_mass += 0.5 * h * (prev_b + cur_b);
            std::swap(prev_f, cur_f);
            prev_b = cur_b;
            if (options.ball_radius) {
                double s = 0.0;
                for (double c : x) s += c * c;
                if (s > r2) break;
            }
        }
        for (std::size_t j = 0; j < nf; ++j) lhs[j * n + i] = acc[j];
        mass[i] = acc_mass;
    };
    if (cfg.parallel) {
        kernels::parallel_for(n, path);
    } else {
        for (std::size_t i = 0; i < n; ++i) path(i);
    }

    KrylovSample s;
    s.paths = n;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < nf; ++j)
        s.shape_lhs.push_back(kernels::ordered_sum(std::span<const double>(lhs).subspan(j * n, n)) * inv);
    s.drift_mass = kernels::ordered_sum(mass) * inv;
    return s;
}

// ------------------------------------------------------------- reports

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

KrylovReport krylov_report(const KrylovSample &sample, std::span<const SpaceTimeFunction> panel, double alpha,
                           int dim, double p, double q) {
    if (sample.shape_lhs.size() != panel.size()) throw ArgumentError("sample and panel sizes differ");
    KrylovReport r;
    const bool gate = krylov_pq_check(alpha, dim, p, q);
    std::vector<double> ratios;
    for (std::size_t j = 0; j < panel.size(); ++j) {
        const double shape_norm = panel[j].shape_norm(p, q);
        if (!(shape_norm > 0.0))
            throw ArgumentError("test function '" + panel[j].label() + "' has zero mixed norm");
        KrylovEntry e;
        e.f_id = panel[j].label().empty() ? "f" + std::to_string(j) : panel[j].label();
        e.p = p;
        e.q = q;
        e.gate = gate;
        e.lhs = panel[j].scale() * sample.shape_lhs[j];
        e.drift_mass = sample.drift_mass;
        e.f_norm = panel[j].scale() * shape_norm;
        // Both sides carry the scale; dividing it out keeps the ratio exactly homogeneous.
        e.ratio = sample.shape_lhs[j] / ((1.0 + sample.drift_mass) * shape_norm);
        ratios.push_back(e.ratio);
        r.panel.push_back(std::move(e));
    }
    if (!ratios.empty()) r.panel_max = *std::max_element(ratios.begin(), ratios.end());
    r.panel_median = median(std::move(ratios));
    return r;
}

KrylovReport krylov_ratio(const LevyModel &model, const DriftSpec &drift, std::span<const SpaceTimeFunction> panel,
                          const SolverConfig &cfg, double p, double q, const KrylovOptions &options) {
    const int dim = static_cast<int>(model.dim());
    if (auto failure = krylov_gate_failure(model.alpha(), dim, p, q)) throw GateError(*failure);
    const auto sample = krylov_sample(model, drift, panel, cfg, options);
    return krylov_report(sample, panel, model.alpha(), dim, p, q);
}

namespace {

double gaussian_bump(std::span<const double> x, double center, double width) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double u = x[a] - (a == 0 ? center : 0.0);
        s += u * u;
    }
    return std::exp(-0.5 * s / (width * width));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::vector<SpaceTimeFunction> standard_panel(const GridSpec &grid, double horizon) {
    if (!(horizon > 0.0)) throw ArgumentError("panel horizon must be positive");
    std::vector<SpaceTimeFunction> panel;
    for (double w : {0.05, 0.1, 0.2, 0.4, 0.8})
        for (double c : {0.0, 0.5})
            for (int late = 0; late < 2; ++late) {
                const std::string label = "w" + fmt(w) + "_c" + fmt(c) + (late ? "_late" : "_full");
                panel.push_back(SpaceTimeFunction::sample(
                    grid, 0.0, horizon, 2,
                    [&](double t, std::span<const double> x) {
                        return late && t < 0.5 * horizon ? 0.0 : gaussian_bump(x, c, w);
                    },
                    label));
            }
    return panel;
}

std::vector<SpaceTimeFunction> shrinking_panel(const GridSpec &grid, double alpha, std::span<const double> widths) {
    std::vector<SpaceTimeFunction> panel;
    for (double w : widths) {
        if (!(w > 0.0)) throw ArgumentError("bump widths must be positive");
        panel.push_back(SpaceTimeFunction::sample(
            grid, 0.0, std::pow(w, alpha), 1, [&](double, std::span<const double> x) { return gaussian_bump(x, 0.0, w); },
            "shrink_w" + fmt(w)));
    }
    return panel;
}

std::vector<SweepCell> krylov_sweep(const LevyModel &model, const DriftSpec &drift,
                                    std::span<const std::pair<double, double>> cells,
                                    std::span<const SpaceTimeFunction> panel, std::span<const double> widths,
                                    const GridSpec &grid, const SolverConfig &cfg, const KrylovOptions &options) {
    const int dim = static_cast<int>(model.dim());
    const auto shrink = shrinking_panel(grid, model.alpha(), widths);
    std::vector<SpaceTimeFunction> all(panel.begin(), panel.end());
    all.insert(all.end(), shrink.begin(), shrink.end());
    const auto sample = krylov_sample(model, drift, all, cfg, options);
    KrylovSample head{{sample.shape_lhs.begin(), sample.shape_lhs.begin() + static_cast<std::ptrdiff_t>(panel.size())},
                      sample.drift_mass, sample.paths};
    KrylovSample tail{{sample.shape_lhs.begin() + static_cast<std::ptrdiff_t>(panel.size()), sample.shape_lhs.end()},
                      sample.drift_mass, sample.paths};

    std::vector<SweepCell> out;
    for (const auto &[p, q] : cells) {
        SweepCell c;
        c.p = p;
        c.q = q;
        const auto failure = krylov_gate_failure(model.alpha(), dim, p, q);
        c.gate = !failure;
        c.gate_message = failure.value_or("admissible");
        if (!panel.empty()) {
            const auto r = krylov_report(head, panel, model.alpha(), dim, p, q);
            c.panel_max = r.panel_max;
            c.panel_median = r.panel_median;
            c.report = r;
        }
        if (!shrink.empty()) {
            const auto t = krylov_report(tail, shrink, model.alpha(), dim, p, q);
            std::vector<double> inv_w;
            for (std::size_t j = 0; j < shrink.size(); ++j) {
                c.trend_ratios.push_back(t.panel[j].ratio);
                inv_w.push_back(1.0 / widths[j]);
            }
            if (shrink.size() >= 2) c.trend_slope = loglog_fit(inv_w, c.trend_ratios).slope;
            c.trend = t;
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace mvlevy
