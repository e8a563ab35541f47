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

#include "mvlevy/kernel.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mvlevy {

namespace {

constexpr double kNyquistTail = 1e-12;
constexpr double kImagTolerance = 1e-8;

double frequency_norm2(const GridSpec &grid, std::span<const std::size_t> idx) {
    double s = 0.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
        const double w = grid.frequency(a, idx[a]);
        s += w * w;
    }
    return s;
}

bool on_nyquist_edge(const GridSpec &grid, std::span<const std::size_t> idx) {
    for (std::size_t a = 0; a < grid.dim(); ++a)
        if (idx[a] == grid.resolution()[a] / 2) return true;
    return false;
}

} // namespace

namespace spectral {

fft::Buffer transform(const GridFunction &f) {
    fft::Buffer buf(f.grid().size());
    const auto v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) buf[i] = v[i];
    fft::forward(buf, f.grid().resolution());
    return buf;
}

GridFunction real_inverse(fft::Buffer spectrum, const GridSpec &grid) {
    fft::inverse(spectrum, grid.resolution());
    const double scale = 1.0 / static_cast<double>(grid.size());
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = spectrum[i].real() * scale;
    return GridFunction(grid, std::move(values));
}

} // namespace spectral

SymbolGrid::SymbolGrid(const LevyModel &model, GridSpec grid) : grid_(std::move(grid)), values_(grid_.size()) {
    if (model.dim() != grid_.dim()) throw ArgumentError("symbol grid: model and grid dimensions differ");
    const std::size_t d = grid_.dim();
    if (model.is_radial()) {
        std::map<double, std::size_t> slot;
        std::vector<std::size_t> which(grid_.size());
        std::vector<std::size_t> idx(d);
        for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
            grid_.unravel(flat, idx);
            const double r2 = frequency_norm2(grid_, idx);
            which[flat] = slot.try_emplace(r2, slot.size()).first->second;
        }
        std::vector<double> radii(slot.size());
        for (const auto &[r2, k] : slot) radii[k] = std::sqrt(r2);
        std::vector<double> phi(radii.size());
        kernels::parallel_for(radii.size(), [&](std::size_t k) { phi[k] = radial_symbol(model, radii[k]); });
        for (std::size_t flat = 0; flat < grid_.size(); ++flat) values_[flat] = phi[which[flat]];
        return;
    }
    kernels::parallel_for(grid_.size(), [&](std::size_t flat) {
        std::vector<std::size_t> idx(d);
        std::vector<double> xi(d);
        grid_.unravel(flat, idx);
        for (std::size_t a = 0; a < d; ++a) xi[a] = grid_.frequency(a, idx[a]);
        values_[flat] = symbol(model, xi);
    });
}

double SymbolGrid::nyquist_tail(double t) const {
    double tail = 0.0;
    std::vector<std::size_t> idx(grid_.dim());
    for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
        grid_.unravel(flat, idx);
        if (on_nyquist_edge(grid_, idx)) tail = std::max(tail, std::exp(-t * values_[flat].real()));
    }
    return tail;
}

GridFunction heat_kernel(const LevyModel &model, double t, const GridSpec &grid) {
    if (!(t > 0.0)) throw ArgumentError("heat kernel needs t > 0");
    return heat_kernel(SymbolGrid(model, grid), t);
}

GridFunction heat_kernel(const SymbolGrid &symbol, double t) {
    if (!(t > 0.0)) throw ArgumentError("heat kernel needs t > 0");
    const GridSpec &grid = symbol.grid();
    const double tail = symbol.nyquist_tail(t);
    if (tail > kNyquistTail)
        throw ResolutionError("heat kernel: e^{-t Phi} is " + std::to_string(tail) +
                                  " at the Nyquist frequency (need <= 1e-12); refine the grid",
                              tail);
    // p(x_j) = (2R)^{-d} Σ_k (-1)^{Σk} e^{-tΦ(ξ_k)} e^{-2πi jk/n}
    fft::Buffer buf(grid.size());
    std::vector<std::size_t> idx(grid.dim());
    const auto phi = symbol.values();
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unravel(flat, idx);
        std::size_t parity = 0;
        for (auto i : idx) parity += i;
        const double sign = parity % 2 ? -1.0 : 1.0;
        buf[flat] = sign * std::exp(-t * phi[flat]);
    }
    fft::forward(buf, grid.resolution());
    double scale = 1.0;
    for (double r : grid.extent()) scale /= 2.0 * r;
    std::vector<double> values(grid.size());
    double max_imag = 0.0, max_real = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = buf[i].real() * scale;
        max_imag = std::max(max_imag, std::abs(buf[i].imag() * scale));
        max_real = std::max(max_real, std::abs(values[i]));
    }
    if (max_imag > kImagTolerance * std::max(1.0, max_real))
        throw NumericalError("heat kernel: imaginary residue " + std::to_string(max_imag) + " exceeds 1e-8",
                             max_imag);
    return GridFunction(grid, std::move(values));
}

GridFunction semigroup_apply(const LevyModel &model, double t, const GridFunction &f) {
    if (t == 0.0) return f;
    return semigroup_apply(SymbolGrid(model, f.grid()), t, f);
}

GridFunction semigroup_apply(const SymbolGrid &symbol, double t, const GridFunction &f) {
    if (!(t >= 0.0)) throw ArgumentError("semigroup needs t >= 0");
    if (!(symbol.grid() == f.grid())) throw ArgumentError("semigroup: function and symbol grids differ");
    if (t == 0.0) return f;
    auto spec = spectral::transform(f);
    const auto phi = symbol.values();
    // p_t * f multiplies the e^{i<ξ,x>} mode by E e^{-i<ξ,L_t>} = e^{-tΦ(-ξ)} = conj(e^{-tΦ(ξ)}).
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(std::exp(-t * phi[i]));
    return spectral::real_inverse(std::move(spec), f.grid());
}

GridFunction bessel_potential(const GridFunction &f, double beta) {
    if (beta == 0.0) return f;
    const GridSpec &grid = f.grid();
    auto spec = spectral::transform(f);
    std::vector<std::size_t> idx(grid.dim());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unravel(flat, idx);
        spec[flat] *= std::pow(1.0 + frequency_norm2(grid, idx), beta / 2);
    }
    return spectral::real_inverse(std::move(spec), grid);
}

double bessel_norm(const GridFunction &f, const BesselNormSpec &spec) {
    if (!(spec.beta >= 0.0)) throw ArgumentError("Bessel norm needs beta >= 0");
    if (std::isinf(spec.p) && spec.beta > 0.0)
        throw UnsupportedError("Bessel norm with beta > 0 and p = infinity is not supported");
    if (!(spec.p > 1.0)) throw ArgumentError("Bessel norm needs p in (1, infinity]");
    if (spec.beta == 0.0) return f.lp_norm(spec.p);
    return bessel_potential(f, spec.beta).lp_norm(spec.p);
}

double mixed_norm(std::span<const GridFunction> slices, const MixedNormSpec &spec) {
    if (slices.empty()) throw ArgumentError("mixed norm needs at least one time slice");
    if (!(spec.start < spec.end)) throw ArgumentError("mixed norm window needs start < end");
    if (!(spec.p >= 1.0) || !(spec.q >= 1.0)) throw ArgumentError("mixed norm needs p, q >= 1");
    const double h = (spec.end - spec.start) / static_cast<double>(slices.size());
    if (std::isinf(spec.q)) {
        double m = 0.0;
        for (const auto &s : slices) m = std::max(m, s.lp_norm(spec.p));
        return m;
    }
    std::vector<double> norms;
    norms.reserve(slices.size());
    for (const auto &s : slices) norms.push_back(s.lp_norm(spec.p));
    const double top = *std::max_element(norms.begin(), norms.end());
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (double n : norms) acc += std::pow(n / top, spec.q) * h;
    return top * std::pow(acc, 1.0 / spec.q);
}

namespace {

/// Applies Π_a (i ξ_a)^{orders[a]} to the spectrum of u.
GridFunction spectral_derivative(const fft::Buffer &spectrum, const GridSpec &grid,
                                 std::span<const int> orders) {
    fft::Buffer work(grid.size());
    std::vector<std::size_t> idx(grid.dim());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unravel(flat, idx);
        std::complex<double> m = 1.0;
        for (std::size_t a = 0; a < grid.dim(); ++a) {
            if (orders[a] == 0) continue;
            if (orders[a] % 2 == 1 && idx[a] == grid.resolution()[a] / 2) {
                m = 0.0;
                break;
            }
            m *= std::pow(std::complex<double>(0.0, grid.frequency(a, idx[a])), orders[a]);
        }
        work[flat] = spectrum[flat] * m;
    }
    return spectral::real_inverse(std::move(work), grid);
}

} // namespace

GridFunction derivative(const GridFunction &u, std::size_t axis) {
    if (axis >= u.dim()) throw ArgumentError("derivative axis out of range");
    std::vector<int> orders(u.dim(), 0);
    orders[axis] = 1;
    return spectral_derivative(spectral::transform(u), u.grid(), orders);
}

double derivative_norm(const GridFunction &u, int order, double p) {
    if (order != 1 && order != 2) throw ArgumentError("derivative norm supports orders 1 and 2");
    const GridSpec &grid = u.grid();
    const std::size_t d = grid.dim();
    const auto spectrum = spectral::transform(u);
    std::vector<double> pointwise(grid.size(), 0.0);
    std::vector<int> orders(d);
    auto accumulate = [&](double weight) {
        const auto part = spectral_derivative(spectrum, grid, orders);
        for (std::size_t i = 0; i < pointwise.size(); ++i) pointwise[i] += weight * part[i] * part[i];
    };
    for (std::size_t a = 0; a < d; ++a) {
        if (order == 1) {
            std::fill(orders.begin(), orders.end(), 0);
            orders[a] = 1;
            accumulate(1.0);
            continue;
        }
        for (std::size_t b = a; b < d; ++b) {
            std::fill(orders.begin(), orders.end(), 0);
            orders[a] += 1;
            orders[b] += 1;
            accumulate(a == b ? 1.0 : 2.0);
        }
    }
    for (auto &v : pointwise) v = std::sqrt(v);
    return lp_norm(pointwise, grid.cell_volume(), p);
}

} // namespace mvlevy
