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

#include "mvlevy/grid.hpp"

#include "mvlevy/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mvlevy {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

GridSpec::GridSpec(std::vector<double> extent, std::vector<std::size_t> resolution)
    : extent_(std::move(extent)), resolution_(std::move(resolution)) {
    if (extent_.empty() || extent_.size() != resolution_.size())
        throw ArgumentError("grid: extent and resolution must be non-empty and of equal length");
    for (std::size_t i = 0; i < extent_.size(); ++i) {
        if (!(extent_[i] > 0.0) || !std::isfinite(extent_[i]))
            throw ArgumentError("grid: extent must be finite and positive");
        if (resolution_[i] < 16 || !std::has_single_bit(resolution_[i]))
            throw ArgumentError("grid: resolution must be a power of two and at least 16, got " +
                                std::to_string(resolution_[i]));
        size_ *= resolution_[i];
    }
}

GridSpec GridSpec::cube(std::size_t dim, double extent, std::size_t resolution) {
    return GridSpec(std::vector<double>(dim, extent), std::vector<std::size_t>(dim, resolution));
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
}

double GridSpec::coordinate(std::size_t axis, std::size_t j) const {
    return -extent_[axis] + static_cast<double>(j) * spacing(axis);
}

double GridSpec::frequency(std::size_t axis, std::size_t j) const {
    const auto n = static_cast<long long>(resolution_[axis]);
    auto k = static_cast<long long>(j);
    if (k >= n / 2) k -= n;
    return std::numbers::pi * static_cast<double>(k) / extent_[axis];
}

void GridSpec::unravel(std::size_t flat, std::span<std::size_t> index) const {
    for (std::size_t a = dim(); a-- > 0;) {
        index[a] = flat % resolution_[a];
        flat /= resolution_[a];
    }
}

GridFunction::GridFunction(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ArgumentError("grid function: value count does not match grid");
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw ArgumentError("grid function: values must be finite");
}

GridFunction::GridFunction(GridSpec grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

GridFunction GridFunction::sample(const GridSpec &grid, const std::function<double(std::span<const double>)> &f) {
    std::vector<double> values(grid.size());
    std::vector<std::size_t> idx(grid.dim());
    std::vector<double> x(grid.dim());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unravel(flat, idx);
        for (std::size_t a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(a, idx[a]);
        values[flat] = f(x);
    }
    return GridFunction(grid, std::move(values));
}

GridFunction &GridFunction::operator*=(double c) {
    for (auto &v : values_) v *= c;
    return *this;
}

GridFunction &GridFunction::operator+=(const GridFunction &other) {
    if (!(grid_ == other.grid_)) throw ArgumentError("grid functions live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction &GridFunction::operator-=(const GridFunction &other) {
    if (!(grid_ == other.grid_)) throw ArgumentError("grid functions live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction operator-(GridFunction a, const GridFunction &b) { return a -= b; }
GridFunction operator*(double c, GridFunction f) { return f *= c; }

double GridFunction::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.cell_volume();
}

double lp_norm(std::span<const double> values, double cell, double p) {
    if (!(p >= 1.0)) throw ArgumentError("L^p norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    // Scale by the maximum to avoid overflow for large p.
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    if (p == 2.0) {
        for (double v : values) s += (v / m) * (v / m);
    } else {
        for (double v : values) s += std::pow(std::abs(v) / m, p);
    }
    return m * std::pow(s * cell, 1.0 / p);
}

double GridFunction::lp_norm(double p) const { return mvlevy::lp_norm(values_, grid_.cell_volume(), p); }

namespace {

template <class T>
void put(std::ofstream &out, T value) {
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream &in, const std::filesystem::path &path) {
    T value{};
    if (!in.read(reinterpret_cast<char *>(&value), sizeof(T)))
        throw ArgumentError("truncated binary file: " + path.string());
    return value;
}

} // namespace

void GridFunction::write_binary(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open for writing: " + path.string());
    put<std::int64_t>(out, static_cast<std::int64_t>(dim()));
    for (double r : grid_.extent()) put<double>(out, r);
    for (auto n : grid_.resolution()) put<std::int64_t>(out, static_cast<std::int64_t>(n));
    out.write(reinterpret_cast<const char *>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!out) throw ArgumentError("write failed: " + path.string());
}

GridFunction GridFunction::read_binary(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open for reading: " + path.string());
    const auto dim = get<std::int64_t>(in, path);
    if (dim < 1 || dim > 16) throw ArgumentError("bad grid dimension in " + path.string());
    std::vector<double> extent(static_cast<std::size_t>(dim));
    std::vector<std::size_t> resolution(static_cast<std::size_t>(dim));
    for (auto &r : extent) r = get<double>(in, path);
    for (auto &n : resolution) {
        const auto v = get<std::int64_t>(in, path);
        if (v < 1) throw ArgumentError("bad grid resolution in " + path.string());
        n = static_cast<std::size_t>(v);
    }
    GridSpec grid(extent, resolution);
    std::vector<double> values(grid.size());
    if (!in.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double))))
        throw ArgumentError("truncated binary file: " + path.string());
    return GridFunction(std::move(grid), std::move(values));
}

void GridFunction::write_csv(const std::filesystem::path &path, const std::string &header_comment) const {
    if (dim() > 2) throw UnsupportedError("CSV export supports grids of dimension 1 or 2 only");
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (!f) throw ArgumentError("cannot open for writing: " + path.string());
    std::istringstream comment(header_comment);
    for (std::string line; std::getline(comment, line);) std::fprintf(f, "# %s\n", line.c_str());
    std::fputs(dim() == 1 ? "x1,value\n" : "x1,x2,value\n", f);
    std::vector<std::size_t> idx(dim());
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        grid_.unravel(flat, idx);
        for (std::size_t a = 0; a < dim(); ++a) std::fprintf(f, "%.17g,", grid_.coordinate(a, idx[a]));
        std::fprintf(f, "%.17g\n", values_[flat]);
    }
    if (std::fclose(f) != 0) throw ArgumentError("write failed: " + path.string());
}

} // namespace mvlevy
