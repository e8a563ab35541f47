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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <span>
#include <vector>

namespace mvlevy {

/// Periodic grid on [-R_i, R_i) per axis with n_i points, row-major with the
/// last axis fastest.  Point j on axis i sits at -R_i + j * 2R_i / n_i.
class GridSpec {
public:
    /// Throws ArgumentError unless every n_i is a power of two >= 16 and R_i > 0.
    GridSpec(std::vector<double> extent, std::vector<std::size_t> resolution);
    static GridSpec cube(std::size_t dim, double extent, std::size_t resolution);

    std::size_t dim() const { return extent_.size(); }
    const std::vector<double> &extent() const { return extent_; }
    const std::vector<std::size_t> &resolution() const { return resolution_; }
    std::size_t size() const { return size_; }
    double spacing(std::size_t axis) const { return 2.0 * extent_[axis] / static_cast<double>(resolution_[axis]); }
    double cell_volume() const;
    double coordinate(std::size_t axis, std::size_t j) const;
    /// Angular frequency of FFT index j on `axis` (signed wrap at n/2).
    double frequency(std::size_t axis, std::size_t j) const;
    /// Multi-index of flat index `flat`.
    void unravel(std::size_t flat, std::span<std::size_t> index) const;
    bool operator==(const GridSpec &other) const = default;

private:
    std::vector<double> extent_;
    std::vector<std::size_t> resolution_;
    std::size_t size_ = 1;
};

/// Real samples of a function on a GridSpec.
class GridFunction {
public:
    /// Throws ArgumentError on a size mismatch or non-finite values.
    GridFunction(GridSpec grid, std::vector<double> values);
    /// Zero function.
    explicit GridFunction(GridSpec grid);
    static GridFunction sample(const GridSpec &grid, const std::function<double(std::span<const double>)> &f);

    const GridSpec &grid() const { return grid_; }
    std::size_t dim() const { return grid_.dim(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    GridFunction &operator*=(double c);
    GridFunction &operator+=(const GridFunction &other);
    GridFunction &operator-=(const GridFunction &other);

    /// Riemann sum Σ f_j ΔV.
    double integral() const;
    /// (Σ |f_j|^p ΔV)^{1/p}; p = infinity gives max |f_j|.
    double lp_norm(double p) const;

    /// Flat binary: i64 dim, f64 extents, i64 resolutions, f64 payload; little endian.
    void write_binary(const std::filesystem::path &path) const;
    static GridFunction read_binary(const std::filesystem::path &path);
    /// CSV with columns x1[,x2],value; d <= 2 only.
    void write_csv(const std::filesystem::path &path, const std::string &header_comment = {}) const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

GridFunction operator-(GridFunction a, const GridFunction &b);
GridFunction operator*(double c, GridFunction f);

/// Discrete L^p norm of raw samples with cell volume `cell`.
double lp_norm(std::span<const double> values, double cell, double p);

} // namespace mvlevy
