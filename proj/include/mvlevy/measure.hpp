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

#include "mvlevy/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvlevy {

/// Weighted particle cloud Σ w_i δ_{x_i}; rows of `particles` are positions.
class EmpiricalMeasure {
public:
    /// Uniform weights 1/N.
    explicit EmpiricalMeasure(Eigen::MatrixXd particles);
    /// Throws ArgumentError unless weights are non-negative and sum to 1 within 1e-12.
    EmpiricalMeasure(Eigen::MatrixXd particles, std::vector<double> weights);
    static EmpiricalMeasure dirac(std::span<const double> x);

    std::size_t size() const { return static_cast<std::size_t>(particles_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(particles_.cols()); }
    const Eigen::MatrixXd &particles() const { return particles_; }
    const std::vector<double> &weights() const { return weights_; }
    bool uniform_weights() const { return uniform_; }
    Eigen::VectorXd mean() const;

    /// CSV with columns w,x1..xd after the comment lines, each prefixed by "# ".
    void write_csv(const std::filesystem::path &path, const std::string &header_comment = {}) const;
    static EmpiricalMeasure read_csv(const std::filesystem::path &path);
    /// Binary: i64 dim, i64 N, then N rows of (w, x1..xd) as f64, little endian.
    void write_binary(const std::filesystem::path &path) const;
    static EmpiricalMeasure read_binary(const std::filesystem::path &path);

private:
    Eigen::MatrixXd particles_;
    std::vector<double> weights_;
    bool uniform_ = true;
};

enum class WassersteinMethod { Auto, Quantile1D, ExactLP, Sliced };

const char *to_string(WassersteinMethod method);

struct WassersteinOptions {
    WassersteinMethod method = WassersteinMethod::Auto;
    std::size_t lp_budget = 1'000'000; ///< max N·M for the exact LP
    std::size_t projections = 256;     ///< directions of the sliced estimate
    std::uint64_t seed = 7;
};

struct WassersteinResult {
    double value = 0.0;
    WassersteinMethod method = WassersteinMethod::Auto; ///< method actually used
    bool approximate = false;
    std::size_t projections = 0;
};

/// W_θ between two clouds.  Auto uses the quantile coupling in d = 1 (exact
/// for any weights), the exact LP when N·M fits the budget, else sliced.
WassersteinResult wasserstein(const EmpiricalMeasure &mu, const EmpiricalMeasure &nu, double theta,
                              const WassersteinOptions &options = {});
double wasserstein_theta(const EmpiricalMeasure &mu, const EmpiricalMeasure &nu, double theta);

/// Σ w_i |x_i|^θ.
double theta_moment(const EmpiricalMeasure &mu, double theta);

/// Silverman's rule per axis, h_j = σ_j (4 / ((d + 2) n))^{1/(d+4)} with
/// n the effective sample size 1 / Σ w_i².
std::vector<double> silverman_bandwidth(const EmpiricalMeasure &mu);

/// Gaussian kernel density on the grid; bandwidth nullopt means Silverman.
/// Throws CoverageError when more than 1e-6 of the smoothed mass lies outside.
GridFunction density_estimate(const EmpiricalMeasure &mu, const GridSpec &grid,
                              std::optional<double> bandwidth = std::nullopt);

} // namespace mvlevy
