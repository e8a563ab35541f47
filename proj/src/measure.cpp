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

#include "mvlevy/measure.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/kernels.hpp"
#include "mvlevy/rng.hpp"
#include "mvlevy/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mvlevy {

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd particles)
    : particles_(std::move(particles)),
      weights_(static_cast<std::size_t>(particles_.rows()), 1.0 / static_cast<double>(particles_.rows())) {
    if (particles_.rows() < 1 || particles_.cols() < 1) throw ArgumentError("empirical measure needs particles");
    if (!particles_.allFinite()) throw ArgumentError("particle positions must be finite");
}

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd particles, std::vector<double> weights)
    : particles_(std::move(particles)), weights_(std::move(weights)) {
    if (particles_.rows() < 1 || particles_.cols() < 1) throw ArgumentError("empirical measure needs particles");
    if (!particles_.allFinite()) throw ArgumentError("particle positions must be finite");
    if (weights_.size() != static_cast<std::size_t>(particles_.rows()))
        throw ArgumentError("one weight per particle is required");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("particle weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ArgumentError("particle weights must sum to 1 (got " + std::to_string(total) + ")");
    uniform_ = std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

EmpiricalMeasure EmpiricalMeasure::dirac(std::span<const double> x) {
    Eigen::MatrixXd p(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) p(0, static_cast<Eigen::Index>(k)) = x[k];
    return EmpiricalMeasure(std::move(p));
}

Eigen::VectorXd EmpiricalMeasure::mean() const {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(particles_.cols());
    for (Eigen::Index i = 0; i < particles_.rows(); ++i)
        m += weights_[static_cast<std::size_t>(i)] * particles_.row(i).transpose();
    return m;
}

// -------------------------------------------------------------------- I/O

void EmpiricalMeasure::write_csv(const std::filesystem::path &path, const std::string &header_comment) const {
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (!f) throw ArgumentError("cannot open for writing: " + path.string());
    std::istringstream comment(header_comment);
    for (std::string line; std::getline(comment, line);) std::fprintf(f, "# %s\n", line.c_str());
    std::fputs("w", f);
    for (std::size_t k = 0; k < dim(); ++k) std::fprintf(f, ",x%zu", k + 1);
    std::fputs("\n", f);
    for (std::size_t i = 0; i < size(); ++i) {
        std::fprintf(f, "%.17g", weights_[i]);
        for (std::size_t k = 0; k < dim(); ++k)
            std::fprintf(f, ",%.17g", particles_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
        std::fputs("\n", f);
    }
    if (std::fclose(f) != 0) throw ArgumentError("write failed: " + path.string());
}

EmpiricalMeasure EmpiricalMeasure::read_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open for reading: " + path.string());
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("w", 0) == 0) continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception &) {
                throw ArgumentError("malformed particle CSV value '" + cell + "' in " + path.string());
            }
        }
        if (row.size() < 2) throw ArgumentError("particle CSV rows need w and at least one coordinate");
        if (!rows.empty() && row.size() != rows.front().size()) throw ArgumentError("ragged particle CSV");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ArgumentError("particle CSV has no rows: " + path.string());
    const auto d = static_cast<Eigen::Index>(rows.front().size() - 1);
    Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), d);
    std::vector<double> w(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        w[i] = rows[i][0];
        for (Eigen::Index k = 0; k < d; ++k) p(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k) + 1];
    }
    return EmpiricalMeasure(std::move(p), std::move(w));
}

void EmpiricalMeasure::write_binary(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open for writing: " + path.string());
    const std::int64_t header[2] = {static_cast<std::int64_t>(dim()), static_cast<std::int64_t>(size())};
    out.write(reinterpret_cast<const char *>(header), sizeof header);
    std::vector<double> row(dim() + 1);
    for (std::size_t i = 0; i < size(); ++i) {
        row[0] = weights_[i];
        for (std::size_t k = 0; k < dim(); ++k)
            row[k + 1] = particles_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        out.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw ArgumentError("write failed: " + path.string());
}

EmpiricalMeasure EmpiricalMeasure::read_binary(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open for reading: " + path.string());
    std::int64_t header[2];
    if (!in.read(reinterpret_cast<char *>(header), sizeof header) || header[0] < 1 || header[1] < 1)
        throw ArgumentError("bad particle binary header in " + path.string());
    const auto d = static_cast<std::size_t>(header[0]);
    const auto n = static_cast<std::size_t>(header[1]);
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<double> w(n), row(d + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!in.read(reinterpret_cast<char *>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double))))
            throw ArgumentError("truncated particle binary file: " + path.string());
        w[i] = row[0];
        for (std::size_t k = 0; k < d; ++k) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k + 1];
    }
    return EmpiricalMeasure(std::move(p), std::move(w));
}

// -------------------------------------------------------------- distances

const char *to_string(WassersteinMethod method) {
    switch (method) {
    case WassersteinMethod::Auto: return "auto";
    case WassersteinMethod::Quantile1D: return "quantile_1d";
    case WassersteinMethod::ExactLP: return "exact_lp";
    case WassersteinMethod::Sliced: return "sliced";
    }
    return "unknown";
}

namespace {

/// ∫_0^1 |F^{-1}(u) - G^{-1}(u)|^θ du for weighted 1D samples.
double quantile_cost(std::vector<std::pair<double, double>> a, std::vector<std::pair<double, double>> b,
                     double theta) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double ra = a[0].second, rb = b[0].second, cost = 0.0;
    while (i < a.size() && j < b.size()) {
        const double m = std::min(ra, rb);
        if (m > 0.0) cost += m * std::pow(std::abs(a[i].first - b[j].first), theta);
        ra -= m;
        rb -= m;
        if (ra <= 0.0 && ++i < a.size()) ra = a[i].second;
        if (rb <= 0.0 && ++j < b.size()) rb = b[j].second;
    }
    return cost;
}

std::vector<std::pair<double, double>> projected(const EmpiricalMeasure &mu, const Eigen::VectorXd &dir) {
    std::vector<std::pair<double, double>> out(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        out[i] = {mu.particles().row(static_cast<Eigen::Index>(i)).dot(dir), mu.weights()[i]};
    return out;
}

Eigen::MatrixXd pair_costs(const EmpiricalMeasure &mu, const EmpiricalMeasure &nu, double theta) {
    Eigen::MatrixXd c(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(nu.size()));
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            c(i, j) = std::pow((mu.particles().row(i) - nu.particles().row(j)).norm(), theta);
    return c;
}

} // namespace

WassersteinResult wasserstein(const EmpiricalMeasure &mu, const EmpiricalMeasure &nu, double theta,
                              const WassersteinOptions &options) {
    if (!(theta >= 1.0)) throw ArgumentError("Wasserstein order theta must be at least 1");
    if (mu.dim() != nu.dim()) throw ArgumentError("Wasserstein: measures live in different dimensions");
    WassersteinResult r;
    r.method = options.method;
    if (r.method == WassersteinMethod::Auto) {
        if (mu.dim() == 1)
            r.method = WassersteinMethod::Quantile1D;
        else if (mu.size() * nu.size() <= options.lp_budget)
            r.method = WassersteinMethod::ExactLP;
        else
            r.method = WassersteinMethod::Sliced;
    }
    switch (r.method) {
    case WassersteinMethod::Quantile1D: {
        if (mu.dim() != 1) throw ArgumentError("quantile coupling is exact only in dimension 1");
        const Eigen::VectorXd e = Eigen::VectorXd::Ones(1);
        r.value = std::pow(quantile_cost(projected(mu, e), projected(nu, e), theta), 1.0 / theta);
        break;
    }
    case WassersteinMethod::ExactLP: {
        const auto c = pair_costs(mu, nu, theta);
        double cost;
        if (mu.size() == nu.size() && mu.uniform_weights() && nu.uniform_weights())
            cost = transport::hungarian(c).cost / static_cast<double>(mu.size());
        else
            cost = transport::min_cost_coupling(c, mu.weights(), nu.weights());
        r.value = std::pow(std::max(cost, 0.0), 1.0 / theta);
        break;
    }
    case WassersteinMethod::Sliced: {
        RandomStream rng(options.seed, 0);
        double acc = 0.0;
        const auto d = static_cast<Eigen::Index>(mu.dim());
        for (std::size_t k = 0; k < options.projections; ++k) {
            Eigen::VectorXd dir(d);
            for (Eigen::Index a = 0; a < d; ++a) dir[a] = rng.normal();
            dir.normalize();
            acc += quantile_cost(projected(mu, dir), projected(nu, dir), theta);
        }
        r.value = std::pow(acc / static_cast<double>(options.projections), 1.0 / theta);
        r.approximate = true;
        r.projections = options.projections;
        break;
    }
    case WassersteinMethod::Auto: break;
    }
    return r;
}

double wasserstein_theta(const EmpiricalMeasure &mu, const EmpiricalMeasure &nu, double theta) {
    return wasserstein(mu, nu, theta).value;
}

double theta_moment(const EmpiricalMeasure &mu, double theta) {
    if (!(theta >= 0.0)) throw ArgumentError("moment order must be non-negative");
    std::vector<double> terms(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double r = mu.particles().row(static_cast<Eigen::Index>(i)).norm();
        terms[i] = mu.weights()[i] * (theta == 0.0 ? 1.0 : std::pow(r, theta));
    }
    return kernels::ordered_sum(terms);
}

std::vector<double> silverman_bandwidth(const EmpiricalMeasure &mu) {
    const std::size_t d = mu.dim();
    double w2 = 0.0;
    for (double w : mu.weights()) w2 += w * w;
    const double n_eff = 1.0 / w2;
    const Eigen::VectorXd m = mu.mean();
    std::vector<double> h(d);
    const double factor = std::pow(4.0 / ((static_cast<double>(d) + 2.0) * n_eff), 1.0 / (static_cast<double>(d) + 4.0));
    for (std::size_t k = 0; k < d; ++k) {
        double var = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double dx = mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - m[static_cast<Eigen::Index>(k)];
            var += mu.weights()[i] * dx * dx;
        }
        if (n_eff > 1.0) var *= n_eff / (n_eff - 1.0);
        const double sigma = std::sqrt(var);
        if (!(sigma > 0.0)) throw ArgumentError("Silverman bandwidth is undefined for a degenerate cloud; pass a bandwidth");
        h[k] = sigma * factor;
    }
    return h;
}

GridFunction density_estimate(const EmpiricalMeasure &mu, const GridSpec &grid, std::optional<double> bandwidth) {
    if (grid.dim() != mu.dim()) throw ArgumentError("density estimate: grid and measure dimensions differ");
    std::vector<double> h;
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) throw ArgumentError("bandwidth must be positive");
        h.assign(mu.dim(), *bandwidth);
    } else {
        h = silverman_bandwidth(mu);
    }
    // Smoothed mass outside the box [-R, R) per particle (union bound over axes).
    double outside = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double leak = 0.0;
        for (std::size_t k = 0; k < mu.dim(); ++k) {
            const double x = mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            const double lo = -grid.extent()[k], hi = grid.extent()[k] - grid.spacing(k);
            leak += 0.5 * std::erfc((x - lo) / (h[k] * std::sqrt(2.0))) + 0.5 * std::erfc((hi - x) / (h[k] * std::sqrt(2.0)));
        }
        outside += mu.weights()[i] * std::min(leak, 1.0);
    }
    if (outside > 1e-6)
        throw CoverageError("density estimate: " + std::to_string(outside) + " of the mass lies outside the grid", outside);

    std::vector<double> points(mu.size() * mu.dim());
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t k = 0; k < mu.dim(); ++k)
            points[i * mu.dim() + k] = mu.particles()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    std::vector<double> eval(grid.size() * grid.dim());
    std::vector<std::size_t> idx(grid.dim());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unravel(flat, idx);
        for (std::size_t k = 0; k < grid.dim(); ++k) eval[flat * grid.dim() + k] = grid.coordinate(k, idx[k]);
    }
    std::vector<double> values(grid.size());
    kernels::kde_omp(points, mu.weights(), mu.dim(), h, eval, values);
    return GridFunction(grid, std::move(values));
}

} // namespace mvlevy
