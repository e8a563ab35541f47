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

#include "mvlevy/transport.hpp"

#include "mvlevy/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvlevy::transport {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Assignment hungarian(const Eigen::MatrixXd &cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    if (cost.rows() != cost.cols()) throw ArgumentError("assignment needs a square cost matrix");
    // Potentials u (rows), v (columns); p[j] is the row matched to column j,
    // with index 0 as the virtual start.  Indices are 1-based.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                                   u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    Assignment result;
    result.column_of_row.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) result.column_of_row[p[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i)
        result.cost += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(result.column_of_row[i]));
    return result;
}

double min_cost_coupling(const Eigen::MatrixXd &cost, std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto m = static_cast<std::size_t>(cost.cols());
    if (a.size() != n || b.size() != m) throw ArgumentError("coupling marginals do not match the cost matrix");
    double total_a = 0.0, total_b = 0.0;
    for (double x : a) total_a += x;
    for (double x : b) total_b += x;
    if (std::abs(total_a - total_b) > 1e-12 * std::max(1.0, total_a))
        throw ArgumentError("coupling marginals have different total mass");

    const double eps = 1e-15 * std::max(1.0, total_a);
    std::vector<double> supply(a.begin(), a.end()), demand(b.begin(), b.end());
    Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(cost.rows(), cost.cols());
    // Node k < n is row k, node n + j is column j.
    std::vector<double> potential(n + m, 0.0), dist(n + m);
    std::vector<long> parent(n + m);
    std::vector<bool> done(n + m);

    for (std::size_t guard = 0;; ++guard) {
        if (guard > 4 * (n + 1) * (m + 1) + 64) throw NumericalError("transport solver did not terminate");
        double remaining = 0.0;
        for (double s : supply) remaining += s;
        if (remaining <= eps * static_cast<double>(n)) break;

        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), false);
        for (std::size_t i = 0; i < n; ++i)
            if (supply[i] > eps) dist[i] = 0.0;
        // Dense Dijkstra on reduced costs.
        for (;;) {
            std::size_t x = n + m;
            for (std::size_t k = 0; k < n + m; ++k)
                if (!done[k] && dist[k] < kInf && (x == n + m || dist[k] < dist[x])) x = k;
            if (x == n + m) break;
            done[x] = true;
            if (x < n) {
                for (std::size_t j = 0; j < m; ++j) {
                    const double rc = cost(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) +
                                      potential[x] - potential[n + j];
                    const double nd = dist[x] + std::max(rc, 0.0);
                    if (nd < dist[n + j]) {
                        dist[n + j] = nd;
                        parent[n + j] = static_cast<long>(x);
                    }
                }
            } else {
                const std::size_t j = x - n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) <= eps) continue;
                    const double rc = -cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                      potential[x] - potential[i];
                    const double nd = dist[x] + std::max(rc, 0.0);
                    if (nd < dist[i]) {
                        dist[i] = nd;
                        parent[i] = static_cast<long>(x);
                    }
                }
            }
        }
        std::size_t target = n + m;
        for (std::size_t j = 0; j < m; ++j)
            if (demand[j] > eps && dist[n + j] < kInf && (target == n + m || dist[n + j] < dist[target]))
                target = n + j;
        if (target == n + m) throw NumericalError("transport solver found no augmenting path");
        const double reach = dist[target];
        for (std::size_t k = 0; k < n + m; ++k) potential[k] += std::min(dist[k], reach);

        // Bottleneck along the path back to a row with supply.
        double amount = demand[target - n];
        std::size_t y = target;
        while (parent[y] >= 0) {
            const auto x = static_cast<std::size_t>(parent[y]);
            if (x >= n) amount = std::min(amount, flow(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x - n)));
            y = x;
        }
        amount = std::min(amount, supply[y]);
        supply[y] -= amount;
        demand[target - n] -= amount;
        y = target;
        while (parent[y] >= 0) {
            const auto x = static_cast<std::size_t>(parent[y]);
            if (x < n)
                flow(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y - n)) += amount;
            else
                flow(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x - n)) -= amount;
            y = x;
        }
    }
    return flow.cwiseProduct(cost).sum();
}

} // namespace mvlevy::transport
