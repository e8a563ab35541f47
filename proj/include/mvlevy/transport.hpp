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

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace mvlevy::transport {

struct Assignment {
    std::vector<std::size_t> column_of_row;
    double cost = 0.0;
};

/// Minimum-cost perfect matching of a square cost matrix (Hungarian method
/// with potentials, O(n³)).
Assignment hungarian(const Eigen::MatrixXd &cost);

/// min Σ π_ij c_ij over couplings with row sums a and column sums b, by
/// successive shortest paths with Dijkstra and reduced costs.
double min_cost_coupling(const Eigen::MatrixXd &cost, std::span<const double> a, std::span<const double> b);

} // namespace mvlevy::transport
