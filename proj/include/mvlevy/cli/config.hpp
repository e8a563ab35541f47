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

#include "mvlevy/drift.hpp"
#include "mvlevy/levy_model.hpp"
#include "mvlevy/measure.hpp"
#include "mvlevy/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mvlevy::cli {

struct ModelConfig {
    std::string kind = "brownian"; ///< brownian|isotropic_stable|cylindrical_stable|tempered_stable|truncated_stable|superposition
    std::size_t dim = 1;
    double alpha = 1.5;
    double variance = 1.0; ///< brownian
    double rate = 1.0;     ///< tempered_stable
    double height = 1.0;   ///< truncated_stable
    std::vector<ModelConfig> components; ///< superposition
};

struct DriftConfig {
    std::string name = "zero"; ///< zero|linear|mean_reverting|sign|singular_power
    double rate = 1.0;
    double exponent = 0.5;
    double radius = 1.0;
    double p = 1.9;
    double q = 8.0;
    int mollify = 0; ///< mollification index n; 0 uses the drift as is
};

struct SolverBlock {
    double horizon = 1.0;
    std::optional<double> dt; ///< default horizon / 512
    std::size_t particles = 1000;
    double theta = 1.0;
    double cutoff = kDefaultSmallJumpCutoff;
};

struct InitConfig {
    std::string kind = "dirac"; ///< dirac|normal
    std::vector<double> mean;   ///< origin when empty
    double scale = 1.0;         ///< standard deviation of the normal law
};

struct TimeGrid {
    double start = 1e-4; ///< parse_config derives unset ends from the model's alpha
    double stop = 1e-2;
    std::size_t count = 11;
    std::vector<double> values() const;
};

struct KernelProbeBlock {
    std::vector<std::string> checks{"gradient"}; ///< gradient|smoothing|continuity
    double p = 2.0;
    std::vector<int> orders{1};
    double gamma = 1.0;
    double beta = 0.0;
    double theta = 1.0;
    TimeGrid times;
    double extent = 8.0;
    std::size_t resolution = 16384;
    double min_width = 0.004;
    double max_width = 1.0;
    double tolerance = 0.1;
};

struct KrylovBlock {
    std::vector<std::pair<double, double>> cells{{4.0, 4.0}};
    std::vector<double> widths{1.0, 0.5, 0.25, 0.125};
    std::optional<double> ball_radius;
    double extent = 4.0;
    std::size_t resolution = 2048;
    double max_over_median = 10.0;
};

struct AdmissibleBlock {
    std::vector<double> alpha{2.0};
    std::vector<int> dim{1};
    std::vector<double> p{4.0};
    std::vector<double> q{4.0};
};

struct PicardBlock {
    double tol = 1e-2;
    std::size_t max_iter = 10;
};

struct ProbeBlock {
    double ks_level = 0.01;
    std::size_t snapshots = 4;
    PicardBlock picard;
    KernelProbeBlock kernel;
    KrylovBlock krylov;
    AdmissibleBlock admissible;
};

struct OutputBlock {
    std::string dir = "out";
    std::string format = "csv";
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    ModelConfig model;
    DriftConfig drift;
    SolverBlock solver;
    InitConfig init;
    ProbeBlock probe;
    OutputBlock output;
};

/// Parses YAML text; `overrides` are "dotted.key=value" pairs applied before
/// validation.  Throws ConfigError naming the field and source line.
ExperimentConfig parse_config(const std::string &text, const std::vector<std::string> &overrides = {});
ExperimentConfig load_config(const std::filesystem::path &path, const std::vector<std::string> &overrides = {});

/// The fully resolved configuration as YAML, defaults included.
std::string to_yaml(const ExperimentConfig &cfg);

LevyModel build_model(const ModelConfig &cfg);
DriftSpec build_drift(const DriftConfig &cfg, std::size_t dim, double horizon);
SolverConfig build_solver(const ExperimentConfig &cfg);
EmpiricalMeasure build_init(const ExperimentConfig &cfg);

} // namespace mvlevy::cli
