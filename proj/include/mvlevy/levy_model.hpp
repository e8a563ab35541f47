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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mvlevy {

/// Atom of a spherical measure: unit direction with positive mass.
struct SphericalAtom {
    std::vector<double> direction;
    double weight = 0.0;
};

/// Finite measure on the unit sphere of R^d, either a finite list of atoms or
/// a multiple of the uniform surface measure.
class SphericalMeasure {
public:
    /// Uniform surface measure scaled to `total_mass`.  In d = 1 this is the
    /// symmetric pair of atoms at ±1 with mass total_mass/2 each.
    static SphericalMeasure uniform(std::size_t dim, double total_mass);
    /// Throws ModelError if a direction is not a unit vector (1e-12) or a
    /// weight is not positive.
    static SphericalMeasure from_atoms(std::size_t dim, std::vector<SphericalAtom> atoms);
    /// Σ_i δ_{e_i} + δ_{-e_i} over the standard basis.
    static SphericalMeasure coordinate_axes(std::size_t dim);

    std::size_t dim() const { return dim_; }
    bool is_uniform() const { return uniform_; }
    double total_mass() const { return total_mass_; }
    /// Atoms; empty for a uniform measure in d >= 2.
    const std::vector<SphericalAtom> &atoms() const { return atoms_; }

    /// True iff the support is not contained in a proper linear subspace.
    bool spans_space() const;
    bool is_symmetric() const { return symmetric_; }
    /// ∫ θ θ^T μ(dθ).
    Eigen::MatrixXd second_moment() const;
    /// ∫ θ μ(dθ).
    Eigen::VectorXd first_moment() const;

private:
    SphericalMeasure() = default;

    std::size_t dim_ = 0;
    bool uniform_ = false;
    bool symmetric_ = false;
    double total_mass_ = 0.0;
    std::vector<SphericalAtom> atoms_;
};

/// Radial factor ρ(r) multiplying r^{-1-α} in the Lévy measure.
class RadialModulator {
public:
    enum class Kind { Unit, Exponential, Indicator };

    /// Constants of the sandwich 1_{[0,C]}(r) <= C1 ρ(r) <= C2.
    struct Sandwich {
        double C;
        double C1;
        double C2;
    };

    /// ρ ≡ 1 (pure stable).
    static RadialModulator unit();
    /// ρ(r) = exp(-c r) (tempered).
    static RadialModulator exponential(double rate);
    /// ρ(r) = c 1_{[0, radius]}(r) (truncated).
    static RadialModulator indicator(double height, double radius = 1.0);

    Kind kind() const { return kind_; }
    double parameter() const { return parameter_; }
    double radius() const { return radius_; }
    double operator()(double r) const;
    double sup() const;
    /// Right end of the support (infinity unless Indicator).
    double support_end() const;
    Sandwich sandwich() const;

private:
    RadialModulator(Kind kind, double parameter, double radius)
        : kind_(kind), parameter_(parameter), radius_(radius) {}

    Kind kind_;
    double parameter_;
    double radius_;
};

enum class JumpKind { IsotropicStable, CylindricalStable, GeneralStable, StableType, Tempered, Truncated };

const char *to_string(JumpKind kind);

/// Lévy measure ν(dy) = r^{-1-α} ρ(r) dr μ(dθ) in polar coordinates y = rθ.
class JumpSpec {
public:
    /// Validates α ∈ (1, 2) and non-degeneracy of μ; throws ModelError.
    JumpSpec(JumpKind kind, double alpha, SphericalMeasure spherical, RadialModulator rho);

    JumpKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const SphericalMeasure &spherical() const { return spherical_; }
    const RadialModulator &rho() const { return rho_; }
    std::size_t dim() const { return spherical_.dim(); }
    bool is_symmetric() const { return spherical_.is_symmetric(); }

    /// K_α = ∫_0^∞ (1 - cos u) u^{-1-α} du, computed by quadrature at construction.
    double cos_constant() const { return cos_constant_; }
    /// J_α = ∫_0^∞ (u - sin u) u^{-1-α} du.
    double sin_constant() const { return sin_constant_; }

    /// I(s) = ∫_0^∞ (1 - cos rs) r^{-1-α} ρ(r) dr.
    double radial_cos(double s) const;
    /// J(s) = ∫_0^∞ (rs 1_{r<=1} - sin rs) r^{-1-α} ρ(r) dr.
    double radial_sin(double s) const;
    /// ∫_0^ε r^{1-α} ρ(r) dr, the radial part of the truncated second moment.
    double small_jump_variance(double cutoff) const;
    /// ∫_ε^∞ r^{-1-α} ρ(r) dr, the radial part of ν(|y| > ε).
    double tail_mass(double cutoff) const;
    /// ∫_ε^1 r^{-α} ρ(r) dr, the radial part of the first moment of jumps in (ε, 1].
    double mid_first_moment(double cutoff) const;

private:
    JumpKind kind_;
    double alpha_;
    SphericalMeasure spherical_;
    RadialModulator rho_;
    double cos_constant_ = 0.0;
    double sin_constant_ = 0.0;
};

/// Lévy process with generating triplet (A, ν, 0), optionally a superposition
/// of independent component processes.
class LevyModel {
public:
    /// Throws ModelError when A is not symmetric, is neither zero nor positive
    /// definite, when nothing drives the process, or when dimensions disagree.
    LevyModel(Eigen::MatrixXd gaussian_cov, std::optional<JumpSpec> jump,
              std::vector<LevyModel> components = {});

    static LevyModel brownian(std::size_t dim, double variance = 1.0);
    static LevyModel gaussian(Eigen::MatrixXd cov);
    /// Rotation-invariant α-stable process normalized so that Φ(ξ) = |ξ|^α.
    static LevyModel isotropic_stable(std::size_t dim, double alpha);
    /// μ = Σ_i δ_{e_i} + δ_{-e_i}.
    static LevyModel cylindrical_stable(std::size_t dim, double alpha);
    static LevyModel general_stable(double alpha, SphericalMeasure spherical);
    static LevyModel stable_type(double alpha, SphericalMeasure spherical, RadialModulator rho);
    /// ρ(r) = exp(-c r) with the isotropic spherical measure of isotropic_stable.
    static LevyModel tempered_stable(std::size_t dim, double alpha, double rate);
    /// ρ(r) = c 1_{[0,1]}(r) with the isotropic spherical measure of isotropic_stable.
    static LevyModel truncated_stable(std::size_t dim, double alpha, double height = 1.0);
    /// Independent sum; α is the maximum over components.
    static LevyModel superposition(std::vector<LevyModel> components);

    std::size_t dim() const { return dim_; }
    double alpha() const { return alpha_; }
    const Eigen::MatrixXd &gaussian_cov() const { return gaussian_cov_; }
    bool has_gaussian() const { return has_gaussian_; }
    const std::optional<JumpSpec> &jump() const { return jump_; }
    const std::vector<LevyModel> &components() const { return components_; }

    /// Symmetric Lévy measure everywhere (Φ is real).
    bool is_symmetric() const;
    /// Φ depends on |ξ| only.
    bool is_radial() const;
    const std::string &describe() const { return name_; }

private:
    std::string name_;
    std::size_t dim_ = 0;
    double alpha_ = 2.0;
    Eigen::MatrixXd gaussian_cov_;
    bool has_gaussian_ = false;
    std::optional<JumpSpec> jump_;
    std::vector<LevyModel> components_;
};

/// K_α = ∫_0^∞ (1 - cos u) u^{-1-α} du by quadrature, α ∈ (1, 2).
double stable_cos_constant(double alpha);
/// J_α = ∫_0^∞ (u - sin u) u^{-1-α} du by quadrature, α ∈ (1, 2).
double stable_sin_constant(double alpha);

/// Φ(ξ) with E exp(i<ξ, L_t>) = exp(-t Φ(ξ)); Re Φ >= 0, Φ(0) = 0.
std::complex<double> symbol(const LevyModel &model, std::span<const double> xi);

/// Φ restricted to radial models, as a function of |ξ|.
double radial_symbol(const LevyModel &model, double xi_norm);

/// E|θ_1|^α for θ uniform on the unit sphere of R^d.
double sphere_abs_moment(std::size_t dim, double alpha);

struct LowerBoundReport {
    double min_ratio = 0.0;
    double threshold_radius = 0.0; ///< 1/C, the |λ| above which the bound is probed
    std::size_t samples = 0;
    bool passed = false;
};

/// Minimum of Re Φ(λ)/|λ|^α over random λ with |λ| > 1/C.
LowerBoundReport symbol_lower_bound_check(const LevyModel &model, std::size_t samples,
                                          std::uint64_t seed = 1);

struct AdmissibleResult {
    bool admissible = false;
    /// Open interval of γ satisfying both constraints.
    std::optional<std::pair<double, double>> gamma_window;
};

/// Is there γ ∈ (1, α) with p > d/(γ-1) and q > α/(α-γ)?  p, q may be +inf.
AdmissibleResult admissible_pq(double alpha, int dim, double p, double q);

/// p > d/(α-1) and q > pα/(p(α-1) - d).
bool krylov_pq_check(double alpha, int dim, double p, double q);

/// Human-readable description of the first violated occupation-estimate
/// inequality, or nullopt when the gate passes.
std::optional<std::string> krylov_gate_failure(double alpha, int dim, double p, double q);

} // namespace mvlevy
