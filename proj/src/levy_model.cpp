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

#include "mvlevy/levy_model.hpp"

#include "mvlevy/error.hpp"
#include "mvlevy/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mvlevy {

namespace {

std::string format_double(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

} // namespace

// ---------------------------------------------------------------- spherical

SphericalMeasure SphericalMeasure::uniform(std::size_t dim, double total_mass) {
    if (dim == 0) throw ModelError("spherical measure: dimension must be positive");
    if (!(total_mass > 0.0) || !std::isfinite(total_mass))
        throw ModelError("spherical measure: total mass must be finite and positive");
    SphericalMeasure m;
    if (dim == 1) {
        m = from_atoms(1, {{{1.0}, total_mass / 2}, {{-1.0}, total_mass / 2}});
    } else {
        m.dim_ = dim;
        m.total_mass_ = total_mass;
        m.symmetric_ = true;
    }
    m.uniform_ = true;
    return m;
}

SphericalMeasure SphericalMeasure::from_atoms(std::size_t dim, std::vector<SphericalAtom> atoms) {
    if (dim == 0) throw ModelError("spherical measure: dimension must be positive");
    if (atoms.empty()) throw ModelError("spherical measure: no atoms");
    SphericalMeasure m;
    m.dim_ = dim;
    for (const auto &atom : atoms) {
        if (atom.direction.size() != dim)
            throw ModelError("spherical measure: atom dimension mismatch");
        double norm2 = 0.0;
        for (double c : atom.direction) norm2 += c * c;
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
            throw ModelError("spherical measure: atom direction is not a unit vector (|e| = " +
                             format_double(std::sqrt(norm2)) + ")");
        if (!(atom.weight > 0.0) || !std::isfinite(atom.weight))
            throw ModelError("spherical measure: atom weight must be finite and positive");
        m.total_mass_ += atom.weight;
    }
    m.atoms_ = std::move(atoms);

    // Symmetric iff every atom has a mirrored partner of equal weight.
    m.symmetric_ = std::all_of(m.atoms_.begin(), m.atoms_.end(), [&](const SphericalAtom &a) {
        double mirrored = 0.0, same = 0.0;
        for (const auto &b : m.atoms_) {
            bool is_mirror = true, is_same = true;
            for (std::size_t k = 0; k < dim; ++k) {
                is_mirror = is_mirror && std::abs(a.direction[k] + b.direction[k]) <= 1e-12;
                is_same = is_same && std::abs(a.direction[k] - b.direction[k]) <= 1e-12;
            }
            if (is_mirror) mirrored += b.weight;
            if (is_same) same += b.weight;
        }
        return std::abs(mirrored - same) <= 1e-12 * same;
    });
    return m;
}

SphericalMeasure SphericalMeasure::coordinate_axes(std::size_t dim) {
    std::vector<SphericalAtom> atoms;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> e(dim, 0.0);
        e[i] = 1.0;
        atoms.push_back({e, 1.0});
        e[i] = -1.0;
        atoms.push_back({e, 1.0});
    }
    return from_atoms(dim, std::move(atoms));
}

bool SphericalMeasure::spans_space() const {
    if (uniform_ && dim_ >= 2) return true;
    Eigen::MatrixXd directions(dim_, atoms_.size());
    for (std::size_t j = 0; j < atoms_.size(); ++j)
        for (std::size_t k = 0; k < dim_; ++k) directions(k, j) = atoms_[j].direction[k];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(directions);
    lu.setThreshold(1e-10);
    return static_cast<std::size_t>(lu.rank()) == dim_;
}

Eigen::MatrixXd SphericalMeasure::second_moment() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    if (uniform_ && dim_ >= 2)
        return Eigen::MatrixXd::Identity(d, d) * (total_mass_ / static_cast<double>(dim_));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (const auto &atom : atoms_) {
        const Eigen::Map<const Eigen::VectorXd> e(atom.direction.data(), d);
        m += atom.weight * e * e.transpose();
    }
    return m;
}

Eigen::VectorXd SphericalMeasure::first_moment() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    if (uniform_ && dim_ >= 2) return m;
    for (const auto &atom : atoms_)
        m += atom.weight * Eigen::Map<const Eigen::VectorXd>(atom.direction.data(), d);
    return m;
}

// ------------------------------------------------------------------- radial

RadialModulator RadialModulator::unit() { return {Kind::Unit, 1.0, std::numeric_limits<double>::infinity()}; }

RadialModulator RadialModulator::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ModelError("tempering rate must be finite and positive");
    return {Kind::Exponential, rate, std::numeric_limits<double>::infinity()};
}

RadialModulator RadialModulator::indicator(double height, double radius) {
    if (!(height > 0.0) || !std::isfinite(height))
        throw ModelError("truncation height must be finite and positive");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ModelError("truncation radius must be finite and positive");
    return {Kind::Indicator, height, radius};
}

double RadialModulator::operator()(double r) const {
    switch (kind_) {
    case Kind::Unit: return 1.0;
    case Kind::Exponential: return std::exp(-parameter_ * r);
    case Kind::Indicator: return r <= radius_ ? parameter_ : 0.0;
    }
    return 0.0;
}

double RadialModulator::sup() const { return kind_ == Kind::Indicator ? parameter_ : 1.0; }

double RadialModulator::support_end() const { return radius_; }

RadialModulator::Sandwich RadialModulator::sandwich() const {
    switch (kind_) {
    case Kind::Unit: return {1.0, 1.0, 1.0};
    case Kind::Exponential: {
        const double e = std::exp(parameter_);
        return {1.0, e, e};
    }
    case Kind::Indicator: return {radius_, 1.0 / parameter_, 1.0};
    }
    return {1.0, 1.0, 1.0};
}

const char *to_string(JumpKind kind) {
    switch (kind) {
    case JumpKind::IsotropicStable: return "isotropic_stable";
    case JumpKind::CylindricalStable: return "cylindrical_stable";
    case JumpKind::GeneralStable: return "general_stable";
    case JumpKind::StableType: return "stable_type";
    case JumpKind::Tempered: return "tempered_stable";
    case JumpKind::Truncated: return "truncated_stable";
    }
    return "unknown";
}

JumpSpec::JumpSpec(JumpKind kind, double alpha, SphericalMeasure spherical, RadialModulator rho)
    : kind_(kind), alpha_(alpha), spherical_(std::move(spherical)), rho_(rho) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ModelError("jump index alpha must lie in (1, 2), got " + format_double(alpha));
    if (!spherical_.spans_space())
        throw ModelError("spherical measure is degenerate: its support lies in a proper linear "
                         "subspace (non-degeneracy required)");
    cos_constant_ = stable_cos_constant(alpha);
    sin_constant_ = stable_sin_constant(alpha);
}

// -------------------------------------------------------------------- model

LevyModel::LevyModel(Eigen::MatrixXd gaussian_cov, std::optional<JumpSpec> jump,
                     std::vector<LevyModel> components)
    : gaussian_cov_(std::move(gaussian_cov)), jump_(std::move(jump)),
      components_(std::move(components)) {
    if (gaussian_cov_.rows() == 0 && gaussian_cov_.cols() == 0) {
        std::size_t d = jump_ ? jump_->dim() : (components_.empty() ? 0 : components_[0].dim());
        gaussian_cov_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    }
    if (gaussian_cov_.rows() != gaussian_cov_.cols())
        throw ModelError("gaussian covariance must be square");
    dim_ = static_cast<std::size_t>(gaussian_cov_.rows());
    if (dim_ == 0) throw ModelError("model dimension must be positive");
    if (jump_ && jump_->dim() != dim_) throw ModelError("jump spec dimension mismatch");
    for (const auto &c : components_)
        if (c.dim() != dim_) throw ModelError("superposition components differ in dimension");

    if (!gaussian_cov_.allFinite()) throw ModelError("gaussian covariance is not finite");
    const double scale = gaussian_cov_.cwiseAbs().maxCoeff();
    if ((gaussian_cov_ - gaussian_cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        throw ModelError("gaussian covariance must be symmetric");
    has_gaussian_ = scale > 0.0;
    if (has_gaussian_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gaussian_cov_, Eigen::EigenvaluesOnly);
        if (!(eig.eigenvalues().minCoeff() > 1e-14 * eig.eigenvalues().maxCoeff()))
            throw ModelError("gaussian covariance must be either zero or positive definite");
    }
    if (!has_gaussian_ && !jump_ && components_.empty())
        throw ModelError("model has neither a gaussian part nor jumps");

    alpha_ = has_gaussian_ ? 2.0 : (jump_ ? jump_->alpha() : 1.0);
    for (const auto &c : components_) alpha_ = std::max(alpha_, c.alpha());

    std::ostringstream name;
    name << "levy(d=" << dim_ << ", gaussian=" << (has_gaussian_ ? "yes" : "no");
    if (jump_) name << ", jumps=" << to_string(jump_->kind()) << "(alpha=" << jump_->alpha() << ")";
    if (!components_.empty()) name << ", components=" << components_.size();
    name << ")";
    name_ = name.str();
}

LevyModel LevyModel::brownian(std::size_t dim, double variance) {
    if (!(variance > 0.0)) throw ModelError("brownian variance must be positive");
    auto d = static_cast<Eigen::Index>(dim);
    LevyModel m(Eigen::MatrixXd::Identity(d, d) * variance, std::nullopt);
    m.name_ = "brownian(d=" + std::to_string(dim) + ", variance=" + format_double(variance) + ")";
    return m;
}

LevyModel LevyModel::gaussian(Eigen::MatrixXd cov) {
    LevyModel m(std::move(cov), std::nullopt);
    m.name_ = "gaussian(d=" + std::to_string(m.dim()) + ")";
    return m;
}

namespace {

double isotropic_mass(std::size_t dim, double alpha) {
    return 1.0 / (stable_cos_constant(alpha) * sphere_abs_moment(dim, alpha));
}

Eigen::MatrixXd zero_cov(std::size_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    return Eigen::MatrixXd::Zero(d, d);
}

} // namespace

LevyModel LevyModel::isotropic_stable(std::size_t dim, double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ModelError("isotropic stable alpha must lie in (1, 2)");
    LevyModel m(zero_cov(dim),
                JumpSpec(JumpKind::IsotropicStable, alpha,
                         SphericalMeasure::uniform(dim, isotropic_mass(dim, alpha)),
                         RadialModulator::unit()));
    m.name_ = "isotropic_stable(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) + ")";
    return m;
}

LevyModel LevyModel::cylindrical_stable(std::size_t dim, double alpha) {
    LevyModel m(zero_cov(dim), JumpSpec(JumpKind::CylindricalStable, alpha,
                                        SphericalMeasure::coordinate_axes(dim),
                                        RadialModulator::unit()));
    m.name_ = "cylindrical_stable(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) + ")";
    return m;
}

LevyModel LevyModel::general_stable(double alpha, SphericalMeasure spherical) {
    const auto dim = spherical.dim();
    LevyModel m(zero_cov(dim),
                JumpSpec(JumpKind::GeneralStable, alpha, std::move(spherical), RadialModulator::unit()));
    m.name_ = "general_stable(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) + ")";
    return m;
}

LevyModel LevyModel::stable_type(double alpha, SphericalMeasure spherical, RadialModulator rho) {
    const auto dim = spherical.dim();
    LevyModel m(zero_cov(dim), JumpSpec(JumpKind::StableType, alpha, std::move(spherical), rho));
    m.name_ = "stable_type(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) + ")";
    return m;
}

LevyModel LevyModel::tempered_stable(std::size_t dim, double alpha, double rate) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw ModelError("tempered stable alpha must lie in (1, 2)");
    LevyModel m(zero_cov(dim), JumpSpec(JumpKind::Tempered, alpha,
                                        SphericalMeasure::uniform(dim, isotropic_mass(dim, alpha)),
                                        RadialModulator::exponential(rate)));
    m.name_ = "tempered_stable(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) +
              ", c=" + format_double(rate) + ")";
    return m;
}

LevyModel LevyModel::truncated_stable(std::size_t dim, double alpha, double height) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw ModelError("truncated stable alpha must lie in (1, 2)");
    LevyModel m(zero_cov(dim), JumpSpec(JumpKind::Truncated, alpha,
                                        SphericalMeasure::uniform(dim, isotropic_mass(dim, alpha)),
                                        RadialModulator::indicator(height, 1.0)));
    m.name_ = "truncated_stable(d=" + std::to_string(dim) + ", alpha=" + format_double(alpha) +
              ", c=" + format_double(height) + ")";
    return m;
}

LevyModel LevyModel::superposition(std::vector<LevyModel> components) {
    if (components.empty()) throw ModelError("superposition needs at least one component");
    const auto dim = components.front().dim();
    std::string name = "superposition(";
    for (std::size_t i = 0; i < components.size(); ++i)
        name += (i ? " + " : "") + components[i].describe();
    name += ")";
    LevyModel m(zero_cov(dim), std::nullopt, std::move(components));
    m.name_ = name;
    return m;
}

bool LevyModel::is_symmetric() const {
    if (jump_ && !jump_->is_symmetric()) return false;
    return std::all_of(components_.begin(), components_.end(),
                       [](const LevyModel &c) { return c.is_symmetric(); });
}

bool LevyModel::is_radial() const {
    if (dim_ == 1) return is_symmetric();
    if (has_gaussian_) {
        const double s = gaussian_cov_(0, 0);
        const auto d = static_cast<Eigen::Index>(dim_);
        if ((gaussian_cov_ - s * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-14 * s)
            return false;
    }
    if (jump_ && !jump_->spherical().is_uniform()) return false;
    return std::all_of(components_.begin(), components_.end(),
                       [](const LevyModel &c) { return c.is_radial(); });
}

// -------------------------------------------------------------- parameters

double sphere_abs_moment(std::size_t dim, double alpha) {
    const double d = static_cast<double>(dim);
    return std::exp(std::lgamma(d / 2) + std::lgamma((alpha + 1) / 2) -
                    0.5 * std::log(std::numbers::pi) - std::lgamma((d + alpha) / 2));
}

LowerBoundReport symbol_lower_bound_check(const LevyModel &model, std::size_t samples,
                                          std::uint64_t seed) {
    const JumpSpec *jump = model.jump() ? &*model.jump() : nullptr;
    for (const auto &c : model.components())
        if (!jump && c.jump()) jump = &*c.jump();
    // A purely Gaussian model is probed at |λ|^2 from radius 1.
    if (!jump && model.alpha() != 2.0)
        throw ArgumentError("symbol lower bound check needs a Gaussian part or a stable-type jump measure");
    if (jump && !jump->spherical().spans_space())
        throw ModelError("spherical measure is degenerate: span check failed");

    const double C = jump ? jump->rho().sandwich().C : 1.0;
    const double alpha = jump ? jump->alpha() : 2.0;
    LowerBoundReport report;
    report.threshold_radius = 1.0 / C;
    report.samples = samples;
    report.min_ratio = std::numeric_limits<double>::infinity();
    RandomStream rng(seed, 0);
    std::vector<double> lambda(model.dim());
    for (std::size_t i = 0; i < samples; ++i) {
        double norm2 = 0.0;
        for (auto &c : lambda) {
            c = rng.normal();
            norm2 += c * c;
        }
        // radius log-uniform on (1/C, 1000/C]
        const double radius = report.threshold_radius * std::exp(std::log(1000.0) * rng.uniform());
        for (auto &c : lambda) c *= radius / std::sqrt(norm2);
        const double ratio = symbol(model, lambda).real() / std::pow(radius, alpha);
        report.min_ratio = std::min(report.min_ratio, ratio);
    }
    report.passed = samples > 0 && report.min_ratio > 0.0;
    return report;
}

namespace {

void check_pq_preconditions(double alpha, int dim, double p, double q) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw ArgumentError("alpha must lie in (1, 2]");
    if (dim < 1) throw ArgumentError("dimension must be at least 1");
    if (!(p > 1.0)) throw ArgumentError("p must exceed 1");
    if (!(q > 1.0)) throw ArgumentError("q must exceed 1");
}

} // namespace

AdmissibleResult admissible_pq(double alpha, int dim, double p, double q) {
    check_pq_preconditions(alpha, dim, p, q);
    // γ > 1 + d/p  and  γ < α - α/q ; γ < α is implied.
    const double lo = 1.0 + static_cast<double>(dim) / p;
    const double hi = alpha - alpha / q;
    AdmissibleResult r;
    r.admissible = lo < hi;
    if (r.admissible) r.gamma_window = std::make_pair(lo, hi);
    return r;
}

std::optional<std::string> krylov_gate_failure(double alpha, int dim, double p, double q) {
    check_pq_preconditions(alpha, dim, p, q);
    const double d = static_cast<double>(dim);
    const double p_min = d / (alpha - 1.0);
    if (!(p > p_min))
        return "p > d/(alpha-1) fails: p = " + format_double(p) + ", d/(alpha-1) = " + format_double(p_min);
    const double q_min = std::isinf(p) ? alpha / (alpha - 1.0) : p * alpha / (p * (alpha - 1.0) - d);
    if (!(q > q_min))
        return "q > p*alpha/(p(alpha-1)-d) fails: q = " + format_double(q) + ", bound = " + format_double(q_min);
    return std::nullopt;
}

bool krylov_pq_check(double alpha, int dim, double p, double q) {
    return !krylov_gate_failure(alpha, dim, p, q).has_value();
}

} // namespace mvlevy
