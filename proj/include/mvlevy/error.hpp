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

#include <stdexcept>
#include <string>

namespace mvlevy {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short module-level category name ("model", "argument", ...).
    virtual const char *category() const noexcept { return "error"; }
};

/// A Lévy model, spherical measure or drift violates its structural invariants.
class ModelError : public Error {
public:
    using Error::Error;
    const char *category() const noexcept override { return "model"; }
};

/// A precondition on an argument does not hold.
class ArgumentError : public Error {
public:
    using Error::Error;
    const char *category() const noexcept override { return "argument"; }
};

/// Quadrature or iteration failed to reach its tolerance.
class NumericalError : public Error {
public:
    NumericalError(const std::string &what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    const char *category() const noexcept override { return "numerical"; }
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The grid does not resolve the requested object (spectral tail too large).
class ResolutionError : public NumericalError {
public:
    ResolutionError(const std::string &what, double tail) : NumericalError(what, tail) {}
    const char *category() const noexcept override { return "resolution"; }
    double tail() const noexcept { return residual(); }
};

/// Particles fall outside the grid beyond the mass tolerance.
class CoverageError : public NumericalError {
public:
    CoverageError(const std::string &what, double outside_mass)
        : NumericalError(what, outside_mass) {}
    const char *category() const noexcept override { return "coverage"; }
};

/// Valid inputs for which the requested combination is not implemented.
class UnsupportedError : public Error {
public:
    using Error::Error;
    const char *category() const noexcept override { return "unsupported"; }
};

/// (p, q) outside the admissible region of the occupation estimate.
class GateError : public Error {
public:
    using Error::Error;
    const char *category() const noexcept override { return "gate"; }
};

/// Invalid experiment configuration; carries the offending field and line.
class ConfigError : public Error {
public:
    ConfigError(const std::string &what, std::string field = {}, int line = -1)
        : Error(what), field_(std::move(field)), line_(line) {}
    const char *category() const noexcept override { return "config"; }
    const std::string &field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

} // namespace mvlevy
