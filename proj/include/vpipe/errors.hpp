#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vpipe {

/// Base of the library's error taxonomy. Carries a short machine-readable
/// code next to the human-readable message so callers (and the CLI) can
/// dispatch on the failure kind without parsing text.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Bad input: a parameter or config file violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Valid input, but the model cannot produce a result for it.
class ModelError : public Error {
public:
    using Error::Error;
};

class UnreachableConfigurationError : public ModelError {
public:
    explicit UnreachableConfigurationError(const std::string& what)
        : ModelError("unreachable_configuration", what) {}
};

class InvalidGeometryError : public ModelError {
public:
    explicit InvalidGeometryError(const std::string& what)
        : ModelError("invalid_geometry", what) {}
};

class SingularConfigurationError : public ModelError {
public:
    explicit SingularConfigurationError(const std::string& what)
        : ModelError("singular_configuration", what) {}
};

class UnachievableTargetError : public ModelError {
public:
    explicit UnachievableTargetError(const std::string& what)
        : ModelError("unachievable_target", what) {}
};

class NoCrossingError : public ModelError {
public:
    explicit NoCrossingError(const std::string& what)
        : ModelError("no_boundary_crossing", what) {}
};

class NoFeasiblePointError : public ModelError {
public:
    explicit NoFeasiblePointError(const std::string& what)
        : ModelError("no_feasible_point", what) {}
};

class NonFiniteError : public ModelError {
public:
    explicit NonFiniteError(const std::string& what)
        : ModelError("non_finite_result", what) {}
};

}  // namespace vpipe
