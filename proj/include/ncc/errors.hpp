#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncc {

// Argument outside the declared domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A state or type invariant that should hold by construction was broken.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Non-finite arithmetic encountered during a numerical sweep.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularDesignError : public std::runtime_error {
public:
    SingularDesignError(const std::string& what, std::vector<std::string> columns)
        : std::runtime_error(what), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residual_history() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

// Bad configuration or input file; maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ncc
