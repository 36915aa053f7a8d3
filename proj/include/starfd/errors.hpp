// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace starfd {

// Raised when a computation cannot produce a trustworthy number.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleError : public NumericError {
public:
    InfeasibleError(const std::string& what, std::string binding)
        : NumericError(what), binding_(std::move(binding)) {}
    const std::string& binding_target() const noexcept { return binding_; }

private:
    std::string binding_;
};

class DegenerateError : public NumericError {
public:
    using NumericError::NumericError;
};

// Configuration problems; carries every offending field.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

}  // namespace starfd
