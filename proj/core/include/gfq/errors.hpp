#pragma once

#include <stdexcept>
#include <string>

namespace gfq {

enum class ErrorCategory { parameter, config, numerical, instability, convergence };

const char* category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory c, const std::string& what) : std::runtime_error(what), category_(c) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct ParameterError : Error {
    explicit ParameterError(const std::string& w) : Error(ErrorCategory::parameter, w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCategory::config, w) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorCategory::numerical, w) {}
};
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& w) : Error(ErrorCategory::convergence, w) {}
};

class InstabilityError : public Error {
public:
    InstabilityError(long step, const std::string& w) : Error(ErrorCategory::instability, w), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace gfq
