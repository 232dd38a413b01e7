#pragma once

#include <stdexcept>
#include <string>

namespace relaxch {

// Base of every error raised by the library. The CLI maps the category to
// an exit code (config problems -> 1, numerical failures -> 2).
class Error : public std::runtime_error {
public:
    enum class Category { config, numerical };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(Category::numerical, "domain error: " + w) {}
};

struct ParamError : Error {
    explicit ParamError(const std::string& w) : Error(Category::config, "parameter error: " + w) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(Category::numerical, "numerical error: " + w) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& w) : Error(Category::numerical, "convergence error: " + w) {}
};

struct ContractionError : Error {
    explicit ContractionError(const std::string& w) : Error(Category::numerical, "contraction error: " + w) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error(Category::config, "precondition error: " + w) {}
};

struct NumericalBlowup : Error {
    explicit NumericalBlowup(const std::string& w) : Error(Category::numerical, "numerical blowup: " + w) {}
};

struct StepRejected : Error {
    explicit StepRejected(const std::string& w) : Error(Category::numerical, "step rejected: " + w) {}
};

class ConfigError : public Error {
public:
    ConfigError(int line, std::string key, const std::string& w)
        : Error(Category::config, "config error (line " + std::to_string(line) + ", key '" + key + "'): " + w),
          line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

} // namespace relaxch
