#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace depreg {

/// Bad arguments or malformed input data (CLI exit code 2).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failed numerical procedure: rank deficiency, non-convergence, degenerate
/// selection path (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A NumericalError raised inside a multi-stage pipeline, tagged with the
/// stage that failed.
class PipelineError : public NumericalError {
public:
    PipelineError(std::string stage, const std::string& what)
        : NumericalError(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// File system or stream failure; the message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace depreg
