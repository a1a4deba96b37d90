#pragma once

#include <stdexcept>
#include <string>

namespace glmpss {

// Error taxonomy. The CLI maps these onto its exit codes, so library code
// should pick the category by what went wrong, not by who called it:
//   ConfigError      -> invalid parameters / flag combinations      (exit 2)
//   IngestError      -> unreadable or malformed input data          (exit 3)
//   NumericError     -> domain violations, singular linear systems  (exit 4)
//   ConvergenceError -> iteration limits exhausted                  (exit 5)

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class IngestError : public std::runtime_error {
public:
    explicit IngestError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace glmpss
