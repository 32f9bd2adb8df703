#pragma once

#include <stdexcept>
#include <string>

namespace qdnm {

// Exit-code buckets used by the CLI: config errors map to 2, numerical
// failures to 3, validation failures to 1.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidGridError : Error {
    using Error::Error;
};

struct SingularSystemError : Error {
    using Error::Error;
};

struct StepFailureError : Error {
    using Error::Error;
};

struct PropagationDivergedError : Error {
    using Error::Error;
};

struct OutOfRangeError : Error {
    using Error::Error;
};

struct InvalidInputError : Error {
    using Error::Error;
};

struct InvalidSpectrumError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    int line = 0;
    ConfigError(const std::string& msg, int line_no = 0) : Error(msg), line(line_no) {}
};

}  // namespace qdnm
