#pragma once
#include <stdexcept>
#include <string>

namespace catr {

struct InvalidGeometry : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateGeometry : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutOfStroke : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutOfBounds : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyVoxel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config / input validation failure; message names the offending field and bound.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace catr
