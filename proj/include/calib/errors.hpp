#pragma once

#include <stdexcept>

namespace calib {

// Invalid argument to a library operation (bad dimension, out-of-range index,
// non-finite input, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// forecast/observe called out of order.
struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

// Inconsistent run configuration, e.g. a contrarian Nature paired with a
// randomized forecaster.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A solver could not certify its answer to the requested tolerance.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace calib
