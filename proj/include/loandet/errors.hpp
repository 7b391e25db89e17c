#pragma once

#include <stdexcept>
#include <string>

namespace loandet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files: missing columns, bad rows, duplicate keys.
struct DataError : Error {
    using Error::Error;
};

// Invalid run configuration: unknown donor, bad fold count, flag conflicts.
struct ConfigError : Error {
    using Error::Error;
};

// Unknown concept or form key.
struct LookupError : Error {
    using Error::Error;
};

// Input outside an operation's domain (empty segment string, donor passed
// where a target language is required).
struct DomainError : Error {
    using Error::Error;
};

// Threshold calibration or model training cannot proceed (one-class data,
// diverging loss).
struct CalibrationError : Error {
    using Error::Error;
};

// Mismatched vector lengths or prediction/gold key sets.
struct ShapeError : Error {
    using Error::Error;
};

}  // namespace loandet
