#pragma once

#include <stdexcept>
#include <string>

namespace hrv {

// Base for all library errors. The CLI maps the concrete subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed cone / risk-set / pipeline configuration (CLI exit code 4).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Bad or unusable data: parse failures, too few exceedances (CLI exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (dimension mismatch, set not
// bounded away from the forbidden cone, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class OnForbiddenConeError : public DataError {
public:
    OnForbiddenConeError() : DataError("point lies on the forbidden cone (distance 0)") {}
};

class InsufficientExceedancesError : public DataError {
public:
    using DataError::DataError;
};

// Raised by the oracle module for (scenario, level, set) combinations without
// a closed-form or quadrature reference value.
class NoOracleError : public Error {
public:
    explicit NoOracleError(const std::string& what) : Error("no oracle: " + what) {}
};

}  // namespace hrv
