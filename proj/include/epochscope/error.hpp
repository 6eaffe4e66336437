#pragma once

#include <stdexcept>
#include <string>

namespace epochscope {

// Base of all toolkit errors. The three categories below map onto the CLI
// exit codes: ConfigError -> 1, DataError -> 2, NumericError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// -- data errors --------------------------------------------------------

struct AlignmentError : DataError {
    using DataError::DataError;
};

struct EmptyPartError : DataError {
    using DataError::DataError;
};

struct UnknownPartError : DataError {
    explicit UnknownPartError(const std::string& part)
        : DataError("unknown part: " + part) {}
};

struct EmptyTableError : DataError {
    using DataError::DataError;
};

struct EmptyRangeError : DataError {
    using DataError::DataError;
};

struct EmptyScopeError : DataError {
    using DataError::DataError;
};

struct EmptyCorpusError : DataError {
    using DataError::DataError;
};

struct EmptySentenceError : DataError {
    using DataError::DataError;
};

struct NotAlignedError : DataError {
    using DataError::DataError;
};

struct SentenceOutOfRangeError : DataError {
    using DataError::DataError;
};

struct DegenerateTableError : DataError {
    using DataError::DataError;
};

// -- numeric errors ------------------------------------------------------

struct DomainError : NumericError {
    using NumericError::NumericError;
};

struct ConvergenceError : NumericError {
    using NumericError::NumericError;
};

struct ConstantVectorError : NumericError {
    using NumericError::NumericError;
};

struct LengthMismatchError : NumericError {
    using NumericError::NumericError;
};

struct DimensionMismatchError : NumericError {
    using NumericError::NumericError;
};

struct ZeroFrequencyError : NumericError {
    using NumericError::NumericError;
};

}  // namespace epochscope
