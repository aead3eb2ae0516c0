#ifndef PDR_ERRORS_HPP
#define PDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pdr {

/// Base class for all library failures. Subclasses map to CLI exit codes:
/// ConfigError -> 1, DataError -> 2, NumericalError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

}  // namespace pdr

#endif  // PDR_ERRORS_HPP
