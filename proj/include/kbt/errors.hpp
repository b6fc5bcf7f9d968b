#pragma once

// Error taxonomy shared by all modules.  The CLI maps these onto process
// exit codes: ConfigError -> 2, PrecisionExhausted -> 3, everything else
// derived from Error -> 4 (precondition violation).

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbt {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operand was divisible by the modulus where an inverse was required.
struct ZeroResidue : Error {
    std::size_t index;  // offending position for batch operations, 0 otherwise
    explicit ZeroResidue(const std::string& msg, std::size_t idx = 0)
        : Error(msg), index(idx) {}
};

// Certified evaluation could not separate a value from an integer (or an
// interval endpoint) within the precision budget.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error(msg) {}
};

// Input size exceeds the documented exhaustive-mode limit.
struct SizeLimit : Error {
    explicit SizeLimit(const std::string& msg) : Error(msg) {}
};

// p | y where the Beatty/correlation machinery requires p to not divide y.
struct YDivisible : Error {
    explicit YDivisible(const std::string& msg) : Error(msg) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

struct DuplicateResidue : Error {
    explicit DuplicateResidue(const std::string& msg) : Error(msg) {}
};

struct DegenerateFit : Error {
    explicit DegenerateFit(const std::string& msg) : Error(msg) {}
};

// Invalid experiment configuration; field_path names the offending key.
struct ConfigError : Error {
    std::string field_path;
    ConfigError(const std::string& field, const std::string& msg)
        : Error(field + ": " + msg), field_path(field) {}
};

}  // namespace kbt
