#pragma once

#include <stdexcept>
#include <string>

namespace uptail {

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an exact computation would exceed its enumeration budget.
/// Callers are expected to fall back to a cheaper (non-exact) route.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractViolation(what);
}

}  // namespace uptail
