#pragma once

#include <stdexcept>
#include <string>

namespace satbandit {

// Range violations (bad round index, bad arm) surface as std::out_of_range and
// mathematical domain violations as std::domain_error. The two types below
// cover the remaining failure classes.

/// A caller broke an operation's precondition (call order, length mismatch).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Instance or experiment parameters violate a named constraint.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace satbandit
