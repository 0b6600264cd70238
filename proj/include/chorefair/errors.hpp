#pragma once

#include <stdexcept>
#include <string>

namespace chorefair {

// Error taxonomy shared by the library and the CLI exit-code mapping.

/// Bad arguments or violated call preconditions.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid construction parameters (a kind of usage error).
struct ParamError : UsageError {
    explicit ParamError(const std::string& what) : UsageError(what) {}
};

/// An eligibility guard failed (e.g. a seeder's agreement condition).
struct ConditionNotMet : UsageError {
    explicit ConditionNotMet(const std::string& what) : UsageError(what) {}
};

/// An enumeration would exceed the configured budget.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A self-check that must never fail did. Indicates a bug, not bad input.
struct InternalFault : std::logic_error {
    explicit InternalFault(const std::string& what) : std::logic_error(what) {}
};

} // namespace chorefair
