#pragma once

#include <stdexcept>
#include <string>

namespace bifs {

/// Bad arguments: invalid digit index, malformed parameter string, degenerate input.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// A well-formed request outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Request exceeds a configured enumeration cap.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical procedure failed to converge.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedConfiguration : public std::runtime_error {
public:
    explicit UnsupportedConfiguration(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bifs
