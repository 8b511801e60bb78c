#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pebbling {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    /// Short machine-readable tag, used in the CLI's structured error output.
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error("invalid_parameter", what) {}
};

class IllegalMove : public Error {
public:
    explicit IllegalMove(const std::string& what) : Error("illegal_move", what) {}
};

class UnsupportedStructure : public Error {
public:
    explicit UnsupportedStructure(const std::string& what) : Error("unsupported_structure", what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

class BackendRefusal : public Error {
public:
    explicit BackendRefusal(const std::string& what) : Error("backend_refusal", what) {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error("cap_exceeded", what) {}
};

/// A search or enumeration ran out of budget. `lower`/`upper` carry whatever
/// bounds on the sought quantity were established before stopping.
class ResourceExhausted : public Error {
public:
    ResourceExhausted(const std::string& what, std::int64_t lower, std::int64_t upper)
        : Error("resource_exhausted", what), lower_(lower), upper_(upper) {}

    std::int64_t lower() const noexcept { return lower_; }
    std::int64_t upper() const noexcept { return upper_; }

private:
    std::int64_t lower_;
    std::int64_t upper_;
};

/// Too many Monte Carlo trials could not be decided within the solver budget.
class IndeterminateTrials : public Error {
public:
    explicit IndeterminateTrials(const std::string& what) : Error("indeterminate_trials", what) {}
};

}  // namespace pebbling
