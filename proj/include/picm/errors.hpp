#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace picm {

/// Input outside the documented domain of an operation.
using domain_error = std::domain_error;

/// A value that violates a structural invariant (unsorted atoms, bad weights, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A jump CDF whose atoms cannot belong to any invariant measure.
class not_invariant_error : public validation_error {
public:
    explicit not_invariant_error(const std::string& what) : validation_error(what) {}
};

/// Work exceeds the configured term budget. `required` is the budget that
/// would have been needed.
class resource_error : public std::runtime_error {
public:
    resource_error(const std::string& what, std::uint64_t required)
        : std::runtime_error(what), required_(required) {}
    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

}  // namespace picm
