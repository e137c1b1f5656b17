#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace simrel {

using State = std::uint32_t;
using BlockId = std::uint32_t;
using NodeId = std::uint32_t;

/// Malformed or semantically invalid input (bad syntax, ids out of range,
/// relation that is not a preorder). Maps to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 0 when the error is not attached to a particular line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// An internal data-structure invariant did not hold. Maps to exit code 2.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

} // namespace simrel
