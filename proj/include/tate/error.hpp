#ifndef TATE_ERROR_HPP
#define TATE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tate {

// Violated precondition of a library operation (bad domain, non-unit, ...).
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainMismatch : public ContractError {
public:
    DomainMismatch() : ContractError("incompatible domains") {}
    explicit DomainMismatch(const std::string &what) : ContractError("incompatible domains: " + what) {}
};

class NotAUnit : public ContractError {
public:
    explicit NotAUnit(const std::string &what) : ContractError("not a unit: " + what) {}
};

// Malformed textual input. `position` is a byte offset into the input
// (or 0 when unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"), message_(what),
          position_(position)
    {
    }

    const std::string &message() const noexcept { return message_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string message_;
    std::size_t position_;
};

} // namespace tate

#endif
