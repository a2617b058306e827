#pragma once

#include <stdexcept>
#include <string>

namespace quanton {

/// Input outside an operation's domain (nonpositive lengths, malformed grids, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Well-formed input for which the requested physics or numerics does not exist,
/// e.g. an evanescent tube mode or a field with no support.
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace quanton
