#pragma once

#include <stdexcept>
#include <string>

namespace hlnc {

/// Malformed input: wrong vector length, bad probability, unknown name.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A guarantee the library relies on did not hold at runtime.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Metrics requested on a block where some wanted packet is still undecoded.
class IncompleteBlock : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive search refused because the instance exceeds the size guard.
class InstanceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The instance is outside the class an oracle is defined for.
class NotSupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hlnc
