#pragma once

#include <stdexcept>
#include <string>

namespace mats {

/// Contract violation on a kernel operation (bad arguments, disabled transaction, ...).
class KernelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A transaction effect met a state that correct operation can never produce,
/// e.g. two copies of one feed that are not prefix-related.
class ProtocolViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mats
