#pragma once

#include <stdexcept>
#include <string>

namespace ubqc {

// Register would exceed the configured qubit cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation referenced a qubit id that is not (or no longer) in the register.
struct UnknownQubitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was used against its protocol contract (e.g. teleporting
// through a qubit that is not half of a live Bell pair).
struct ProtocolMisuseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Protocol steps invoked out of order (e.g. decrypt before verification).
struct ProtocolOrderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CompileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ubqc
