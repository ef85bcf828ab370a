#pragma once

#include <stdexcept>
#include <string>

namespace landmark {

/// Invalid user input: malformed files, degenerate curves, bad configs,
/// violated preconditions. Maps to exit code 1 at the CLI.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure while running: I/O errors on output, non-finite chain state.
/// Maps to exit code 2 at the CLI.
class RuntimeFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace landmark
