#pragma once

#include <stdexcept>
#include <string>

namespace l1emd {

/// Bad input: shape mismatch, out-of-range point, wrong topology, bad config.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A solver produced something that violates its own postconditions.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace l1emd
