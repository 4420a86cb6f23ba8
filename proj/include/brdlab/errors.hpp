#pragma once

#include <stdexcept>
#include <string>

namespace brdlab {

/// Malformed or out-of-range user input (bad vertex, unparseable spec, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A size guard was exceeded (brute force over too many vertices, API caps).
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A parameter lies outside the range where a closed form or theorem applies.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Random generation failed (e.g. pairing method ran out of retries).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cooperative cancellation was requested while a computation was running.
class Cancelled : public std::runtime_error {
 public:
  Cancelled() : std::runtime_error("cancelled") {}
};

}  // namespace brdlab
