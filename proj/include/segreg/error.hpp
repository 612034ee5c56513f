#pragma once

#include <stdexcept>
#include <string>

namespace segreg {

/// File-level failure; the message always names the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that parses but violates a shape or range contract.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateConfiguration : public std::runtime_error {
 public:
  DegenerateConfiguration() : std::runtime_error("degenerate configuration") {}
};

class NotEnoughMatches : public std::runtime_error {
 public:
  NotEnoughMatches() : std::runtime_error("not enough matches") {}
};

class NoConsensus : public std::runtime_error {
 public:
  NoConsensus() : std::runtime_error("no consensus") {}
};

class InsufficientSamples : public std::invalid_argument {
 public:
  InsufficientSamples() : std::invalid_argument("insufficient samples") {}
};

class PointAtInfinity : public std::domain_error {
 public:
  PointAtInfinity() : std::domain_error("point at infinity") {}
};

}  // namespace segreg
