#pragma once

#include <stdexcept>
#include <string>

namespace bco {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A tour is not a permutation of [0, n).
class InvalidTour : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds a solver's size limit.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Text-format violation; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Corrupted state has an active edge the predicted clean state lacks.
class InconsistentStates : public Error {
 public:
  using Error::Error;
};

/// Predicted rate outside (0, 1]; log-domain loss would be undefined.
class InvalidRate : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Two nodes coincide; distance-normalized scores are undefined.
class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

class DegeneratePosterior : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace bco
