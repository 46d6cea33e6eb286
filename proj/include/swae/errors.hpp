#pragma once

#include <stdexcept>
#include <string>

namespace swae {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN/Inf reached a boundary that requires finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Mismatched sizes of otherwise well-formed inputs (e.g. atom counts).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (IDX, checkpoint).
class ParseError : public Error {
 public:
  enum class Kind { io, bad_magic, bad_version, truncated, count_mismatch, shape };

  ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace swae
