#pragma once

#include <stdexcept>
#include <string>

namespace aaa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its mathematical domain (probability not in [0,1], empty fold, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent dimensions or parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Key-protocol misuse (column length does not match the key length).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Bit selection from a packet failed.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration would exceed its cost bound; use Monte Carlo instead.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Requested computation is not defined for the given source model.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace aaa
