#pragma once

#include <stdexcept>
#include <string>

namespace coopfuse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (sin, cos) pair with no usable direction.
class DegenerateHeading : public Error {
 public:
  using Error::Error;
};

// Latency compensation asked to extrapolate beyond the configured horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class MalformedPacket : public Error {
 public:
  using Error::Error;
};

class EmptyOracle : public Error {
 public:
  using Error::Error;
};

// Configuration problem; key() names the offending entry (dotted path).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace coopfuse
