#pragma once

#include <stdexcept>
#include <string>

namespace regtsp {

// Invalid parameters, bad configuration values, violated preconditions.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a solver's hard size cap (e.g. Held-Karp beyond n=20).
class SizeLimitError : public std::runtime_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (CSV, TOML, JSON).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace regtsp
