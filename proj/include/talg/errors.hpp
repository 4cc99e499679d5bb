#pragma once

#include <stdexcept>
#include <string>

namespace talg {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or interface misuse: bad shapes, ranks, flags.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Malformed or unreadable input data.
class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(what) {}
};

// A singular vector of the block representation could not be attributed to a
// single spectral slice; happens when singular values repeat exactly across
// slices and the dense SVD mixes the degenerate subspace.
class DegenerateSpectrum : public Error {
public:
  explicit DegenerateSpectrum(const std::string& what) : Error(what) {}
};

}  // namespace talg
