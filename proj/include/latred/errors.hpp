#pragma once

#include <stdexcept>
#include <string>

namespace latred {

// Base class for all latred errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Incompatible matrix/vector dimensions or out-of-range index.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// A parameter is outside its documented domain (delta, sigma, constellation...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(what) {}
};

// Numerically rank-deficient input where full column rank is required.
class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& what) : Error(what) {}
};

// Output file could not be opened or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace latred
