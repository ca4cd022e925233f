#pragma once

#include <stdexcept>
#include <string>

namespace elaa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Matrix has the wrong structural shape (not square, not Hermitian, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class SingularTriangular : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// A step size denominator vanished and no update direction exists.
class DegenerateStep : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace elaa
