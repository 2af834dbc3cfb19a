#ifndef TSPCUT_ERRORS_HPP
#define TSPCUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tspcut {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance text; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

class UnsupportedEdgeWeightType : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class TooLarge : public Error {
public:
  using Error::Error;
};

class UnknownArc : public Error {
public:
  using Error::Error;
};

class Infeasible : public Error {
public:
  using Error::Error;
};

class BadK : public Error {
public:
  using Error::Error;
};

class AsymmetricArcSet : public Error {
public:
  using Error::Error;
};

class NotDegreeFeasible : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

}  // namespace tspcut

#endif  // TSPCUT_ERRORS_HPP
