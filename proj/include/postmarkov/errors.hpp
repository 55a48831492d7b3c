#pragma once

#include <stdexcept>
#include <string>

namespace postmarkov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand has the wrong shape for the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (negative time, bad rates, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

// A propagator coefficient vanished, so the map has no inverse at that time.
class SingularMapError : public Error {
 public:
  SingularMapError(const std::string& what, int i, int j)
      : Error(what), i_(i), j_(j) {}
  int i() const { return i_; }
  int j() const { return j_; }

 private:
  int i_;
  int j_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace postmarkov
