#pragma once

#include <stdexcept>
#include <string>

namespace awr {

/// Base of every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveDensity : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class OutsideWindow : public Error {
 public:
  using Error::Error;
};

/// Density recovery would need p⁻¹ of a value below the range of p.
class VacuumEncountered : public Error {
 public:
  using Error::Error;
};

class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

/// No sign change found while bracketing a foot; usually means
/// characteristics have crossed (past blow-up).
class BracketFailure : public Error {
 public:
  using Error::Error;
};

class BlowupReached : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ScenarioRejected : public Error {
 public:
  ScenarioRejected(const std::string& what, double jump, double margin)
      : Error(what), jump_(jump), margin_(margin) {}

  double jump() const noexcept { return jump_; }
  double margin() const noexcept { return margin_; }

 private:
  double jump_;
  double margin_;
};

}  // namespace awr
