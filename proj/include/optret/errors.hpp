#pragma once

#include <stdexcept>
#include <string>

namespace optret {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parameter validation ------------------------------------------------------

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class GammaIsOne : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

class KappaNonPositive : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

class Assumption2Violated : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

class Assumption41Violated : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

// Domain errors --------------------------------------------------------------

class NonPositiveArgument : public Error {
 public:
  using Error::Error;
};

class NonPositiveWealth : public Error {
 public:
  using Error::Error;
};

class InadmissibleWealth : public Error {
 public:
  using Error::Error;
};

// Numerics -------------------------------------------------------------------

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class RootToleranceNotMet : public Error {
 public:
  using Error::Error;
};

class NegativeValueBeyondTolerance : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

// I/O ------------------------------------------------------------------------

class ConfigParse : public Error {
 public:
  using Error::Error;
};

class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace optret
