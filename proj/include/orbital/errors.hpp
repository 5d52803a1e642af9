#pragma once

#include <stdexcept>
#include <string>

namespace orbital {

/// Base class for every failure raised by the library.
class OrbitalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |Q(z)| fell below the pole tolerance; the orbit left the bounded regime.
class PoleError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// A forward orbit exceeded the configured escape radius.
class EscapeError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

class RootSolveError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// Effectively zero leading coefficient, or an identically zero polynomial.
class DegenerateError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// deg(P - wQ) < deg T: part of the fiber sits at infinity.
class FiberDegreeError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

class EmptyLevelError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

class BracketError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// Too few admissible scales, or a raster window that misses the Julia set.
class WindowError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// The cloud is sampled too coarsely to certify a count at the requested scale.
class SamplingError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

class ConfigError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public OrbitalError {
 public:
  using OrbitalError::OrbitalError;
};

}  // namespace orbital
