#ifndef CAVELIM_COMMON_HPP
#define CAVELIM_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

// Conventions used throughout the toolkit:
//  * rates and frequencies are dimensionless, in units of a reference rate
//    (gamma_B = 1 unless the user declares otherwise);
//  * all decay rates are amplitude rates: an isolated excited population
//    decays as exp(-2*gamma*t);
//  * lengths are in units of the cavity wavelength, so the wave number is
//    2*pi;
//  * the dissipator convention is D(x,y)rho = [x, y rho] + [rho x, y], with
//    dissipation entering master equations as -gamma * D(x+, x-).
namespace cavelim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double wave_number = 2.0 * pi;  // k = 2*pi/lambda, lambda = 1
inline constexpr cplx ii{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config file could not be parsed or fails schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Coincident emitter positions (zero separation has no finite coupling).
class SingularGeometryError : public Error {
 public:
  using Error::Error;
};

// The ensemble matrix M is singular or too ill-conditioned to invert.
class EliminationSingularError : public Error {
 public:
  explicit EliminationSingularError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// The complex symmetric eigenbasis is too close to defective to normalize.
class DecompositionUnreliableError : public Error {
 public:
  explicit DecompositionUnreliableError(const std::string& what, double metric)
      : Error(what), metric_(metric) {}
  double condition_metric() const { return metric_; }

 private:
  double metric_;
};

// Parameters violate a physical constraint (indefinite rate matrix, ...).
class UnphysicalParametersError : public Error {
 public:
  using Error::Error;
};

// The driven steady-state system is singular at the requested frequency.
class ResonanceSingularError : public Error {
 public:
  using Error::Error;
};

// Operation preconditions not met (e.g. polariton form off resonance).
class UnsupportedConfigurationError : public Error {
 public:
  using Error::Error;
};

// Requested Hilbert space exceeds the configured dimension cap.
class DimensionCapError : public Error {
 public:
  using Error::Error;
};

// A monitored invariant (trace, hermiticity) drifted beyond tolerance.
class InvariantBreachError : public Error {
 public:
  using Error::Error;
};

}  // namespace cavelim

#endif
