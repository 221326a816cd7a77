#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace subcov {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Malformed arguments: wrong dimensions, non-finite values, out-of-range
// parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A measurement whose elements do not resolve the identity.
class IncompleteMeasurement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subcov
