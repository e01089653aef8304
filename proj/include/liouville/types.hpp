#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville {

using Complex = std::complex<double>;

/// A point of R^n. Dimension is dynamic; numerics support n <= 3.
using Point = Eigen::VectorXd;
/// A point of C^n.
using CPoint = Eigen::VectorXcd;
/// Multi-index in Z_+^n.
using MultiIndex = Eigen::VectorXi;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kE = 2.71828182845904523536028747135266250;

/// Bad input to an operation (maps to exit status 2 in the CLI).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query outside the region where an object is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of a theorem is not satisfied by the supplied objects.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Valid inputs whose combination the library does not handle.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline MultiIndex zero_index(int n) { return MultiIndex::Zero(n); }

inline int order(const MultiIndex& alpha) { return alpha.sum(); }

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// alpha! = prod alpha_k!
inline double factorial(const MultiIndex& alpha) {
  double r = 1.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) r *= factorial(alpha[i]);
  return r;
}

}  // namespace liouville
