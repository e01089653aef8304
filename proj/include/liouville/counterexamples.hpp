#pragma once

#include "liouville/multiplier.hpp"
#include "liouville/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace liouville {

/// One checked inequality lhs <= rhs (or lhs >= rhs, see margin). Aggregated checks keep
/// the smallest margin over `count` cases.
struct Check {
  std::string tag;
  double lhs = 0, rhs = 0;
  /// Signed slack, nonnegative when the inequality holds; in log units when log_domain.
  double margin = 0;
  /// Rounding allowance: pass <=> margin >= -tol.
  double tol = 0;
  long count = 1;
  bool log_domain = false;
  /// Reported only, not part of pass().
  bool informational = false;
  bool pass = false;
};

struct CounterexampleReport {
  std::string id;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> values;
  std::vector<double> slopes;
  std::string note;

  bool pass() const;
  /// Named value; throws ArgumentError if absent.
  double value(const std::string& name) const;
  /// First check with this tag, nullptr if none.
  const Check* find(const std::string& tag) const;
};

// --- harmonic powers ------------------------------------------------------------------

/// (x1 + i x2)^k with g = (1+|x|)^k: Laplacian residual and the ratio ||f(. + i t e1)|| / g(t e1).
CounterexampleReport harmonic_power(int k, const std::vector<double>& t_list);

// --- sqrt-cosine ----------------------------------------------------------------------

struct SqrtCosineParams {
  double epsilon = 0;
  double tau = 0;     // +inf when no finite tau is needed
  double kappa = 1;
  double a = 0;       // g(x) = e^{a |x|^{1/2}}
};

/// tau by bisection on (1+tau^2)^{1/4} cos(arctan(1/tau)/2) <= (1+eps)/sqrt 2, then kappa and a.
SqrtCosineParams sqrt_cosine_params(double epsilon);

/// cos(i sqrt(z1 + i kappa z2)) = cosh(sqrt(.)), entire.
Complex sqrt_cosine_value(const SqrtCosineParams& p, const CPoint& z);

/// log|cos w| without overflow.
double log_abs_cos(Complex w);

struct SqrtCosineOptions {
  int samples = 10000;
  double box = 100;
  int pde_points = 100;
  double pde_box = 10;
  double fd_step = 1e-3;
  std::vector<double> y2 = {-1e2, -1e4};
  unsigned seed = 1;
};

CounterexampleReport sqrt_cosine(double epsilon, const SqrtCosineOptions& opt = {});

// --- non-analytic exponential series -------------------------------------------------------

/// zeta_k = xi_k + i eta_k, k = 1, 2, ... stored at index k-1.
struct ZeroSequence {
  Point omega0;
  std::vector<Point> xi, eta;
  int dim() const { return static_cast<int>(omega0.size()); }
  std::size_t size() const { return xi.size(); }
};

/// xi_k = (k+1) e1, eta_k = e2 / (2k), omega0 = e1 in R^2 (not attached to any symbol).
ZeroSequence demo_zero_sequence(std::size_t count);

/// |eta_k| < 1/k, |xi_k| > k, omega_k . omega0 > 1/2 for every stored k. Throws ArgumentError
/// naming the first failing k; otherwise returns the three minimum margins.
std::vector<Check> validate(const ZeroSequence& zs);

/// floor(sqrt(x)) exact for doubles holding integers or not.
long isqrt_floor(double x);

struct SeriesOptions {
  int samples = 100;
  double box = 20;
  int max_order = 3;
  unsigned seed = 7;
};

/// f = sum over the K_terms indices k > 1/eps of e^{i zeta_k . x} / e^{|xi_k|^{1/2}}.
/// Checks growth of derivatives, optional kernel membership, the real-part inequality for each j
/// and the two-term lower bound on (-i d_{omega0})^{l_j} f(0).
CounterexampleReport nonanalytic_series(const ZeroSequence& zs, double epsilon, std::size_t K_terms,
                                        const std::vector<std::size_t>& j_list, const Symbol* m = nullptr,
                                        const SeriesOptions& opt = {});

// --- semi-elliptic blow-up -----------------------------------------------------------------

/// c_l = 2l (1/(2l+1))^{1 + 1/(2l)}
double semi_elliptic_constant(int ell);

struct SemiEllipticOptions {
  int samples = 50;
  double x1_box = 10;
  double x2_max = 20;
  int max_order = 3;
  /// y1 = 1 - fraction * N^{-(2l+1)}
  double fraction = 0.5;
  unsigned seed = 3;
};

/// f = sum_k e^{-i k^{2l+1} x1 + k x2} / e^{k^{2l+1}}, a solution of d1^2 f + d2^{4l+2} f = 0.
CounterexampleReport semi_elliptic(int ell, std::size_t K_terms, const std::vector<long>& N_list,
                                   const SemiEllipticOptions& opt = {});

}  // namespace liouville
