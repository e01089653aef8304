#pragma once

#include "liouville/poly_exp_sum.hpp"
#include "liouville/weights.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace liouville {

/// sup_x |f(x + iy)| / g(x).
struct NormEstimate {
  double value = 0;
  double log_value = -INFINITY;
  double truncation_radius = 0;  // radius of the searched ball
  bool certified = false;        // exterior provably below the reported value
  Point argmax_point;
  std::string note;
};

struct NormOptions {
  /// Box half-width used when the exterior cannot be excluded.
  double fallback_box = 1e3;
  /// Candidates refined by local search.
  int refine = 8;
  /// Grid point budget (approximate).
  long max_points = 400000;
};

NormEstimate weighted_sup_norm(const PolyExpSum& f, const Weight& w, const Point& y,
                               const NormOptions& opt = {});

/// Linear-growth constant: log|f(z)| <= c_f |z| + const, c_f = max|xi_k| + max|alpha_k|/e.
double growth_constant(const PolyExpSum& f);

// --- Poisson majorant of log|phi| on a horizontal line ------------------------------

struct PoissonValue {
  double value = 0;
  double error = 0;
};

/// Harmonic extension of log|phi(t, x')| to the upper half plane,
///   P(x1, y1) = (y1/pi) int log|phi(t, x')| / ((t - x1)^2 + y1^2) dt,
/// for the one-variable slice t -> phi(t, x') of a polynomial-exponential sum.
class PoissonExtension {
 public:
  explicit PoissonExtension(const PolyExpSum& f, const Point& xprime = Point());
  ~PoissonExtension();
  PoissonExtension(PoissonExtension&&) noexcept;

  /// k_phi = max(0, kappa(e_1)).
  double k() const { return k_; }
  bool periodic() const;
  /// The Poisson integral alone.
  PoissonValue integral(double x1, double y1) const;
  /// k y1 + integral: the majorant of log|phi(x1 + i y1, x')|.
  PoissonValue bound(double x1, double y1) const;
  /// log|phi(t, x')| on the real line.
  double log_abs(double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double k_ = 0;
};

PoissonValue poisson_extension(const PolyExpSum& f, double x1, double y1, const Point& xprime = Point());

struct LemmaX1Row {
  double x1, y1, lhs, rhs, error, margin;
};

/// log|phi(x1+iy1)| <= k y1 + P(x1, y1) on the grid xs x ys.
std::vector<LemmaX1Row> check_lemma_x1(const PolyExpSum& f, const std::vector<double>& xs,
                                       const std::vector<double>& ys);
std::vector<double> lemma_x1_default_x();
std::vector<double> lemma_x1_default_y();

// --- outer function -------------------------------------------------------------------

/// phi = e^{w} with w the Poisson plus i times the conjugate Poisson integral of log g.
class OuterFunction {
 public:
  explicit OuterFunction(const Weight& w);
  /// w(z) for Im z > 0.
  Complex log_value(Complex z) const;
  Complex operator()(Complex z) const { return std::exp(log_value(z)); }
  /// |phi| on the real axis, obtained as the limit y -> 0 (evaluated at y = 1e-10).
  double boundary_modulus(double x) const;
  const std::string& assumptions() const { return assumptions_; }

 private:
  double poisson(double x, double y, double* err) const;
  double conjugate(double x, double y, double* err) const;
  Weight w_;
  std::string assumptions_;
};

// --- Theorem-level checks ---------------------------------------------------------------

struct TentReport {
  double lhs = 0, rhs = 0, ratio = 0;
  double log_lhs = -INFINITY, log_rhs = -INFINITY;
  double C_alpha = 0, kappa = 0, S = 0, c_f = 0;
  bool certified = false;
  bool pass = false;
};

/// ||d^alpha f(.+iy)|| <= C_alpha e^{(kappa_f(y/|y|) + S_g(|y|))|y|} ||f||, norms in L^inf_{1/g}.
TentReport verify_tent(const PolyExpSum& f, const Weight& w, const Point& y, const MultiIndex& alpha,
                       const WeightConstants* constants = nullptr);

struct EstReport {
  double lhs = 0, rhs = 0, ratio = 0;
  bool certified = false;
  bool pass = false;
};

/// ||phi(. + i y1 e1)|| <= C_g e^{(k + S_g(y1)) y1} ||phi||, norms in L^inf_{1/g}.
EstReport verify_est(const PolyExpSum& f, const Weight& w, double y1,
                     const WeightConstants* constants = nullptr);

}  // namespace liouville
