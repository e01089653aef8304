#pragma once

#include "liouville/entire.hpp"
#include "liouville/poly_exp_sum.hpp"
#include "liouville/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace liouville {

// Fourier convention: F phi(xi) = int e^{-i x.xi} phi(x) dx, so m(D) acts on e^{i x.xi} by m(xi)
// and the Laplacian has symbol -|xi|^2.

enum class SymbolKind { Polynomial, Levy, Sampled };

struct SymbolCoeff {
  MultiIndex alpha;
  Complex c;
};

struct LevyAtom {
  Point y;
  double w = 0;
};

/// -i b.xi + xi.Q xi / 2 + sum_{|a|<=2s} c_a i^|a|/a! xi^a
///   + sum_{|y|<1} w [1 - e^{i y.xi} + sum_{k=1}^{2s-1} (i y.xi)^k / k!] + sum_{|y|>=1} w [1 - e^{i y.xi}]
struct LevyParams {
  Point b;
  Eigen::MatrixXd Q;
  std::vector<LevyAtom> atoms;
  int s = 1;
  std::vector<std::pair<MultiIndex, double>> c;
};

/// Values on a regular grid (n <= 2), multilinear interpolation.
struct SampledGrid {
  Point lo;
  Point step;
  Eigen::VectorXi count;
  std::vector<Complex> values;  // first coordinate fastest
};

class Symbol {
 public:
  static Symbol polynomial(int n, std::vector<SymbolCoeff> coeffs);
  /// -|xi|^2
  static Symbol laplacian(int n);
  static Symbol levy(LevyParams p);
  static Symbol sampled(SampledGrid g);

  SymbolKind kind() const { return kind_; }
  int dim() const { return n_; }
  Complex operator()(const Point& xi) const;

  /// Polynomial coefficients when m is a polynomial (Levy without atoms included).
  std::optional<std::vector<SymbolCoeff>> polynomial_coeffs() const;
  const std::vector<SymbolCoeff>& coeffs() const { return coeffs_; }
  const LevyParams& levy_params() const { return levy_; }
  const SampledGrid& grid() const { return grid_; }
  std::string describe() const;

 private:
  Symbol() = default;
  SymbolKind kind_ = SymbolKind::Polynomial;
  int n_ = 1;
  std::vector<SymbolCoeff> coeffs_;
  LevyParams levy_;
  SampledGrid grid_;
};

/// m at a complex point (polynomial and Levy symbols; the Levy formula is entire in xi).
Complex eval_complex(const Symbol& m, const CPoint& zeta);

/// sum_j w_j g(-y_j) over atoms with |y_j| >= 1: the jump part of the L^1_g mapping condition.
double levy_weight_mass(const Symbol& m, const Weight& w);

/// m(D) f. Exact: e^{i xi.x} -> m(xi) e^{i xi.x}; polynomial factors need a polynomial symbol.
PolyExpSum apply_symbol(const Symbol& m, const PolyExpSum& f);

/// max over terms of |coefficient|, zero for the zero function.
double max_coefficient(const PolyExpSum& f);

// --- zero sets and support functions ------------------------------------------------

enum class ZeroClass { EmptyAtResolution, OriginOnly, Compact, UnboundedSuspected };
std::string to_string(ZeroClass c);

struct ZeroSet {
  std::vector<Point> points;
  double resolution = 0;
  ZeroClass classification = ZeroClass::EmptyAtResolution;
  std::vector<Point> hull_points;
  /// min |m| on the outer shell of the box, off a neighbourhood of the zeros found.
  double boundary_min = 0;
  std::string note;
};

struct ZeroSetOptions {
  double tol = 1e-8;
  /// Points closer than this many grid steps are merged.
  double merge = 2.0;
};

/// Grid scan of |m| on [lo, hi] (n <= 2) plus Gauss-Newton refinement.
/// "unbounded-suspected" when zeros show up in the shell between the box and its double.
ZeroSet zero_set(const Symbol& m, const Point& lo, const Point& hi, double step, const ZeroSetOptions& opt = {});

/// Extreme points: min/max for n = 1, convex hull vertices for n = 2, all points otherwise.
std::vector<Point> extreme_points(const std::vector<Point>& pts);

/// H_E(y) = sup_{xi in E} y.xi
double support(const std::vector<Point>& E, const Point& y);
/// H(y) = H_K(-y) = sup_{xi in K} (-y).xi
double support_function(const std::vector<Point>& K, const Point& y);

// --- mollifier ------------------------------------------------------------------------

struct GridSpec {
  /// Frequency step; <= epsilon/8 required. Zero selects epsilon/256 (n = 1) or epsilon/32 (n = 2).
  double freq_step = 0;
  /// Points per axis, power of two. Zero selects a default (2^17 for n = 1, 512 for n = 2).
  int count = 0;
};

/// u-hat = 1 on K_{eps/2}, 0 outside K_eps, smooth in between; u = F^{-1} u-hat on a grid.
struct Mollifier {
  int n = 1;
  double epsilon = 0;
  std::vector<Point> K;
  double freq_step = 0;
  int count = 0;
  double h = 0;  // space step, 2 pi / (count freq_step)
  Eigen::ArrayXd uhat;    // on xi_j = (j - count/2) freq_step, first coordinate fastest
  Eigen::ArrayXcd u;      // on x_m = (m - count/2) h
  double mass = 0;        // sum u h^n
  double aliasing = 0;    // max |u| on the outer tenth of the space box, relative to max |u|

  /// u-hat at any frequency, exact (no grid).
  double uhat_at(const Point& xi) const;
  Point freq_point(long j) const;
  Point space_point(long m) const;
  /// sum |u(x_m)| g(-x_m) h^n
  double weighted_mass(const Weight& w) const;
};

Mollifier build_mollifier(const std::vector<Point>& K, double epsilon, const GridSpec& grid = {});

// --- Tauberian and Liouville checks --------------------------------------------------------

struct TauberianReport {
  double max_defect = 0;         // max |f - f*u| at the sample points (grid convolution)
  double exact_path_defect = 0;  // max_k |u-hat(xi_k) - 1|
  double aliasing = 0;
  int samples = 0;
  bool pass = false;
};

/// f = f * u for f with all frequencies on the u-hat = 1 plateau.
TauberianReport verify_tauberian(const PolyExpSum& f, const Mollifier& u, int samples = 100,
                                 double tol = 1e-6, unsigned seed = 42);

/// Apply m to exponentials e^{i x.gamma} over a grid of gamma; true when none is annihilated,
/// which is the f = 0 branch for symbols without real zeros.
bool kernel_empty_on_grid(const Symbol& m, const Point& lo, const Point& hi, double step, double tol = 1e-12);

struct LiouvilleReport {
  double lhs = 0, rhs = 0, ratio = 0;
  double log_lhs = 0, log_rhs = 0;
  double H = 0, S = 0, C_alpha = 0;
  /// ||f(. + i y1 e1)|| / (g(y1 e1) ||f||) for y = y1 e1
  double sharpness = 0;
  bool certified = false;
  bool pass = false;
};

/// ||d^a f(. + iy)|| <= C_a e^{H(y) + S_g(|y|)|y|} ||f||, H from the zero set.
LiouvilleReport verify_liouville_bound(const PolyExpSum& f, const Symbol& m, const Weight& w, const Point& y,
                                       const MultiIndex& alpha, const std::vector<Point>& K,
                                       const WeightConstants* constants = nullptr);

struct ConverseReport {
  std::vector<double> tau;
  std::vector<double> log_ratio;
  double slope = 0;
  double predicted_slope = 0;
  double max_rel_error = 0;
  bool match = false;
};

/// f = e^{i x.gamma} with m(gamma) = 0 and gamma outside K: the ratio
/// ||f(. - i tau y0)|| / (e^{H(-tau y0) + eps tau |y0|} ||f||) grows like e^{tau (y0.gamma - H(-y0) - eps|y0|)}.
ConverseReport converse_divergence(const Symbol& m, const Point& gamma, const std::vector<Point>& K,
                                   const Weight& w, double epsilon, const Point& y0,
                                   const std::vector<double>& tau);

}  // namespace liouville
