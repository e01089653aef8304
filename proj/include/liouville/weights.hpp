#pragma once

#include "liouville/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liouville {

enum class WeightFamily { Product, BorderlineExp, SampledCustom };

/// g(x) = e^{a|x|^b} (1+|x|)^s (log(e+|x|))^t,  a,s,t >= 0, b in [0,1).
struct ProductParams {
  double a = 0, b = 0, s = 0, t = 0;
};

/// g(x) = e^{|x| / log^gamma(e+|x|)},  gamma > 0.
struct BorderlineParams {
  double gamma = 2;
};

/// One ray of a sampled weight: log g tabulated at increasing radii along `direction`.
struct SampledRay {
  Point direction;
  double angle = 0;  // polar angle, n = 2 only
  std::vector<double> radii;
  std::vector<double> log_values;
};

/// Bounds [lo, hi] on a tail integral; `exact` when lo == hi up to rounding.
struct TailBounds {
  double lo = 0, hi = 0;
  bool finite = true;
  bool analytic = true;  // false: extrapolated (sampled envelope)
  double mid() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
};

/// A locally bounded submultiplicative weight g >= 1 on R^n.
///
/// Parametric families are radial and defined everywhere. A sampled weight stores
/// rays through the origin and interpolates log g linearly in the radius along each
/// ray and linearly in the polar angle between neighbouring rays (n = 2); a radial
/// sampled weight has a single profile in |x|.
class Weight {
 public:
  static Weight product(int n, double a, double b, double s, double t);
  static Weight borderline(int n, double gamma);
  static Weight sampled(int n, const std::vector<std::pair<Point, double>>& samples, bool radial);
  /// g == 1.
  static Weight unit(int n) { return product(n, 0, 0, 0, 0); }
  static Weight polynomial(int n, double s) { return product(n, 0, 0, s, 0); }

  WeightFamily family() const { return family_; }
  int dim() const { return n_; }
  bool is_radial() const { return family_ != WeightFamily::SampledCustom || radial_; }
  const ProductParams& product_params() const { return product_; }
  const BorderlineParams& borderline_params() const { return borderline_; }
  const std::vector<SampledRay>& rays() const { return rays_; }
  /// Radius of the largest ball on which a sampled weight is defined (inf otherwise).
  double hull_radius() const { return hull_; }

  double operator()(const Point& x) const;
  double log_value(const Point& x) const;
  /// log g(tau * dir) for tau >= 0 and unit dir.
  double log_along(const Point& dir, double tau) const;
  /// log g on |x| = rho; requires is_radial().
  double log_radial(double rho) const;
  /// Lower bound of log g over the sphere |x| = rho.
  double log_min_on_sphere(double rho) const;

  /// Bounds on the tail integral of log g(tau dir)/tau^2 over [T, inf).
  TailBounds tail_over_square(const Point& dir, double T) const;
  /// True when rho -> log g(rho x) is nondecreasing on [rho, inf) for every direction.
  bool nondecreasing_from(double rho) const;
  /// Lower bound of d log g / d log rho on [rho, inf) for radial parametric weights;
  /// nullopt when no such bound is available.
  std::optional<double> log_growth_order_from(double rho) const;

  /// The weight x -> g(Ax), A orthogonal.
  Weight rotated(const Eigen::MatrixXd& A) const;

  std::string describe() const;

 private:
  double sampled_log_along_ray(const SampledRay& ray, double rho) const;

  WeightFamily family_ = WeightFamily::Product;
  int n_ = 1;
  ProductParams product_;
  BorderlineParams borderline_;
  bool radial_ = true;
  std::vector<SampledRay> rays_;
  std::vector<std::pair<Point, double>> samples_;
  double hull_ = INFINITY;
};

inline double eval_weight(const Weight& w, const Point& x) { return w(x); }

// --- submultiplicativity -------------------------------------------------------

struct PairSampling {
  int count = 10000;
  double half_width = 10.0;
  std::uint64_t seed = 42;
  std::vector<std::pair<Point, Point>> explicit_pairs;
  double rel_tol = 1e-12;
};

struct SubmultViolation {
  Point x, y;
  double ratio;  // g(x+y) / (g(x) g(y))
};

struct SubmultReport {
  int pairs_checked = 0;
  double max_log_ratio = -INFINITY;
  std::vector<SubmultViolation> violations;
};

SubmultReport check_submultiplicative(const Weight& w, const PairSampling& sampling = {});

// --- Beurling-Domar --------------------------------------------------------------

enum class BDVerdict { Converges, Diverges, Inconclusive };
std::string to_string(BDVerdict v);

struct BDOptions {
  /// Relative size of the [T/2, T] slice below which the integral counts as settled.
  double tail_tol = 1e-2;
  /// Running-integral level for the divergence heuristic; default log log T - 1.
  std::optional<double> divergence_threshold;
  /// Minimal relative increase of the running integral from sqrt(T) to T.
  double growth_fraction = 0.05;
};

struct BDReport {
  BDVerdict verdict = BDVerdict::Inconclusive;
  bool heuristic = false;
  double horizon = 0;
  double partial_value = 0;        // int_1^T log g(tau x)/tau^2
  double last_slice = 0;           // int_{T/2}^T
  double lower_bound_growth = 0;   // relative increase from sqrt(T) to T
  double threshold = 0;
  bool tail_summable = false;      // family tail bound is finite
  double grs_estimate = 1;         // g(T x)^{1/T}
};

BDReport check_beurling_domar(const Weight& w, const Point& direction, double horizon = 1e12,
                              const BDOptions& opt = {});

/// Integral/series comparison over [L, N]:
///   sum_{l=L+1}^{N} h(l)/l^2 - M sum 1/(l+1)^2 <= int_L^N h/tau^2 <= sum_{l=L}^{N-1} h(l)/l^2 + M sum 1/l^2
struct SeriesBracket {
  double series_lower_side = 0;  // sum_{l=L+1}^{N} h(l)/l^2
  double series_upper_side = 0;  // sum_{l=L}^{N-1} h(l)/l^2
  double integral = 0;
  double M = 0;
  bool holds = false;
  double margin = 0;
};
SeriesBracket bd_series_bracket(const Weight& w, const Point& direction, long L, long N);

// --- functionals I, J, S ---------------------------------------------------------

struct Functional {
  double value = 0;
  double error = 0;
  bool certified = true;
};

Functional I_along(const Weight& w, const Point& dir, double r);
Functional J_along(const Weight& w, const Point& dir, double r);
Functional S_along(const Weight& w, const Point& dir, double r);

/// Directions over which suprema are taken: one for radial weights, the sampled rays
/// (closed under negation) otherwise.
std::vector<Point> default_directions(const Weight& w);

/// S_g(r) = sup over directions.
Functional S_g(const Weight& w, double r, const std::vector<Point>& dirs = {});
Functional I_g(const Weight& w, double r, const std::vector<Point>& dirs = {});

struct WeightProfile {
  Eigen::VectorXd r_grid;
  Eigen::VectorXd I, J, S;
  Eigen::VectorXd S_error;
  std::vector<bool> certified;
  std::vector<Point> argmax_direction;  // direction attaining S at each radius
  double M = 0;
  double C_g = 1;
  double I1 = 0, S1 = 0;
  std::map<double, double> R_eps;
  std::string assumptions;
};

WeightProfile compute_profile(const Weight& w, const Eigen::VectorXd& r_grid,
                              const std::vector<Point>& dirs = {},
                              const std::vector<double>& eps_list = {});

/// Constants shared by the estimates of entire functions.
struct WeightConstants {
  double M = 0;   // sup_{|y|<=1} log g(y)
  double M1 = 1;  // sup_{|s_k|<=1} g(s)
  double I1 = 0;  // I_g(1)
  double S1 = 0;  // S_g(1)
  double C_g = 1; // e^{M + I_g(1)/pi}
};
WeightConstants weight_constants(const Weight& w, const std::vector<Point>& dirs = {});

/// S_g(|y|) |y|, the exponent of the growth factor.
double log_growth_factor(const Weight& w, const Point& y, const std::vector<Point>& dirs = {});
/// e^{S_g(|y|)|y|}.
double growth_factor(const Weight& w, const Point& y, const std::vector<Point>& dirs = {});

/// Smallest R (>= 1) with int_R^inf log g(tau x)/tau^2 < eps for every direction x.
double find_uniform_tail_radius(const Weight& w, double eps, const std::vector<Point>& dirs = {});

/// Tail integral int_R^inf log g(tau x)/tau^2 along one direction.
Functional tail_along(const Weight& w, const Point& dir, double R);

}  // namespace liouville
