#include "liouville/weights.hpp"

#include "liouville/parallel.hpp"
#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace liouville {
namespace {

constexpr double kDirTol = 1e-9;
constexpr double kTailRel = 1e-10;

quad::Options ray_options() { return {1e-14, 1e-12, 4000}; }

double loglog_e(double r) { return std::log(std::log(kE + r)); }

void require_dim(const Weight& w, const Point& x) {
  if (x.size() != w.dim())
    throw ArgumentError("point of dimension " + std::to_string(x.size()) +
                        " given to a weight on R^" + std::to_string(w.dim()));
}

// Power envelope C tau^p of log g along a direction, fitted on the outer half of
// the sampled range.
struct Envelope {
  double C = 0, p = 0;
  bool ok = false;
};

Envelope fit_envelope(const Weight& w, const Point& dir) {
  const double T = w.hull_radius();
  constexpr int kPts = 16;
  std::vector<double> tau(kPts), v(kPts);
  bool any_pos = false, any_zero = false;
  for (int i = 0; i < kPts; ++i) {
    tau[i] = T * (0.5 + 0.5 * i / (kPts - 1));
    v[i] = w.log_along(dir, tau[i]);
    if (v[i] > 0) any_pos = true; else any_zero = true;
  }
  Envelope e;
  if (!any_pos) {
    e.ok = true;
    return e;
  }
  if (any_zero) {
    // mixed sign pattern: constant continuation
    e.C = *std::max_element(v.begin(), v.end());
    e.ok = true;
    return e;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < kPts; ++i) {
    const double x = std::log(tau[i]), y = std::log(v[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double den = kPts * sxx - sx * sx;
  e.p = den > 0 ? (kPts * sxy - sx * sy) / den : 0.0;
  e.p = std::max(e.p, 0.0);
  for (int i = 0; i < kPts; ++i) e.C = std::max(e.C, v[i] / std::pow(tau[i], e.p));
  e.ok = e.p < 1.0 - 1e-9;
  return e;
}

std::vector<double> ray_breaks(const Weight& w, double a, double b) {
  std::vector<double> bp{a};
  if (w.family() == WeightFamily::SampledCustom) {
    std::vector<double> inner;
    for (const auto& ray : w.rays())
      for (double r : ray.radii)
        if (r > a && r < b) inner.push_back(r);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, y); }),
                inner.end());
    bp.insert(bp.end(), inner.begin(), inner.end());
  } else if (a < 1 && b > 1) {
    bp.push_back(1.0);
  }
  bp.push_back(b);
  return bp;
}

enum class Kernel { InvSquare, Poisson };

// int_lo^inf log g(tau dir) K(tau) dtau with K = 1/tau^2 or 1/(tau^2+R^2).
Functional ray_integral(const Weight& w, const Point& dir, double lo, Kernel kern, double R) {
  const double R2 = R * R;
  auto K = [&](double t) { return kern == Kernel::InvSquare ? 1.0 / (t * t) : 1.0 / (t * t + R2); };
  auto f = [&](double t) {
    const double h = w.log_along(dir, t);
    return h == 0.0 ? 0.0 : h * K(t);
  };
  // tail bounds with the kernel factor T^2/(T^2+R^2) <= tau^2 K(tau) <= 1
  auto tail = [&](double T) {
    TailBounds tb = w.tail_over_square(dir, T);
    if (kern == Kernel::Poisson) tb.lo *= T * T / (T * T + R2);
    return tb;
  };

  Functional out;
  const auto opt = ray_options();
  if (w.family() == WeightFamily::SampledCustom) {
    const double T = w.hull_radius();
    if (lo < T) {
      const auto r = quad::integrate(f, ray_breaks(w, lo, T), opt);
      out.value = r.value;
      out.error = r.error;
      out.certified = r.converged;
    }
    const TailBounds tb = tail(std::max(lo, T));
    if (!tb.finite) {
      out.value = INFINITY;
      out.certified = false;
      return out;
    }
    out.value += tb.mid();
    out.error += tb.half_width();
    return out;
  }

  const double c = std::max({lo, R, 1.0});
  if (lo < c) {
    const auto r = quad::integrate(f, ray_breaks(w, lo, c), opt);
    out.value += r.value;
    out.error += r.error;
    out.certified = out.certified && r.converged;
  }
  // choose T where the tail bracket is narrow enough
  double T = c * 1e6;
  TailBounds tb = tail(T);
  if (!tb.finite) {
    out.value = INFINITY;
    out.certified = false;
    return out;
  }
  for (;;) {
    const double scale = std::max(std::abs(out.value) + tb.mid(), 1e-300);
    if (tb.hi - tb.lo <= kTailRel * scale) break;
    if (T > 1e250) {
      out.certified = false;
      break;
    }
    T *= 1e3;
    tb = tail(T);
  }
  const auto r = quad::integrate_log_scale(f, c, T, opt);
  out.value += r.value + tb.mid();
  out.error += r.error + tb.half_width();
  out.certified = out.certified && r.converged;
  return out;
}

double scan_max_log(const Weight& w, const Point& dir, double rmax, int steps) {
  double m = 0.0;
  for (int i = 0; i <= steps; ++i) m = std::max(m, w.log_along(dir, rmax * i / steps));
  return m;
}

}  // namespace

// --- Weight -----------------------------------------------------------------------

Weight Weight::product(int n, double a, double b, double s, double t) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  if (!(a >= 0) || !(s >= 0) || !(t >= 0)) throw ArgumentError("product weight needs a, s, t >= 0");
  if (!(b >= 0 && b < 1)) throw ArgumentError("product weight needs b in [0,1)");
  Weight w;
  w.family_ = WeightFamily::Product;
  w.n_ = n;
  w.product_ = {a, b, s, t};
  return w;
}

Weight Weight::borderline(int n, double gamma) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  if (!(gamma > 0)) throw ArgumentError("borderline weight needs gamma > 0");
  Weight w;
  w.family_ = WeightFamily::BorderlineExp;
  w.n_ = n;
  w.borderline_.gamma = gamma;
  return w;
}

Weight Weight::sampled(int n, const std::vector<std::pair<Point, double>>& samples, bool radial) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  if (samples.empty()) throw ArgumentError("sampled weight without samples");
  if (!radial && n > 2)
    throw ArgumentError("non-radial sampled weights are supported for n <= 2 only");
  Weight w;
  w.family_ = WeightFamily::SampledCustom;
  w.n_ = n;
  w.radial_ = radial;
  w.samples_ = samples;

  std::optional<double> origin;
  struct Raw { Point dir; std::vector<std::pair<double, double>> pts; };
  std::vector<Raw> raw;
  for (const auto& [x, v] : samples) {
    if (x.size() != n) throw ArgumentError("sample point has the wrong dimension");
    if (!(v >= 1.0) || !std::isfinite(v))
      throw ArgumentError("sampled weight values must be finite and >= 1");
    const double rho = x.norm();
    const double lv = std::log(v);
    if (rho == 0.0) {
      origin = lv;
      continue;
    }
    Point dir = radial ? Point(Point::Unit(n, 0)) : Point(x / rho);
    auto it = std::find_if(raw.begin(), raw.end(),
                           [&](const Raw& r) { return (r.dir - dir).norm() < kDirTol; });
    if (it == raw.end()) {
      raw.push_back({dir, {}});
      it = raw.end() - 1;
    }
    it->pts.emplace_back(rho, lv);
  }
  if (!origin) throw ArgumentError("sampled weight needs a sample at the origin");
  if (raw.empty()) throw ArgumentError("sampled weight needs samples away from the origin");
  if (!radial && n == 1 && raw.size() != 2)
    throw ArgumentError("sampled weight on R^1 needs samples on both sides of 0");
  if (!radial && n == 2 && raw.size() < 3)
    throw ArgumentError("sampled weight on R^2 needs at least three rays");

  w.hull_ = INFINITY;
  for (auto& r : raw) {
    std::sort(r.pts.begin(), r.pts.end());
    SampledRay ray;
    ray.direction = r.dir;
    ray.angle = n == 2 ? std::atan2(r.dir[1], r.dir[0]) : r.dir[0];
    ray.radii.push_back(0.0);
    ray.log_values.push_back(*origin);
    for (const auto& [rho, lv] : r.pts) {
      if (rho - ray.radii.back() <= 1e-12 * rho) {
        ray.log_values.back() = std::max(ray.log_values.back(), lv);
        continue;
      }
      ray.radii.push_back(rho);
      ray.log_values.push_back(lv);
    }
    w.hull_ = std::min(w.hull_, ray.radii.back());
    w.rays_.push_back(std::move(ray));
  }
  std::sort(w.rays_.begin(), w.rays_.end(),
            [](const SampledRay& a, const SampledRay& b) { return a.angle < b.angle; });
  return w;
}

double Weight::sampled_log_along_ray(const SampledRay& ray, double rho) const {
  const auto& R = ray.radii;
  const auto& L = ray.log_values;
  if (rho >= R.back()) return L.back();
  const auto it = std::upper_bound(R.begin(), R.end(), rho);
  const std::size_t j = static_cast<std::size_t>(it - R.begin());
  const double lam = (rho - R[j - 1]) / (R[j] - R[j - 1]);
  return (1 - lam) * L[j - 1] + lam * L[j];
}

double Weight::log_radial(double rho) const {
  switch (family_) {
    case WeightFamily::Product: {
      const auto& p = product_;
      double v = 0.0;
      if (p.a != 0) v += p.a * std::pow(rho, p.b);
      if (p.s != 0) v += p.s * std::log1p(rho);
      if (p.t != 0) v += p.t * loglog_e(rho);
      return v;
    }
    case WeightFamily::BorderlineExp:
      return rho / std::pow(std::log(kE + rho), borderline_.gamma);
    case WeightFamily::SampledCustom:
      if (!radial_) throw ArgumentError("log_radial on a non-radial weight");
      if (rho > hull_ * (1 + 1e-12))
        throw DomainError("query at radius " + std::to_string(rho) +
                          " outside the sampled hull of radius " + std::to_string(hull_));
      return sampled_log_along_ray(rays_.front(), rho);
  }
  return 0.0;
}

double Weight::log_along(const Point& dir, double tau) const {
  if (is_radial()) return log_radial(tau);
  if (tau > hull_ * (1 + 1e-12))
    throw DomainError("query at radius " + std::to_string(tau) +
                      " outside the sampled hull of radius " + std::to_string(hull_));
  if (tau == 0.0) return rays_.front().log_values.front();
  if (n_ == 1) return sampled_log_along_ray(dir[0] > 0 ? rays_.back() : rays_.front(), tau);
  // n == 2: linear in the polar angle between neighbouring rays
  const double th = std::atan2(dir[1], dir[0]);
  const std::size_t m = rays_.size();
  std::size_t j = 0;
  while (j < m && rays_[j].angle <= th) ++j;
  const SampledRay& r0 = rays_[(j + m - 1) % m];
  const SampledRay& r1 = rays_[j % m];
  double span = r1.angle - r0.angle;
  double off = th - r0.angle;
  if (span <= 0) span += 2 * kPi;
  if (off < 0) off += 2 * kPi;
  const double lam = span > 0 ? std::clamp(off / span, 0.0, 1.0) : 0.0;
  return (1 - lam) * sampled_log_along_ray(r0, tau) + lam * sampled_log_along_ray(r1, tau);
}

double Weight::log_value(const Point& x) const {
  require_dim(*this, x);
  if (!x.allFinite()) throw ArgumentError("weight evaluated at a non-finite point");
  const double rho = x.norm();
  if (is_radial() || rho == 0.0) return is_radial() ? log_radial(rho) : log_along(x, 0.0);
  return log_along(x / rho, rho);
}

double Weight::operator()(const Point& x) const { return std::exp(log_value(x)); }

double Weight::log_min_on_sphere(double rho) const {
  if (is_radial()) return log_radial(rho);
  if (rho > hull_ * (1 + 1e-12))
    throw DomainError("query at radius " + std::to_string(rho) +
                      " outside the sampled hull of radius " + std::to_string(hull_));
  double m = INFINITY;
  for (const auto& r : rays_) m = std::min(m, sampled_log_along_ray(r, rho));
  return m;
}

TailBounds Weight::tail_over_square(const Point& dir, double T) const {
  TailBounds tb;
  switch (family_) {
    case WeightFamily::Product: {
      const auto& p = product_;
      double exact = 0.0;
      if (p.a != 0) exact += p.a * std::pow(T, p.b - 1) / (1 - p.b);
      if (p.s != 0) exact += p.s * (std::log1p(T) / T + std::log1p(1 / T));
      tb.lo = tb.hi = exact;
      if (p.t != 0) {
        tb.lo += p.t * loglog_e(T) / T;
        tb.hi += p.t * (loglog_e(T) / T + 1 / (T * std::log(kE + T)));
      }
      return tb;
    }
    case WeightFamily::BorderlineExp: {
      const double g = borderline_.gamma;
      if (g <= 1) {
        tb.finite = false;
        tb.lo = tb.hi = INFINITY;
        return tb;
      }
      const double A = std::pow(std::log(kE + T), 1 - g) / (g - 1);
      tb.lo = A;
      tb.hi = (1 + kE / T) * A;
      return tb;
    }
    case WeightFamily::SampledCustom: {
      tb.analytic = false;
      const Envelope e = fit_envelope(*this, dir);
      if (!e.ok) {
        tb.finite = false;
        tb.lo = tb.hi = INFINITY;
        return tb;
      }
      tb.lo = tb.hi = e.C * std::pow(T, e.p - 1) / (1 - e.p);
      return tb;
    }
  }
  return tb;
}

bool Weight::nondecreasing_from(double rho) const {
  switch (family_) {
    case WeightFamily::Product:
      return true;
    case WeightFamily::BorderlineExp: {
      // derivative sign is that of F(r) = (e+r) log(e+r) - gamma r, convex with
      // its minimum at r = e^{gamma-1} - e
      const double g = borderline_.gamma;
      const double r = std::max(rho, std::exp(g - 1) - kE);
      return (kE + r) * std::log(kE + r) - g * r > 0;
    }
    case WeightFamily::SampledCustom: {
      if (!radial_) return false;
      const auto& ray = rays_.front();
      for (std::size_t j = 1; j < ray.radii.size(); ++j)
        if (ray.radii[j] > rho && ray.log_values[j] < ray.log_values[j - 1]) return false;
      return true;
    }
  }
  return false;
}

std::optional<double> Weight::log_growth_order_from(double rho) const {
  switch (family_) {
    case WeightFamily::Product: {
      const auto& p = product_;
      return p.a * p.b * std::pow(rho, p.b) + p.s * rho / (1 + rho);
    }
    case WeightFamily::BorderlineExp: {
      const double L = std::log(kE + rho), g = borderline_.gamma;
      if (L <= 2 * g) return std::nullopt;
      return rho / std::pow(L, g) * (1 - g / L);
    }
    case WeightFamily::SampledCustom:
      return std::nullopt;
  }
  return std::nullopt;
}

Weight Weight::rotated(const Eigen::MatrixXd& A) const {
  if (A.rows() != n_ || A.cols() != n_) throw ArgumentError("rotation has the wrong size");
  if (!(A.transpose() * A).isApprox(Eigen::MatrixXd::Identity(n_, n_), 1e-10))
    throw ArgumentError("rotation matrix is not orthogonal");
  if (family_ != WeightFamily::SampledCustom) return *this;
  // (g o A)(x) = g(Ax): the sample at p moves to A^T p
  std::vector<std::pair<Point, double>> moved;
  moved.reserve(samples_.size());
  for (const auto& [x, v] : samples_) moved.emplace_back(A.transpose() * x, v);
  return sampled(n_, moved, radial_);
}

std::string Weight::describe() const {
  std::ostringstream os;
  switch (family_) {
    case WeightFamily::Product:
      os << "product(n=" << n_ << ", a=" << product_.a << ", b=" << product_.b
         << ", s=" << product_.s << ", t=" << product_.t << ")";
      break;
    case WeightFamily::BorderlineExp:
      os << "borderline(n=" << n_ << ", gamma=" << borderline_.gamma << ")";
      break;
    case WeightFamily::SampledCustom:
      os << "sampled(n=" << n_ << ", samples=" << samples_.size()
         << (radial_ ? ", radial" : "") << ", hull=" << hull_ << ")";
      break;
  }
  return os.str();
}

// --- submultiplicativity ---------------------------------------------------------------

SubmultReport check_submultiplicative(const Weight& w, const PairSampling& sampling) {
  SubmultReport rep;
  const int n = w.dim();
  const double threshold = std::log1p(sampling.rel_tol);
  auto test = [&](const Point& x, const Point& y) {
    const double lr = w.log_value(x + y) - w.log_value(x) - w.log_value(y);
    ++rep.pairs_checked;
    rep.max_log_ratio = std::max(rep.max_log_ratio, lr);
    if (lr > threshold) rep.violations.push_back({x, y, std::exp(lr)});
  };
  for (const auto& [x, y] : sampling.explicit_pairs) test(x, y);

  double hw = sampling.half_width;
  // keep |x|, |y|, |x+y| inside a sampled hull
  if (w.family() == WeightFamily::SampledCustom)
    hw = std::min(hw, w.hull_radius() / (2 * std::sqrt(double(n))));
  std::mt19937_64 rng(sampling.seed);
  std::uniform_real_distribution<double> U(-hw, hw);
  Point x(n), y(n);
  for (int k = 0; k < sampling.count; ++k) {
    for (int i = 0; i < n; ++i) x[i] = U(rng);
    for (int i = 0; i < n; ++i) y[i] = U(rng);
    test(x, y);
  }
  return rep;
}

// --- Beurling-Domar ----------------------------------------------------------------------

std::string to_string(BDVerdict v) {
  switch (v) {
    case BDVerdict::Converges: return "converges";
    case BDVerdict::Diverges: return "diverges (heuristic)";
    case BDVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BDReport check_beurling_domar(const Weight& w, const Point& direction, double horizon,
                              const BDOptions& opt) {
  require_dim(w, direction);
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw ArgumentError("direction must be a unit vector");
  if (!(horizon >= kE)) throw ArgumentError("horizon T must be at least e");
  BDReport rep;
  double T = horizon;
  if (w.family() == WeightFamily::SampledCustom) T = std::min(T, w.hull_radius());
  rep.horizon = T;
  rep.threshold = opt.divergence_threshold.value_or(std::log(std::log(T)) - 1.0);
  if (T <= 1.0) return rep;

  auto f = [&](double t) { return w.log_along(direction, t) / (t * t); };
  const auto o = ray_options();
  const double root = std::sqrt(T);
  const auto head = quad::integrate_log_scale(f, 1.0, root, o);
  const auto rest = quad::integrate_log_scale(f, root, T, o);
  const auto slice = quad::integrate_log_scale(f, T / 2, T, o);
  rep.partial_value = head.value + rest.value;
  rep.last_slice = slice.value;
  rep.lower_bound_growth = rest.value / std::max(head.value, 1e-300);
  rep.tail_summable = w.tail_over_square(direction, T).finite;
  rep.grs_estimate = std::exp(w.log_along(direction, T) / T);

  if (rep.tail_summable && rep.last_slice <= opt.tail_tol * std::max(1.0, rep.partial_value)) {
    rep.verdict = BDVerdict::Converges;
  } else if (!rep.tail_summable && rep.partial_value > rep.threshold &&
             rep.lower_bound_growth > opt.growth_fraction) {
    rep.verdict = BDVerdict::Diverges;
    rep.heuristic = true;
  }
  return rep;
}

SeriesBracket bd_series_bracket(const Weight& w, const Point& direction, long L, long N) {
  require_dim(w, direction);
  if (L < 1 || N <= L) throw ArgumentError("series bracket needs 1 <= L < N");
  SeriesBracket sb;
  auto h = [&](double t) { return w.log_along(direction, t); };
  // M over the unit ball along +-direction suffices for the one-dimensional comparison
  sb.M = std::max(scan_max_log(w, direction, 1.0, 2000), scan_max_log(w, -direction, 1.0, 2000));
  double inv_lo = 0, inv_hi = 0;
  for (long l = L; l < N; ++l) {
    const double a = double(l), b = double(l + 1);
    sb.series_upper_side += h(a) / (a * a);
    sb.series_lower_side += h(b) / (b * b);
    inv_hi += 1 / (a * a);
    inv_lo += 1 / (b * b);
  }
  std::vector<double> bp;
  for (long l = L; l <= N; l += std::max(1L, (N - L) / 64)) bp.push_back(double(l));
  if (bp.back() != double(N)) bp.push_back(double(N));
  sb.integral = quad::integrate([&](double t) { return h(t) / (t * t); }, bp, ray_options()).value;
  const double lower = sb.series_lower_side - sb.M * inv_lo;
  const double upper = sb.series_upper_side + sb.M * inv_hi;
  sb.margin = std::min(sb.integral - lower, upper - sb.integral);
  sb.holds = sb.margin >= -1e-12;
  return sb;
}

// --- functionals -----------------------------------------------------------------------

Functional I_along(const Weight& w, const Point& dir, double r) {
  const double R = std::max(r, 1.0);
  return ray_integral(w, dir, R, Kernel::InvSquare, 1.0);
}

Functional J_along(const Weight& w, const Point& dir, double r) {
  Functional out;
  if (r <= 0) return out;
  const double R = std::max(r, 1.0);
  auto h = [&](double t) { return w.log_along(dir, t); };
  double upper = r;
  if (w.family() == WeightFamily::SampledCustom && r > w.hull_radius()) {
    // envelope continuation beyond the hull
    upper = w.hull_radius();
    const Envelope e = fit_envelope(w, dir);
    out.value += e.C * (std::pow(r, e.p + 1) - std::pow(upper, e.p + 1)) / (e.p + 1);
    out.certified = false;
  }
  const auto q = quad::integrate(h, ray_breaks(w, 0.0, upper), ray_options());
  out.value = (out.value + q.value) / (R * R);
  out.error = q.error / (R * R);
  out.certified = out.certified && q.converged;
  return out;
}

Functional S_along(const Weight& w, const Point& dir, double r) {
  const double R = std::max(r, 1.0);
  const Functional p = ray_integral(w, dir, 0.0, Kernel::Poisson, R);
  Functional out;
  if (w.is_radial()) {
    out.value = 2 * p.value / kPi;
    out.error = 2 * p.error / kPi;
    out.certified = p.certified;
    return out;
  }
  const Functional m = ray_integral(w, Point(-dir), 0.0, Kernel::Poisson, R);
  out.value = (p.value + m.value) / kPi;
  out.error = (p.error + m.error) / kPi;
  out.certified = p.certified && m.certified;
  return out;
}

Functional tail_along(const Weight& w, const Point& dir, double R) {
  return ray_integral(w, dir, R, Kernel::InvSquare, 1.0);
}

std::vector<Point> default_directions(const Weight& w) {
  const int n = w.dim();
  if (w.is_radial()) return {Point::Unit(n, 0)};
  std::vector<Point> dirs;
  auto add = [&](const Point& d) {
    for (const auto& e : dirs)
      if ((e - d).norm() < kDirTol) return;
    dirs.push_back(d);
  };
  for (const auto& r : w.rays()) {
    add(r.direction);
    add(-r.direction);
  }
  return dirs;
}

namespace {

template <typename F>
Functional sup_over(const Weight& w, const std::vector<Point>& dirs_in, F&& along,
                    std::size_t* argmax = nullptr) {
  const std::vector<Point> dirs = dirs_in.empty() ? default_directions(w) : dirs_in;
  Functional best;
  best.value = -INFINITY;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Functional f = along(dirs[i]);
    if (f.value > best.value) {
      best.value = f.value;
      best.error = f.error;
      if (argmax) *argmax = i;
    }
    best.certified = best.certified && f.certified;
  }
  return best;
}

}  // namespace

Functional S_g(const Weight& w, double r, const std::vector<Point>& dirs) {
  return sup_over(w, dirs, [&](const Point& d) { return S_along(w, d, r); });
}

Functional I_g(const Weight& w, double r, const std::vector<Point>& dirs) {
  return sup_over(w, dirs, [&](const Point& d) { return I_along(w, d, r); });
}

WeightConstants weight_constants(const Weight& w, const std::vector<Point>& dirs_in) {
  const std::vector<Point> dirs = dirs_in.empty() ? default_directions(w) : dirs_in;
  WeightConstants c;
  const int n = w.dim();
  if (w.is_radial()) {
    c.M = scan_max_log(w, Point::Unit(n, 0), 1.0, 4000);
    c.M1 = std::exp(scan_max_log(w, Point::Unit(n, 0), std::sqrt(double(n)), 4000));
  } else {
    for (const auto& d : dirs) c.M = std::max(c.M, scan_max_log(w, d, 1.0, 4000));
    // sup over the cube [-1,1]^n; each direction runs to the cube boundary
    double m1 = 0.0;
    const int na = n == 1 ? 2 : 3600;
    for (int k = 0; k < na; ++k) {
      Point d(n);
      if (n == 1) d[0] = k == 0 ? 1.0 : -1.0;
      else d << std::cos(2 * kPi * k / na), std::sin(2 * kPi * k / na);
      const double reach = 1.0 / d.cwiseAbs().maxCoeff();
      m1 = std::max(m1, scan_max_log(w, d, std::min(reach, w.hull_radius()), 400));
    }
    c.M1 = std::exp(m1);
  }
  c.I1 = I_g(w, 1.0, dirs).value;
  c.S1 = S_g(w, 1.0, dirs).value;
  c.C_g = std::exp(c.M + c.I1 / kPi);
  return c;
}

WeightProfile compute_profile(const Weight& w, const Eigen::VectorXd& r_grid,
                              const std::vector<Point>& dirs_in, const std::vector<double>& eps_list) {
  if (r_grid.size() == 0) throw ArgumentError("empty radius grid");
  for (Eigen::Index i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] >= 0)) throw ArgumentError("radii must be nonnegative");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw ArgumentError("radius grid must be increasing");
  }
  const std::vector<Point> dirs = dirs_in.empty() ? default_directions(w) : dirs_in;
  const Eigen::Index m = r_grid.size();
  WeightProfile p;
  p.r_grid = r_grid;
  p.I.resize(m);
  p.J.resize(m);
  p.S.resize(m);
  p.S_error.resize(m);
  p.certified.assign(m, true);
  p.argmax_direction.assign(m, dirs.front());

  // S is constant on [0,1]: compute it once there
  const Functional s1 = S_g(w, 1.0, dirs);
  std::vector<char> cert(m, 1);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
    const double r = r_grid[Eigen::Index(i)];
    std::size_t arg = 0;
    const Functional S = r <= 1.0 ? s1 : sup_over(w, dirs, [&](const Point& d) { return S_along(w, d, r); }, &arg);
    const Functional I = I_g(w, r, dirs);
    const Functional J = sup_over(w, dirs, [&](const Point& d) { return J_along(w, d, r); });
    p.S[Eigen::Index(i)] = S.value;
    p.S_error[Eigen::Index(i)] = S.error;
    p.I[Eigen::Index(i)] = I.value;
    p.J[Eigen::Index(i)] = J.value;
    p.argmax_direction[i] = dirs[arg];
    cert[i] = S.certified && I.certified && J.certified;
  });
  for (Eigen::Index i = 0; i < m; ++i) p.certified[i] = cert[i] != 0;

  const WeightConstants c = weight_constants(w, dirs);
  p.M = c.M;
  p.I1 = c.I1;
  p.S1 = c.S1;
  p.C_g = c.C_g;
  for (double eps : eps_list) p.R_eps[eps] = find_uniform_tail_radius(w, eps, dirs);
  p.assumptions = "log g assumed Lipschitz on compacts";
  if (!w.is_radial())
    p.assumptions += "; sphere suprema over " + std::to_string(dirs.size()) + " directions";
  return p;
}

double log_growth_factor(const Weight& w, const Point& y, const std::vector<Point>& dirs) {
  const double r = y.norm();
  if (r == 0.0) return 0.0;
  const Functional S = S_g(w, r, dirs);
  if (!std::isfinite(S.value)) throw QuadratureError("S_g is not finite at |y| = " + std::to_string(r));
  return S.value * r;
}

double growth_factor(const Weight& w, const Point& y, const std::vector<Point>& dirs) {
  return std::exp(log_growth_factor(w, y, dirs));
}

double find_uniform_tail_radius(const Weight& w, double eps, const std::vector<Point>& dirs_in) {
  if (!(eps > 0)) throw ArgumentError("tolerance must be positive");
  const std::vector<Point> dirs = dirs_in.empty() ? default_directions(w) : dirs_in;
  for (const auto& d : dirs) {
    if (!w.tail_over_square(d, 1e12).finite) throw PreconditionError("Beurling-Domar violated");
    const BDReport bd = check_beurling_domar(w, d);
    if (bd.verdict != BDVerdict::Converges) throw PreconditionError("Beurling-Domar violated");
  }
  auto tail = [&](double R) {
    double m = 0;
    for (const auto& d : dirs) {
      const Functional f = tail_along(w, d, R);
      m = std::max(m, f.value + f.error);
    }
    return m;
  };
  double lo = 1.0;
  if (tail(lo) < eps) return lo;
  double hi = 2.0;
  while (!(tail(hi) < eps)) {
    lo = hi;
    hi *= hi < 1e8 ? 4.0 : 1e4;
    if (hi > 1e300) throw QuadratureError("tail radius exceeds 1e300");
  }
  // bisection in log R
  while (hi / lo > 1 + 1e-9) {
    const double mid = std::sqrt(lo * hi);
    if (tail(mid) < eps) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace liouville
