#include "liouville/entire.hpp"
#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace liouville {
namespace {

constexpr double kNear = 200.0;   // near field |t| <= C0
constexpr double kFar = 2e4;      // moments integrated up to here, then a fitted tail
constexpr int kMoments = 48;

// 0, +-y, +-3y, +-10y, then geometric out to the span: resolves a narrow kernel
std::vector<double> kernel_offsets(double y, double span) {
  std::vector<double> d{0.0, y, -y, 3 * y, -3 * y};
  for (double s = 10 * y; s < span; s *= 4) {
    d.push_back(s);
    d.push_back(-s);
  }
  return d;
}

quad::Options poisson_options() { return {1e-12, 1e-11, 20000}; }

// local minima of |phi| on [a, b], refined by golden section
std::vector<double> abs_minima(const std::function<double(double)>& logabs, double a, double b, double step) {
  std::vector<double> out;
  const int m = std::max(3, static_cast<int>(std::ceil((b - a) / step)));
  const double hs = (b - a) / m;
  std::vector<double> v(m + 1);
  for (int i = 0; i <= m; ++i) v[i] = logabs(a + i * hs);
  for (int i = 1; i < m; ++i) {
    if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
    // skip shallow minima
    if (v[i] > std::min(v[i - 1], v[i + 1]) - 1e-9 && v[i] > -2) continue;
    double lo = a + (i - 1) * hs, hi = a + (i + 1) * hs;
    const double r = (std::sqrt(5.0) - 1) / 2;
    double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
    double fc = logabs(c), fd = logabs(d);
    for (int it = 0; it < 120 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
      if (fc < fd) { hi = d; d = c; fd = fc; c = hi - r * (hi - lo); fc = logabs(c); }
      else { lo = c; c = d; fc = fd; d = lo + r * (hi - lo); fd = logabs(d); }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace

struct PoissonExtension::Impl {
  PolyExpSum slice{1};
  bool periodic = false;
  double omega0 = 0;  // base frequency of a periodic slice
  double constant_log = 0;
  bool constant = false;
  std::vector<double> minima;  // periodic: in [0, P); general: in [-C0, C0]
  std::vector<double> moments;  // A_j = int_{|t|>C0} log|phi| t^{-j-1}, j = 1..kMoments
  double moment_error = 0;
  double scan_step = 0.01;

  double logabs(double t) const {
    const double a = std::abs(slice(PolyExpSum::CVec::Constant(1, Complex(t, 0))));
    return a > 0 ? std::log(a) : -745.0;
  }

  void detect_period() {
    bool any_poly = false;
    double fmin = INFINITY;
    for (const auto& t : slice.terms()) {
      if (t.alpha[0] != 0) any_poly = true;
      if (t.xi[0] != 0) fmin = std::min(fmin, std::abs(t.xi[0]));
    }
    if (any_poly) return;
    if (!std::isfinite(fmin)) {
      constant = true;
      constant_log = std::log(std::abs(slice.terms().front().c));
      return;
    }
    for (int q = 1; q <= 12; ++q) {
      const double w0 = fmin / q;
      bool ok = true;
      for (const auto& t : slice.terms()) {
        const double r = t.xi[0] / w0;
        if (std::abs(r - std::round(r)) > 1e-12 * std::max(1.0, std::abs(r))) ok = false;
      }
      if (ok) {
        periodic = true;
        omega0 = w0;
        return;
      }
    }
  }

  void build_moments() {
    moments.assign(kMoments, 0.0);
    const auto opt = quad::Options{1e-9, 1e-11, 200000};
    double err = 0;
    for (int side : {1, -1}) {
      auto L = [&](double t) { return logabs(side * t); };
      const auto rule = quad::adaptive_rule([&](double t) { return L(t) / (t * t); }, kNear, kFar,
                                            std::min(2.0, scan_step * 100), opt);
      // least-squares fit c0 + d log t on [kFar/2, kFar] and on [kFar/4, kFar/2]
      auto fit = [&](double a, double b, double* c0, double* d) {
        double s0 = 0, s1 = 0, s2 = 0, r0 = 0, r1 = 0;
        for (const auto& p : rule)
          for (int j = 0; j < 21; ++j) {
            const double t = p.nodes[j];
            if (t < a || t > b) continue;
            const double wq = p.weights[j], u = std::log(t), v = L(t);
            s0 += wq; s1 += wq * u; s2 += wq * u * u; r0 += wq * v; r1 += wq * u * v;
          }
        const double det = s0 * s2 - s1 * s1;
        *d = det != 0 ? (s0 * r1 - s1 * r0) / det : 0.0;
        *c0 = (r0 - *d * s1) / s0;
      };
      double c0a, da, c0b, db;
      fit(kFar / 2, kFar, &c0a, &da);
      fit(kFar / 4, kFar / 2, &c0b, &db);
      // sum_nodes w L(t) t^{-j-1}, all j at once
      std::vector<double> acc(kMoments, 0.0);
      for (const auto& p : rule)
        for (int k = 0; k < 21; ++k) {
          const double t = p.nodes[k], inv = 1 / t;
          double v = p.weights[k] * L(t) * inv;
          for (int j = 0; j < kMoments; ++j) {
            v *= inv;
            acc[j] += v;
          }
        }
      for (int j = 1; j <= kMoments; ++j) {
        const double sgn = (side < 0 && (j + 1) % 2 == 1) ? -1.0 : 1.0;
        const double lT = std::log(kFar), Tj = std::pow(kFar, -j);
        const double tail = Tj * (c0a / j + da * (lT / j + 1.0 / (double(j) * j)));
        moments[j - 1] += sgn * (acc[j - 1] + tail);
        if (j == 1) {
          const double tail_b = Tj * (c0b / j + db * (lT / j + 1.0));
          err += std::abs(tail - tail_b) + 1e-9;
        }
      }
    }
    moment_error = err;
  }
};

PoissonExtension::PoissonExtension(const PolyExpSum& f, const Point& xprime) : impl_(std::make_unique<Impl>()) {
  const int n = f.dim();
  if (n > 1 && xprime.size() != n - 1) throw ArgumentError("x' must have dimension n-1");
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    Complex c = t.c;
    for (int k = 1; k < n; ++k) {
      c *= std::pow(xprime[k - 1], t.alpha[k]);
      c *= std::exp(Complex(0, t.xi[k] * xprime[k - 1]));
    }
    terms.push_back(Term{c, MultiIndex::Constant(1, t.alpha[0]), Point::Constant(1, t.xi[0])});
  }
  impl_->slice = PolyExpSum(1, terms);
  if (impl_->slice.is_zero()) throw ArgumentError("log|phi| is not integrable: the slice vanishes identically");
  k_ = std::max(0.0, kappa(impl_->slice, Point(Point::Constant(1, 1.0))));
  const double xi = impl_->slice.max_frequency();
  impl_->scan_step = xi > 0 ? std::min(0.01, 0.05 / xi) : 0.01;
  impl_->detect_period();
  auto la = [this](double t) { return impl_->logabs(t); };
  if (impl_->constant) return;
  if (impl_->periodic) {
    const double P = 2 * kPi / impl_->omega0;
    impl_->minima = abs_minima(la, -0.01 * P, 1.01 * P, std::min(impl_->scan_step, P / 4096));
    for (auto& m : impl_->minima) m = std::fmod(m + P, P);
    std::sort(impl_->minima.begin(), impl_->minima.end());
    return;
  }
  impl_->minima = abs_minima(la, -kNear, kNear, impl_->scan_step);
  impl_->build_moments();
}

PoissonExtension::~PoissonExtension() = default;
PoissonExtension::PoissonExtension(PoissonExtension&&) noexcept = default;

bool PoissonExtension::periodic() const { return impl_->periodic || impl_->constant; }

double PoissonExtension::log_abs(double t) const { return impl_->logabs(t); }

PoissonValue PoissonExtension::integral(double x, double y) const {
  if (!(y > 0)) throw ArgumentError("Poisson extension needs y > 0");
  const Impl& I = *impl_;
  if (I.constant) return {I.constant_log, 0.0};
  auto la = [&](double t) { return I.logabs(t); };
  std::vector<double> bp;
  auto add_near = [&](double a, double b) {
    for (double d : kernel_offsets(y, b - a))
      if (x + d > a && x + d < b) bp.push_back(x + d);
  };
  PoissonValue out;
  if (I.periodic) {
    // periodized kernel (1/P) sinh(w y)/(cosh(w y) - cos(w s)), w = 2 pi / P
    const double w0 = I.omega0, P = 2 * kPi / w0;
    const double q = std::exp(-w0 * y);
    auto K = [&](double s) { return (w0 / (2 * kPi)) * (1 - q * q) / (1 + q * q - 2 * q * std::cos(w0 * s)); };
    const double a = x - P / 2, b = x + P / 2;
    bp = {a, b};
    add_near(a, b);
    for (double m : I.minima)
      for (int k = -2; k <= 2; ++k) {
        const double t = m + k * P;
        if (t > a && t < b) bp.push_back(t);
      }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const auto r = quad::integrate([&](double t) { return la(t) * K(t - x); }, bp, poisson_options());
    if (!r.converged) throw QuadratureError("Poisson integral did not converge");
    return {r.value, r.error};
  }

  // far-field series converges like (|z|/C0)^j
  const double C0 = kNear;
  if (std::hypot(x, y) > 0.5 * C0) throw DomainError("Poisson extension evaluated too far from the origin (|z| > 100)");
  bp = {-C0, C0};
  add_near(-C0, C0);
  for (double m : I.minima) bp.push_back(m);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const auto r = quad::integrate([&](double t) { return la(t) * (y / kPi) / ((t - x) * (t - x) + y * y); }, bp,
                                 poisson_options());
  if (!r.converged) throw QuadratureError("Poisson integral did not converge");
  // far field: (y/pi)/((t-x)^2+y^2) = (1/pi) sum_j Im(z^j) t^{-j-1}
  const Complex z(x, y);
  Complex zj(1, 0);
  double far = 0;
  for (int j = 1; j <= kMoments; ++j) {
    zj *= z;
    far += zj.imag() * I.moments[j - 1] / kPi;
  }
  out.value = r.value + far;
  out.error = r.error + y / kPi * I.moment_error + std::pow(std::abs(z) / C0, kMoments) * std::abs(far);
  return out;
}

PoissonValue PoissonExtension::bound(double x, double y) const {
  PoissonValue v = integral(x, y);
  v.value += k_ * y;
  return v;
}

PoissonValue poisson_extension(const PolyExpSum& f, double x1, double y1, const Point& xprime) {
  return PoissonExtension(f, xprime).bound(x1, y1);
}

// --- outer function ------------------------------------------------------------------

OuterFunction::OuterFunction(const Weight& w) : w_(w) {
  if (w.dim() != 1) throw ArgumentError("outer function needs a weight on R^1");
  if (std::abs(w.log_value(Point::Zero(1))) > 1e-14) throw ArgumentError("outer function needs g(0) = 1; normalize first");
  for (double s : {1.0, -1.0})
    if (!w.tail_over_square(Point::Constant(1, s), 1e6).finite) throw PreconditionError("Beurling-Domar violated");
  assumptions_ = "log g assumed Lipschitz on compacts";
}

namespace {

// int_0^inf [(h+(t) - h0) K+(t) + (h-(t) - h0) K-(t)] dt, where t^2 K+-(t) -> kinf at infinity.
// mass_beyond(T) = int_T^inf (K+ + K-) carries the constant h0 past T.
template <typename KP, typename KM, typename MB>
double half_line_pair(const Weight& w, double x, double y, KP Kp, KM Km, double kinf, double h0, MB mass_beyond,
                      double* err) {
  const Point pos = Point::Constant(1, 1.0), neg = Point::Constant(1, -1.0);
  auto F = [&](double t) {
    const double hp = w.log_along(pos, t) - h0, hm = w.log_along(neg, t) - h0;
    return (hp == 0 ? 0.0 : hp * Kp(t)) + (hm == 0 ? 0.0 : hm * Km(t));
  };
  const double ax = std::abs(x);
  const double c = 10 * (ax + y) + 1;
  std::vector<double> bp{0.0};
  for (double d : kernel_offsets(y, c))
    if (ax + d > 0 && ax + d < c) bp.push_back(ax + d);
  if (c > 1) bp.push_back(1.0);
  bp.push_back(c);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const auto opt = poisson_options();
  const auto near = quad::integrate(F, bp, opt);
  double T = w.family() == WeightFamily::SampledCustom ? std::max(c, w.hull_radius()) : 1e8 * c;
  quad::Result mid;
  if (T > c) mid = quad::integrate_log_scale(F, c, T, opt);
  const TailBounds tp = w.tail_over_square(pos, T), tm = w.tail_over_square(neg, T);
  // t^2 K(t) at T relative to its limit bounds the kernel factor on [T, inf)
  const double dev = std::max(std::abs(T * T * Kp(T) - kinf), std::abs(T * T * Km(T) - kinf));
  const double tail = kinf * (tp.mid() + tm.mid()) - (h0 == 0 ? 0.0 : h0 * mass_beyond(T));
  *err = near.error + mid.error + 2 * dev * (tp.hi + tm.hi) + std::abs(kinf) * (tp.half_width() + tm.half_width());
  if (!near.converged || !mid.converged) throw QuadratureError("outer function quadrature did not converge");
  return near.value + mid.value + tail;
}

}  // namespace

double OuterFunction::poisson(double x, double y, double* err) const {
  auto Kp = [&](double t) { return y / ((t - x) * (t - x) + y * y); };
  auto Km = [&](double t) { return y / ((t + x) * (t + x) + y * y); };
  // the kernel has mass pi: integrate log g - log g(x), stable as y -> 0
  const double h0 = w_.log_value(Point::Constant(1, x));
  auto mass = [&](double T) { return kPi - std::atan((T - x) / y) - std::atan((T + x) / y); };
  const double v = half_line_pair(w_, x, y, Kp, Km, y, h0, mass, err);
  *err /= kPi;
  return h0 + v / kPi;
}

double OuterFunction::conjugate(double x, double y, double* err) const {
  const double z2 = x * x + y * y;
  // (x-t)/((t-x)^2+y^2) + t/(t^2+1), written without cancellation
  auto Kp = [&](double t) {
    return (-x * t * t + t * (z2 - 1) + x) / (((t - x) * (t - x) + y * y) * (t * t + 1));
  };
  auto Km = [&](double t) {
    return -(x * t * t + t * (z2 - 1) - x) / (((t + x) * (t + x) + y * y) * (t * t + 1));
  };
  const double v = half_line_pair(w_, x, y, Kp, Km, -x, 0.0, [](double) { return 0.0; }, err);
  *err /= kPi;
  return v / kPi;
}

Complex OuterFunction::log_value(Complex z) const {
  if (!(z.imag() > 0)) throw ArgumentError("outer function is evaluated in the open upper half plane");
  double e1, e2;
  const double re = poisson(z.real(), z.imag(), &e1);
  const double im = conjugate(z.real(), z.imag(), &e2);
  return {re, im};
}

double OuterFunction::boundary_modulus(double x) const {
  double e;
  return std::exp(poisson(x, 1e-10, &e));
}

}  // namespace liouville
