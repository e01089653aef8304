#include "liouville/multiplier.hpp"
#include "liouville/parallel.hpp"
#include "liouville/quadrature.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace liouville {
namespace {

constexpr int kTable = 2048;
constexpr int kAngles = 256;

double bump(double r, double rho) {
  const double q = r / rho;
  return q < 1 ? std::exp(-1 / (1 - q * q)) : 0.0;
}

// Cumulative integral on [0, rho] as a cubic Hermite table.
struct Cumulative {
  double rho = 1;
  std::vector<double> v, d;
  double total = 0;

  template <typename F>
  void build(F density, double rho_) {
    rho = rho_;
    v.assign(kTable + 1, 0.0);
    d.assign(kTable + 1, 0.0);
    const double h = rho / kTable;
    for (int i = 0; i <= kTable; ++i) d[i] = density(i * h);
    for (int i = 0; i < kTable; ++i)
      v[i + 1] = v[i] + quad::integrate(density, i * h, (i + 1) * h, {1e-18, 1e-14, 100}).value;
    total = v[kTable];
  }
  double operator()(double r) const {
    if (r <= 0) return 0;
    if (r >= rho) return total;
    const double h = rho / kTable;
    const int i = std::min(kTable - 1, static_cast<int>(r / h));
    const double t = (r - i * h) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
           (t3 - t2) * h * d[i + 1];
  }
};

double dist_to(const std::vector<Point>& K, const Point& x) {
  double d = INFINITY;
  for (const auto& k : K) d = std::min(d, (x - k).norm());
  return d;
}

}  // namespace

// u-hat = (indicator of K_{3eps/4}) * (normalized bump of radius eps/4): plateau K_{eps/2}, support K_eps.
double Mollifier::uhat_at(const Point& xi) const {
  if (xi.size() != n) throw ArgumentError("frequency has the wrong dimension");
  const double R = 0.75 * epsilon, rho = 0.25 * epsilon;
  const double d = dist_to(K, xi);
  if (d <= R - rho) return 1.0;
  if (d >= R + rho) return 0.0;
  if (n == 1) {
    // 1-D bump cumulative B(t) on [-rho, rho]; B(t) = (total + sign(t) C(|t|)) / 2 by symmetry
    static thread_local Cumulative C;
    static thread_local double cached = -1;
    if (cached != rho) {
      C.build([&](double s) { return bump(s, rho); }, rho);
      cached = rho;
    }
    auto B = [&](double t) {
      const double c = C(std::abs(t));
      return 0.5 * (1 + (t >= 0 ? c : -c) / C.total);
    };
    // merged intervals [k - R, k + R]
    std::vector<std::pair<double, double>> iv;
    for (const auto& k : K) iv.emplace_back(k[0] - R, k[0] + R);
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : iv) {
      if (!merged.empty() && p.first <= merged.back().second) merged.back().second = std::max(merged.back().second, p.second);
      else merged.push_back(p);
    }
    // int b(s) 1[xi - s in [a, b]] ds = B(xi - a) - B(xi - b)
    double v = 0;
    for (const auto& [a, b] : merged) v += B(xi[0] - a) - B(xi[0] - b);
    return std::clamp(v, 0.0, 1.0);
  }
  if (n != 2) throw UnsupportedError("mollifier numerics support n <= 2");
  static thread_local Cumulative C;
  static thread_local double cached = -1;
  if (cached != rho) {
    C.build([&](double r) { return bump(r, rho) * r; }, rho);
    cached = rho;
  }
  double acc = 0;
  std::vector<std::pair<double, double>> iv;
  for (int a = 0; a < kAngles; ++a) {
    const double th = 2 * kPi * (a + 0.5) / kAngles;
    const double ex = std::cos(th), ey = std::sin(th);
    iv.clear();
    for (const auto& k : K) {
      // |xi - k - r e| <= R
      const double px = xi[0] - k[0], py = xi[1] - k[1];
      const double bq = px * ex + py * ey, cq = px * px + py * py - R * R;
      const double disc = bq * bq - cq;
      if (disc <= 0) continue;
      const double s = std::sqrt(disc);
      const double r1 = std::max(0.0, bq - s), r2 = std::min(rho, bq + s);
      if (r2 > r1) iv.emplace_back(r1, r2);
    }
    std::sort(iv.begin(), iv.end());
    double lo = -1, hi = -1;
    for (const auto& p : iv) {
      if (p.first > hi) {
        if (hi > lo) acc += C(hi) - C(lo);
        lo = p.first;
        hi = p.second;
      } else {
        hi = std::max(hi, p.second);
      }
    }
    if (hi > lo) acc += C(hi) - C(lo);
  }
  return std::clamp(acc / (kAngles * C.total), 0.0, 1.0);
}

Point Mollifier::freq_point(long j) const {
  Point p(n);
  p[0] = (j % count - count / 2) * freq_step;
  if (n == 2) p[1] = (j / count - count / 2) * freq_step;
  return p;
}

Point Mollifier::space_point(long m) const {
  Point p(n);
  p[0] = (m % count - count / 2) * h;
  if (n == 2) p[1] = (m / count - count / 2) * h;
  return p;
}

double Mollifier::weighted_mass(const Weight& w) const {
  if (w.dim() != n) throw ArgumentError("weight dimension differs from the mollifier");
  double s = 0;
  for (long m = 0; m < u.size(); ++m) {
    const double a = std::abs(u[m]);
    if (a == 0) continue;
    s += a * std::exp(w.log_value(Point(-space_point(m))));
  }
  return s * std::pow(h, n);
}

Mollifier build_mollifier(const std::vector<Point>& K, double epsilon, const GridSpec& grid) {
  if (K.empty()) throw ArgumentError("mollifier needs a nonempty set K");
  const int n = static_cast<int>(K[0].size());
  if (n < 1 || n > 2) throw UnsupportedError("mollifier numerics support n <= 2");
  for (const auto& k : K)
    if (k.size() != n || !k.allFinite()) throw ArgumentError("K points must be finite and share a dimension");
  if (!(epsilon > 0)) throw ArgumentError("epsilon must be positive");
  Mollifier M;
  M.n = n;
  M.epsilon = epsilon;
  M.K = K;
  M.freq_step = grid.freq_step > 0 ? grid.freq_step : epsilon / (n == 1 ? 256 : 32);
  if (M.freq_step > epsilon / 8 * (1 + 1e-12)) {
    std::ostringstream os;
    os << "frequency grid too coarse for epsilon: step must be <= " << epsilon / 8;
    throw ArgumentError(os.str());
  }
  double reach = 0;
  for (const auto& k : K) reach = std::max(reach, k.cwiseAbs().maxCoeff());
  reach += epsilon;
  int N = grid.count > 0 ? grid.count : (n == 1 ? 1 << 17 : 512);
  if (N & (N - 1)) throw ArgumentError("grid count must be a power of two");
  if (grid.count > 0 && (N / 2 - 1) * M.freq_step < reach) throw ArgumentError("frequency grid does not cover the eps-neighbourhood of K");
  while ((N / 2 - 1) * M.freq_step < reach) N *= 2;
  M.count = N;
  M.h = 2 * kPi / (N * M.freq_step);
  const long total = n == 1 ? N : long(N) * N;
  M.uhat.resize(total);
  parallel_for(n == 1 ? 1 : N, [&](std::size_t row) {
    const long b = n == 1 ? 0 : long(row) * N, e = n == 1 ? N : b + N;
    for (long j = b; j < e; ++j) M.uhat[j] = M.uhat_at(M.freq_point(j));
  });

  // u(x_m) = (2 pi)^{-n} sum_j uhat_j e^{i x_m . xi_j} dxi^n; with centred indices this is an inverse DFT
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  auto centred_inverse = [&](std::vector<Complex>& line) {
    std::vector<Complex> a(N), out;
    for (int j = 0; j < N; ++j) a[(j - N / 2 + N) % N] = line[j];
    fft.inv(out, a);
    for (int m = 0; m < N; ++m) line[m] = out[(m - N / 2 + N) % N];
  };
  std::vector<Complex> buf(total);
  for (long j = 0; j < total; ++j) buf[j] = M.uhat[j];
  if (n == 1) {
    centred_inverse(buf);
  } else {
    std::vector<Complex> line(N);
    for (int r = 0; r < N; ++r) {
      for (int c = 0; c < N; ++c) line[c] = buf[long(r) * N + c];
      centred_inverse(line);
      for (int c = 0; c < N; ++c) buf[long(r) * N + c] = line[c];
    }
    for (int c = 0; c < N; ++c) {
      for (int r = 0; r < N; ++r) line[r] = buf[long(r) * N + c];
      centred_inverse(line);
      for (int r = 0; r < N; ++r) buf[long(r) * N + c] = line[r];
    }
  }
  const double scale = std::pow(M.freq_step / (2 * kPi), n);
  M.u.resize(total);
  for (long j = 0; j < total; ++j) M.u[j] = buf[j] * scale;
  Complex mass(0);
  for (long j = 0; j < total; ++j) mass += M.u[j];
  M.mass = mass.real() * std::pow(M.h, n);
  double umax = 0, edge = 0;
  for (long m = 0; m < total; ++m) {
    const double a = std::abs(M.u[m]);
    umax = std::max(umax, a);
    if (M.space_point(m).cwiseAbs().maxCoeff() >= 0.4 * N * M.h) edge = std::max(edge, a);
  }
  M.aliasing = umax > 0 ? edge / umax : 0;
  return M;
}

TauberianReport verify_tauberian(const PolyExpSum& f, const Mollifier& u, int samples, double tol, unsigned seed) {
  if (f.dim() != u.n) throw ArgumentError("function and mollifier dimensions differ");
  if (samples < 1) throw ArgumentError("need at least one sample point");
  TauberianReport rep;
  const double plateau = 0.5 * u.epsilon;
  for (const auto& t : f.terms()) {
    const double v = u.uhat_at(t.xi);
    const double d = dist_to(u.K, t.xi);
    const bool poly = (t.alpha.array() != 0).any();
    if (std::abs(v - 1) > 1e-12 || (poly && !(d < plateau))) {
      std::ostringstream os;
      os << "frequency " << t.xi.transpose() << " is outside the u-hat = 1 plateau (distance " << d << " to K, plateau "
         << plateau << ")";
      throw PreconditionError(os.str());
    }
    rep.exact_path_defect = std::max(rep.exact_path_defect, std::abs(v - 1));
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-10, 10);
  std::vector<Point> xs(samples);
  for (auto& x : xs) {
    x.resize(u.n);
    for (int k = 0; k < u.n; ++k) x[k] = U(rng);
  }
  const double hn = std::pow(u.h, u.n);
  const Point zero = Point::Zero(u.n);
  std::vector<double> defect(samples);
  parallel_for(samples, [&](std::size_t s) {
    Complex conv(0);
    for (long m = 0; m < u.u.size(); ++m) {
      if (u.u[m] == Complex(0)) continue;
      conv += f.at(Point(xs[s] - u.space_point(m)), zero) * u.u[m];
    }
    conv *= hn;
    defect[s] = std::abs(f.at(xs[s], zero) - conv);
  });
  rep.max_defect = *std::max_element(defect.begin(), defect.end());
  rep.samples = samples;
  rep.aliasing = u.aliasing;
  rep.pass = rep.max_defect <= tol && rep.exact_path_defect <= 1e-12;
  return rep;
}

}  // namespace liouville
