#include "liouville/entire.hpp"

#include "liouville/ext_real.hpp"
#include "liouville/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace liouville {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  double value;
  Point x;
  double spacing;
};

// golden-section maximization on [a, b]
double golden_max(const std::function<double(double)>& f, double a, double b, double* arg) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  if (fc > fd) { *arg = c; return fc; }
  *arg = d;
  return fd;
}

// Nelder-Mead maximization
double nelder_mead_max(const std::function<double(const Point&)>& f, const Point& x0, double size, Point* arg) {
  const int n = static_cast<int>(x0.size());
  std::vector<Point> s(n + 1, x0);
  std::vector<double> v(n + 1);
  for (int i = 0; i < n; ++i) s[i + 1][i] += size;
  for (int i = 0; i <= n; ++i) v[i] = f(s[i]);
  for (int it = 0; it < 600; ++it) {
    std::vector<int> o(n + 1);
    for (int i = 0; i <= n; ++i) o[i] = i;
    std::sort(o.begin(), o.end(), [&](int a, int b) { return v[a] > v[b]; });
    const int best = o[0], worst = o[n], second = o[n - 1];
    double spread = 0;
    for (int i = 1; i <= n; ++i) spread = std::max(spread, (s[o[i]] - s[best]).norm());
    if (spread < 1e-12 * std::max(1.0, s[best].norm())) break;
    Point c = Point::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) c += s[i];
    c /= n;
    const Point xr = c + (c - s[worst]);
    const double fr = f(xr);
    if (fr > v[best]) {
      const Point xe = c + 2 * (c - s[worst]);
      const double fe = f(xe);
      if (fe > fr) { s[worst] = xe; v[worst] = fe; } else { s[worst] = xr; v[worst] = fr; }
    } else if (fr > v[second]) {
      s[worst] = xr; v[worst] = fr;
    } else {
      const Point xc = c + 0.5 * (s[worst] - c);
      const double fcn = f(xc);
      if (fcn > v[worst]) {
        s[worst] = xc; v[worst] = fcn;
      } else {
        for (int i = 0; i <= n; ++i)
          if (i != best) { s[i] = s[best] + 0.5 * (s[i] - s[best]); v[i] = f(s[i]); }
      }
    }
  }
  int b = 0;
  for (int i = 1; i <= n; ++i)
    if (v[i] > v[b]) b = i;
  *arg = s[b];
  return v[b];
}

std::vector<Point> sphere_directions(int n, int count) {
  std::vector<Point> d;
  if (n == 1) return {Point::Constant(1, 1.0), Point::Constant(1, -1.0)};
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      Point p(2);
      p << std::cos(2 * kPi * k / count), std::sin(2 * kPi * k / count);
      d.push_back(p);
    }
    return d;
  }
  // Fibonacci sphere
  const double ga = kPi * (3 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double zc = 1 - 2 * (k + 0.5) / count;
    const double r = std::sqrt(1 - zc * zc);
    Point p(3);
    p << r * std::cos(ga * k), r * std::sin(ga * k), zc;
    d.push_back(p);
  }
  return d;
}

}  // namespace

double growth_constant(const PolyExpSum& f) {
  double xi = 0;
  int deg = 0;
  for (const auto& t : f.terms()) {
    xi = std::max(xi, t.xi.norm());
    deg = std::max(deg, order(t.alpha));
  }
  // log r <= r/e
  return xi + deg / kE;
}

NormEstimate weighted_sup_norm(const PolyExpSum& f, const Weight& w, const Point& y, const NormOptions& opt) {
  const int n = f.dim();
  if (w.dim() != n || y.size() != n) throw ArgumentError("dimension mismatch in weighted_sup_norm");
  if (n > 3) throw ArgumentError("weighted_sup_norm supports n <= 3");
  NormEstimate out;
  out.argmax_point = Point::Zero(n);
  if (f.is_zero()) {
    out.value = 0;
    out.certified = true;
    return out;
  }
  const bool sampled = w.family() == WeightFamily::SampledCustom;
  auto objective = [&](const Point& x) {
    const double a = std::abs(f.at(x, y));
    if (a == 0) return kNegInf;
    return std::log(a) - w.log_value(x);
  };

  // |f(x+iy)| <= B(|x|) = sum |c| e^{-xi.y} (|x|^2 + |y|^2)^{|alpha|/2}
  std::vector<std::pair<double, int>> bterms;
  int deg = 0;
  for (const auto& t : f.terms()) {
    bterms.emplace_back(std::log(std::abs(t.c)) - t.xi.dot(y), order(t.alpha));
    deg = std::max(deg, order(t.alpha));
  }
  const double y2 = y.squaredNorm();
  auto logB = [&](double r) {
    std::vector<double> v;
    v.reserve(bterms.size());
    for (const auto& [lc, d] : bterms) v.push_back(d == 0 ? lc : lc + 0.5 * d * std::log(r * r + y2));
    return log_sum_exp(v);
  };

  const double xi_max = f.max_frequency();
  double h = n == 1 ? 0.02 : (n == 2 ? 0.05 : 0.1);
  if (xi_max > 0) h = std::min(h, (n == 1 ? 0.25 : 0.4) / xi_max);

  // preliminary maximum on a small lattice around the origin
  double m0 = objective(Point::Zero(n));
  Point m0_x = Point::Zero(n);
  {
    const int side = n == 1 ? 401 : (n == 2 ? 41 : 11);
    const double span = 2.0;
    std::vector<int> idx(n, 0);
    for (;;) {
      Point x(n);
      for (int k = 0; k < n; ++k) x[k] = -span + 2 * span * idx[k] / (side - 1);
      if (!sampled || x.norm() <= w.hull_radius()) {
        const double v = objective(x);
        if (v > m0) { m0 = v; m0_x = x; }
      }
      int k = 0;
      while (k < n && ++idx[k] == side) idx[k++] = 0;
      if (k == n) break;
    }
  }

  // exterior exclusion: shells [r_i, r_{i+1}] with B(r_{i+1}) / min_shell g below m0
  double R = 0;
  bool certified = false;
  const double r_max = sampled ? w.hull_radius() : 1e12;
  if (std::isfinite(m0)) {
    double r = 0, last_active = 0;
    bool tail_ok = true;
    while (r < r_max) {
      const double r1 = std::min(r * 1.05 + 0.02, r_max);
      const double lb = w.nondecreasing_from(r) ? w.log_min_on_sphere(r) : 0.0;
      if (logB(r1) - lb >= m0 - 1e-12) last_active = r1;
      r = r1;
    }
    if (sampled) {
      tail_ok = false;
    } else {
      const auto q = w.log_growth_order_from(r_max);
      tail_ok = q && *q >= deg && w.nondecreasing_from(r_max) && last_active < r_max;
    }
    if (tail_ok) {
      certified = true;
      R = last_active;
    }
  }
  const double box = sampled ? std::min(opt.fallback_box, w.hull_radius()) : opt.fallback_box;
  if (!certified) {
    R = sampled ? box : box * std::sqrt(double(n));
    out.note = sampled ? "search limited to the sampled hull" : "exterior not excluded; box search";
  }
  out.truncation_radius = R;
  out.certified = certified;
  auto inside = [&](const Point& x) {
    if (x.norm() > R * (1 + 1e-12)) return false;
    if (!certified && x.cwiseAbs().maxCoeff() > box) return false;
    return true;
  };

  // fine lattice up to Rf, geometric shells beyond
  const double side_max = n == 1 ? 2e5 : (n == 2 ? 600.0 : 60.0);
  double hf = h;
  const double Rf = std::min(R, hf * side_max / 2);
  std::vector<Point> pts;
  std::vector<double> spacing;
  {
    const int half = static_cast<int>(std::ceil(Rf / hf));
    const int side = 2 * half + 1;
    std::vector<int> idx(n, 0);
    for (;;) {
      Point x(n);
      for (int k = 0; k < n; ++k) x[k] = (idx[k] - half) * hf;
      if (x.norm() <= Rf + 1e-12 && inside(x)) {
        pts.push_back(x);
        spacing.push_back(hf);
      }
      int k = 0;
      while (k < n && ++idx[k] == side) idx[k++] = 0;
      if (k == n) break;
    }
  }
  if (R > Rf) {
    const int nd = n == 1 ? 2 : (n == 2 ? 720 : 2000);
    const double ratio = n == 1 ? 1 + hf / std::max(Rf, hf) : (n == 2 ? 1.01 : 1.02);
    const auto dirs = sphere_directions(n, nd);
    for (double rho = std::max(Rf, hf) * ratio;; rho *= ratio) {
      const double rr = std::min(rho, R);
      for (const auto& d : dirs) {
        const Point x = rr * d;
        if (inside(x)) {
          pts.push_back(x);
          spacing.push_back(rr * (ratio - 1));
        }
      }
      if (rho >= R) break;
    }
  }

  std::vector<double> vals(pts.size());
  const std::size_t chunk = 4096;
  parallel_for((pts.size() + chunk - 1) / chunk, [&](std::size_t c) {
    const std::size_t e = std::min(pts.size(), (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < e; ++i) vals[i] = objective(pts[i]);
  });

  // top candidates, separated by a few grid spacings
  std::vector<std::size_t> order_idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order_idx[i] = i;
  std::partial_sort(order_idx.begin(), order_idx.begin() + std::min<std::size_t>(order_idx.size(), 400),
                    order_idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  std::vector<Candidate> cands;
  for (std::size_t k = 0; k < std::min<std::size_t>(order_idx.size(), 400) && int(cands.size()) < opt.refine; ++k) {
    const std::size_t i = order_idx[k];
    if (!std::isfinite(vals[i])) break;
    bool near = false;
    for (const auto& c : cands)
      if ((c.x - pts[i]).norm() < 3 * std::max(c.spacing, spacing[i])) near = true;
    if (!near) cands.push_back({vals[i], pts[i], spacing[i]});
  }

  double best = kNegInf;
  Point best_x = Point::Zero(n);
  for (const auto& c : cands) {
    if (c.value > best) { best = c.value; best_x = c.x; }
    auto guarded = [&](const Point& x) { return inside(x) ? objective(x) : kNegInf; };
    Point arg;
    double v;
    if (n == 1) {
      double a;
      v = golden_max([&](double t) { return guarded(Point::Constant(1, t)); }, c.x[0] - c.spacing,
                     c.x[0] + c.spacing, &a);
      arg = Point::Constant(1, a);
    } else {
      v = nelder_mead_max(guarded, c.x, 0.5 * c.spacing, &arg);
    }
    if (v > best) { best = v; best_x = arg; }
  }
  if (m0 > best) {
    best = m0;
    best_x = m0_x;
  }
  // outside the box: probe far shells, catches suprema approached only at infinity
  if (!certified && !sampled) {
    const auto dirs = sphere_directions(n, n == 1 ? 2 : (n == 2 ? 360 : 500));
    for (double rr : {1e4, 1e6, 1e9, 1e12})
      for (const auto& d : dirs) {
        const double v = objective(rr * d);
        if (v > best) {
          best = v;
          best_x = rr * d;
          out.note = "exterior not excluded; supremum approached far out (shell probe)";
        }
      }
  }
  out.log_value = best;
  out.value = std::exp(best);
  out.argmax_point = best_x;
  return out;
}

TentReport verify_tent(const PolyExpSum& f, const Weight& w, const Point& y, const MultiIndex& alpha,
                       const WeightConstants* constants) {
  if (f.is_zero()) throw ArgumentError("verify_tent needs a nonzero function");
  const int n = f.dim();
  if (alpha.size() != n || y.size() != n || w.dim() != n) throw ArgumentError("dimension mismatch in verify_tent");
  const WeightConstants c = constants ? *constants : weight_constants(w);
  TentReport rep;
  rep.c_f = growth_constant(f);
  rep.C_alpha = factorial(alpha) * c.M1 * c.C_g * c.C_g * std::exp((rep.c_f + c.S1) * std::sqrt(double(n)));
  const double ry = y.norm();
  if (ry > 0) {
    rep.kappa = kappa(f, Point(y / ry));
    rep.S = S_g(w, ry).value;
  } else {
    rep.S = c.S1;
  }
  const NormEstimate lhs = weighted_sup_norm(f.derivative(alpha), w, y);
  const NormEstimate base = weighted_sup_norm(f, w, Point::Zero(n));
  rep.log_lhs = lhs.log_value;
  rep.log_rhs = std::log(rep.C_alpha) + (rep.kappa + rep.S) * ry + base.log_value;
  rep.lhs = lhs.value;
  rep.rhs = std::exp(rep.log_rhs);
  rep.ratio = std::exp(rep.log_lhs - rep.log_rhs);
  rep.certified = lhs.certified && base.certified;
  rep.pass = rep.log_lhs <= rep.log_rhs;
  return rep;
}

EstReport verify_est(const PolyExpSum& f, const Weight& w, double y1, const WeightConstants* constants) {
  if (f.is_zero()) throw ArgumentError("verify_est needs a nonzero function");
  if (!(y1 > 0)) throw ArgumentError("verify_est needs y1 > 0");
  const int n = f.dim();
  const WeightConstants c = constants ? *constants : weight_constants(w);
  const Point e1 = Point::Unit(n, 0);
  const double k = kappa(f, e1);
  const NormEstimate lhs = weighted_sup_norm(f, w, Point(y1 * e1));
  const NormEstimate base = weighted_sup_norm(f, w, Point::Zero(n));
  EstReport rep;
  const double log_rhs = std::log(c.C_g) + (k + S_g(w, y1).value) * y1 + base.log_value;
  rep.lhs = lhs.value;
  rep.rhs = std::exp(log_rhs);
  rep.ratio = std::exp(lhs.log_value - log_rhs);
  rep.certified = lhs.certified && base.certified;
  rep.pass = lhs.log_value <= log_rhs;
  return rep;
}

std::vector<double> lemma_x1_default_x() {
  std::vector<double> xs;
  for (int i = -10; i <= 10; ++i) xs.push_back(0.5 * i);
  return xs;
}

std::vector<double> lemma_x1_default_y() { return {0.1, 0.5, 1, 2, 5, 10}; }

std::vector<LemmaX1Row> check_lemma_x1(const PolyExpSum& f, const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
  if (f.dim() != 1) throw ArgumentError("check_lemma_x1 expects n = 1");
  const PoissonExtension P(f);
  std::vector<LemmaX1Row> rows(xs.size() * ys.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double x = xs[i / ys.size()], y = ys[i % ys.size()];
    const PoissonValue b = P.bound(x, y);
    const double lhs = std::log(std::abs(f.at(Point::Constant(1, x), Point::Constant(1, y))));
    rows[i] = {x, y, lhs, b.value, b.error, b.value - lhs};
  });
  return rows;
}

}  // namespace liouville
