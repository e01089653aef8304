#include "liouville/multiplier.hpp"
#include "liouville/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liouville {
namespace {

Complex ipow(int k) {
  switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

double monomial(const Point& xi, const MultiIndex& a) {
  double v = 1;
  for (Eigen::Index k = 0; k < xi.size(); ++k)
    for (int j = 0; j < a[k]; ++j) v *= xi[k];
  return v;
}

}  // namespace

Symbol Symbol::polynomial(int n, std::vector<SymbolCoeff> coeffs) {
  if (n < 1) throw ArgumentError("symbol dimension must be positive");
  for (const auto& c : coeffs)
    if (c.alpha.size() != n || (c.alpha.array() < 0).any()) throw ArgumentError("symbol multi-index has the wrong shape");
  Symbol s;
  s.kind_ = SymbolKind::Polynomial;
  s.n_ = n;
  s.coeffs_ = std::move(coeffs);
  return s;
}

Symbol Symbol::laplacian(int n) {
  std::vector<SymbolCoeff> c;
  for (int k = 0; k < n; ++k) {
    MultiIndex a = MultiIndex::Zero(n);
    a[k] = 2;
    c.push_back({a, -1.0});
  }
  return polynomial(n, std::move(c));
}

Symbol Symbol::levy(LevyParams p) {
  const int n = static_cast<int>(p.b.size());
  if (n < 1) throw ArgumentError("Levy symbol needs a drift vector");
  if (p.Q.size() == 0) p.Q = Eigen::MatrixXd::Zero(n, n);
  if (p.Q.rows() != n || p.Q.cols() != n) throw ArgumentError("Q must be n x n");
  const double scale = std::max(1.0, p.Q.cwiseAbs().maxCoeff());
  if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ArgumentError("Q must be symmetric");
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p.Q).eigenvalues().minCoeff();
  if (lmin < -1e-12 * scale) throw ArgumentError("Q must be positive semidefinite");
  if (p.s < 1) throw ArgumentError("Levy order s must be >= 1");
  for (const auto& a : p.atoms) {
    if (a.y.size() != n) throw ArgumentError("jump atom has the wrong dimension");
    if (a.y.norm() == 0) throw ArgumentError("jump atoms must be nonzero");
    if (!(a.w > 0)) throw ArgumentError("jump weights must be positive");
  }
  for (const auto& [al, v] : p.c) {
    if (al.size() != n || (al.array() < 0).any()) throw ArgumentError("c_alpha multi-index has the wrong shape");
    if (order(al) > 2 * p.s) throw ArgumentError("c_alpha needs |alpha| <= 2s");
    (void)v;
  }
  Symbol s;
  s.kind_ = SymbolKind::Levy;
  s.n_ = n;
  s.levy_ = std::move(p);
  return s;
}

Symbol Symbol::sampled(SampledGrid g) {
  const int n = static_cast<int>(g.lo.size());
  if (n < 1 || n > 2) throw ArgumentError("sampled symbols support n = 1, 2");
  if (g.step.size() != n || g.count.size() != n) throw ArgumentError("sampled grid has inconsistent dimensions");
  long total = 1;
  for (int k = 0; k < n; ++k) {
    if (g.count[k] < 2 || !(g.step[k] > 0)) throw ArgumentError("sampled grid needs >= 2 points and a positive step");
    total *= g.count[k];
  }
  if (static_cast<long>(g.values.size()) != total) throw ArgumentError("sampled grid has the wrong number of values");
  Symbol s;
  s.kind_ = SymbolKind::Sampled;
  s.n_ = n;
  s.grid_ = std::move(g);
  return s;
}

Complex Symbol::operator()(const Point& xi) const {
  if (xi.size() != n_) throw ArgumentError("frequency has the wrong dimension");
  switch (kind_) {
    case SymbolKind::Polynomial: {
      Complex v(0);
      for (const auto& c : coeffs_) v += c.c * monomial(xi, c.alpha);
      return v;
    }
    case SymbolKind::Levy: {
      const auto& p = levy_;
      Complex v(0.5 * xi.dot(p.Q * xi), -p.b.dot(xi));
      for (const auto& [al, c] : p.c) v += c * ipow(order(al)) / factorial(al) * monomial(xi, al);
      for (const auto& a : p.atoms) {
        const double t = a.y.dot(xi);
        Complex jump = 1.0 - std::exp(Complex(0, t));
        if (a.y.norm() < 1) {
          // Taylor compensation up to order 2s-1
          Complex term(1);
          for (int k = 1; k <= 2 * p.s - 1; ++k) {
            term *= Complex(0, t) / double(k);
            jump += term;
          }
        }
        v += a.w * jump;
      }
      return v;
    }
    case SymbolKind::Sampled: {
      const auto& g = grid_;
      long idx[2] = {0, 0};
      double frac[2] = {0, 0};
      for (int k = 0; k < n_; ++k) {
        const double u = (xi[k] - g.lo[k]) / g.step[k];
        const double last = g.count[k] - 1;
        if (u < -1e-12 || u > last + 1e-12) throw DomainError("frequency outside the sampled grid");
        const double uc = std::clamp(u, 0.0, last);
        idx[k] = std::min(static_cast<long>(std::floor(uc)), static_cast<long>(last) - 1);
        frac[k] = uc - idx[k];
      }
      if (n_ == 1) return (1 - frac[0]) * g.values[idx[0]] + frac[0] * g.values[idx[0] + 1];
      const long nx = g.count[0];
      auto at = [&](long i, long j) { return g.values[j * nx + i]; };
      const long i = idx[0], j = idx[1];
      return (1 - frac[0]) * (1 - frac[1]) * at(i, j) + frac[0] * (1 - frac[1]) * at(i + 1, j) +
             (1 - frac[0]) * frac[1] * at(i, j + 1) + frac[0] * frac[1] * at(i + 1, j + 1);
    }
  }
  return 0;
}

std::optional<std::vector<SymbolCoeff>> Symbol::polynomial_coeffs() const {
  if (kind_ == SymbolKind::Polynomial) return coeffs_;
  if (kind_ != SymbolKind::Levy || !levy_.atoms.empty()) return std::nullopt;
  std::vector<SymbolCoeff> out;
  const auto& p = levy_;
  for (int k = 0; k < n_; ++k) {
    MultiIndex a = MultiIndex::Zero(n_);
    a[k] = 1;
    if (p.b[k] != 0) out.push_back({a, Complex(0, -p.b[k])});
    for (int l = k; l < n_; ++l) {
      MultiIndex q = MultiIndex::Zero(n_);
      q[k] += 1;
      q[l] += 1;
      const double v = k == l ? 0.5 * p.Q(k, k) : p.Q(k, l);
      if (v != 0) out.push_back({q, v});
    }
  }
  for (const auto& [al, c] : p.c) out.push_back({al, c * ipow(order(al)) / factorial(al)});
  return out;
}

std::string Symbol::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SymbolKind::Polynomial: os << "Polynomial(n=" << n_ << ", terms=" << coeffs_.size() << ")"; break;
    case SymbolKind::Levy: os << "Levy(n=" << n_ << ", atoms=" << levy_.atoms.size() << ", s=" << levy_.s << ")"; break;
    case SymbolKind::Sampled: os << "Sampled(n=" << n_ << ", points=" << grid_.values.size() << ")"; break;
  }
  return os.str();
}

Complex eval_complex(const Symbol& m, const CPoint& zeta) {
  if (zeta.size() != m.dim()) throw ArgumentError("point has the wrong dimension");
  auto mono = [&](const MultiIndex& a) {
    Complex v(1);
    for (Eigen::Index k = 0; k < zeta.size(); ++k)
      for (int j = 0; j < a[k]; ++j) v *= zeta[k];
    return v;
  };
  if (m.kind() == SymbolKind::Polynomial) {
    Complex v(0);
    for (const auto& c : m.coeffs()) v += c.c * mono(c.alpha);
    return v;
  }
  if (m.kind() == SymbolKind::Sampled) throw UnsupportedError("sampled symbols have no complex extension");
  const auto& p = m.levy_params();
  const Eigen::VectorXcd bz = p.b.cast<Complex>(), z = zeta;
  Complex v = Complex(0, -1) * bz.dot(z) + 0.5 * (z.transpose() * p.Q.cast<Complex>() * z)(0, 0);
  for (const auto& [al, c] : p.c) v += c * ipow(order(al)) / factorial(al) * mono(al);
  for (const auto& a : p.atoms) {
    const Complex t = (a.y.cast<Complex>().transpose() * z)(0, 0);
    Complex jump = 1.0 - std::exp(Complex(0, 1) * t);
    if (a.y.norm() < 1) {
      Complex term(1);
      for (int k = 1; k <= 2 * p.s - 1; ++k) {
        term *= Complex(0, 1) * t / double(k);
        jump += term;
      }
    }
    v += a.w * jump;
  }
  return v;
}

double levy_weight_mass(const Symbol& m, const Weight& w) {
  if (m.kind() != SymbolKind::Levy) throw ArgumentError("levy_weight_mass needs a Levy symbol");
  double s = 0;
  for (const auto& a : m.levy_params().atoms)
    if (a.y.norm() >= 1) s += a.w * w(Point(-a.y));
  return s;
}

PolyExpSum apply_symbol(const Symbol& m, const PolyExpSum& f) {
  if (m.dim() != f.dim()) throw ArgumentError("symbol and function dimensions differ");
  bool poly_factor = false;
  for (const auto& t : f.terms())
    if ((t.alpha.array() != 0).any()) poly_factor = true;
  if (!poly_factor) {
    std::vector<Term> out;
    for (const auto& t : f.terms()) out.push_back(Term{t.c * m(t.xi), t.alpha, t.xi});
    return PolyExpSum(f.dim(), std::move(out));
  }
  const auto coeffs = m.polynomial_coeffs();
  if (!coeffs) throw UnsupportedError("polynomial factors need a polynomial symbol");
  // m(D) = sum a_g D^g, D = -i d
  PolyExpSum out(f.dim());
  for (const auto& c : *coeffs) out = out + (c.c * ipow(3 * order(c.alpha))) * f.derivative(c.alpha);
  return out;
}

double max_coefficient(const PolyExpSum& f) {
  double m = 0;
  for (const auto& t : f.terms()) m = std::max(m, std::abs(t.c));
  return m;
}

// --- zero sets ----------------------------------------------------------------------------

std::string to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::EmptyAtResolution: return "empty-at-resolution";
    case ZeroClass::OriginOnly: return "origin-only";
    case ZeroClass::Compact: return "compact";
    case ZeroClass::UnboundedSuspected: return "unbounded-suspected";
  }
  return "?";
}

namespace {

// damped Gauss-Newton on (Re m, Im m); returns |m| at the end
double refine_zero(const Symbol& m, Point& p) {
  const int n = m.dim();
  auto res = [&](const Point& x) {
    const Complex v = m(x);
    return Eigen::Vector2d(v.real(), v.imag());
  };
  Eigen::Vector2d r = res(p);
  for (int it = 0; it < 300 && r.norm() > 1e-300; ++it) {
    Eigen::MatrixXd J(2, n);
    for (int k = 0; k < n; ++k) {
      const double d = 1e-7 * std::max(1.0, std::abs(p[k]));
      Point a = p, b = p;
      a[k] += d;
      b[k] -= d;
      J.col(k) = (res(a) - res(b)) / (2 * d);
    }
    const Point step = J.completeOrthogonalDecomposition().solve(-r);
    if (!step.allFinite() || step.norm() == 0) break;
    double lam = 1;
    bool moved = false;
    for (int k = 0; k < 40; ++k, lam *= 0.5) {
      Point q = p + lam * step;
      Eigen::Vector2d rq;
      try {
        rq = res(q);
      } catch (const DomainError&) {
        continue;
      }
      if (rq.norm() < r.norm()) {
        p = q;
        r = rq;
        moved = true;
        break;
      }
    }
    if (!moved || lam * step.norm() < 1e-17 * std::max(1.0, p.norm())) break;
  }
  return r.norm();
}

struct ScanResult {
  std::vector<Point> zeros;
  double boundary_min = INFINITY;
};

// grid points of [lo, hi]; if hole is set, only points outside the box hole_lo..hole_hi
ScanResult scan(const Symbol& m, const Point& lo, const Point& hi, double step, double tol, const Point* hole_lo,
                const Point* hole_hi) {
  const int n = m.dim();
  Eigen::VectorXi cnt(n);
  for (int k = 0; k < n; ++k) cnt[k] = static_cast<int>(std::floor((hi[k] - lo[k]) / step + 1e-9)) + 1;
  const long nx = cnt[0], ny = n == 2 ? cnt[1] : 1;
  auto pos = [&](long i, long j) {
    Point x(n);
    x[0] = lo[0] + i * step;
    if (n == 2) x[1] = lo[1] + j * step;
    return x;
  };
  std::vector<double> a(nx * ny);
  parallel_for(ny, [&](std::size_t j) {
    for (long i = 0; i < nx; ++i) a[j * nx + i] = std::abs(m(pos(i, j)));
  });
  auto in_hole = [&](const Point& x) {
    if (!hole_lo) return false;
    for (int k = 0; k < n; ++k)
      if (x[k] < (*hole_lo)[k] || x[k] > (*hole_hi)[k]) return false;
    return true;
  };
  ScanResult out;
  std::vector<Point> cands;
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const double v = a[j * nx + i];
      bool is_min = true;
      for (long dj = (n == 2 ? -1 : 0); dj <= (n == 2 ? 1 : 0) && is_min; ++dj)
        for (long di = -1; di <= 1; ++di) {
          if (!di && !dj) continue;
          const long ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          if (a[jj * nx + ii] < v) { is_min = false; break; }
        }
      const Point x = pos(i, j);
      if (is_min && !in_hole(x)) cands.push_back(x);
    }
  std::vector<Point> refined(cands.size());
  std::vector<double> rv(cands.size());
  parallel_for(cands.size(), [&](std::size_t c) {
    Point p = cands[c];
    rv[c] = refine_zero(m, p);
    refined[c] = p;
  });
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (!(rv[c] < tol)) continue;
    // must stay near where it started (no jumps to another basin outside the scanned region)
    if ((refined[c] - cands[c]).norm() > 2 * step * std::sqrt(double(n))) continue;
    if (in_hole(refined[c])) continue;
    out.zeros.push_back(refined[c]);
  }
  // boundary shell minimum (only for the plain box)
  if (!hole_lo) {
    for (long j = 0; j < ny; ++j)
      for (long i = 0; i < nx; ++i) {
        const bool edge = i == 0 || i == nx - 1 || (n == 2 && (j == 0 || j == ny - 1));
        if (!edge) continue;
        const Point x = pos(i, j);
        bool near = false;
        for (const auto& z : out.zeros)
          if ((z - x).norm() < 4 * step) near = true;
        if (!near) out.boundary_min = std::min(out.boundary_min, a[j * nx + i]);
      }
  }
  return out;
}

std::vector<Point> merge_points(const Symbol& m, std::vector<Point> pts, double radius) {
  std::vector<Point> out;
  std::vector<double> val;
  for (const auto& p : pts) {
    const double v = std::abs(m(p));
    bool merged = false;
    for (std::size_t k = 0; k < out.size(); ++k)
      if ((out[k] - p).norm() < radius) {
        if (v < val[k]) { out[k] = p; val[k] = v; }
        merged = true;
        break;
      }
    if (!merged) { out.push_back(p); val.push_back(v); }
  }
  return out;
}

}  // namespace

ZeroSet zero_set(const Symbol& m, const Point& lo, const Point& hi, double step, const ZeroSetOptions& opt) {
  const int n = m.dim();
  if (n > 2) throw ArgumentError("zero_set scans n <= 2");
  if (lo.size() != n || hi.size() != n) throw ArgumentError("box has the wrong dimension");
  if (!(step > 0)) throw ArgumentError("grid step must be positive");
  for (int k = 0; k < n; ++k)
    if (!(lo[k] <= 0 && hi[k] >= 0 && lo[k] < hi[k])) throw ArgumentError("box must contain the origin");
  ZeroSet zs;
  zs.resolution = step;
  const auto inner = scan(m, lo, hi, step, opt.tol, nullptr, nullptr);
  zs.points = merge_points(m, inner.zeros, opt.merge * step);
  std::sort(zs.points.begin(), zs.points.end(), [](const Point& a, const Point& b) {
    for (Eigen::Index k = 0; k < a.size(); ++k)
      if (a[k] != b[k]) return a[k] < b[k];
    return false;
  });
  zs.boundary_min = inner.boundary_min;

  // zeros between the box and its double suggest an unbounded zero set
  bool outer = false;
  if (m.kind() != SymbolKind::Sampled) {
    const Point lo2 = 2 * lo, hi2 = 2 * hi;
    outer = !scan(m, lo2, hi2, step, opt.tol, &lo, &hi).zeros.empty();
  }
  bool at_edge = false;
  for (const auto& p : zs.points)
    for (int k = 0; k < n; ++k)
      if (p[k] - lo[k] < opt.merge * step || hi[k] - p[k] < opt.merge * step) at_edge = true;

  if (zs.points.empty()) {
    zs.classification = ZeroClass::EmptyAtResolution;
    zs.note = "no zero found on the grid; emptiness is not proven";
  } else if (outer || at_edge) {
    zs.classification = ZeroClass::UnboundedSuspected;
    zs.note = outer ? "zeros found beyond the box (doubled box scan)" : "zeros at the box edge";
  } else {
    bool origin = true;
    for (const auto& p : zs.points)
      if (p.norm() > std::max(opt.tol, 1e-6)) origin = false;
    zs.classification = origin ? ZeroClass::OriginOnly : ZeroClass::Compact;
    zs.note = origin ? "only the origin at this resolution; |m| on the box boundary is reported, not proven"
                     : "bounded at this resolution";
  }
  zs.hull_points = extreme_points(zs.points);
  return zs;
}

std::vector<Point> extreme_points(const std::vector<Point>& pts) {
  if (pts.empty()) return {};
  const auto n = pts[0].size();
  if (n == 1) {
    auto [a, b] = std::minmax_element(pts.begin(), pts.end(), [](const Point& p, const Point& q) { return p[0] < q[0]; });
    if ((*a)[0] == (*b)[0]) return {*a};
    return {*a, *b};
  }
  if (n != 2) return pts;
  // monotone chain
  std::vector<Point> p = pts;
  std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
  p.erase(std::unique(p.begin(), p.end(), [](const Point& a, const Point& b) { return a == b; }), p.end());
  if (p.size() < 3) return p;
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

double support(const std::vector<Point>& E, const Point& y) {
  if (E.empty()) throw ArgumentError("support function of the empty set");
  double s = -INFINITY;
  for (const auto& p : E) {
    if (p.size() != y.size()) throw ArgumentError("dimension mismatch in support function");
    s = std::max(s, y.dot(p));
  }
  return s;
}

double support_function(const std::vector<Point>& K, const Point& y) { return support(K, Point(-y)); }

bool kernel_empty_on_grid(const Symbol& m, const Point& lo, const Point& hi, double step, double tol) {
  const int n = m.dim();
  if (n > 2) throw ArgumentError("grid check supports n <= 2");
  const long nx = static_cast<long>(std::floor((hi[0] - lo[0]) / step + 1e-9)) + 1;
  const long ny = n == 2 ? static_cast<long>(std::floor((hi[1] - lo[1]) / step + 1e-9)) + 1 : 1;
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      Point g(n);
      g[0] = lo[0] + i * step;
      if (n == 2) g[1] = lo[1] + j * step;
      const auto r = apply_symbol(m, PolyExpSum::exponential(g));
      if (max_coefficient(r) <= tol) return false;
    }
  return true;
}

// --- Liouville bound and converse ---------------------------------------------------------------

LiouvilleReport verify_liouville_bound(const PolyExpSum& f, const Symbol& m, const Weight& w, const Point& y,
                                       const MultiIndex& alpha, const std::vector<Point>& K,
                                       const WeightConstants* constants) {
  const int n = f.dim();
  if (f.is_zero()) throw ArgumentError("verify_liouville_bound needs a nonzero function");
  if (m.dim() != n || w.dim() != n || y.size() != n || alpha.size() != n)
    throw ArgumentError("dimension mismatch in verify_liouville_bound");
  const auto r = apply_symbol(m, f);
  if (max_coefficient(r) > 1e-12 * std::max(1.0, max_coefficient(f))) {
    double worst = 0;
    for (const auto& t : f.terms()) worst = std::max(worst, std::abs(m(t.xi)));
    std::ostringstream os;
    os << "f is not a kernel element: max_k |m(xi_k)| = " << worst << ", |m(D)f| coefficient " << max_coefficient(r);
    throw PreconditionError(os.str());
  }
  if (K.empty()) throw ArgumentError("empty zero set: the kernel is trivial (f = 0)");
  const WeightConstants c = constants ? *constants : weight_constants(w);
  LiouvilleReport rep;
  const double ry = y.norm();
  rep.H = support_function(K, y);
  rep.S = ry > 0 ? S_g(w, ry).value : c.S1;
  rep.C_alpha = factorial(alpha) * c.M1 * c.C_g * c.C_g * std::exp((growth_constant(f) + c.S1) * std::sqrt(double(n)));
  const NormEstimate lhs = weighted_sup_norm(f.derivative(alpha), w, y);
  const NormEstimate base = weighted_sup_norm(f, w, Point::Zero(n));
  rep.log_lhs = lhs.log_value;
  rep.log_rhs = std::log(rep.C_alpha) + rep.H + rep.S * ry + base.log_value;
  rep.lhs = lhs.value;
  rep.rhs = std::exp(rep.log_rhs);
  rep.ratio = std::exp(rep.log_lhs - rep.log_rhs);
  rep.certified = lhs.certified && base.certified;
  rep.pass = rep.log_lhs <= rep.log_rhs;
  const bool along_e1 = ry > 0 && y.tail(n - 1).isZero(0);
  if (along_e1) {
    const double l = order(alpha) == 0 ? lhs.log_value : weighted_sup_norm(f, w, y).log_value;
    rep.sharpness = std::exp(l - w.log_value(y) - base.log_value);
  }
  return rep;
}

ConverseReport converse_divergence(const Symbol& m, const Point& gamma, const std::vector<Point>& K,
                                   const Weight& w, double epsilon, const Point& y0,
                                   const std::vector<double>& tau) {
  const int n = m.dim();
  if (gamma.size() != n || y0.size() != n || w.dim() != n) throw ArgumentError("dimension mismatch in converse_divergence");
  if (K.empty()) throw ArgumentError("target set K must be nonempty");
  if (tau.size() < 2) throw ArgumentError("need at least two tau values");
  const double mg = std::abs(m(gamma));
  if (mg > 1e-10) {
    std::ostringstream os;
    os << "gamma is not a zero of m: |m(gamma)| = " << mg;
    throw PreconditionError(os.str());
  }
  const double HK = support(K, y0);  // H(-y0) = H_K(y0)
  const double gap = y0.dot(gamma) - HK;
  if (!(gap > 0)) {
    std::ostringstream os;
    os << "need y0.gamma > H_K(y0): " << y0.dot(gamma) << " <= " << HK;
    throw PreconditionError(os.str());
  }
  const double ny0 = y0.norm();
  if (!(epsilon > 0 && epsilon < gap / ny0)) {
    std::ostringstream os;
    os << "need 0 < eps < (y0.gamma - H(-y0))/|y0| = " << gap / ny0;
    throw PreconditionError(os.str());
  }
  ConverseReport rep;
  rep.predicted_slope = gap - epsilon * ny0;
  const auto f = PolyExpSum::exponential(gamma);
  const double base = weighted_sup_norm(f, w, Point::Zero(n)).log_value;
  rep.tau = tau;
  for (double t : tau) {
    const double num = weighted_sup_norm(f, w, Point(-t * y0)).log_value;
    rep.log_ratio.push_back(num - (support(K, Point(t * y0)) + epsilon * t * ny0) - base);
  }
  // least-squares slope
  double st = 0, sl = 0, stt = 0, stl = 0;
  const double N = double(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    st += tau[i]; sl += rep.log_ratio[i]; stt += tau[i] * tau[i]; stl += tau[i] * rep.log_ratio[i];
  }
  rep.slope = (N * stl - st * sl) / (N * stt - st * st);
  rep.max_rel_error = std::abs(rep.slope - rep.predicted_slope) / std::abs(rep.predicted_slope);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double want = tau[i] * rep.predicted_slope;
    rep.max_rel_error = std::max(rep.max_rel_error, std::abs(rep.log_ratio[i] - want) / std::abs(want));
  }
  rep.match = rep.max_rel_error <= 1e-10;
  return rep;
}

}  // namespace liouville
