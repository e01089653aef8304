#include "lab_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

using namespace lab;

namespace {

struct Opts {
  std::string config, weight, function, symbol, zeros, out, svg;
  std::optional<unsigned> seed;
  std::optional<double> tol, rmax, epsilon;
  std::optional<int> ell, k;
  std::vector<long> N;
  std::vector<double> ygrid;
};

/// Inputs resolved from flags, the --config file, or defaults (flags win).
class Ctx {
 public:
  explicit Ctx(const Opts& o) : o_(o) {
    if (!o.config.empty()) {
      cfg_ = load_json(o.config);
      base_ = std::filesystem::path(o.config).parent_path();
    }
  }
  const Opts& opts() const { return o_; }
  const json& cfg() const { return cfg_; }

  bool has(const char* kind, const std::string& flag, const char* marker) const {
    return !flag.empty() || cfg_.contains(kind) || cfg_.contains(marker);
  }
  json input(const char* kind, const std::string& flag, const char* marker) const {
    if (!flag.empty()) return load_json(flag);
    if (cfg_.contains(kind)) {
      const auto& v = cfg_[kind];
      if (v.is_string()) return load_json((base_ / v.get<std::string>()).string());
      return v;
    }
    // the config file may itself be the object
    if (cfg_.contains(marker)) return cfg_;
    throw ConfigError(std::string("no ") + kind + " given (--" + kind + " or \"" + kind + "\" in --config)");
  }
  Weight weight() const { return parse_weight(input("weight", o_.weight, "family")); }
  PolyExpSum function() const { return parse_function(input("function", o_.function, "terms")); }
  Symbol symbol() const { return parse_symbol(input("symbol", o_.symbol, "kind")); }
  ZeroSequence zeros() const { return parse_zeros(input("zeros", o_.zeros, "entries")); }

  template <typename T>
  T num(const std::optional<T>& flag, const char* key, T fallback) const {
    if (flag) return *flag;
    if (cfg_.contains(key)) {
      try {
        return cfg_[key].get<T>();
      } catch (const json::exception&) {
        throw ConfigError(std::string("config field \"") + key + "\" has the wrong type");
      }
    }
    return fallback;
  }
  template <typename T>
  std::vector<T> list(const std::vector<T>& flag, const char* key, std::vector<T> fallback) const {
    if (!flag.empty()) return flag;
    if (cfg_.contains(key)) {
      try {
        return cfg_[key].get<std::vector<T>>();
      } catch (const json::exception&) {
        throw ConfigError(std::string("config field \"") + key + "\" must be a list of numbers");
      }
    }
    return fallback;
  }
  std::vector<Point> points(const char* key) const {
    std::vector<Point> out;
    if (!cfg_.contains(key)) return out;
    for (const auto& p : cfg_[key]) {
      auto v = p.get<std::vector<double>>();
      out.push_back(Eigen::Map<Point>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    return out;
  }
  std::optional<Point> point(const char* key) const {
    if (!cfg_.contains(key)) return std::nullopt;
    auto v = cfg_[key].get<std::vector<double>>();
    return Point(Eigen::Map<Point>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  MultiIndex alpha(int n) const {
    if (!cfg_.contains("alpha")) return MultiIndex::Zero(n);
    auto v = cfg_["alpha"].get<std::vector<int>>();
    if (static_cast<int>(v.size()) != n) throw ConfigError("alpha has the wrong dimension");
    return Eigen::Map<MultiIndex>(v.data(), n);
  }

 private:
  const Opts& o_;
  json cfg_ = json::object();
  std::filesystem::path base_;
};

std::string fmt_point(const Point& y) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index k = 0; k < y.size(); ++k) os << (k ? "," : "") << (y[k] == 0 ? 0.0 : y[k]);
  os << ")";
  return os.str();
}

/// y values: explicit "y" list in the config, else magnitudes times +-e_k.
std::vector<Point> y_list(const Ctx& c, int n, std::vector<double> fallback) {
  auto ys = c.points("y");
  if (!ys.empty()) return ys;
  for (double t : c.list(c.opts().ygrid, "ygrid", fallback))
    for (int d = 0; d < n; ++d)
      for (double s : {1.0, -1.0}) ys.push_back(s * t * Point::Unit(n, d));
  return ys;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Row make_row(std::string tag, double lhs, double rhs, double margin, bool pass, bool log_domain = false) {
  Row r;
  r.tag = std::move(tag);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.pass = pass;
  r.log_domain = log_domain;
  return r;
}

// keeps the row with the smallest margin
void keep_min(std::optional<Row>& acc, Row r) {
  if (!acc) {
    acc = std::move(r);
    return;
  }
  const long n = acc->count + 1;
  if (r.margin < acc->margin) acc = std::move(r);
  acc->count = n;
}

// --- weights ---

Eigen::VectorXd radius_grid(const Ctx& c) {
  const double rmax = c.num(c.opts().rmax, "rmax", 100.0);
  if (!(rmax > 0)) throw ConfigError("--rmax must be positive");
  auto g = c.list<double>(c.opts().ygrid, "ygrid", {});
  if (g.empty()) {
    for (int k = 1; k <= 10; ++k) g.push_back(std::min(rmax, 0.1 * k));
    for (int k = 2; k <= rmax; ++k) g.push_back(k);
    if (g.back() < rmax) g.push_back(rmax);
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  return Eigen::Map<Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

void profile_rows(Report& rep, const WeightProfile& p) {
  const auto n = p.r_grid.size();
  bool cert = true;
  for (bool b : p.certified) cert = cert && b;
  std::optional<Row> flat, mono, lo, hi;
  double S1 = NAN;
  for (Eigen::Index i = 0; i < n; ++i)
    if (p.r_grid[i] == 1.0) S1 = p.S[i];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = p.r_grid[i], S = p.S[i], tol = 1e-9 * std::max(1.0, std::abs(S));
    if (r <= 1 && std::isfinite(S1)) {
      const double d = std::abs(S - S1);
      keep_min(flat, make_row("S_g constant on [0,1]", S, S1, -d, d <= tol));
    }
    if (i > 0) {
      const double inc = S - p.S[i - 1];
      keep_min(mono, make_row("S_g nonincreasing", S, p.S[i - 1], -inc, inc <= tol));
    }
    if (r < 1) continue;  // the sandwich is stated for r >= 1
    const double l = std::max(p.I[i], p.J[i]) / (2 * kPi), u = 2 / kPi * (p.I[i] + p.J[i]);
    keep_min(lo, make_row("sandwich max(I,J)/(2 pi) <= S_g, r >= 1", l, S, S - l, S - l >= -1e-9));
    keep_min(hi, make_row("sandwich S_g <= (2/pi)(I+J), r >= 1", S, u, u - S, u - S >= -1e-9));
  }
  for (auto* r : {&flat, &mono, &lo, &hi})
    if (*r) {
      (*r)->certified = cert;
      rep.rows.push_back(**r);
    }
}

Report weights_check(const Ctx& c) {
  Report rep;
  rep.command = "weights check";
  const auto w = c.weight();
  PairSampling ps;
  if (c.opts().seed) ps.seed = *c.opts().seed;
  const auto sm = check_submultiplicative(w, ps);
  Row s = make_row("submultiplicative g(x+y) <= g(x)g(y)", sm.max_log_ratio, 0, -sm.max_log_ratio, sm.violations.empty(), true);
  s.count = sm.pairs_checked;
  rep.rows.push_back(s);
  bool converges = true;
  std::string verdict = "converges";
  for (const auto& d : default_directions(w)) {
    const auto bd = check_beurling_domar(w, d);
    const bool ok = bd.verdict == BDVerdict::Converges;
    const std::string tag = "beurling-domar sum log g(l x)/l^2 < inf, x=" + fmt_point(d);
    // converging: the last slice [T/2, T] is settled; otherwise the running integral against log log T - 1
    const double settle = BDOptions{}.tail_tol * std::max(1.0, bd.partial_value);
    Row r = ok ? make_row(tag, bd.last_slice, settle, settle - bd.last_slice, true)
               : make_row(tag, bd.partial_value, bd.threshold, bd.threshold - bd.partial_value, false);
    r.certified = bd.verdict != BDVerdict::Inconclusive;
    rep.rows.push_back(r);
    rep.values["grs " + fmt_point(d)] = number(bd.grs_estimate);
    if (!ok) {
      converges = false;
      verdict = to_string(bd.verdict);
    }
  }
  rep.values["verdict"] = verdict;
  rep.values["weight"] = w.describe();
  if (converges) {
    profile_rows(rep, compute_profile(w, radius_grid(c)));
  } else {
    rep.note = "S_g is infinite; profile skipped";
  }
  return rep;
}

Report weights_profile(const Ctx& c, std::string& csv_text, std::string& svg_text) {
  Report rep;
  rep.command = "weights profile";
  const auto w = c.weight();
  const auto p = compute_profile(w, radius_grid(c));
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < p.r_grid.size(); ++i)
    rows.push_back({p.r_grid[i], p.I[i], p.J[i], p.S[i], p.certified[i] ? 1.0 : 0.0});
  csv_text = csv({"r", "I", "J", "S", "certified"}, rows);
  std::vector<double> xs(p.r_grid.data(), p.r_grid.data() + p.r_grid.size()), ys(p.S.data(), p.S.data() + p.S.size());
  svg_text = svg_polyline("S_g(r)", "r", "S_g", {{xs, ys}});
  profile_rows(rep, p);
  rep.values["M"] = p.M;
  rep.values["C_g"] = number(p.C_g);
  rep.note = p.assumptions;
  return rep;
}

// --- estimates ---

Report estimate_tent(const Ctx& c) {
  Report rep;
  rep.command = "estimate tent";
  const auto f = c.function();
  const auto w = c.weight();
  const auto consts = weight_constants(w);
  const auto alpha = c.alpha(f.dim());
  for (const auto& y : y_list(c, f.dim(), {0.5, 1, 2, 5})) {
    const auto t = verify_tent(f, w, y, alpha, &consts);
    Row r = make_row("tent bound y=" + fmt_point(y), t.log_lhs, t.log_rhs, t.log_rhs - t.log_lhs, t.pass, true);
    r.certified = t.certified;
    rep.rows.push_back(r);
  }
  return rep;
}

Report estimate_outer(const Ctx& c) {
  Report rep;
  rep.command = "estimate outer";
  const auto w = c.weight();
  if (w.dim() != 1) throw ConfigError("outer function needs a weight on R^1");
  const OuterFunction phi(w);
  const double tb = c.num(c.opts().tol, "tol_boundary", 1e-3), tg = c.num(c.opts().tol, "tol_growth", 1e-4);
  for (double x : c.list<double>({}, "x", {0, 1, -1, 5, -5})) {
    const double lhs = std::abs(phi(Complex(x, 1e-3))), rhs = w(Point::Constant(1, x));
    const double rel = std::abs(lhs - rhs) / rhs;
    rep.rows.push_back(make_row("outer |phi(x+i 1e-3)| = g(x), x=" + fmt_num(x), lhs, rhs, tb - rel, rel <= tb));
  }
  for (double y : c.list(c.opts().ygrid, "ygrid", {1, 2, 5, 10})) {
    const double lhs = std::abs(phi(Complex(0, y))), rhs = growth_factor(w, Point::Constant(1, y));
    const double rel = std::abs(lhs - rhs) / rhs;
    rep.rows.push_back(make_row("outer |phi(iy)| = e^{S_g(y) y}, y=" + fmt_num(y), lhs, rhs, tg - rel, rel <= tg));
  }
  rep.note = phi.assumptions();
  return rep;
}

Report estimate_lemma(const Ctx& c) {
  Report rep;
  rep.command = "estimate lemma-x1";
  const auto f = c.function();
  const double tol = c.num(c.opts().tol, "tol", 1e-6);
  const auto rows = check_lemma_x1(f, c.list<double>({}, "x", lemma_x1_default_x()), c.list<double>({}, "y", lemma_x1_default_y()));
  std::optional<Row> agg;
  for (const auto& r : rows)
    keep_min(agg, make_row("log|phi(x+iy)| <= k y + Poisson majorant", r.lhs, r.rhs, r.margin, r.margin >= -tol, true));
  if (agg) rep.rows.push_back(*agg);
  if (c.has("weight", c.opts().weight, "family")) {
    const auto w = c.weight();
    const auto consts = weight_constants(w);
    for (double y : c.list(c.opts().ygrid, "ygrid", {0.5, 1, 2, 5})) {
      const auto e = verify_est(f, w, y, &consts);
      Row r = make_row("est ||phi(.+iy e1)|| <= C_g e^{(k+S_g(y))y} ||phi||, y=" + fmt_num(y), e.lhs, e.rhs,
                       e.rhs - e.lhs, e.pass);
      r.certified = e.certified;
      rep.rows.push_back(r);
    }
  }
  return rep;
}

// --- multiplier ---

ZeroSet zeros_of(const Ctx& c, const Symbol& m, double default_half) {
  const int n = m.dim();
  const double half = c.num(c.opts().rmax, "rmax", default_half);
  Point lo = c.point("lo").value_or(Point::Constant(n, -half)), hi = c.point("hi").value_or(Point::Constant(n, half));
  if (lo.size() != n || hi.size() != n) throw ConfigError("lo/hi have the wrong dimension");
  const double step = c.num<double>(std::nullopt, "step", (hi - lo).maxCoeff() / (n == 1 ? 4000.0 : 400.0));
  return zero_set(m, lo, hi, step);
}

std::vector<Point> K_of(const Ctx& c, const Symbol& m, double default_half, bool hull) {
  auto K = c.points("K");
  if (!K.empty()) return K;
  const auto z = zeros_of(c, m, default_half);
  return hull ? z.hull_points : z.points;
}

double freq_radius(const PolyExpSum& f) {
  double r = 0;
  for (const auto& t : f.terms()) r = std::max(r, t.xi.lpNorm<Eigen::Infinity>());
  return r;
}

Report multiplier_zeros(const Ctx& c) {
  Report rep;
  rep.command = "multiplier zeros";
  const auto m = c.symbol();
  const auto z = zeros_of(c, m, 10);
  rep.values["zero_set"] = to_json(z);
  rep.values["symbol"] = m.describe();
  Row r = make_row("zero set classification: " + to_string(z.classification), double(z.points.size()), 0, 0, true);
  r.informational = true;
  rep.rows.push_back(r);
  return rep;
}

Report multiplier_mollifier(const Ctx& c, std::string& csv_text) {
  Report rep;
  rep.command = "multiplier mollifier";
  const double eps = c.num(c.opts().epsilon, "epsilon", 0.5);
  std::vector<Point> K = c.points("K");
  if (K.empty()) K = K_of(c, c.symbol(), 10, false);
  if (K.empty()) throw ConfigError("empty set K: no zeros found and no \"K\" given");
  GridSpec g;
  g.freq_step = c.num<double>(std::nullopt, "freq_step", 0);
  g.count = c.num<int>(std::nullopt, "count", 0);
  const auto u = build_mollifier(K, eps, g);
  double plateau = 0, outside = 0;
  for (const auto& k : K) {
    plateau = std::max(plateau, std::abs(u.uhat_at(k) - 1));
    for (int d = 0; d < u.n; ++d)
      for (double s : {1.0, -1.0}) {
        const Point p = k + s * 1.01 * eps * Point::Unit(u.n, d);
        double dist = INFINITY;
        for (const auto& q : K) dist = std::min(dist, (p - q).norm());
        if (dist >= eps) outside = std::max(outside, std::abs(u.uhat_at(p)));
      }
  }
  rep.rows.push_back(make_row("u-hat = 1 on K", plateau, 0, -plateau, plateau <= 1e-12));
  rep.rows.push_back(make_row("u-hat = 0 off K_eps", outside, 0, -outside, outside <= 1e-12));
  Row a = make_row("aliasing", u.aliasing, 1e-6, 1e-6 - u.aliasing, u.aliasing <= 1e-6);
  a.informational = true;
  rep.rows.push_back(a);
  rep.values["mass"] = u.mass;
  rep.values["h"] = u.h;
  rep.values["count"] = u.count;
  rep.values["freq_step"] = u.freq_step;
  std::vector<std::vector<double>> rows;
  const long N = u.count;
  if (u.n == 1) {
    for (long m = 0; m < N; ++m) rows.push_back({u.space_point(m)[0], u.u[m].real(), u.u[m].imag()});
    csv_text = csv({"x", "re", "im"}, rows);
  } else {
    for (long m = 0; m < N * N; ++m) {
      const Point x = u.space_point(m);
      rows.push_back({x[0], x[1], u.u[m].real(), u.u[m].imag()});
    }
    csv_text = csv({"x1", "x2", "re", "im"}, rows);
  }
  return rep;
}

Report multiplier_tauberian(const Ctx& c) {
  Report rep;
  rep.command = "multiplier tauberian";
  const auto m = c.symbol();
  const auto f = c.function();
  const double eps = c.num(c.opts().epsilon, "epsilon", 0.5);
  const double tol = c.num(c.opts().tol, "tol", 1e-6);
  const double res = max_coefficient(apply_symbol(m, f));
  rep.rows.push_back(make_row("m(D) f = 0", res, 1e-9, 1e-9 - res, res <= 1e-9));
  if (res > 1e-9) {
    rep.note = "f is not in the kernel; convolution check skipped";
    return rep;
  }
  const auto K = K_of(c, m, freq_radius(f) + 2 * eps + 1, false);
  if (K.empty()) throw PreconditionError("no real zeros found: f = 0 is the only kernel element");
  const auto u = build_mollifier(K, eps);
  const auto t = verify_tauberian(f, u, c.num<int>(std::nullopt, "samples", 100), tol, c.num(c.opts().seed, "seed", 42u));
  rep.rows.push_back(make_row("f = f * u (grid convolution)", t.max_defect, tol, tol - t.max_defect, t.max_defect <= tol));
  rep.rows.push_back(make_row("f = f * u (exact path)", t.exact_path_defect, 1e-12, 1e-12 - t.exact_path_defect,
                              t.exact_path_defect <= 1e-12));
  rep.values["aliasing"] = t.aliasing;
  rep.values["samples"] = t.samples;
  return rep;
}

Report multiplier_liouville(const Ctx& c) {
  Report rep;
  rep.command = "multiplier liouville";
  const auto m = c.symbol();
  const auto f = c.function();
  const auto w = c.weight();
  const auto consts = weight_constants(w);
  const auto K = K_of(c, m, freq_radius(f) + 2, true);
  const auto alpha = c.alpha(f.dim());
  for (const auto& y : y_list(c, f.dim(), {1, 10, 100})) {
    const auto r = verify_liouville_bound(f, m, w, y, alpha, K, &consts);
    Row row = make_row("liouville bound y=" + fmt_point(y), r.log_lhs, r.log_rhs, r.log_rhs - r.log_lhs, r.pass, true);
    row.certified = r.certified;
    rep.rows.push_back(row);
    rep.values["sharpness y=" + fmt_point(y)] = number(r.sharpness);
  }
  return rep;
}

Report multiplier_converse(const Ctx& c, std::string& svg_text) {
  Report rep;
  rep.command = "multiplier converse";
  const auto m = c.symbol();
  const auto w = c.weight();
  const double eps = c.num(c.opts().epsilon, "epsilon", 0.5);
  const double tol = c.num(c.opts().tol, "tol", 1e-10);
  const auto gamma = c.point("gamma");
  const auto y0 = c.point("y0");
  if (!gamma || !y0) throw ConfigError("converse needs \"gamma\" and \"y0\" in --config");
  std::vector<double> tau_default;
  for (int k = 1; k <= 20; ++k) tau_default.push_back(k);
  const auto tau = c.list<double>({}, "tau", tau_default);
  const auto K = K_of(c, m, 10, true);
  const auto r = converse_divergence(m, *gamma, K, w, eps, *y0, tau);
  const double rel = std::abs(r.slope - r.predicted_slope) / std::max(std::abs(r.predicted_slope), 1e-300);
  rep.rows.push_back(make_row("converse growth slope y0.gamma - H(-y0) - eps|y0|", r.slope, r.predicted_slope, tol - rel,
                              rel <= tol && r.predicted_slope > 0));
  rep.values["log_ratio"] = r.log_ratio;
  rep.values["tau"] = r.tau;
  rep.values["max_rel_error"] = r.max_rel_error;
  svg_text = svg_polyline("log ratio vs tau", "tau", "log ratio", {{r.tau, r.log_ratio}});
  return rep;
}

// --- counterexamples ---

Report from_counterexample(const std::string& cmd, const CounterexampleReport& cr) {
  Report rep;
  rep.command = cmd;
  for (const auto& ch : cr.checks) rep.rows.push_back(row_from(ch));
  for (const auto& [k, v] : cr.values) rep.values[k] = number(v);
  if (!cr.slopes.empty()) rep.values["slopes"] = cr.slopes;
  rep.note = cr.note;
  return rep;
}

Report cx_harmonic(const Ctx& c, std::string& svg_text) {
  const int k = c.num(c.opts().k, "k", 1);
  const auto t = c.list(c.opts().ygrid, "ygrid", {1, 10, 100, 1000});
  const auto r = harmonic_power(k, t);
  std::vector<double> xs, ys;
  for (double v : t) {
    xs.push_back(std::log10(std::max(std::abs(v), 1e-300)));
    ys.push_back(r.value("ratio t=" + [&] { std::ostringstream os; os << v; return os.str(); }()));
  }
  svg_text = svg_polyline("harmonic power ratio", "log10 t", "ratio", {{xs, ys}});
  return from_counterexample("counterexample harmonic-power", r);
}

Report cx_sqrt(const Ctx& c) {
  SqrtCosineOptions opt;
  opt.samples = c.num<int>(std::nullopt, "samples", opt.samples);
  opt.seed = c.num(c.opts().seed, "seed", opt.seed);
  opt.y2 = c.list<double>({}, "y2", opt.y2);
  return from_counterexample("counterexample sqrt-cosine", sqrt_cosine(c.num(c.opts().epsilon, "epsilon", 1.0), opt));
}

Report cx_series(const Ctx& c) {
  const ZeroSequence zs = c.has("zeros", c.opts().zeros, "entries")
                              ? c.zeros()
                              : demo_zero_sequence(c.num<std::size_t>(std::nullopt, "demo_count", 10000));
  const double eps = c.num(c.opts().epsilon, "epsilon", 0.5);
  if (!(eps > 0)) throw ConfigError("--epsilon must be positive");
  const std::size_t k0 = static_cast<std::size_t>(std::floor(1 / eps)) + 1;
  if (zs.size() < k0) throw ConfigError("zero sequence shorter than the first index " + std::to_string(k0));
  const auto K = c.num<std::size_t>(std::nullopt, "K_terms", zs.size() - k0 + 1);
  std::vector<std::size_t> js;
  for (auto j : c.list<std::size_t>({}, "j", {10, 100, 1000}))
    if (j <= zs.size()) js.push_back(j);
  SeriesOptions opt;
  opt.seed = c.num(c.opts().seed, "seed", opt.seed);
  opt.samples = c.num<int>(std::nullopt, "samples", opt.samples);
  std::optional<Symbol> m;
  if (c.has("symbol", c.opts().symbol, "kind")) m = c.symbol();
  return from_counterexample("counterexample series", nonanalytic_series(zs, eps, K, js, m ? &*m : nullptr, opt));
}

Report cx_semi(const Ctx& c, std::string& svg_text) {
  const int ell = c.num(c.opts().ell, "ell", 1);
  const auto N = c.list<long>(c.opts().N, "N", {100});
  long Nmax = 1;
  for (long v : N) Nmax = std::max(Nmax, v);
  const auto K = c.num<std::size_t>(std::nullopt, "K_terms", std::max<std::size_t>(1000, 2 * static_cast<std::size_t>(Nmax)));
  SemiEllipticOptions opt;
  opt.seed = c.num(c.opts().seed, "seed", opt.seed);
  opt.samples = c.num<int>(std::nullopt, "samples", opt.samples);
  const auto r = semi_elliptic(ell, K, N, opt);
  std::vector<double> xs, ys, bs;
  for (long v : N) {
    xs.push_back(double(v));
    ys.push_back(r.value("partial sum N=" + std::to_string(v)));
    bs.push_back(double(v) / kE);
  }
  svg_text = svg_polyline("f(i y1, 0) vs N/e", "N", "value", {{xs, ys}, {xs, bs}});
  return from_counterexample("counterexample semi-elliptic", r);
}

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--config", o.config, "JSON config (an input object or a run config)");
  sub->add_option("--weight", o.weight, "weight JSON");
  sub->add_option("--function", o.function, "function JSON");
  sub->add_option("--symbol", o.symbol, "symbol JSON");
  sub->add_option("--zeros", o.zeros, "zero sequence JSON");
  sub->add_option("--out", o.out, "report path (.json; .csv for tables)");
  sub->add_option("--svg", o.svg, "SVG plot path");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--tol", o.tol, "tolerance");
  sub->add_option("--rmax", o.rmax, "largest radius / box half-width");
  sub->add_option("--ygrid", o.ygrid, "list of |y| (or r) values");
  sub->add_option("--epsilon", o.epsilon, "epsilon");
  sub->add_option("--ell", o.ell, "l");
  sub->add_option("--N", o.N, "list of N");
  sub->add_option("--k", o.k, "k");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Liouville-type theorems for Fourier multipliers"};
  app.require_subcommand(1);
  Opts o;
  std::string chosen;
  const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"weights", {"check", "profile"}},
      {"estimate", {"tent", "outer", "lemma-x1"}},
      {"multiplier", {"zeros", "mollifier", "tauberian", "liouville", "converse"}},
      {"counterexample", {"harmonic-power", "sqrt-cosine", "series", "semi-elliptic"}}};
  for (const auto& [g, subs] : groups) {
    auto* grp = app.add_subcommand(g);
    grp->require_subcommand(1);
    for (const auto& s : subs) {
      auto* sub = grp->add_subcommand(s);
      add_common(sub, o);
      const std::string name = g + " " + s;
      sub->callback([&chosen, name] { chosen = name; });
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Ctx c(o);
    std::string csv_text, svg_text;
    Report rep;
    if (chosen == "weights check") rep = weights_check(c);
    else if (chosen == "weights profile") rep = weights_profile(c, csv_text, svg_text);
    else if (chosen == "estimate tent") rep = estimate_tent(c);
    else if (chosen == "estimate outer") rep = estimate_outer(c);
    else if (chosen == "estimate lemma-x1") rep = estimate_lemma(c);
    else if (chosen == "multiplier zeros") rep = multiplier_zeros(c);
    else if (chosen == "multiplier mollifier") rep = multiplier_mollifier(c, csv_text);
    else if (chosen == "multiplier tauberian") rep = multiplier_tauberian(c);
    else if (chosen == "multiplier liouville") rep = multiplier_liouville(c);
    else if (chosen == "multiplier converse") rep = multiplier_converse(c, svg_text);
    else if (chosen == "counterexample harmonic-power") rep = cx_harmonic(c, svg_text);
    else if (chosen == "counterexample sqrt-cosine") rep = cx_sqrt(c);
    else if (chosen == "counterexample series") rep = cx_series(c);
    else if (chosen == "counterexample semi-elliptic") rep = cx_semi(c, svg_text);

    const bool csv_out = !o.out.empty() && std::filesystem::path(o.out).extension() == ".csv";
    // profile tables go to stdout when no file is given; the summary then goes to stderr
    const bool table_on_stdout = chosen == "weights profile" && o.out.empty();
    std::ostream& log = table_on_stdout ? std::cerr : std::cout;
    if (table_on_stdout) std::cout << csv_text;
    if (!o.out.empty()) {
      if (csv_out && csv_text.empty()) throw ConfigError("no table output for " + chosen + "; use a .json --out");
      write_text(o.out, csv_out ? csv_text : rep.to_json().dump(2) + "\n");
    }
    if (!o.svg.empty()) write_text(o.svg, svg_text.empty() ? svg_polyline(chosen, "", "", {}) : svg_text);

    for (const auto& r : rep.rows) {
      const char* st = r.informational ? "info"
                       : !r.pass ? "FAIL"
                       : r.uncertified_critical() ? "UNCERT"
                       : r.certified ? "pass" : "pass*";
      log << st << "  " << r.tag << "  margin=" << r.margin << (r.log_domain ? " (log)" : "") << "\n";
    }
    for (const auto& [k, v] : rep.values.items())
      if (v.is_string()) log << k << ": " << v.get<std::string>() << "\n";
    if (!rep.note.empty()) log << "note: " << rep.note << "\n";
    for (const auto& r : rep.rows)
      if (!r.certified) {
        log << "pass* = holds with an uncertified norm, margin above the critical slack\n";
        break;
      }
    if (!rep.pass()) {
      std::cerr << "verification failed:";
      for (const auto& t : rep.failing()) std::cerr << " [" << t << "]";
      std::cerr << "\n";
      return 1;
    }
    log << "all checks passed\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "hypothesis not satisfied: " << e.what() << "\n";
    return 1;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature failed: " << e.what() << "\n";
    return 1;
  }
}
