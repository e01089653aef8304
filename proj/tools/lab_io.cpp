#include "lab_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace lab {

namespace {

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
  }
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Point point(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    p[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return p;
}

MultiIndex multi_index(const json& j) {
  if (!j.is_array()) throw ConfigError("alpha must be an array of integers");
  MultiIndex a(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long>() < 0) throw ConfigError("alpha must hold nonnegative integers");
    a[static_cast<Eigen::Index>(k)] = j[k].get<int>();
  }
  return a;
}

Complex complex_value(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {get(j, "re", 0.0), get(j, "im", 0.0)};
  throw ConfigError("complex values are numbers, [re, im] or {\"re\", \"im\"}");
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Weight parse_weight(const json& j) {
  const std::string fam = get<std::string>(j, "family", "");
  const int n = get(j, "n", 1);
  if (fam == "product") return Weight::product(n, get(j, "a", 0.0), get(j, "b", 0.0), get(j, "s", 0.0), get(j, "t", 0.0));
  if (fam == "borderline") return Weight::borderline(n, get(j, "gamma", 2.0));
  if (fam == "sampled") {
    std::vector<std::pair<Point, double>> s;
    for (const auto& e : need(j, "samples")) {
      if (!e.is_array() || e.size() != 2 || !e[1].is_number()) throw ConfigError("samples are [[x...], value] pairs");
      s.emplace_back(point(e[0], "sample point"), e[1].get<double>());
    }
    return Weight::sampled(n, s, get(j, "radial", false));
  }
  throw ConfigError("weight family must be product, borderline or sampled");
}

PolyExpSum parse_function(const json& j) {
  const int n = need(j, "n").get<int>();
  std::vector<Term> terms;
  for (const auto& t : need(j, "terms")) {
    Term term;
    term.c = Complex(get(t, "re", 0.0), get(t, "im", 0.0));
    term.alpha = t.contains("alpha") ? multi_index(t["alpha"]) : MultiIndex(MultiIndex::Zero(n));
    term.xi = t.contains("xi") ? point(t["xi"], "xi") : Point(Point::Zero(n));
    terms.push_back(term);
  }
  return PolyExpSum(n, terms);
}

Symbol parse_symbol(const json& j) {
  const std::string kind = get<std::string>(j, "kind", "");
  if (kind == "laplacian") return Symbol::laplacian(get(j, "n", 1));
  if (kind == "polynomial") {
    std::vector<SymbolCoeff> c;
    for (const auto& e : need(j, "coeffs")) c.push_back({multi_index(need(e, "alpha")), Complex(get(e, "re", 0.0), get(e, "im", 0.0))});
    if (c.empty()) throw ConfigError("polynomial symbol without coefficients");
    return Symbol::polynomial(get(j, "n", static_cast<int>(c.front().alpha.size())), c);
  }
  if (kind == "levy") {
    LevyParams p;
    p.b = point(need(j, "b"), "b");
    const auto n = p.b.size();
    p.Q = Eigen::MatrixXd::Zero(n, n);
    if (j.contains("Q")) {
      const auto& q = j["Q"];
      if (!q.is_array() || static_cast<Eigen::Index>(q.size()) != n) throw ConfigError("Q must be n x n");
      for (Eigen::Index r = 0; r < n; ++r) {
        const Point row = point(q[r], "Q row");
        if (row.size() != n) throw ConfigError("Q must be n x n");
        p.Q.row(r) = row.transpose();
      }
    }
    for (const auto& a : j.value("atoms", json::array())) p.atoms.push_back({point(need(a, "y"), "atom y"), need(a, "w").get<double>()});
    p.s = get(j, "s", 1);
    for (const auto& c : j.value("c", json::array())) p.c.emplace_back(multi_index(need(c, "alpha")), need(c, "v").get<double>());
    return Symbol::levy(p);
  }
  if (kind == "sampled") {
    SampledGrid g;
    g.lo = point(need(j, "lo"), "lo");
    g.step = point(need(j, "step"), "step");
    const auto& cnt = need(j, "count");
    g.count.resize(static_cast<Eigen::Index>(cnt.size()));
    for (std::size_t k = 0; k < cnt.size(); ++k) g.count[static_cast<Eigen::Index>(k)] = cnt[k].get<int>();
    for (const auto& v : need(j, "values")) g.values.push_back(complex_value(v));
    return Symbol::sampled(g);
  }
  throw ConfigError("symbol kind must be polynomial, laplacian, levy or sampled");
}

ZeroSequence parse_zeros(const json& j) {
  ZeroSequence z;
  z.omega0 = point(need(j, "omega0"), "omega0");
  for (const auto& e : need(j, "entries")) {
    z.xi.push_back(point(need(e, "xi"), "xi"));
    z.eta.push_back(point(need(e, "eta"), "eta"));
  }
  return z;
}

json to_json(const PolyExpSum& f) {
  json terms = json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"re", t.c.real()},
                     {"im", t.c.imag()},
                     {"alpha", std::vector<int>(t.alpha.data(), t.alpha.data() + t.alpha.size())},
                     {"xi", std::vector<double>(t.xi.data(), t.xi.data() + t.xi.size())}});
  return {{"n", f.dim()}, {"terms", terms}};
}

json to_json(const ZeroSet& z) {
  auto pts = [](const std::vector<Point>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    return a;
  };
  return {{"points", pts(z.points)},
          {"hull_points", pts(z.hull_points)},
          {"classification", to_string(z.classification)},
          {"resolution", z.resolution},
          {"boundary_min", number(z.boundary_min)},
          {"note", z.note}};
}

Row row_from(const Check& c) {
  Row r;
  r.tag = c.tag;
  r.lhs = c.lhs;
  r.rhs = c.rhs;
  r.margin = c.margin;
  r.log_domain = c.log_domain;
  r.pass = c.pass;
  r.informational = c.informational;
  r.count = c.count;
  return r;
}

bool Row::uncertified_critical() const {
  if (certified) return false;
  const double slack = log_domain ? kCriticalSlack : kCriticalSlack * std::max(std::abs(rhs), 1e-300);
  return !(margin > slack);
}

bool Report::pass() const { return failing().empty(); }

std::vector<std::string> Report::failing() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (!r.informational && (!r.pass || r.uncertified_critical())) out.push_back(r.tag);
  return out;
}

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json Report::to_json() const {
  json rs = json::array(), margins = json::array();
  for (const auto& r : rows) {
    auto val = [&](double v) { return r.log_domain ? json{{"log", number(v)}} : number(v); };
    json o = {{"tag", r.tag}, {"lhs", val(r.lhs)},          {"rhs", val(r.rhs)},
              {"margin", val(r.margin)}, {"certified", r.certified}, {"pass", r.pass}};
    if (r.informational) o["informational"] = true;
    if (r.count != 1) o["count"] = r.count;
    rs.push_back(o);
    margins.push_back(number(r.margin));
  }
  json out = {{"command", command}, {"pass", pass()}, {"rows", rs}, {"margins", margins}, {"values", values}};
  if (!note.empty()) out["note"] = note;
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
    os << "\n";
  }
  return os.str();
}

std::string svg_polyline(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         const std::vector<std::pair<std::vector<double>, std::vector<double>>>& series) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [xs, ys] : series)
    for (std::size_t k = 0; k < xs.size() && k < ys.size(); ++k) {
      if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) continue;
      x0 = std::min(x0, xs[k]);
      x1 = std::max(x1, xs[k]);
      y0 = std::min(y0, ys[k]);
      y1 = std::max(y1, ys[k]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  auto X = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto Y = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << x0 << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">" << x1 << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << y0 << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << T + 8 << "\" font-size=\"11\" text-anchor=\"end\">" << y1 << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << H / 2 << ")\" text-anchor=\"middle\">"
     << ylabel << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill=\"none\" stroke=\"" << colours[s % 4] << "\" stroke-width=\"1.5\" points=\"";
    const auto& [xs, ys] = series[s];
    for (std::size_t k = 0; k < xs.size() && k < ys.size(); ++k)
      if (std::isfinite(xs[k]) && std::isfinite(ys[k])) os << X(xs[k]) << "," << Y(ys[k]) << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lab
