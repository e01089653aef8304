#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace liouville::quad {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208794372035, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod21(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    resk += kWgk[j] * s;
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  Segment seg{a, b, resk * h, std::abs((resk - resg) * h)};
  if (!std::isfinite(seg.value)) seg.error = INFINITY;
  return seg;
}

}  // namespace

Result integrate(const Integrand& f, const std::vector<double>& breakpoints, const Options& opt) {
  std::priority_queue<Segment> heap;
  Result out;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Segment s = kronrod21(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += 21;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Segment s = heap.top();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    Segment l = kronrod21(f, s.a, mid);
    Segment r = kronrod21(f, mid, s.b);
    out.evaluations += 42;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++intervals;
  }
  // Re-sum to limit cancellation drift in the running totals.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  out.value = v;
  out.error = e;
  if (!std::isfinite(v)) out.converged = false;
  return out;
}

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
  if (a == b) return {};
  if (a > b) {
    Result r = integrate(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  return integrate(f, std::vector<double>{a, b}, opt);
}

Result integrate_log_scale(const Integrand& f, double a, double b, const Options& opt) {
  const double ua = std::log(a), ub = std::log(b);
  const int pieces = std::max(1, static_cast<int>(std::ceil((ub - ua) / 2.0)));
  std::vector<double> bp(pieces + 1);
  for (int i = 0; i <= pieces; ++i) bp[i] = ua + (ub - ua) * i / pieces;
  return integrate([&](double u) {
    const double t = std::exp(u);
    return f(t) * t;
  }, bp, opt);
}

std::vector<Panel> adaptive_rule(const Integrand& f, double a, double b, double panel_width,
                                 const Options& opt) {
  const int n0 = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
  std::vector<Segment> work;
  work.reserve(n0);
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0, hi = a + (b - a) * (i + 1) / n0;
    work.push_back(kronrod21(f, lo, hi));
  }
  std::vector<Segment> leaves;
  // Per-panel absolute tolerance, so that the sum meets opt.abs_tol.
  const double tol = opt.abs_tol / n0;
  int budget = opt.max_intervals;
  while (!work.empty()) {
    Segment s = work.back();
    work.pop_back();
    const double mid = 0.5 * (s.a + s.b);
    if (s.error <= std::max(tol, opt.rel_tol * std::abs(s.value)) || budget <= 0 ||
        !(mid > s.a && mid < s.b)) {
      leaves.push_back(s);
      continue;
    }
    --budget;
    work.push_back(kronrod21(f, s.a, mid));
    work.push_back(kronrod21(f, mid, s.b));
  }
  std::sort(leaves.begin(), leaves.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  std::vector<Panel> rule(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const double c = 0.5 * (leaves[i].a + leaves[i].b), h = 0.5 * (leaves[i].b - leaves[i].a);
    Panel& p = rule[i];
    for (int j = 0; j < 10; ++j) {
      p.nodes[2 * j] = c - h * kXgk[j];
      p.nodes[2 * j + 1] = c + h * kXgk[j];
      p.weights[2 * j] = p.weights[2 * j + 1] = h * kWgk[j];
    }
    p.nodes[20] = c;
    p.weights[20] = h * kWgk[10];
  }
  return rule;
}

}  // namespace liouville::quad
