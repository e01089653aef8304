#include "liouville/weights.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace liouville;

namespace {

Point e1(int n) { return Point::Unit(n, 0); }

Point at_radius(int n, double r) { return r * e1(n); }

// independent oracle: double-exponential quadrature of a half-line integral
template <typename F>
double half_line(F f, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(t); }, a, INFINITY);
}

template <typename F>
double finite(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double t) { return f(t); }, a, b);
}

// borderline weights decay too slowly for exp_sinh; substitute s = 1/log(e+tau),
// tau = e^{1/s} - e, dtau = (e+tau)/s^2 ds, so h dtau = tau (e+tau) s^{gamma-2} ds
// kernel 1/(tau^2 + R2)
double borderline_oracle(double gamma, double R, double R2) {
  const double s0 = 1 / std::log(kE + R);
  return finite([&](double s) {
    if (s <= 0) return 0.0;
    const double tau = std::expm1(1 / s - 1) * kE;
    if (!std::isfinite(tau)) return std::pow(s, gamma - 2);  // tau -> inf limit
    return (1 + kE / tau) / (1 + R2 / (tau * tau)) * std::pow(s, gamma - 2);
  }, 0.0, s0);
}

double S_oracle_radial(const std::function<double(double)>& h, double r) {
  const double R = std::max(r, 1.0);
  return 2 / kPi * (finite([&](double t) { return h(t) / (t * t + R * R); }, 0, R) +
                    half_line([&](double t) { return h(t) / (t * t + R * R); }, R));
}

std::vector<Weight> example_families() {
  return {Weight::polynomial(2, 2.0), Weight::product(2, 0, 0, 0, 1.0), Weight::product(2, 1.0, 0.5, 0, 0),
          Weight::borderline(2, 2.0)};
}

}  // namespace

TEST(Weight, TrivialEvaluations) {
  Point x(2);
  x << 0.3, -7.0;
  EXPECT_EQ(Weight::unit(2)(x), 1.0);
  EXPECT_NEAR(Weight::polynomial(2, 2)(at_radius(2, 3.0)), 16.0, 1e-12);
  EXPECT_EQ(Weight::borderline(2, 2)(Point::Zero(2)), 1.0);
}

TEST(Weight, RadialFamiliesAreRotationInvariant) {
  const Weight w = Weight::product(3, 0.7, 0.3, 1.5, 2.0);
  Point x(3);
  x << 1.0, -2.0, 0.5;
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(3, 3)).householderQ();
  EXPECT_NEAR(w(Q * x), w(x), 1e-12 * w(x));
  EXPECT_GE(w(x), 1.0);
}

TEST(Weight, InvalidParameters) {
  EXPECT_THROW(Weight::product(1, -1, 0, 0, 0), ArgumentError);
  EXPECT_THROW(Weight::product(1, 1, 1.0, 0, 0), ArgumentError);
  EXPECT_THROW(Weight::borderline(1, 0.0), ArgumentError);
  EXPECT_THROW(Weight::polynomial(2, 1)(Point::Zero(3)), ArgumentError);
}

TEST(Weight, SampledHullQueriesRaiseDomainError) {
  std::vector<std::pair<Point, double>> samples;
  for (int i = -20; i <= 20; ++i) samples.push_back({Point::Constant(1, 0.1 * i), std::exp(0.01 * i * i)});
  const Weight w = Weight::sampled(1, samples, false);
  EXPECT_DOUBLE_EQ(w.hull_radius(), 2.0);
  EXPECT_NEAR(w(Point::Constant(1, 1.0)), std::exp(1.0), 1e-12);
  try {
    w(Point::Constant(1, 2.5));
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("radius 2"), std::string::npos);
  }
}

TEST(Submultiplicative, BuiltInFamiliesHaveNoViolations) {
  PairSampling ps;
  ps.count = 10000;
  EXPECT_TRUE(check_submultiplicative(Weight::polynomial(2, 2.0), ps).violations.empty());
  EXPECT_TRUE(check_submultiplicative(Weight::unit(2), ps).violations.empty());
  EXPECT_TRUE(check_submultiplicative(Weight::product(2, 1, 0.5, 2, 1), ps).violations.empty());
  EXPECT_TRUE(check_submultiplicative(Weight::borderline(2, 2), ps).violations.empty());
}

TEST(Submultiplicative, GaussianSampledWeightViolates) {
  std::vector<std::pair<Point, double>> samples;
  for (int i = -40; i <= 40; ++i) {
    const double x = 0.1 * i;
    samples.push_back({Point::Constant(1, x), std::exp(x * x)});
  }
  const Weight w = Weight::sampled(1, samples, false);
  PairSampling ps;
  ps.count = 0;
  ps.explicit_pairs = {{Point::Constant(1, 1.0), Point::Constant(1, 1.0)}};
  const auto rep = check_submultiplicative(w, ps);
  ASSERT_EQ(rep.violations.size(), 1u);
  // e^4 / (e e) = e^2
  EXPECT_NEAR(rep.violations[0].ratio, std::exp(2.0), 1e-9);
}

TEST(BeurlingDomar, Verdicts) {
  const Point d = e1(1);
  EXPECT_EQ(check_beurling_domar(Weight::borderline(1, 2.0), d).verdict, BDVerdict::Converges);
  const auto div = check_beurling_domar(Weight::borderline(1, 1.0), d);
  EXPECT_EQ(div.verdict, BDVerdict::Diverges);
  EXPECT_TRUE(div.heuristic);
  EXPECT_GT(div.partial_value, std::log(std::log(1e12)) - 1);
  EXPECT_EQ(check_beurling_domar(Weight::product(1, 1, 0.5, 2, 1), d).verdict, BDVerdict::Converges);
  EXPECT_THROW(check_beurling_domar(Weight::unit(2), Point::Ones(2)), ArgumentError);
}

TEST(BeurlingDomar, GrsEstimateTendsToOne) {
  const auto r = check_beurling_domar(Weight::product(1, 1, 0.5, 0, 0), e1(1));
  EXPECT_NEAR(r.grs_estimate, std::exp(1e6 / 1e12), 1e-12);
}

TEST(BeurlingDomar, SeriesBracket) {
  for (const Weight& w : example_families()) {
    for (long L : {10L, 100L}) {
      const auto sb = bd_series_bracket(w, e1(2), L, 20000);
      EXPECT_TRUE(sb.holds) << w.describe() << " L=" << L << " margin " << sb.margin;
      // partial sums and integral differ by at most M/(L-1) plus the first term
      const double first = w.log_along(e1(2), double(L)) / double(L * L);
      EXPECT_LE(std::abs(sb.integral - sb.series_upper_side), sb.M / (L - 1) + first + 1e-12);
    }
  }
}

TEST(Profile, ClosedFormAB) {
  for (double b : {0.0, 0.25, 0.5, 0.75}) {
    const Weight w = Weight::product(1, 1.3, b, 0, 0);
    for (double r : {1.0, 2.0, 4.0, 37.0, 100.0}) {
      const double want = 1.3 * std::pow(r, b - 1) / std::sin((1 - b) * kPi / 2);
      EXPECT_NEAR(S_g(w, r).value, want, 1e-9 * want) << "b=" << b << " r=" << r;
    }
  }
  EXPECT_NEAR(S_g(Weight::product(1, 1, 0.5, 0, 0), 4.0).value, 0.70710678118654752, 1e-10);
}

TEST(Profile, MatchesIndependentQuadrature) {
  for (const Weight& w : example_families()) {
    auto h = [&](double t) { return w.log_radial(t); };
    const bool bl = w.family() == WeightFamily::BorderlineExp;
    const double gam = w.borderline_params().gamma;
    for (double r : {0.5, 1.0, 3.0, 50.0}) {
      const double R = std::max(r, 1.0);
      double want = S_oracle_radial(h, r);
      if (bl)
        want = 2 / kPi * (finite([&](double t) { return h(t) / (t * t + R * R); }, 0, R) +
                          borderline_oracle(gam, R, R * R));
      EXPECT_NEAR(S_g(w, r).value, want, 1e-8 * want) << w.describe() << " r=" << r;
      const double Iw = bl ? borderline_oracle(gam, R, 0.0)
                           : half_line([&](double t) { return h(t) / (t * t); }, R);
      EXPECT_NEAR(I_g(w, r).value, Iw, 1e-8 * Iw);
    }
  }
}

TEST(Profile, TrivialWeightIsZero) {
  Eigen::VectorXd grid(3);
  grid << 0.5, 1.0, 10.0;
  const auto p = compute_profile(Weight::unit(2), grid);
  EXPECT_EQ(p.I.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(p.J.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(p.S.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(p.C_g, 1.0);
}

TEST(Profile, SandwichMonotoneAndJBound) {
  Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(50, -1.0, 3.0).unaryExpr([](double u) { return std::pow(10.0, u); });
  for (const Weight& w : example_families()) {
    const auto p = compute_profile(w, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double r = grid[i];
      if (i > 0) {
        EXPECT_LE(p.S[i], p.S[i - 1] * (1 + 1e-12)) << w.describe();
        EXPECT_LE(p.I[i], p.I[i - 1] * (1 + 1e-12));
      }
      if (r <= 1) EXPECT_EQ(p.S[i], p.S1);
      if (r >= 1) {
        EXPECT_GE(p.S[i] - std::max(p.I[i], p.J[i]) / (2 * kPi), -1e-9) << w.describe() << " r=" << r;
        EXPECT_GE(2 / kPi * (p.I[i] + p.J[i]) - p.S[i], -1e-9);
      }
      if (r > 1) {
        const double bound = p.M / (r * r) + p.I1 / r + I_g(w, std::sqrt(r)).value;
        EXPECT_LE(p.J[i], bound + 1e-12) << w.describe() << " r=" << r;
      }
    }
    EXPECT_LT(p.S[grid.size() - 1], p.S1) << w.describe();
    // S -> 0; the borderline family needs a larger radius
    EXPECT_LT(S_g(w, 1e8).value, 0.1 * p.S1) << w.describe();
    EXPECT_NEAR(p.C_g, std::exp(p.M + p.I1 / kPi), 1e-12 * p.C_g);
  }
}

TEST(Profile, FamilyUpperBounds) {
  // c1, c2 from an independent quadrature
  const double c1 = 2 / kPi * half_line([](double l) { return std::log1p(l) / (l * l + 1); }, 0.0);
  const double c2 = 2 / kPi * half_line([](double l) { return std::log(2 * std::log(kE + l)) / (l * l + 1); }, 0.0);
  const double s = 2.0, t = 1.5, gamma = 2.0, beta = 0.9;
  for (double r : {1.0, 2.0, 10.0, 1e3, 1e5}) {
    EXPECT_LE(S_g(Weight::polynomial(1, s), r).value, c1 * s / r + s * std::log1p(r) / r);
    EXPECT_LE(S_g(Weight::product(1, 0, 0, 0, t), r).value,
              c2 * t / r + t * std::log(std::log(kE + r)) / r);
    const double gb = std::pow(r, 2 * (beta - 1)) / kPi +
                      std::log(2.0) / (kPi * std::pow(std::log(kE + std::pow(r, beta)), gamma)) +
                      2 / kPi * (1 + kE / r) / (gamma - 1) * std::pow(std::log(kE + r), 1 - gamma);
    EXPECT_LE(S_g(Weight::borderline(1, gamma), r).value, gb);
  }
}

TEST(GrowthFactor, ClosedForms) {
  Point y = at_radius(2, 9.0);
  EXPECT_NEAR(growth_factor(Weight::product(2, 1, 0.5, 0, 0), y), std::exp(std::sqrt(2.0) * 3.0), 1e-9);
  EXPECT_EQ(growth_factor(Weight::unit(2), y), 1.0);
  const double c1 = 2 / kPi * half_line([](double l) { return std::log1p(l) / (l * l + 1); }, 0.0);
  EXPECT_LE(growth_factor(Weight::polynomial(2, 2), at_radius(2, 10.0)), std::exp(2 * c1) * 121.0);
}

TEST(TailRadius, TrivialAndBorderline) {
  EXPECT_EQ(find_uniform_tail_radius(Weight::unit(1), 0.1), 1.0);
  const Weight w = Weight::borderline(1, 2.0);
  const double R = find_uniform_tail_radius(w, 0.1);
  EXPECT_LT(borderline_oracle(2.0, R, 0.0), 0.1);
  EXPECT_GT(borderline_oracle(2.0, 0.999 * R, 0.0), 0.1);
}

TEST(TailRadius, Polynomial) {
  const Weight w = Weight::polynomial(1, 2.0);
  const double R = find_uniform_tail_radius(w, 0.5);
  // exact tail of s log(1+t)/t^2: s (log(1+R)/R + log(1+1/R))
  auto tail = [](double R) { return 2.0 * (std::log1p(R) / R + std::log1p(1 / R)); };
  EXPECT_LT(tail(R), 0.5);
  EXPECT_GT(tail(0.999 * R), 0.5);
}

TEST(TailRadius, DivergentWeightRejected) {
  EXPECT_THROW(find_uniform_tail_radius(Weight::borderline(1, 1.0), 0.1), PreconditionError);
}

TEST(Sampled, RotationInvariance) {
  // anisotropic sampled weight on 16 rays
  std::vector<std::pair<Point, double>> samples{{Point::Zero(2), 1.0}};
  for (int k = 0; k < 16; ++k) {
    const double th = 2 * kPi * k / 16;
    for (int i = 1; i <= 80; ++i) {
      const double r = 0.25 * i;
      Point x(2);
      x << r * std::cos(th), r * std::sin(th);
      samples.push_back({x, std::exp((1 + 0.3 * std::cos(th)) * std::sqrt(r))});
    }
  }
  const Weight w = Weight::sampled(2, samples, false);
  const double a = 2 * kPi * 3 / 16;
  Eigen::MatrixXd A(2, 2);
  A << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Weight wa = w.rotated(A);
  Eigen::VectorXd grid(4);
  grid << 0.5, 1.0, 4.0, 10.0;
  const auto p = compute_profile(w, grid);
  const auto q = compute_profile(wa, grid);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(p.S[i], q.S[i], 1e-9 * p.S[i]);
    EXPECT_NEAR(p.I[i], q.I[i], 1e-9 * p.I[i]);
    EXPECT_TRUE(p.certified[i]);
  }
  // rotated weight evaluates as g(Ax)
  Point x(2);
  x << 1.1, 0.4;
  EXPECT_NEAR(wa(x), w(A * x), 1e-12 * w(A * x));
}

TEST(Sampled, RadialMatchesParametric) {
  std::vector<std::pair<Point, double>> samples;
  for (int i = 0; i <= 4000; ++i) {
    const double r = 0.025 * i;
    samples.push_back({at_radius(2, r), std::exp(std::sqrt(r))});
  }
  const Weight w = Weight::sampled(2, samples, true);
  // piecewise-linear interpolation error of sqrt near 0 dominates
  EXPECT_NEAR(S_g(w, 4.0).value, 0.70710678118654752, 2e-3);
}
