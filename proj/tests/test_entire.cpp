#include "liouville/entire.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace liouville;

namespace {

using CVec = PolyExpSum::CVec;

CVec cv(std::initializer_list<Complex> v) {
  CVec z(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (auto c : v) z[k++] = c;
  return z;
}
Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (auto c : v) p[k++] = c;
  return p;
}
MultiIndex mi(std::initializer_list<int> v) {
  MultiIndex a(static_cast<Eigen::Index>(v.size()));
  int k = 0;
  for (auto c : v) a[k++] = c;
  return a;
}

PolyExpSum two_cos(int n, const Point& g) {
  return PolyExpSum::exponential(g) + PolyExpSum::exponential(-g);
}

PolyExpSum random_sum(std::mt19937& rng, int n, int terms, int max_deg, bool integer_freq) {
  std::uniform_real_distribution<double> c(-1, 1), f(-2, 2);
  std::uniform_int_distribution<int> d(0, max_deg), fi(-3, 3);
  std::vector<Term> t;
  for (int k = 0; k < terms; ++k) {
    Term u{Complex(c(rng), c(rng)), MultiIndex::Zero(n), Point::Zero(n)};
    for (int j = 0; j < n; ++j) {
      u.alpha[j] = d(rng);
      u.xi[j] = integer_freq ? fi(rng) : f(rng);
    }
    t.push_back(u);
  }
  return PolyExpSum(n, t);
}

}  // namespace

TEST(PolyExpSum, Eval) {
  EXPECT_EQ(PolyExpSum::constant(2, 1.0)(cv({{3, 4}, {-1, 2}})), Complex(1, 0));
  const auto e = PolyExpSum::exponential(pt({1, 0}));
  EXPECT_NEAR(std::abs(e(cv({{0, 1}, {0, 0}})) - std::exp(-1.0)), 0, 1e-15);
  const auto h = PolyExpSum::harmonic_power(2);
  EXPECT_NEAR(std::abs(h(cv({{1, 0}, {1, 0}})) - Complex(0, 2)), 0, 1e-14);
}

TEST(PolyExpSum, Normalization) {
  const auto a = PolyExpSum::exponential(pt({1.0}));
  const auto z = a + (-1.0) * a;
  EXPECT_TRUE(z.is_zero());
  const auto b = a + a;
  ASSERT_EQ(b.terms().size(), 1u);
  EXPECT_EQ(b.terms()[0].c, Complex(2, 0));
  EXPECT_THROW(PolyExpSum(0), ArgumentError);
}

TEST(PolyExpSum, DerivativeExamples) {
  const auto e = PolyExpSum::exponential(pt({1.5, -0.5}));
  const auto d = e.derivative(mi({1, 0}));
  const auto z = cv({{0.3, 0.2}, {-0.1, 0.4}});
  EXPECT_NEAR(std::abs(d(z) - Complex(0, 1.5) * e(z)), 0, 1e-14);
  const auto sq = PolyExpSum::monomial(mi({2, 0})).derivative(mi({2, 0}));
  EXPECT_NEAR(std::abs(sq(z) - 2.0), 0, 1e-14);
  const auto f = PolyExpSum(1, {Term{1.0, mi({1}), pt({1})}});
  const Complex z1(0.7, 0);
  const Complex want = (1.0 + Complex(0, 1) * z1) * std::exp(Complex(0, 1) * z1);
  EXPECT_NEAR(std::abs(f.derivative(mi({1}))(cv({z1})) - want), 0, 1e-14);
}

TEST(PolyExpSum, DerivativeVsCentralDifferences) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const auto f = random_sum(rng, n, 4, 3, false);
    CVec z(n);
    for (int k = 0; k < n; ++k) z[k] = Complex(u(rng), u(rng));
    for (int k = 0; k < n; ++k) {
      MultiIndex a = MultiIndex::Zero(n);
      a[k] = 1;
      const double h = 1e-5;
      CVec zp = z, zm = z;
      zp[k] += h;
      zm[k] -= h;
      const Complex fd = (f(zp) - f(zm)) / (2 * h);
      const Complex ex = f.derivative(a)(z);
      EXPECT_LE(std::abs(fd - ex), 1e-6 * std::max(1.0, std::abs(ex)));
    }
  }
}

TEST(PolyExpSum, ShiftAndProduct) {
  std::mt19937 rng(3);
  const auto f = random_sum(rng, 2, 5, 2, false);
  const auto g = random_sum(rng, 2, 3, 1, false);
  const auto w = cv({{0.4, -0.3}, {1.1, 0.2}});
  const auto z = cv({{-0.2, 0.5}, {0.3, 0.1}});
  EXPECT_NEAR(std::abs(f.shifted(w)(z) - f(z + w)), 0, 1e-12 * std::abs(f(z + w)) + 1e-13);
  EXPECT_NEAR(std::abs((f * g)(z) - f(z) * g(z)), 0, 1e-12 * std::abs(f(z) * g(z)) + 1e-13);
}

TEST(PolyExpSum, Kappa) {
  EXPECT_EQ(kappa(PolyExpSum::constant(2, 1.0), pt({0, 1})), 0.0);
  const Point gamma = pt({1.0, -2.0});
  const Point om = pt({0.6, 0.8});
  const auto e = PolyExpSum::exponential(gamma);
  // direct limit: log|f(i t om)| / t
  const double t = 50;
  CVec z(2);
  for (int k = 0; k < 2; ++k) z[k] = Complex(0, t * om[k]);
  EXPECT_NEAR(kappa(e, om), std::log(std::abs(e(z))) / t, 1e-12);
  EXPECT_NEAR(kappa(e, om), -gamma.dot(om), 1e-15);
  EXPECT_EQ(kappa(PolyExpSum::harmonic_power(3), om), 0.0);
  EXPECT_THROW(kappa(PolyExpSum(2), om), ArgumentError);
  EXPECT_THROW(kappa(e, pt({1, 1})), ArgumentError);
}

TEST(PolyExpSum, Polydisc) {
  const auto f = PolyExpSum::exponential(pt({1, 2}));
  const auto z0 = cv({{0, 0}, {0, 0}});
  EXPECT_NEAR(std::abs(polydisc_derivative(f, z0, mi({2, 1}), 256) - Complex(0, -2)), 0, 1e-8 * 2);
  const auto c = PolyExpSum::monomial(mi({3}));
  EXPECT_NEAR(std::abs(polydisc_derivative(c, cv({{1, 0}}), mi({3}), 64) - 6.0), 0, 1e-10);
  EXPECT_NEAR(std::abs(polydisc_derivative(PolyExpSum::constant(2, 1.0), z0, mi({1, 0}), 32)), 0, 1e-14);
  EXPECT_THROW(polydisc_derivative(f, z0, mi({1, 0}), 8), ArgumentError);
}

TEST(PolyExpSum, PolydiscMatchesDerivative) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> a(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const auto f = random_sum(rng, n, 3, 0, false);
    MultiIndex al(n);
    for (int k = 0; k < n; ++k) al[k] = a(rng);
    if (order(al) > 4) continue;
    CVec z(n);
    for (int k = 0; k < n; ++k) z[k] = Complex(u(rng), u(rng));
    const Complex ex = f.derivative(al)(z);
    const Complex pd = polydisc_derivative(f, z, al, 64);
    EXPECT_LE(std::abs(pd - ex), 1e-8 * std::max(1.0, std::abs(ex)));
  }
}

TEST(SupNorm, Constant) {
  const auto r = weighted_sup_norm(PolyExpSum::constant(1, 1.0), Weight::product(1, 1, 0.5, 1, 0), pt({0}));
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(r.argmax_point[0], 0.0, 1e-6);
}

TEST(SupNorm, TwoCosine) {
  const auto w = Weight::product(2, 0, 0, 2, 0);
  const auto r = weighted_sup_norm(two_cos(2, pt({1.0, 0.5})), w, pt({0, 0}));
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_TRUE(r.certified);
}

TEST(SupNorm, HarmonicPowerApproachesOne) {
  for (int k : {1, 2}) {
    const auto w = Weight::product(2, 0, 0, k, 0);
    const auto r = weighted_sup_norm(PolyExpSum::harmonic_power(k), w, pt({0, 0}));
    // |x|^k / (1+|x|)^k tends to 1 from below
    EXPECT_LE(r.value, 1.0 + 1e-12);
    EXPECT_GE(r.value, 0.999);
  }
}

TEST(SupNorm, UncertifiedFlagged) {
  // polynomial growth beats the weight: exterior cannot be excluded
  const auto w = Weight::product(1, 0, 0, 1, 0);
  const auto r = weighted_sup_norm(PolyExpSum::monomial(mi({2})), w, pt({0}));
  EXPECT_FALSE(r.certified);
  EXPECT_FALSE(r.note.empty());
}

TEST(SupNorm, ShiftedCosineGridOracle) {
  const auto w = Weight::product(1, 0, 0, 2, 0);
  const auto f = two_cos(1, pt({1.0}));
  const auto r = weighted_sup_norm(f.derivative(mi({1})), w, pt({3}));
  double best = 0;
  for (double x = -50; x <= 50; x += 1e-4)
    best = std::max(best, std::abs(2.0 * std::sin(Complex(x, 3))) / std::pow(1 + std::abs(x), 2));
  EXPECT_NEAR(r.value, best, 1e-8 * best);
  EXPECT_TRUE(r.certified);
}

TEST(Poisson, ConstantIsZero) {
  const auto v = poisson_extension(PolyExpSum::constant(1, 1.0), 0.3, 2.0);
  EXPECT_NEAR(v.value, 0.0, 1e-14);
}

TEST(Poisson, Exponential) {
  const auto f = PolyExpSum::exponential(pt({1}));
  PoissonExtension P(f);
  EXPECT_EQ(P.k(), 0.0);
  for (double y : {0.1, 1.0, 5.0}) {
    const auto v = P.bound(0.7, y);
    EXPECT_GE(v.value, -y - 1e-10);
    EXPECT_NEAR(v.value, 0.0, 1e-10);
  }
  // upward decay is ruled by the other sign
  PoissonExtension Q(PolyExpSum::exponential(pt({-1})));
  EXPECT_EQ(Q.k(), 1.0);
  EXPECT_NEAR(Q.bound(0.0, 2.0).value, 2.0, 1e-10);
}

TEST(Poisson, TwoCosineAtUnitHeight) {
  PoissonExtension P(two_cos(1, pt({1})));
  EXPECT_TRUE(P.periodic());
  EXPECT_EQ(P.k(), 1.0);
  // 2cos z = e^{-iz}(1 + e^{2iz}) and log|1 + e^{2iz}| is bounded harmonic above,
  // so the Poisson integral reproduces it: log|1 + e^{2i(x+iy)}|
  for (auto [x, y] : {std::pair{0.0, 1.0}, std::pair{0.4, 0.1}, std::pair{-3.0, 2.5}}) {
    const double exact = std::log(std::abs(1.0 + std::exp(Complex(-2 * y, 2 * x))));
    EXPECT_NEAR(P.integral(x, y).value, exact, 1e-10) << x << " " << y;
  }
  EXPECT_NEAR(P.bound(0, 1).value, std::log(2 * std::cosh(1.0)), 1e-10);
}

TEST(Poisson, GeneralPathAgreesWithOracle) {
  // z e^{iz} + 1: polynomial factor forces the non-periodic path
  const PolyExpSum f(1, {Term{1.0, mi({1}), pt({1})}, Term{1.0, mi({0}), pt({0})}});
  PoissonExtension P(f);
  EXPECT_FALSE(P.periodic());
  for (auto [x, y] : {std::pair{0.5, 1.0}, std::pair{-2.0, 0.3}, std::pair{4.0, 5.0}}) {
    auto g = [&](double t) { return P.log_abs(t) * (y / kPi) / ((t - x) * (t - x) + y * y); };
    // G-K on quarter periods over [-A, A], then log t against the kernel in u = 1/t
    const double A = 3000;
    const int m = static_cast<int>(2 * A / (kPi / 2));
    double oracle = 0;
    for (int i = 0; i < m; ++i) {
      const double a = -A + i * (2 * A / m), b = a + 2 * A / m;
      oracle += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 8, 1e-13);
    }
    auto tail = [&](double u) {
      if (u == 0) return 0.0;
      const double t = 1 / u;
      return -std::log(u) * (y / kPi) * (1 / ((t - x) * (t - x) + y * y) + 1 / ((t + x) * (t + x) + y * y)) / (u * u);
    };
    oracle += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(tail, 0, 1 / A, 15, 1e-14);
    const auto v = P.integral(x, y);
    EXPECT_NEAR(v.value, oracle, 1e-9) << x << " " << y;
    EXPECT_LE(v.error, 1e-6);
  }
}

TEST(Poisson, LemmaX1RandomSums) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = random_sum(rng, 1, 3, trial % 2, true);
    const auto rows = check_lemma_x1(f, lemma_x1_default_x(), lemma_x1_default_y());
    for (const auto& r : rows) EXPECT_GE(r.margin, -1e-6) << r.x1 << " " << r.y1;
  }
}

TEST(Poisson, Errors) {
  EXPECT_THROW(PoissonExtension(PolyExpSum(1)), ArgumentError);
  PoissonExtension P(two_cos(1, pt({1})));
  EXPECT_THROW(P.integral(0, 0), ArgumentError);
}

TEST(Outer, TrivialWeight) {
  OuterFunction phi(Weight::unit(1));
  const Complex v = phi(Complex(0.3, 2.0));
  EXPECT_NEAR(std::abs(v - 1.0), 0, 1e-14);
}

TEST(Outer, BoundaryAndImaginaryAxis) {
  const auto w = Weight::product(1, 0, 0, 2, 0);
  OuterFunction phi(w);
  EXPECT_NEAR(std::abs(phi(Complex(1, 1e-3))) / 4.0 - 1, 0, 1e-3);
  EXPECT_NEAR(phi.boundary_modulus(1) / 4.0 - 1, 0, 1e-8);
  EXPECT_NEAR(phi.boundary_modulus(-5) / 36.0 - 1, 0, 1e-8);
  const auto prof = compute_profile(w, Eigen::VectorXd::Constant(1, 5.0), default_directions(w));
  EXPECT_NEAR(std::abs(phi(Complex(0, 5))) / std::exp(5 * prof.S[0]) - 1, 0, 1e-4);
}

TEST(Outer, AnalyticityViaCauchyRiemann) {
  // w = P + i Q must be holomorphic: dP/dx = dQ/dy
  OuterFunction phi(Weight::product(1, 1, 0.5, 0, 0));
  const Complex z(0.8, 1.5);
  const double h = 1e-4;
  const Complex dx = (phi.log_value(z + h) - phi.log_value(z - h)) / (2 * h);
  const Complex dy = (phi.log_value(z + Complex(0, h)) - phi.log_value(z - Complex(0, h))) / (2 * h);
  EXPECT_NEAR(dx.real(), dy.imag(), 1e-5);
  EXPECT_NEAR(dx.imag(), -dy.real(), 1e-5);
}

TEST(Outer, Preconditions) {
  EXPECT_THROW(OuterFunction(Weight::borderline(1, 1.0)), PreconditionError);
  EXPECT_THROW(OuterFunction(Weight::product(2, 0, 0, 2, 0)), ArgumentError);
}

TEST(Tent, Examples) {
  const auto w0 = Weight::product(2, 1, 0.5, 0, 0);
  const auto c0 = weight_constants(w0);
  auto r = verify_tent(PolyExpSum::constant(2, 1.0), w0, pt({0.3, 0.4}), mi({0, 0}), &c0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.ratio, 1.0);
  r = verify_tent(PolyExpSum::exponential(pt({1, 0})), w0, pt({0, 2}), mi({0, 0}), &c0);
  EXPECT_EQ(r.kappa, 0.0);
  EXPECT_TRUE(r.pass);
  const auto w1 = Weight::product(1, 0, 0, 2, 0);
  r = verify_tent(two_cos(1, pt({1})), w1, pt({3}), mi({1}));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.certified);
}

TEST(Est, TwoCosine) {
  const auto w = Weight::product(1, 0, 0, 2, 0);
  const auto c = weight_constants(w);
  for (double y : {0.5, 2.0}) {
    const auto r = verify_est(two_cos(1, pt({1})), w, y, &c);
    EXPECT_TRUE(r.pass) << y << " " << r.ratio;
  }
}
