#include "liouville/ext_real.hpp"
#include "liouville/parallel.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/types.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace liouville;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

TEST(Quadrature, Polynomial) {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, ReversedLimits) {
  auto r = quad::integrate([](double x) { return std::cos(x); }, 1.0, 0.0);
  EXPECT_NEAR(r.value, -std::sin(1.0), 1e-14);
}

TEST(Quadrature, EndpointSingularity) {
  auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, LogScaleAlgebraicDecay) {
  auto r = quad::integrate_log_scale([](double t) { return 1.0 / (t * t); }, 1.0, 1e12);
  EXPECT_NEAR(r.value, 1.0 - 1e-12, 1e-12);
  auto s = quad::integrate_log_scale([](double t) { return std::log(t) / (t * t); }, 1.0, 1e10);
  // int_1^T log t / t^2 = 1 - (1 + log T)/T
  EXPECT_NEAR(s.value, 1.0 - (1.0 + std::log(1e10)) / 1e10, 1e-12);
}

TEST(Quadrature, ReusableRule) {
  auto f = [](double t) { return std::exp(-t * t); };
  auto rule = quad::adaptive_rule(f, -6.0, 6.0, 1.0);
  double v = 0, w = 0;
  for (const auto& p : rule)
    for (int j = 0; j < 21; ++j) {
      v += p.weights[j] * f(p.nodes[j]);
      w += p.weights[j] * std::cos(p.nodes[j]) * f(p.nodes[j]);
    }
  EXPECT_NEAR(v, std::sqrt(kPi), 1e-12);
  // int cos(t) e^{-t^2} = sqrt(pi) e^{-1/4}
  EXPECT_NEAR(w, std::sqrt(kPi) * std::exp(-0.25), 1e-12);
}

TEST(ExtReal, MatchesMultiprecision) {
  // l^{2l} and sums of such for l up to 500 leave the double range
  ExtReal acc(0.0);
  BigFloat ref = 0;
  for (int l = 1; l <= 500; l += 7) {
    acc += pow(ExtReal(double(l)), 2.0 * l);
    ref += boost::multiprecision::pow(BigFloat(l), 2 * l);
  }
  const double ref_log = static_cast<double>(boost::multiprecision::log(ref));
  EXPECT_NEAR(acc.log_abs(), ref_log, 1e-12 * ref_log);
}

TEST(ExtReal, ArithmeticAndOrder) {
  ExtReal a = ExtReal::from_log(2000.0), b = ExtReal::from_log(1999.0);
  EXPECT_TRUE(b < a);
  EXPECT_NEAR((a / b).value(), kE, 1e-12);
  EXPECT_NEAR((a - b).log_abs(), 2000.0 + std::log1p(-1.0 / kE), 1e-10);
  EXPECT_EQ((a - a).sign(), 0);
  EXPECT_NEAR((ExtReal(3.0) * ExtReal(-2.0)).value(), -6.0, 1e-14);
  EXPECT_EQ(ExtReal::from_log(800.0).value(), INFINITY);
}

TEST(ExtReal, LogSumExp) {
  std::vector<double> v{1000.0, 1000.0, -5.0};
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0 + std::exp(-1005.0)), 1e-12);
}

TEST(Parallel, EveryIndexOnce) {
  setenv("LIOUVILLE_LAB_THREADS", "3", 1);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_LE(thread_count(), 3u);
  unsetenv("LIOUVILLE_LAB_THREADS");
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
