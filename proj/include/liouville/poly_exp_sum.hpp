#pragma once

#include "liouville/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace liouville {

/// One term c z^alpha e^{i xi.z}.
template <typename Scalar>
struct BasicTerm {
  std::complex<Scalar> c;
  MultiIndex alpha;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> xi;
};

/// Entire function sum_k c_k z^{alpha_k} e^{i xi_k . z} on C^n with real xi_k.
/// The term list is kept normalized: (alpha, xi) pairs are distinct, coefficients nonzero,
/// and terms are sorted so that equal functions compare equal term by term.
template <typename Scalar>
class BasicPolyExpSum {
 public:
  using C = std::complex<Scalar>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using CVec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  using Term = BasicTerm<Scalar>;

  explicit BasicPolyExpSum(int n = 1) : n_(n) {
    if (n < 1) throw ArgumentError("dimension must be positive");
  }
  BasicPolyExpSum(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
    if (n < 1) throw ArgumentError("dimension must be positive");
    for (const auto& t : terms_)
      if (t.alpha.size() != n || t.xi.size() != n) throw ArgumentError("term has the wrong dimension");
    for (const auto& t : terms_)
      if ((t.alpha.array() < 0).any()) throw ArgumentError("negative multi-index");
    normalize();
  }

  static BasicPolyExpSum constant(int n, C c) { return {n, {Term{c, MultiIndex::Zero(n), Vec::Zero(n)}}}; }
  static BasicPolyExpSum exponential(const Vec& xi, C c = C(1)) {
    const int n = static_cast<int>(xi.size());
    return {n, {Term{c, MultiIndex::Zero(n), xi}}};
  }
  static BasicPolyExpSum monomial(const MultiIndex& alpha, C c = C(1)) {
    const int n = static_cast<int>(alpha.size());
    return {n, {Term{c, alpha, Vec::Zero(n)}}};
  }
  /// (z_1 + i z_2)^k on C^2.
  static BasicPolyExpSum harmonic_power(int k) {
    std::vector<Term> t;
    for (int j = 0; j <= k; ++j) {
      MultiIndex a(2);
      a << k - j, j;
      // binom(k,j) i^j
      Scalar b = 1;
      for (int m = 1; m <= j; ++m) b = b * Scalar(k - j + m) / Scalar(m);
      t.push_back(Term{b * ipow(j), a, Vec::Zero(2)});
    }
    return {2, std::move(t)};
  }

  int dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest total degree |alpha_k|.
  int degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, order(t.alpha));
    return d;
  }
  int max_partial_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.alpha.maxCoeff());
    return d;
  }
  Scalar max_frequency() const {
    Scalar m = 0;
    for (const auto& t : terms_) m = std::max(m, t.xi.norm());
    return m;
  }

  C operator()(const CVec& z) const {
    if (z.size() != n_) throw ArgumentError("evaluation point has the wrong dimension");
    C s(0);
    for (const auto& t : terms_) {
      C v = t.c;
      C phase(0);
      for (int k = 0; k < n_; ++k) {
        if (t.alpha[k] > 0) v *= std::pow(z[k], t.alpha[k]);
        phase += t.xi[k] * z[k];
      }
      s += v * std::exp(C(0, 1) * phase);
    }
    return s;
  }

  /// f(x + i y).
  C at(const Vec& x, const Vec& y) const {
    CVec z(n_);
    for (int k = 0; k < n_; ++k) z[k] = C(x[k], y[k]);
    return (*this)(z);
  }

  /// Exact derivative by the Leibniz rule, coordinate by coordinate:
  /// d^a (z^b e^{i xi z}) = sum_j C(a,j) b!/(b-j)! (i xi)^{a-j} z^{b-j} e^{i xi z}.
  BasicPolyExpSum derivative(const MultiIndex& a) const {
    if (a.size() != n_) throw ArgumentError("multi-index has the wrong dimension");
    std::vector<Term> cur = terms_;
    for (int k = 0; k < n_; ++k) {
      if (a[k] == 0) continue;
      std::vector<Term> next;
      for (const auto& t : cur) {
        const int b = t.alpha[k];
        const C ixi(0, t.xi[k]);
        for (int j = 0; j <= std::min(a[k], b); ++j) {
          if (a[k] - j > 0 && t.xi[k] == Scalar(0)) continue;
          Scalar coef = binom(a[k], j);
          for (int m = 0; m < j; ++m) coef *= Scalar(b - m);
          Term u = t;
          u.c = t.c * coef * cpow(ixi, a[k] - j);
          u.alpha[k] = b - j;
          next.push_back(std::move(u));
        }
      }
      cur = std::move(next);
    }
    return {n_, std::move(cur)};
  }

  /// z -> f(z + w) for a complex shift; stays in the class.
  BasicPolyExpSum shifted(const CVec& w) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      // e^{i xi.w}
      const C base = t.c * std::exp(C(-t.xi.dot(w.imag()), t.xi.dot(w.real())));
      // expand prod_k (z_k + w_k)^{alpha_k}
      std::vector<Term> partial{Term{base, MultiIndex::Zero(n_), t.xi}};
      for (int k = 0; k < n_; ++k) {
        std::vector<Term> nx;
        for (const auto& p : partial)
          for (int j = 0; j <= t.alpha[k]; ++j) {
            Term u = p;
            u.c *= binom(t.alpha[k], j) * cpow(w[k], t.alpha[k] - j);
            u.alpha[k] = j;
            nx.push_back(std::move(u));
          }
        partial = std::move(nx);
      }
      out.insert(out.end(), partial.begin(), partial.end());
    }
    return {n_, std::move(out)};
  }

  friend BasicPolyExpSum operator+(const BasicPolyExpSum& f, const BasicPolyExpSum& g) {
    if (f.n_ != g.n_) throw ArgumentError("dimension mismatch");
    std::vector<Term> t = f.terms_;
    t.insert(t.end(), g.terms_.begin(), g.terms_.end());
    return {f.n_, std::move(t)};
  }
  friend BasicPolyExpSum operator*(C s, const BasicPolyExpSum& f) {
    std::vector<Term> t = f.terms_;
    for (auto& u : t) u.c *= s;
    return {f.n_, std::move(t)};
  }
  friend BasicPolyExpSum operator*(const BasicPolyExpSum& f, const BasicPolyExpSum& g) {
    if (f.n_ != g.n_) throw ArgumentError("dimension mismatch");
    std::vector<Term> t;
    for (const auto& a : f.terms_)
      for (const auto& b : g.terms_) t.push_back(Term{a.c * b.c, a.alpha + b.alpha, a.xi + b.xi});
    return {f.n_, std::move(t)};
  }

 private:
  static Scalar binom(int n, int k) {
    Scalar r = 1;
    for (int m = 1; m <= k; ++m) r = r * Scalar(n - k + m) / Scalar(m);
    return r;
  }
  static C ipow(int j) {
    switch (j & 3) {
      case 0: return C(1, 0);
      case 1: return C(0, 1);
      case 2: return C(-1, 0);
      default: return C(0, -1);
    }
  }
  static C cpow(C z, int k) {
    C r(1);
    for (int m = 0; m < k; ++m) r *= z;
    return r;
  }

  static bool key_less(const Term& a, const Term& b) {
    for (Eigen::Index k = 0; k < a.alpha.size(); ++k)
      if (a.alpha[k] != b.alpha[k]) return a.alpha[k] < b.alpha[k];
    for (Eigen::Index k = 0; k < a.xi.size(); ++k)
      if (a.xi[k] != b.xi[k]) return a.xi[k] < b.xi[k];
    return false;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<Term> merged;
    for (auto& t : terms_) {
      if (!merged.empty() && !key_less(merged.back(), t) && !key_less(t, merged.back()))
        merged.back().c += t.c;
      else
        merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.c == C(0); }),
                 merged.end());
    terms_ = std::move(merged);
  }

  int n_;
  std::vector<Term> terms_;
};

using Term = BasicTerm<double>;
using PolyExpSum = BasicPolyExpSum<double>;

/// kappa_f(omega) = max_k (-xi_k . omega), the exponential rate of |f(x + i t omega)|.
template <typename Scalar>
Scalar kappa(const BasicPolyExpSum<Scalar>& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& omega) {
  if (f.is_zero()) throw ArgumentError("kappa of the zero function is undefined");
  if (omega.size() != f.dim()) throw ArgumentError("direction has the wrong dimension");
  if (std::abs(omega.norm() - Scalar(1)) > Scalar(1e-9)) throw ArgumentError("direction must be a unit vector");
  Scalar k = -std::numeric_limits<Scalar>::infinity();
  for (const auto& t : f.terms()) k = std::max(k, -t.xi.dot(omega));
  return k;
}

/// d^alpha f(z) by the iterated Cauchy formula on the unit torus around z,
/// alpha!/N^n sum_theta f(z + e^{i theta}) e^{-i alpha.theta} (trapezoid rule).
template <typename Scalar>
std::complex<Scalar> polydisc_derivative(const BasicPolyExpSum<Scalar>& f,
                                         const typename BasicPolyExpSum<Scalar>::CVec& z,
                                         const MultiIndex& alpha, int nodes_per_circle) {
  using C = std::complex<Scalar>;
  const int n = f.dim();
  if (nodes_per_circle < 16) throw ArgumentError("polydisc rule needs at least 16 nodes per circle");
  if (alpha.size() != n || z.size() != n) throw ArgumentError("dimension mismatch");
  const int N = nodes_per_circle;
  std::vector<C> roots(N);
  for (int j = 0; j < N; ++j) {
    const Scalar th = Scalar(2) * Scalar(kPi) * Scalar(j) / Scalar(N);
    roots[j] = C(std::cos(th), std::sin(th));
  }
  std::vector<int> idx(n, 0);
  typename BasicPolyExpSum<Scalar>::CVec p(n);
  C sum(0);
  for (;;) {
    C twist(1);
    for (int k = 0; k < n; ++k) {
      p[k] = z[k] + roots[idx[k]];
      // e^{-i alpha_k theta_k}
      twist *= std::conj(roots[(static_cast<long>(alpha[k]) * idx[k]) % N]);
    }
    sum += f(p) * twist;
    int k = 0;
    while (k < n && ++idx[k] == N) idx[k++] = 0;
    if (k == n) break;
  }
  Scalar scale = Scalar(factorial(alpha));
  for (int k = 0; k < n; ++k) scale /= Scalar(N);
  return sum * scale;
}

}  // namespace liouville
