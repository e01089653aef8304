#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace liouville {

/// Real number stored as mantissa * e^exponent with an integer exponent, for
/// magnitudes such as l^{2l} or e^{k^{2l+1}} that leave the double range.
/// Nonzero values keep |mantissa| in [1, e).
template <typename Scalar>
class BasicExtReal {
 public:
  BasicExtReal() = default;
  BasicExtReal(Scalar v) : mant_(v), exp_(0) { normalize(); }  // NOLINT implicit by intent

  /// The positive number e^log_value.
  static BasicExtReal from_log(Scalar log_value) {
    BasicExtReal r;
    const Scalar fl = std::floor(log_value);
    r.exp_ = static_cast<std::int64_t>(fl);
    r.mant_ = std::exp(log_value - fl);
    r.normalize();
    return r;
  }

  Scalar mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }
  bool is_zero() const { return mant_ == Scalar(0); }
  int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }

  /// log|x|; -inf for zero.
  Scalar log_abs() const {
    if (is_zero()) return -std::numeric_limits<Scalar>::infinity();
    return std::log(std::abs(mant_)) + static_cast<Scalar>(exp_);
  }

  /// Converts to Scalar; saturates to +-inf or 0 outside the range.
  Scalar value() const {
    if (is_zero()) return Scalar(0);
    return mant_ * std::exp(static_cast<Scalar>(exp_));
  }

  BasicExtReal operator-() const {
    BasicExtReal r = *this;
    r.mant_ = -r.mant_;
    return r;
  }

  friend BasicExtReal operator*(BasicExtReal a, const BasicExtReal& b) {
    a.mant_ *= b.mant_;
    a.exp_ += b.exp_;
    a.normalize();
    return a;
  }

  friend BasicExtReal operator/(BasicExtReal a, const BasicExtReal& b) {
    a.mant_ /= b.mant_;
    a.exp_ -= b.exp_;
    a.normalize();
    return a;
  }

  friend BasicExtReal operator+(const BasicExtReal& a, const BasicExtReal& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const BasicExtReal& hi = a.exp_ >= b.exp_ ? a : b;
    const BasicExtReal& lo = a.exp_ >= b.exp_ ? b : a;
    const std::int64_t gap = hi.exp_ - lo.exp_;
    BasicExtReal r = hi;
    // Beyond ~800 e-folds the smaller term is below double resolution.
    if (gap < 800) r.mant_ += lo.mant_ * std::exp(-static_cast<Scalar>(gap));
    r.normalize();
    return r;
  }

  friend BasicExtReal operator-(const BasicExtReal& a, const BasicExtReal& b) { return a + (-b); }

  BasicExtReal& operator+=(const BasicExtReal& o) { return *this = *this + o; }
  BasicExtReal& operator*=(const BasicExtReal& o) { return *this = *this * o; }

  friend bool operator<(const BasicExtReal& a, const BasicExtReal& b) { return (a - b).sign() < 0; }
  friend bool operator>(const BasicExtReal& a, const BasicExtReal& b) { return b < a; }
  friend bool operator<=(const BasicExtReal& a, const BasicExtReal& b) { return !(b < a); }
  friend bool operator>=(const BasicExtReal& a, const BasicExtReal& b) { return !(a < b); }

  /// x^p for x > 0, p real.
  friend BasicExtReal pow(const BasicExtReal& x, Scalar p) { return from_log(p * x.log_abs()); }

  friend std::ostream& operator<<(std::ostream& os, const BasicExtReal& x) {
    return os << x.mant_ << "e^" << x.exp_;
  }

 private:
  void normalize() {
    if (mant_ == Scalar(0) || !std::isfinite(mant_)) {
      if (mant_ == Scalar(0)) exp_ = 0;
      return;
    }
    const Scalar l = std::log(std::abs(mant_));
    const Scalar fl = std::floor(l);
    if (fl != Scalar(0)) {
      mant_ *= std::exp(-fl);
      exp_ += static_cast<std::int64_t>(fl);
    }
  }

  Scalar mant_ = 0;
  std::int64_t exp_ = 0;
};

using ExtReal = BasicExtReal<double>;

/// log(sum_k e^{v_k}) without overflow.
template <typename Range>
double log_sum_exp(const Range& logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logs) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace liouville
