#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>
#include <utility>

#include "cherry/error.hpp"

namespace cherry {

/// Adjustable-precision real number backed by MPFR.
///
/// Every value carries its own mantissa precision in bits; binary operations
/// round to the minimum precision of the two operands.
class BigReal {
 public:
  static constexpr long kMinPrec = MPFR_PREC_MIN;

  BigReal() = delete;

  explicit BigReal(long precision_bits) {
    check_precision(precision_bits);
    mpfr_init2(v_, precision_bits);
    mpfr_set_nan(v_);
  }

  BigReal(const BigReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  BigReal(BigReal&& o) noexcept {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, kMinPrec);  // leave the source destructible
  }

  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  BigReal& operator=(BigReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~BigReal() { mpfr_clear(v_); }

  // -- construction -------------------------------------------------------

  static BigReal from_string(std::string_view s, long precision_bits);
  static BigReal from_long(long k, long precision_bits);
  static BigReal from_double(double d, long precision_bits);
  /// 2^e at the given precision (exact).
  static BigReal pow2(long e, long precision_bits);

  // -- queries -------------------------------------------------------------

  long precision() const { return mpfr_get_prec(v_); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  /// Decimal serialization with just enough digits to reparse exactly at the
  /// same precision (round to nearest both ways).
  std::string to_string() const;

  /// Same value rounded to a different precision.
  BigReal round_to(long precision_bits) const {
    BigReal r(precision_bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  // -- arithmetic ----------------------------------------------------------

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    return binop(a, b, mpfr_add);
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    return binop(a, b, mpfr_sub);
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    return binop(a, b, mpfr_mul);
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    return binop(a, b, mpfr_div);
  }
  friend BigReal operator-(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& b) { return *this = *this + b; }
  BigReal& operator-=(const BigReal& b) { return *this = *this - b; }
  BigReal& operator*=(const BigReal& b) { return *this = *this * b; }
  BigReal& operator/=(const BigReal& b) { return *this = *this / b; }

  // -- comparisons (total order on non-NaN values) --------------------------

  friend bool operator<(const BigReal& a, const BigReal& b) { return cmp(a, b) < 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return cmp(a, b) != 0; }

  bool less_than(long k) const { return mpfr_cmp_si(v_, k) < 0; }
  bool greater_than(long k) const { return mpfr_cmp_si(v_, k) > 0; }
  bool equals(long k) const { return mpfr_cmp_si(v_, k) == 0; }

  // -- elementary functions (result precision = argument precision) ---------

  friend BigReal sqrt(const BigReal& a) { return unop(a, mpfr_sqrt); }
  friend BigReal log(const BigReal& a) { return unop(a, mpfr_log); }
  friend BigReal exp(const BigReal& a) { return unop(a, mpfr_exp); }
  friend BigReal abs(const BigReal& a) { return unop(a, mpfr_abs); }
  friend BigReal floor_of(const BigReal& a) {
    BigReal r(a.precision());
    mpfr_floor(r.v_, a.v_);
    return r;
  }
  friend BigReal gamma_fn(const BigReal& a) { return unop(a, mpfr_gamma); }
  friend BigReal pow(const BigReal& a, const BigReal& b) {
    return binop(a, b, mpfr_pow);
  }
  friend BigReal pow_si(const BigReal& a, long e) {
    BigReal r(a.precision());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend const BigReal& min(const BigReal& a, const BigReal& b) {
    return a <= b ? a : b;
  }
  friend const BigReal& max(const BigReal& a, const BigReal& b) {
    return a >= b ? a : b;
  }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  static void check_precision(long p) {
    if (p < kMinPrec || p > 1L << 30)
      fail(ErrorKind::Domain, "BigReal precision out of range: " + std::to_string(p));
  }

  static int cmp(const BigReal& a, const BigReal& b) {
    if (a.is_nan() || b.is_nan())
      fail(ErrorKind::Domain, "comparison with NaN BigReal");
    return mpfr_cmp(a.v_, b.v_);
  }

  using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  using MpfrBinary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

  static BigReal unop(const BigReal& a, MpfrUnary op) {
    BigReal r(a.precision());
    op(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  static BigReal binop(const BigReal& a, const BigReal& b, MpfrBinary op) {
    BigReal r(std::min(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

/// Convenience: integer literal lifted to the precision of a companion value.
inline BigReal lit(long k, const BigReal& like) {
  return BigReal::from_long(k, like.precision());
}

}  // namespace cherry
