#include "cherry/bigreal.hpp"

#include <cctype>
#include <cstdlib>
#include <cstring>

namespace cherry {

BigReal BigReal::from_string(std::string_view s, long precision_bits) {
  check_precision(precision_bits);
  BigReal r(precision_bits);
  std::string buf(s);
  if (buf.empty()) fail(ErrorKind::Domain, "empty decimal string");
  if (mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0)
    fail(ErrorKind::Domain, "unparseable decimal string: '" + buf + "'");
  return r;
}

BigReal BigReal::from_long(long k, long precision_bits) {
  check_precision(precision_bits);
  BigReal r(precision_bits);
  mpfr_set_si(r.v_, k, MPFR_RNDN);
  return r;
}

BigReal BigReal::from_double(double d, long precision_bits) {
  check_precision(precision_bits);
  BigReal r(precision_bits);
  mpfr_set_d(r.v_, d, MPFR_RNDN);
  return r;
}

BigReal BigReal::pow2(long e, long precision_bits) {
  check_precision(precision_bits);
  BigReal r(precision_bits);
  mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

std::string BigReal::to_string() const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
  if (mpfr_zero_p(v_)) return "0";

  mpfr_exp_t exp10 = 0;
  // n = 0 asks MPFR for exactly enough digits to reparse the value at this
  // precision with round-to-nearest on both sides.
  char* raw = mpfr_get_str(nullptr, &exp10, 10, 0, v_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);

  bool neg = false;
  if (!digits.empty() && digits[0] == '-') {
    neg = true;
    digits.erase(0, 1);
  }
  // Trailing zeros never change how the string reparses.
  size_t last = digits.find_last_not_of('0');
  digits.erase(last + 1);
  if (digits.empty()) return "0";

  // Value is 0.digits * 10^exp10; render as d.ddd...e<exp10-1>.
  std::string out;
  if (neg) out += '-';
  out += digits[0];
  if (digits.size() > 1) {
    out += '.';
    out += digits.substr(1);
  }
  long e = static_cast<long>(exp10) - 1;
  if (e != 0) {
    out += 'e';
    out += std::to_string(e);
  }
  return out;
}

}  // namespace cherry
