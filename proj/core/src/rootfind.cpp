#include "cherry/rootfind.hpp"

namespace cherry {

BigReal bisect_root(const std::function<BigReal(const BigReal&)>& g,
                    const BigReal& lo, const BigReal& hi, const BigReal& tol) {
  if (!(tol.sign() > 0)) fail(ErrorKind::Domain, "bisect_root needs tol > 0");
  if (!(lo < hi)) fail(ErrorKind::Domain, "bisect_root needs lo < hi");

  BigReal a = lo, b = hi;
  BigReal ga = g(a);
  if (ga.is_zero()) return a;
  BigReal gb = g(b);
  if (gb.is_zero()) return b;
  if (ga.sign() == gb.sign())
    fail(ErrorKind::Bracket, "bisect_root: no sign change on [" + a.to_string() +
                                 ", " + b.to_string() + "]");

  const int want_neg = ga.sign();  // sign kept on the lo side
  const long max_iter = 64 + 4 * std::max(a.precision(), tol.precision());
  BigReal half = BigReal::from_string("0.5", a.precision());
  for (long it = 0; it < max_iter; ++it) {
    if (b - a <= tol) break;
    BigReal mid = a + (b - a) * half;
    if (mid <= a || mid >= b) break;  // bracket no longer splittable at this precision
    BigReal gm = g(mid);
    // Exact zero counts as the far side: the bracket keeps hugging lo.
    if (gm.is_zero() || gm.sign() != want_neg) {
      b = mid;
    } else {
      a = mid;
    }
  }
  if (b - a > tol)
    fail(ErrorKind::Precision, "bisect_root: bracket stalled above tolerance");
  return a + (b - a) * half;
}

}  // namespace cherry
