#include "cherry/classify.hpp"

#include "cherry/rootfind.hpp"

namespace cherry {

BigReal t_func(int which, long j, const BigReal& ell1, const BigReal& ell2) {
  if (which != 1 && which != 2) fail(ErrorKind::Domain, "t_func selector must be 1 or 2");
  if (j < 1) fail(ErrorKind::Domain, "t_func needs j >= 1");
  const BigReal& l = (which == 1) ? ell1 : ell2;
  if (!l.greater_than(1))
    fail(ErrorKind::Domain, "t_func is singular at exponent 1 (got " + l.to_string() + ")");
  BigReal one = BigReal::from_long(1, l.precision());
  return (one - pow_si(l, -j)) / (l - one);
}

TransferMatrix TransferMatrix::multiply(const TransferMatrix& a, const TransferMatrix& b) {
  auto mul = [&](int i, int j) {
    return a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  };
  return TransferMatrix(mul(0, 0), mul(0, 1), mul(1, 0), mul(1, 1), a.even_level);
}

BigReal TransferMatrix::det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

BigReal TransferMatrix::trace() const { return m[0][0] + m[1][1]; }

BigReal TransferMatrix::entry_max_abs() const {
  BigReal r = abs(m[0][0]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r = max(r, abs(m[i][j]));
  return r;
}

BigReal TransferMatrix::op_norm() const {
  // Largest singular value of a 2x2 matrix from the Frobenius norm and the
  // determinant: s_max^2 = (F^2 + sqrt(F^4 - 4 det^2)) / 2.
  BigReal f2 = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] +
               m[1][1] * m[1][1];
  BigReal d = det();
  BigReal four = BigReal::from_long(4, f2.precision());
  BigReal two = BigReal::from_long(2, f2.precision());
  BigReal disc = f2 * f2 - four * d * d;
  if (disc.sign() < 0) disc = BigReal::from_long(0, f2.precision());  // rounding
  return sqrt((f2 + sqrt(disc)) / two);
}

std::pair<BigReal, BigReal> TransferMatrix::eigenvalues() const {
  BigReal t = trace();
  BigReal d = det();
  BigReal two = BigReal::from_long(2, t.precision());
  BigReal four = BigReal::from_long(4, t.precision());
  BigReal disc = t * t - four * d;
  if (disc.sign() < 0)
    fail(ErrorKind::Domain, "transfer matrix has complex eigenvalues");
  BigReal r = sqrt(disc);
  return {(t - r) / two, (t + r) / two};
}

TransferMatrix transfer_matrix(bool even_level, long a_this, long a_prev,
                               const BigReal& ell1, const BigReal& ell2) {
  if (a_this < 1 || a_prev < 1)
    fail(ErrorKind::Domain, "transfer matrix needs partial quotients >= 1");
  long prec = ell1.precision();
  BigReal one = BigReal::from_long(1, prec);
  BigReal zero = BigReal::from_long(0, prec);
  if (even_level) {
    return TransferMatrix((ell2 / ell1) * t_func(2, a_this, ell1, ell2),
                          pow_si(ell1, -a_prev), one, zero, true);
  }
  return TransferMatrix((ell1 / ell2) * t_func(1, a_this, ell1, ell2),
                        pow_si(ell2, -a_prev), one, zero, false);
}

std::pair<BigReal, BigReal> biperiodic_eigen(long a, long b, const BigReal& ell1,
                                             const BigReal& ell2) {
  if (a < 1 || b < 1) fail(ErrorKind::Domain, "biperiodic_eigen needs a, b >= 1");
  long prec = ell1.precision();
  BigReal two = BigReal::from_long(2, prec);
  BigReal t1 = t_func(1, b, ell1, ell2);
  BigReal t2 = t_func(2, a, ell1, ell2);
  BigReal e1 = pow_si(ell1, -b);
  BigReal e2 = pow_si(ell2, -a);
  BigReal t12 = t1 * t2;
  BigReal rad = (e1 - e2) * (e1 - e2) + (t12 + two * (e1 + e2)) * t12;
  BigReal root = sqrt(rad);
  BigReal lambda_s = (-root + t12 + e1 + e2) / two;
  BigReal lambda_u = (root + t12 + e1 + e2) / two;
  if (!(lambda_s.sign() > 0) || !lambda_s.less_than(1))
    fail(ErrorKind::Internal, "lambda_s left (0,1): " + lambda_s.to_string());
  return {lambda_s, lambda_u};
}

std::vector<CurvePoint> curve_trace(long a, long b, const std::vector<BigReal>& ell1_grid,
                                    long precision_bits) {
  std::vector<CurvePoint> out;
  BigReal one = BigReal::from_long(1, precision_bits);
  BigReal tol = BigReal::pow2(-precision_bits / 2, precision_bits);
  std::optional<BigReal> prev_ell2;

  for (const BigReal& raw_l1 : ell1_grid) {
    BigReal l1 = raw_l1.round_to(precision_bits);
    if (!l1.greater_than(1))
      fail(ErrorKind::Domain, "curve grid values must exceed 1");
    auto residual = [&](const BigReal& l2) {
      return biperiodic_eigen(a, b, l1, l2).second - one;
    };

    // lambda_u > 1 near ell2 -> 1+, and -> ell1^-b < 1 as ell2 -> inf.
    BigReal lo = one + BigReal::pow2(-24, precision_bits);
    BigReal hi = BigReal::from_long(8, precision_bits);
    int expand = 0;
    while (residual(hi).sign() >= 0 && expand < 40) {
      hi = hi * BigReal::from_long(2, precision_bits);
      ++expand;
    }
    CurvePoint pt{l1, std::nullopt, std::nullopt};
    if (residual(lo).sign() <= 0) {
      out.push_back(std::move(pt));  // curve exits the domain at this ell1
      continue;
    }
    if (residual(hi).sign() >= 0)
      fail(ErrorKind::Bracket, "no lambda_u = 1 bracket found for ell1 = " + l1.to_string());
    BigReal l2 = bisect_root(residual, lo, hi, tol);
    pt.lambda_u_residual = residual(l2);
    pt.ell2 = l2;
    if (prev_ell2 && !(l2 < *prev_ell2))
      fail(ErrorKind::Internal, "traced curve is not decreasing at ell1 = " + l1.to_string());
    prev_ell2 = l2;
    out.push_back(std::move(pt));
  }
  return out;
}

MatrixAuditReport matrix_product_audit(const ContinuedFraction& cf, const BigReal& ell1,
                                       const BigReal& ell2, long n_max,
                                       long precision_bits) {
  if (n_max < 4) fail(ErrorKind::Domain, "matrix product audit needs n >= 4");
  if (!cf.bounded_type())
    fail(ErrorKind::Domain, "matrix product audit needs a bounded-type rotation number");
  BigReal l1 = ell1.round_to(precision_bits);
  BigReal l2 = ell2.round_to(precision_bits);

  MatrixAuditReport rep(max(l1 / l2, l2 / l1));
  const bool in_bound_region = !l1.less_than(2) && !l2.less_than(2);
  const bool strict_region = in_bound_region && !(l1.equals(2) && l2.equals(2));

  std::optional<TransferMatrix> prod;
  for (long n = 4; n <= n_max; n += 2) {
    TransferMatrix an = transfer_matrix(true, cf.quotient(n), cf.quotient(n - 1), l1, l2);
    TransferMatrix an1 = transfer_matrix(false, cf.quotient(n - 1), cf.quotient(n - 2), l1, l2);
    TransferMatrix abar = TransferMatrix::multiply(an, an1);
    prod = prod ? TransferMatrix::multiply(abar, *prod) : abar;

    MatrixAuditLevel lvl{n, prod->entry_max_abs(), prod->op_norm()};
    if (in_bound_region && lvl.entry_max > rep.entry_bound) rep.entry_bound_ok = false;
    if (strict_region && !rep.contraction_onset && lvl.op_norm.less_than(1))
      rep.contraction_onset = n;
    rep.levels.push_back(std::move(lvl));
  }
  return rep;
}

BigReal wprime(const BigReal& x, const BigReal& y, const BigReal& ell1,
               const BigReal& ell2) {
  long prec = std::min(x.precision(), y.precision());
  BigReal one = BigReal::from_long(1, prec);
  BigReal two = BigReal::from_long(2, prec);
  BigReal four = BigReal::from_long(4, prec);
  if (x.sign() <= 0 || !x.less_than(1) || y.sign() <= 0 || !y.less_than(1))
    fail(ErrorKind::Domain, "wprime needs x, y in (0,1)");
  BigReal radicand = one - (two * (ell1 - one) / ell1) * pow(x, two / ell2);
  if (radicand.sign() < 0) fail(ErrorKind::Domain, "wprime radicand negative");
  BigReal head = one / (ell1 / two + (ell1 / two) * sqrt(radicand));
  BigReal tailv = pow(y, four / ell1 - two) / (one - pow(y, two / ell1));
  return head * tailv;
}

WprimeCheck wprime_constants_check(long precision_bits) {
  BigReal two = BigReal::from_long(2, precision_bits);
  auto w = [&](const char* x, const char* y) {
    return wprime(BigReal::from_string(x, precision_bits),
                  BigReal::from_string(y, precision_bits), two, two);
  };
  WprimeCheck c{w("0.55", "0.16"), w("0.3", "0.44"),
                w("0.55", "0.16") * w("0.16", "0.55"), false, false, false};
  c.ok_09 = c.w_055_016 < BigReal::from_string("0.9", precision_bits);
  c.ok_098 = c.w_03_044 < BigReal::from_string("0.98", precision_bits);
  c.ok_085 = c.product < BigReal::from_string("0.85", precision_bits);
  return c;
}

std::string to_string(GeometryRegion r) {
  switch (r) {
    case GeometryRegion::Degenerate: return "Degenerate";
    case GeometryRegion::Bounded: return "Bounded";
    case GeometryRegion::Critical: return "Critical";
    case GeometryRegion::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(VerdictBasis b) {
  switch (b) {
    case VerdictBasis::TheoremRegion: return "theorem-region";
    case VerdictBasis::LambdaCriterion: return "lambda-criterion";
    case VerdictBasis::EmpiricalOnly: return "empirical-only";
  }
  return "empirical-only";
}

GeometryVerdict classify_point(const ContinuedFraction& cf, const BigReal& ell1,
                               const BigReal& ell2, long precision_bits) {
  GeometryVerdict v(ell1.round_to(precision_bits), ell2.round_to(precision_bits));
  v.cf_spec = cf.to_spec();
  if (v.ell1.less_than(1) || v.ell2.less_than(1))
    fail(ErrorKind::Domain, "critical exponents must be >= 1");

  long a_odd = 0, a_even = 0;
  bool biper = cf.biperiodic(&a_odd, &a_even);
  if (biper && v.ell1.greater_than(1) && v.ell2.greater_than(1)) {
    auto [ls, lu] = biperiodic_eigen(a_even, a_odd, v.ell1, v.ell2);
    v.lambda_s = ls;
    v.lambda_u = lu;
  }
  BigReal tol = BigReal::from_string("1e-9", precision_bits);
  BigReal one = BigReal::from_long(1, precision_bits);

  const bool in_unit_square =
      !v.ell1.greater_than(2) && !v.ell2.greater_than(2);
  const bool in_bounded_region = !v.ell1.less_than(2) && !v.ell2.less_than(2) &&
                                 !(v.ell1.equals(2) && v.ell2.equals(2));

  if (v.ell1.equals(2) && v.ell2.equals(2)) {
    v.region = GeometryRegion::Critical;
    v.basis = VerdictBasis::TheoremRegion;
    v.note = "(2,2) lies on the lambda_u = 1 curve; the degenerate-side theorem "
             "includes it under the negative-Schwarzian assumption while the "
             "bounded-side theorem excludes it";
    return v;
  }
  if (v.lambda_u && abs(*v.lambda_u - one) <= tol) {
    v.region = GeometryRegion::Critical;
    v.basis = VerdictBasis::LambdaCriterion;
    return v;
  }
  if (in_unit_square) {
    v.region = GeometryRegion::Degenerate;
    v.basis = VerdictBasis::TheoremRegion;
    v.note = "requires the negative-Schwarzian assumption";
    return v;
  }
  if (in_bounded_region && cf.bounded_type()) {
    v.region = GeometryRegion::Bounded;
    v.basis = VerdictBasis::TheoremRegion;
    return v;
  }
  if (v.lambda_u && *v.lambda_u < one - tol) {
    v.region = GeometryRegion::Bounded;
    v.basis = VerdictBasis::LambdaCriterion;
    return v;
  }
  if (v.lambda_u && *v.lambda_u > one + tol) {
    v.region = GeometryRegion::Unknown;
    v.basis = VerdictBasis::LambdaCriterion;
    v.note = "lambda_u > 1 outside [1,2]^2: degenerate side unproved";
    return v;
  }
  v.region = GeometryRegion::Unknown;
  v.basis = VerdictBasis::EmpiricalOnly;
  return v;
}

}  // namespace cherry
