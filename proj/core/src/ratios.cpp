#include "cherry/ratios.hpp"

#include <algorithm>

#include "cherry/classify.hpp"

namespace cherry {

namespace {

// Gap between a backward-orbit arc and U. Arcs of even level sit on the
// right of U (between r(U) and the arc), odd levels on the left; the level's
// parity is passed in as `right_side`.
BigReal backward_gap(const FlatCircleMap& m, const Arc& arc, bool right_side) {
  return right_side ? forward_distance(m.b(), arc.left())
                    : forward_distance(arc.right(), m.a());
}

// Gap between U and a forward-orbit return point (right of U for odd levels).
BigReal forward_gap(const FlatCircleMap& m, const CirclePoint& pt, bool right_side) {
  return right_side ? forward_distance(m.b(), pt)
                    : forward_distance(pt, m.a());
}

// Gap between two backward arcs on the same side of U: the connecting arc
// that does not wrap around through the flat piece.
BigReal chain_gap(const FlatCircleMap& m, const Arc& a, const Arc& b) {
  BigReal g1 = forward_distance(a.right(), b.left());
  BigReal g2 = forward_distance(b.right(), a.left());
  if (g1.is_zero() || g2.is_zero())
    fail(ErrorKind::Precision, "chain arcs touch at working precision");
  Arc cand(a.right(), g1);
  return cand.contains(m.b()) ? g2 : g1;
}

}  // namespace

long RatioSeries::quotient(long n) const {
  if (n < 1 || n > static_cast<long>(quotients_.size()))
    fail(ErrorKind::Depth, "quotient a_" + std::to_string(n) + " not recorded");
  return quotients_[n - 1];
}

const LevelRatios& RatioSeries::level(long n) const {
  if (n < 1 || n > depth_)
    fail(ErrorKind::Depth, "ratio level " + std::to_string(n) + " outside series");
  return levels_[n];
}

LevelRatios& RatioSeries::level_mut(long n) {
  if (n < 1 || n > depth_)
    fail(ErrorKind::Depth, "ratio level " + std::to_string(n) + " outside series");
  return levels_[n];
}

const BigReal& RatioSeries::field(long n, const std::optional<BigReal>& v,
                                  const char* name) const {
  if (!v)
    fail(ErrorKind::Depth,
         std::string(name) + "_" + std::to_string(n) + " not defined at this level");
  return *v;
}

const BigReal& RatioSeries::alpha(long n) const { return field(n, level(n).alpha, "alpha"); }
const BigReal& RatioSeries::sigma(long n) const { return field(n, level(n).sigma, "sigma"); }
const BigReal& RatioSeries::s_ratio(long n) const { return field(n, level(n).s, "s"); }
const BigReal& RatioSeries::tau(long n) const { return field(n, level(n).tau, "tau"); }
const BigReal& RatioSeries::kappa(long n) const { return field(n, level(n).kappa, "kappa"); }
const BigReal& RatioSeries::nu(long n) const { return field(n, level(n).nu, "nu"); }

const BigReal& RatioSeries::beta(long n, long k) const {
  const auto& v = level(n).beta;
  if (k < 0 || k >= static_cast<long>(v.size()))
    fail(ErrorKind::Depth, "beta_" + std::to_string(n) + "(" + std::to_string(k) +
                               ") not defined");
  return v[k];
}

const BigReal& RatioSeries::gamma1(long n, long k) const {
  const auto& v = level(n).gamma1;
  if (k < 0 || k >= static_cast<long>(v.size()))
    fail(ErrorKind::Depth, "gamma1_" + std::to_string(n) + "(" + std::to_string(k) +
                               ") not defined");
  return v[k];
}

RatioSeries compute_ratios(const FlatCircleMap& m, const BackwardOrbit& back,
                           const ForwardOrbit& fwd, const ConvergentTable& table,
                           long depth) {
  if (depth < 1) fail(ErrorKind::Domain, "ratio depth must be >= 1");
  if (table.depth() < depth)
    fail(ErrorKind::Depth, "convergent table too short for ratio depth");
  if (back.count() < table.q(depth))
    fail(ErrorKind::Depth, "backward orbit too short for ratio depth");
  if (fwd.count() < table.q(depth) + 1)
    fail(ErrorKind::Depth, "forward orbit too short for ratio depth");

  // Partial quotients recoverable from the q recursion.
  std::vector<long> quots;
  if (table.depth() >= 2) quots.push_back(static_cast<long>(table.q(2)));
  for (long n = 3; n <= table.depth(); ++n)
    quots.push_back(static_cast<long>((table.q(n) - table.q(n - 2)) / table.q(n - 1)));

  RatioSeries series(m.ell1(), m.ell2(), quots, depth, m.precision());
  const BigReal& u_len = m.flat().length();

  // Gap between points 1 and q_n + 1 of the forward orbit: the image of the
  // level-n return gap, oriented by the same parity as the return side.
  auto image_gap = [&](long n) {
    const CirclePoint& pt = fwd.point(table.q(n) + 1);
    return (n % 2 == 1) ? forward_distance(m.c(), pt)
                        : forward_distance(pt, m.c());
  };

  for (long n = 1; n <= depth; ++n) {
    LevelRatios& L = series.level_mut(n);
    L.n = n;
    const bool bright = (n % 2 == 0);
    const Arc& qn_arc = back.arc(table.q(n));

    BigReal g = backward_gap(m, qn_arc, bright);
    L.alpha = g / (g + qn_arc.length());
    L.nu = -log(*L.alpha);
    L.beta.push_back(*L.alpha);
    L.gamma1.push_back(g);

    if (n >= 2) {
      BigReal fg = forward_gap(m, fwd.point(table.q(n)), n % 2 == 1);
      BigReal fg_prev = forward_gap(m, fwd.point(table.q(n - 1)), (n - 1) % 2 == 1);
      L.sigma = fg / fg_prev;
      const Arc& prev_arc = back.arc(table.q(n - 1));
      L.kappa = fg / backward_gap(m, prev_arc, (n - 1) % 2 == 0);
      L.fsigma = image_gap(n) / image_gap(n - 1);
    }

    if (n >= 3) {
      const Arc& arc2 = back.arc(table.q(n - 2));
      BigReal g2 = backward_gap(m, arc2, (n - 2) % 2 == 0);
      L.s = (arc2.length() + g2 + u_len) / u_len;
      BigReal fg = forward_gap(m, fwd.point(table.q(n)), n % 2 == 1);
      BigReal fg2 = forward_gap(m, fwd.point(table.q(n - 2)), (n - 2) % 2 == 1);
      L.tau = fg / fg2;

      const long a_prev = series.quotient(n - 1);
      for (long k = 1; k <= a_prev; ++k) {
        long long j = table.q(n) - k * table.q(n - 1);
        const Arc& arc_j = back.arc(j);
        BigReal gk = backward_gap(m, arc_j, bright);
        L.gamma1.push_back(gk);
        L.beta.push_back(gk / (gk + arc_j.length()));
      }
      for (long i = 0; i < a_prev; ++i) {
        const Arc& near = back.arc(table.q(n) - i * table.q(n - 1));
        const Arc& far = back.arc(table.q(n) - (i + 1) * table.q(n - 1));
        L.w.push_back(chain_gap(m, near, far) / near.length());
      }
    }
  }
  return series;
}

std::vector<BigReal> return_gaps(const FlatCircleMap& m, const ForwardOrbit& fwd,
                                 const ConvergentTable& table, long depth) {
  if (depth < 1 || table.depth() < depth)
    fail(ErrorKind::Depth, "return_gaps depth outside convergent table");
  std::vector<BigReal> out;
  out.reserve(depth);
  for (long n = 1; n <= depth; ++n)
    out.push_back(forward_gap(m, fwd.point(table.q(n)), n % 2 == 1));
  return out;
}

// -- cross ratios -------------------------------------------------------------

Quadruple::Quadruple(const CirclePoint& a, const CirclePoint& b,
                     const CirclePoint& c, const CirclePoint& d)
    : a_(a),
      o2_(forward_distance(a, b)),
      o3_(forward_distance(a, c)),
      o4_(forward_distance(a, d)) {
  if (!(o2_.sign() > 0) || !(o2_ < o3_) || !(o3_ < o4_) || !o4_.less_than(1))
    fail(ErrorKind::Domain, "quadruple not in strict positive cyclic order");
}

namespace {

constexpr long kCrGuard = 32;

std::pair<BigReal, BigReal> cross_pair(const Quadruple& q) {
  long prec = q.o2().precision();
  BigReal o2 = q.o2().round_to(prec + kCrGuard);
  BigReal o3 = q.o3().round_to(prec + kCrGuard);
  BigReal o4 = q.o4().round_to(prec + kCrGuard);
  BigReal den = o3 * (o4 - o2);
  BigReal cr = (o2 * (o4 - o3)) / den;
  BigReal po = (o4 * (o3 - o2)) / den;
  return {cr.round_to(prec), po.round_to(prec)};
}

}  // namespace

BigReal cross_cr(const Quadruple& q) { return cross_pair(q).first; }
BigReal cross_po(const Quadruple& q) { return cross_pair(q).second; }

DistortionReport distortion_audit(const FlatCircleMap& m, const Quadruple& q0,
                                  long steps) {
  if (steps < 1) fail(ErrorKind::Domain, "distortion audit needs steps >= 1");
  long prec = m.precision();
  DistortionReport rep{{}, BigReal::from_long(1, prec), BigReal::from_long(1, prec),
                       0, true};
  const BigReal po_tol = BigReal::from_long(1, prec) - BigReal::pow2(-prec + 8, prec);

  std::vector<Arc> outers;
  CirclePoint a = q0.a(), b = q0.b(), c = q0.c(), d = q0.d();
  for (long i = 0; i < steps; ++i) {
    Quadruple cur(a, b, c, d);
    Arc middle = arc_between(b, c);
    if (middle.overlaps(m.flat()))
      fail(ErrorKind::Audit, "middle interval meets the flat piece at chain step " +
                                 std::to_string(i));
    Arc outer = arc_between(a, d);
    outers.push_back(outer);
    bool clear = !outer.overlaps(m.flat()) && !m.in_flat_closure(a) &&
                 !m.in_flat_closure(d);

    CirclePoint fa = m.eval(a), fb = m.eval(b), fc = m.eval(c), fd = m.eval(d);
    Quadruple img(fa, fb, fc, fd);
    auto [cr0, po0] = std::pair(cross_cr(cur), cross_po(cur));
    auto [cr1, po1] = std::pair(cross_cr(img), cross_po(img));
    DistortionStep st{cr1 / cr0, po1 / po0, clear};
    if (clear && st.dpo < po_tol) rep.single_step_po_ok = false;
    rep.prod_dcr *= st.dcr;
    rep.prod_dpo *= st.dpo;
    rep.steps.push_back(std::move(st));
    a = fa; b = fb; c = fc; d = fd;
  }

  // Intersection multiplicity of the outer intervals: max coverage over the
  // segment midpoints cut by all endpoints.
  std::vector<BigReal> cuts;
  for (const Arc& o : outers) {
    cuts.push_back(o.left().rep());
    cuts.push_back(o.right().rep());
  }
  std::sort(cuts.begin(), cuts.end());
  BigReal half = BigReal::from_string("0.5", prec);
  for (size_t i = 0; i < cuts.size(); ++i) {
    const BigReal& lo = cuts[i];
    const BigReal& hi = cuts[(i + 1) % cuts.size()];
    BigReal span = hi - lo;
    if (span.sign() < 0) span += BigReal::from_long(1, prec);
    if (span.is_zero()) continue;
    CirclePoint midpt = mod1(lo + span * half);
    long cover = 0;
    for (const Arc& o : outers)
      if (o.contains_interior(midpt)) ++cover;
    rep.multiplicity = std::max(rep.multiplicity, cover);
  }
  return rep;
}

// -- inequality checkers -------------------------------------------------------

std::vector<CheckRecord> verify_apriori(const RatioSeries& s, long n0) {
  const BigReal& l1 = s.ell1();
  const BigReal& l2 = s.ell2();
  if (l1.less_than(1) || l2.less_than(1) || l1.greater_than(2) || l2.greater_than(2))
    fail(ErrorKind::Domain,
         "a-priori bounds are scoped to exponents in [1,2]^2; refusing (" +
             l1.to_string() + ", " + l2.to_string() + ")");
  long prec = s.precision();
  BigReal two = BigReal::from_long(2, prec);
  BigReal c055 = BigReal::from_string("0.55", prec);
  BigReal c03 = BigReal::from_string("0.3", prec);
  BigReal c044 = BigReal::from_string("0.44", prec);
  BigReal c016 = BigReal::from_string("0.16", prec);

  auto v = [&](long n) {
    return pow(s.alpha(n), parity_exponent(n, l1, l2) / two);
  };

  std::vector<CheckRecord> out;
  for (long n = std::max<long>(1, n0); n <= s.depth(); ++n) {
    BigReal vn = v(n);
    out.push_back({"apriori.55", n, vn, c055, c055 - vn, vn < c055});
    if (n + 1 <= s.depth()) {
      BigReal vn1 = v(n + 1);
      bool both = (vn >= c03) && (vn1 >= c03);
      out.push_back({"apriori.alternate", n, min(vn, vn1), c03,
                     c03 - min(vn, vn1), !both});
      if (vn > c03) {
        bool ok = (vn < c044) || (vn1 < c016);
        out.push_back({"apriori.follow", n, vn, c044, c044 - vn, ok});
      }
    }
  }
  return out;
}

std::vector<CheckRecord> verify_lemma1(const RatioSeries& s, long n) {
  if (n < 3) fail(ErrorKind::Depth, "lemma1 needs level >= 3");
  const BigReal& l1 = s.ell1();
  const BigReal& l2 = s.ell2();
  long prec = s.precision();
  BigReal one = BigReal::from_long(1, prec);
  const BigReal& e = parity_exponent(n, l1, l2);
  const bool even = (n % 2 == 0);

  BigReal A = pow(s.alpha(n - 1), e);
  const BigReal& g_prev = s.gamma1(n - 1, 0);

  std::vector<CheckRecord> out;
  long a_prev = s.quotient(n - 1);
  for (long k = 0; k < a_prev; ++k) {
    BigReal B = pow(s.beta(n, k), e);
    BigReal gam = even ? pow(s.gamma1(n, k), l1) / pow(g_prev, l2)
                       : pow(s.gamma1(n, k), l2) / pow(g_prev, l1);
    BigReal lhs = (B + A * gam) * (one + gam) / ((one + A * gam) * (B + gam));
    BigReal rhs = s.s_ratio(n) * s.beta(n, k + 1);
    out.push_back({"lemma1", n, lhs, rhs, rhs - lhs, lhs <= rhs});
  }
  return out;
}

BigReal recursion_m_factor(const BigReal& ell, const BigReal& s_prev,
                           const BigReal& alpha_prev, const BigReal& alpha_prev2,
                           const BigReal& sigma_n, const BigReal& sigma_prev2) {
  long prec = ell.precision();
  BigReal one = BigReal::from_long(1, prec);
  BigReal two = BigReal::from_long(2, prec);
  BigReal radicand = one - (two * (ell - one) / ell) * s_prev * alpha_prev;
  if (radicand.sign() < 0)
    fail(ErrorKind::Domain, "recursion radicand negative: s_{n-1} alpha_{n-1} too large");
  return s_prev * s_prev * (two / ell) / (one + sqrt(radicand)) /
         (one - alpha_prev2) * (sigma_n / sigma_prev2);
}

std::vector<CheckRecord> verify_recursion(const RatioSeries& s, long n) {
  if (n < 4) fail(ErrorKind::Depth, "recursion check needs level >= 4");
  const BigReal& l1 = s.ell1();
  const BigReal& l2 = s.ell2();
  long prec = s.precision();
  BigReal one = BigReal::from_long(1, prec);
  std::vector<CheckRecord> out;

  if (l1.equals(1) && l2.equals(1)) {
    BigReal rhs = (s.sigma(n) / s.sigma(n - 2)) * s.alpha(n - 2);
    BigReal implied = s.alpha(n) / rhs;
    out.push_back({"recursion.w1", n, s.alpha(n), rhs, implied, true});
    return out;
  }
  if (!l1.greater_than(1) || !l2.greater_than(1))
    fail(ErrorKind::Domain, "recursion bound needs ell1, ell2 > 1 (or both = 1)");

  const BigReal& e = parity_exponent(n, l1, l2);
  BigReal two = BigReal::from_long(2, prec);
  BigReal radicand = one - (two * (e - one) / e) * s.s_ratio(n - 1) * s.alpha(n - 1);
  if (radicand.sign() < 0) {
    out.push_back({"recursion.radicand", n, radicand, BigReal::from_long(0, prec),
                   radicand, false});
    return out;
  }
  BigReal M = recursion_m_factor(e, s.s_ratio(n - 1), s.alpha(n - 1), s.alpha(n - 2),
                                 s.sigma(n), s.sigma(n - 2));
  BigReal lhs = pow(s.alpha(n), e);
  BigReal rhs = M * s.alpha(n - 2) * s.alpha(n - 2);
  out.push_back({"recursion", n, lhs, rhs, rhs - lhs, lhs <= rhs});
  return out;
}

std::vector<CheckRecord> verify_lower_bounds(const RatioSeries& s) {
  const BigReal& l1 = s.ell1();
  const BigReal& l2 = s.ell2();
  if (!l1.greater_than(1) || !l2.greater_than(1))
    fail(ErrorKind::Domain, "lower bounds need ell1, ell2 > 1");
  long prec = s.precision();
  BigReal one = BigReal::from_long(1, prec);
  std::vector<CheckRecord> out;

  for (long n = 4; n <= s.depth(); ++n) {
    bool even = (n % 2 == 0);

    // kappa_n > K alpha_{n-1}^((1 - l^(a_n+1)) / (l - 1)), l keyed opposite
    // to the parity convention (even levels use ell2 here).
    long a_n;
    try {
      a_n = s.quotient(n);
    } catch (const Error&) {
      break;  // quotient a_n beyond the recorded prefix
    }
    const BigReal& lk = even ? l2 : l1;
    BigReal expo = (one - pow_si(lk, a_n + 1)) / (lk - one);
    BigReal rhs_k = pow(s.alpha(n - 1), expo);
    BigReal K_kappa = s.kappa(n) / rhs_k;
    out.push_back({"lower.kappa", n, s.kappa(n), rhs_k, K_kappa, K_kappa.sign() > 0});

    // alpha_n >= K alpha_{n-1}^((l_k/l_o) t_k(a_n)) alpha_{n-2}^(l_o^-a_{n-1})
    long a_prev = s.quotient(n - 1);
    BigReal t = even ? t_func(2, a_n, l1, l2) : t_func(1, a_n, l1, l2);
    BigReal ratio = even ? l2 / l1 : l1 / l2;
    BigReal expo2 = even ? pow_si(l1, -a_prev) : pow_si(l2, -a_prev);
    BigReal rhs_a = pow(s.alpha(n - 1), ratio * t) * pow(s.alpha(n - 2), expo2);
    BigReal K_alpha = s.alpha(n) / rhs_a;
    out.push_back({"lower.alpha", n, s.alpha(n), rhs_a, K_alpha, K_alpha.sign() > 0});

    // beta_n(k)^e(n) >= K beta_n(k+1)
    const BigReal& e = parity_exponent(n, l1, l2);
    for (long k = 0; k < a_prev; ++k) {
      BigReal lhs = pow(s.beta(n, k), e);
      BigReal C = lhs / s.beta(n, k + 1);
      out.push_back({"lower.beta", n, lhs, s.beta(n, k + 1), C, C.sign() > 0});
    }
  }
  return out;
}

std::vector<CheckRecord> nu_residuals(const RatioSeries& s) {
  const BigReal& l1 = s.ell1();
  const BigReal& l2 = s.ell2();
  if (!l1.greater_than(1) || !l2.greater_than(1))
    fail(ErrorKind::Domain, "nu residuals need ell1, ell2 > 1");
  std::vector<CheckRecord> out;
  for (long n = 3; n <= s.depth(); ++n) {
    long a_n;
    try {
      a_n = s.quotient(n);
    } catch (const Error&) {
      break;
    }
    long a_prev = s.quotient(n - 1);
    bool even = (n % 2 == 0);
    BigReal coeff1 = even ? (l2 / l1) * t_func(2, a_n, l1, l2)
                          : (l1 / l2) * t_func(1, a_n, l1, l2);
    BigReal coeff2 = even ? pow_si(l1, -a_prev) : pow_si(l2, -a_prev);
    BigReal affine = coeff1 * s.nu(n - 1) + coeff2 * s.nu(n - 2);
    BigReal resid = s.nu(n) - affine;
    out.push_back({"nu.residual", n, s.nu(n), affine, resid, true});
  }
  return out;
}

std::vector<CheckRecord> w_diagnostic(const RatioSeries& s, long n) {
  if (n < 3) fail(ErrorKind::Depth, "w diagnostic needs level >= 3");
  const auto& L = s.level(n);
  if (L.w.empty()) fail(ErrorKind::Depth, "w table empty at level " + std::to_string(n));
  const BigReal& alpha_prev = s.alpha(n - 1);
  const BigReal& e = parity_exponent(n, s.ell1(), s.ell2());

  std::vector<CheckRecord> out;
  for (long i = 0; i < static_cast<long>(L.w.size()); ++i) {
    BigReal lhs = (i == 0) ? pow(L.w[i], e) : L.w[i];
    BigReal band = lhs / alpha_prev;
    out.push_back({"w.comparability", n, lhs, alpha_prev, band, band.sign() > 0});
  }
  return out;
}

}  // namespace cherry
