#include "cherry/flat_map.hpp"

namespace cherry {

FlatCircleMap::FlatCircleMap(BigReal ell1, BigReal ell2, Arc flat, CirclePoint c,
                             long precision_bits)
    : ell1_(ell1.round_to(precision_bits)),
      ell2_(ell2.round_to(precision_bits)),
      flat_(CirclePoint(flat.left().rep().round_to(precision_bits)),
            flat.length().round_to(precision_bits)),
      c_(CirclePoint(c.rep().round_to(precision_bits))),
      prec_(precision_bits),
      b_(flat_.right()),
      one_minus_u_(BigReal::from_long(1, precision_bits) - flat_.length()),
      beta_norm_(beta_fn(ell2_, ell1_)) {
  if (ell1_.less_than(1) || ell2_.less_than(1))
    fail(ErrorKind::Domain, "critical exponents must be >= 1");
  if (!(flat_.length().sign() > 0) || !flat_.length().less_than(1))
    fail(ErrorKind::Domain, "flat arc length must lie in (0,1)");
}

bool FlatCircleMap::in_flat_closure(const CirclePoint& x) const {
  return flat_.contains(x);
}

BigReal FlatCircleMap::offset_from_b(const CirclePoint& x) const {
  return forward_distance(b_, x);
}

BigReal FlatCircleMap::profile(const BigReal& s) const {
  return reg_inc_beta(s, ell2_, ell1_);
}

CirclePoint FlatCircleMap::eval(const CirclePoint& x) const {
  if (in_flat_closure(x)) return c_;  // flat piece stored symbolically
  BigReal s = offset_from_b(x) / one_minus_u_;
  return mod1(c_.rep() + profile(s));
}

LiftState FlatCircleMap::lift_eval(const LiftState& st) const {
  BigReal rel = st.base - b_.rep();
  BigReal k = floor_of(rel);
  BigReal frac = rel - k;  // position in the fundamental domain, from b
  BigReal t = forward_distance(b_, c_);  // lift of c relative to b

  BigReal image_off(prec_);
  if (frac <= one_minus_u_) {
    image_off = profile(frac / one_minus_u_);
  } else {
    image_off = BigReal::from_long(1, prec_);  // interior of a U copy
  }
  BigReal next = b_.rep() + k + t + image_off;

  LiftState out{next, st.winding};
  out.winding += (floor_of(next) - floor_of(st.base)).to_long();
  return out;
}

BigReal FlatCircleMap::derivative(const CirclePoint& x) const {
  if (in_flat_closure(x)) return BigReal::from_long(0, prec_);
  BigReal one = BigReal::from_long(1, prec_);
  BigReal s = offset_from_b(x) / one_minus_u_;
  BigReal d = pow(s, ell2_ - one) * pow(one - s, ell1_ - one);
  return d / (beta_norm_ * one_minus_u_);
}

BigReal FlatCircleMap::schwarzian(const CirclePoint& x) const {
  if (in_flat_closure(x))
    fail(ErrorKind::Domain, "schwarzian undefined on the closure of the flat piece");
  BigReal one = BigReal::from_long(1, prec_);
  BigReal s = offset_from_b(x) / one_minus_u_;
  BigReal p = ell2_ - one;  // density is s^p (1-s)^q up to constants
  BigReal q = ell1_ - one;
  BigReal h = p / s - q / (one - s);
  BigReal hp = -(p / (s * s)) - q / ((one - s) * (one - s));
  BigReal two = BigReal::from_long(2, prec_);
  return (hp - h * h / two) / (one_minus_u_ * one_minus_u_);
}

CirclePoint FlatCircleMap::inverse(const CirclePoint& y) const {
  if (y == c_)
    fail(ErrorKind::AmbiguousPreimage,
         "inverse at the collapsed value c is ambiguous (whole flat piece)");
  BigReal w = forward_distance(c_, y);  // in (0,1)
  BigReal s = inv_reg_inc_beta(w, ell2_, ell1_);
  return mod1(b_.rep() + s * one_minus_u_);
}

Arc FlatCircleMap::preimage_arc(const Arc& j) const {
  if (j.contains_interior(c_) || j.left() == c_ || j.right() == c_)
    fail(ErrorKind::SplitPreimage,
         "preimage of an interval meeting the critical value c splits at the flat piece");
  CirclePoint xl = inverse(j.left());
  CirclePoint xr = inverse(j.right());
  return arc_between(xl, xr);
}

std::pair<BigReal, BigReal> FlatCircleMap::boundary_coefficients() const {
  BigReal one = BigReal::from_long(1, prec_);
  BigReal k1 = pow(one_minus_u_, -ell1_) / (ell1_ * beta_norm_);
  BigReal k2 = pow(one_minus_u_, -ell2_) / (ell2_ * beta_norm_);
  return {k1, k2};
}

}  // namespace cherry
