#pragma once

#include <utility>
#include <vector>

#include "cherry/betainc.hpp"
#include "cherry/circle.hpp"

namespace cherry {

/// Point of a lifted orbit: real coordinate plus the accumulated count of
/// times the circle image crossed 0.
struct LiftState {
  BigReal base;
  long winding = 0;
};

/// Degree-one circle map with a flat arc U and critical exponents
/// (ell1, ell2) at the left/right endpoints of U.
///
/// Off U the map is the normalized incomplete-beta profile
///   f(x) = c + I_s(ell2, ell1),  s = ((x - b) mod 1) / (1 - |U|),
/// which is constant (= c) on U, a C^inf diffeomorphism from the complement
/// onto the circle minus {c}, and has the boundary behavior
/// f(y) - c ~ (y - b)^ell2 at b and c - f(y) ~ (a - y)^ell1 at a (mod 1).
class FlatCircleMap {
 public:
  FlatCircleMap(BigReal ell1, BigReal ell2, Arc flat, CirclePoint c,
                long precision_bits);

  const BigReal& ell1() const { return ell1_; }
  const BigReal& ell2() const { return ell2_; }
  const Arc& flat() const { return flat_; }
  CirclePoint a() const { return flat_.left(); }      // left endpoint of U
  const CirclePoint& b() const { return b_; }         // right endpoint of U
  const CirclePoint& c() const { return c_; }         // f(U)
  long precision() const { return prec_; }
  const BigReal& complement_length() const { return one_minus_u_; }

  bool in_flat_closure(const CirclePoint& x) const;

  CirclePoint eval(const CirclePoint& x) const;
  LiftState lift_eval(const LiftState& s) const;
  LiftState lift_start(const CirclePoint& x0) const { return {x0.rep(), 0}; }

  /// Df(x); identically 0 on the closure of U.
  BigReal derivative(const CirclePoint& x) const;
  /// Schwarzian derivative; undefined on the closure of U.
  BigReal schwarzian(const CirclePoint& x) const;

  /// The unique preimage outside U of y != c.
  CirclePoint inverse(const CirclePoint& y) const;
  /// One pullback step of an arc whose interior avoids c.
  Arc preimage_arc(const Arc& j) const;

  /// Leading coefficients (k1, k2) of the boundary power laws at a and b.
  std::pair<BigReal, BigReal> boundary_coefficients() const;

  // Tuning metadata, carried so downstream stages can check their depth
  // budget against what the parameter was actually tuned for.
  const std::vector<long>& rho_target() const { return rho_target_; }
  long tuned_depth() const { return tuned_depth_; }
  void set_tuning(std::vector<long> quotients, long depth) {
    rho_target_ = std::move(quotients);
    tuned_depth_ = depth;
  }

 private:
  // Position within the fundamental domain [b, b+1), split at 1-|U|.
  BigReal offset_from_b(const CirclePoint& x) const;
  BigReal profile(const BigReal& s) const;  // I_s(ell2, ell1)

  BigReal ell1_, ell2_;
  Arc flat_;
  CirclePoint c_;
  long prec_;
  CirclePoint b_;
  BigReal one_minus_u_;
  BigReal beta_norm_;  // B(ell2, ell1)
  std::vector<long> rho_target_;
  long tuned_depth_ = 0;
};

}  // namespace cherry
