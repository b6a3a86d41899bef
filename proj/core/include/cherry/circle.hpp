#pragma once

#include "cherry/bigreal.hpp"

namespace cherry {

/// Point on the unit circle, stored as its representative in [0, 1).
class CirclePoint {
 public:
  explicit CirclePoint(BigReal rep);        // reduces mod 1 on construction
  static CirclePoint from_reduced(BigReal rep);  // caller guarantees [0,1)

  const BigReal& rep() const { return rep_; }
  long precision() const { return rep_.precision(); }

  friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
    return a.rep_ == b.rep_;
  }
  friend bool operator!=(const CirclePoint& a, const CirclePoint& b) {
    return !(a == b);
  }

 private:
  BigReal rep_;
};

/// x - floor(x), the canonical circle representative.
CirclePoint mod1(const BigReal& x);

/// (q - p) mod 1: length of the positively oriented arc from p to q.
BigReal forward_distance(const CirclePoint& p, const CirclePoint& q);

/// min of the two arc lengths between p and q.
BigReal circle_distance(const CirclePoint& p, const CirclePoint& q);

/// Positively oriented arc: starts at `left`, extends by `length` (in (0,1)).
class Arc {
 public:
  Arc(CirclePoint left, BigReal length);

  const CirclePoint& left() const { return left_; }
  const BigReal& length() const { return length_; }
  CirclePoint right() const;

  /// Closed containment test (endpoints count as inside).
  bool contains(const CirclePoint& x) const;
  /// Strict interior containment.
  bool contains_interior(const CirclePoint& x) const;
  /// Closed containment of a whole arc, with `slop` tolerance at the ends.
  bool contains_arc(const Arc& other, const BigReal& slop) const;
  bool overlaps(const Arc& other) const;

 private:
  CirclePoint left_;
  BigReal length_;
};

/// The positively oriented arc from p to q. Requires p != q.
Arc arc_between(const CirclePoint& p, const CirclePoint& q);

}  // namespace cherry
