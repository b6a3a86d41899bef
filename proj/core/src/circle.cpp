#include "cherry/circle.hpp"

namespace cherry {

CirclePoint::CirclePoint(BigReal rep) : rep_(std::move(rep)) {
  if (!rep_.is_finite())
    fail(ErrorKind::Domain, "non-finite value cannot be reduced mod 1");
  if (rep_.sign() < 0 || !rep_.less_than(1)) {
    rep_ = rep_ - floor_of(rep_);
    // Rounding can land exactly on 1 when rep_ was a hair below an integer.
    if (!rep_.less_than(1)) rep_ = BigReal::from_long(0, rep_.precision());
  }
}

CirclePoint CirclePoint::from_reduced(BigReal rep) {
  CirclePoint p(std::move(rep));
  return p;
}

CirclePoint mod1(const BigReal& x) {
  if (!x.is_finite()) fail(ErrorKind::Domain, "mod1 of non-finite value");
  return CirclePoint(x);
}

BigReal forward_distance(const CirclePoint& p, const CirclePoint& q) {
  BigReal d = q.rep() - p.rep();
  if (d.sign() < 0) d += lit(1, d);
  return d;
}

BigReal circle_distance(const CirclePoint& p, const CirclePoint& q) {
  BigReal d = forward_distance(p, q);
  BigReal e = lit(1, d) - d;
  return min(d, e);
}

Arc::Arc(CirclePoint left, BigReal length)
    : left_(std::move(left)), length_(std::move(length)) {
  if (!(length_.sign() > 0) || !length_.less_than(1))
    fail(ErrorKind::Domain, "arc length must lie in (0,1), got " + length_.to_string());
}

CirclePoint Arc::right() const {
  return mod1(left_.rep() + length_);
}

bool Arc::contains(const CirclePoint& x) const {
  return forward_distance(left_, x) <= length_;
}

bool Arc::contains_interior(const CirclePoint& x) const {
  BigReal off = forward_distance(left_, x);
  return off.sign() > 0 && off < length_;
}

bool Arc::contains_arc(const Arc& other, const BigReal& slop) const {
  BigReal off = forward_distance(left_, other.left());
  // Offsets just below 1 are shared left endpoints that rounded to the wrong side.
  if (lit(1, off) - off <= slop) off = BigReal::from_long(0, off.precision());
  return off <= length_ + slop && off + other.length() <= length_ + slop;
}

bool Arc::overlaps(const Arc& other) const {
  return forward_distance(left_, other.left()) < length_ ||
         forward_distance(other.left(), left_) < other.length();
}

Arc arc_between(const CirclePoint& p, const CirclePoint& q) {
  if (p == q) fail(ErrorKind::DegenerateArc, "arc between coincident points");
  return Arc(p, forward_distance(p, q));
}

}  // namespace cherry
