#include "cherry/partition.hpp"

#include <algorithm>

namespace cherry {

BackwardOrbit BackwardOrbit::build(const FlatCircleMap& m, long count) {
  if (count < 0) fail(ErrorKind::Domain, "backward orbit count must be >= 0");
  std::vector<Arc> arcs;
  std::vector<BigReal> residuals;
  arcs.reserve(count + 1);
  residuals.reserve(count + 1);
  arcs.push_back(m.flat());
  residuals.push_back(BigReal::from_long(0, m.precision()));
  BigReal min_len = m.flat().length();

  for (long i = 0; i < count; ++i) {
    const Arc& prev = arcs.back();
    Arc next = [&] {
      try {
        return m.preimage_arc(prev);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateArc)
          fail(ErrorKind::Precision,
               "pullback collapsed at level " + std::to_string(i + 1) +
                   "; working precision insufficient");
        throw;
      }
    }();
    BigReal rl = circle_distance(m.eval(next.left()), prev.left());
    BigReal rr = circle_distance(m.eval(next.right()), prev.right());
    BigReal resid = max(rl, rr);
    BigReal tol = BigReal::pow2(-m.precision() + 16, m.precision());
    if (resid > tol)
      fail(ErrorKind::Precision, "pullback residual " + resid.to_string() +
                                     " above tolerance at level " + std::to_string(i + 1));
    if (next.length() < min_len) min_len = next.length();
    arcs.push_back(std::move(next));
    residuals.push_back(std::move(resid));
  }
  return BackwardOrbit(std::move(arcs), std::move(residuals), std::move(min_len));
}

const Arc& BackwardOrbit::arc(long i) const {
  if (i < 0 || i > count())
    fail(ErrorKind::Depth, "backward orbit has no arc " + std::to_string(i));
  return arcs_[i];
}

BigReal BackwardOrbit::max_residual() const {
  BigReal worst = residuals_.front();
  for (const auto& r : residuals_)
    if (r > worst) worst = r;
  return worst;
}

std::optional<std::pair<long, long>> BackwardOrbit::find_overlap(long upto) const {
  long n = std::min<long>(upto, count());
  for (long i = 0; i <= n; ++i)
    for (long j = i + 1; j <= n; ++j)
      if (arcs_[i].overlaps(arcs_[j])) return std::make_pair(i, j);
  return std::nullopt;
}

ForwardOrbit ForwardOrbit::build(const FlatCircleMap& m, long count) {
  if (count < 1) fail(ErrorKind::Domain, "forward orbit count must be >= 1");
  std::vector<CirclePoint> pts;
  pts.reserve(count);
  pts.push_back(m.c());
  for (long i = 1; i < count; ++i) pts.push_back(m.eval(pts.back()));
  return ForwardOrbit(std::move(pts));
}

const CirclePoint& ForwardOrbit::point(long i) const {
  if (i < 1 || i > count())
    fail(ErrorKind::Depth, "forward orbit has no point " + std::to_string(i));
  return points_[i - 1];
}

DynamicalPartition DynamicalPartition::build(const FlatCircleMap& m,
                                             const BackwardOrbit& orbit,
                                             const ConvergentTable& table,
                                             long level) {
  if (level < 1 || level + 1 > table.depth())
    fail(ErrorKind::Depth, "partition level outside convergent table");
  const long long qn = table.q(level);
  const long long qn1 = table.q(level + 1);
  const long marked = static_cast<long>(qn1 + qn);
  if (orbit.count() < marked - 1)
    fail(ErrorKind::Depth, "backward orbit too short for partition level " +
                               std::to_string(level));

  // Sort the marked arcs around the circle, then read the gaps off the
  // sorted order and match each one against the index formulas.
  std::vector<long> order(marked);
  for (long i = 0; i < marked; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](long x, long y) {
    return orbit.arc(x).left().rep() < orbit.arc(y).left().rep();
  });

  std::vector<PartitionGap> longs, shorts;
  BigReal total = BigReal::from_long(0, m.precision());
  const bool ambiguous = (qn == qn1);  // only at level 1 with a_1 = 1

  for (long s = 0; s < marked; ++s) {
    long cur = order[s];
    long nxt = order[(s + 1) % marked];
    total += orbit.arc(cur).length();
    // Sorted-consecutive disjointness is equivalent to pairwise disjointness.
    if (forward_distance(orbit.arc(cur).left(), orbit.arc(nxt).left()) <
        orbit.arc(cur).length())
      fail(ErrorKind::Partition, "marked arcs " + std::to_string(cur) + " and " +
                                     std::to_string(nxt) + " overlap");
    CirclePoint gl = orbit.arc(cur).right();
    CirclePoint gr = orbit.arc(nxt).left();
    if (gl == gr)
      fail(ErrorKind::Partition, "adjacent marked arcs touch between " +
                                     std::to_string(cur) + " and " + std::to_string(nxt));
    Arc gap = arc_between(gl, gr);
    total += gap.length();

    long lo = std::min(cur, nxt), hi = std::max(cur, nxt);
    long diff = hi - lo;
    bool is_long;
    if (!ambiguous) {
      if (diff == qn) is_long = true;
      else if (diff == qn1) is_long = false;
      else
        fail(ErrorKind::Partition,
             "gap between arcs " + std::to_string(cur) + " and " + std::to_string(nxt) +
                 " matches neither index formula at level " + std::to_string(level));
    } else {
      // q_1 = q_2: the pair {0,1} labels both gaps. The short gap (0, -q_2)
      // is adjacent to U on the side of the level-2 return, i.e. it is the
      // gap whose left neighbor is U itself.
      is_long = (cur != 0);
    }
    if (is_long) {
      if (lo > qn1 - 1)
        fail(ErrorKind::Partition, "long-gap index " + std::to_string(lo) +
                                       " out of range at level " + std::to_string(level));
      longs.push_back(PartitionGap{lo, static_cast<long>(lo + qn), gap});
    } else {
      if (lo > qn - 1)
        fail(ErrorKind::Partition, "short-gap index " + std::to_string(lo) +
                                       " out of range at level " + std::to_string(level));
      shorts.push_back(PartitionGap{lo, static_cast<long>(lo + qn1), gap});
    }
  }

  if (static_cast<long long>(longs.size()) != qn1 ||
      static_cast<long long>(shorts.size()) != qn)
    fail(ErrorKind::Partition,
         "gap family counts " + std::to_string(longs.size()) + "/" +
             std::to_string(shorts.size()) + " disagree with q_{n+1}/q_n at level " +
             std::to_string(level));

  auto by_index = [](const PartitionGap& a, const PartitionGap& b) {
    return a.pair_low < b.pair_low;
  };
  std::sort(longs.begin(), longs.end(), by_index);
  std::sort(shorts.begin(), shorts.end(), by_index);
  for (long i = 0; i < static_cast<long>(longs.size()); ++i)
    if (longs[i].pair_low != i)
      fail(ErrorKind::Partition, "long-gap indices not a full range at level " +
                                     std::to_string(level));
  for (long i = 0; i < static_cast<long>(shorts.size()); ++i)
    if (shorts[i].pair_low != i)
      fail(ErrorKind::Partition, "short-gap indices not a full range at level " +
                                     std::to_string(level));

  BigReal defect = abs(BigReal::from_long(1, m.precision()) - total);
  BigReal allowed = BigReal::pow2(-m.precision() / 2, m.precision());
  if (defect > allowed)
    fail(ErrorKind::Partition, "tiling defect " + defect.to_string() +
                                   " above 2^-P/2 at level " + std::to_string(level));

  return DynamicalPartition(level, marked, std::move(longs), std::move(shorts),
                            std::move(defect), &orbit);
}

const PartitionGap& DynamicalPartition::long_gap(long i) const {
  if (i < 0 || i >= static_cast<long>(long_gaps_.size()))
    fail(ErrorKind::Depth, "no long gap " + std::to_string(i));
  return long_gaps_[i];
}

const PartitionGap& DynamicalPartition::short_gap(long i) const {
  if (i < 0 || i >= static_cast<long>(short_gaps_.size()))
    fail(ErrorKind::Depth, "no short gap " + std::to_string(i));
  return short_gaps_[i];
}

std::vector<Arc> DynamicalPartition::all_pieces() const {
  std::vector<Arc> out;
  out.reserve(marked_count_ + long_gaps_.size() + short_gaps_.size());
  for (long i = 0; i < marked_count_; ++i) out.push_back(orbit_->arc(i));
  for (const auto& g : long_gaps_) out.push_back(g.arc);
  for (const auto& g : short_gaps_) out.push_back(g.arc);
  return out;
}

RefinementReport refinement_check(const DynamicalPartition& coarse,
                                  const DynamicalPartition& fine) {
  if (fine.level() != coarse.level() + 1)
    fail(ErrorKind::Domain, "refinement_check wants consecutive levels");
  RefinementReport rep;
  std::vector<Arc> big = coarse.all_pieces();
  std::vector<Arc> small = fine.all_pieces();
  long prec = big.front().length().precision();
  BigReal slop = BigReal::pow2(-prec / 2, prec);

  for (size_t j = 0; j < small.size(); ++j) {
    ++rep.checked;
    long hits = 0;
    for (const Arc& container : big)
      if (container.contains_arc(small[j], slop)) ++hits;
    if (hits != 1)
      rep.violations.push_back("piece " + std::to_string(j) + " of level " +
                               std::to_string(fine.level()) + " contained in " +
                               std::to_string(hits) + " coarse pieces");
  }
  return rep;
}

ComparabilityReport comparability_audit(const DynamicalPartition& p) {
  const BackwardOrbit& orbit = p.orbit();
  long prec = orbit.arc(0).length().precision();
  ComparabilityReport rep{BigReal::from_long(-1, prec), 0};
  auto consider = [&](const Arc& marked, const Arc& gap) {
    BigReal r = marked.length() / gap.length();
    if (rep.pairs == 0 || r < rep.min_ratio) rep.min_ratio = r;
    ++rep.pairs;
  };
  for (const auto& g : p.long_gaps()) {
    consider(orbit.arc(g.pair_low), g.arc);
    consider(orbit.arc(g.pair_high), g.arc);
  }
  for (const auto& g : p.short_gaps()) {
    consider(orbit.arc(g.pair_low), g.arc);
    consider(orbit.arc(g.pair_high), g.arc);
  }
  return rep;
}

}  // namespace cherry
