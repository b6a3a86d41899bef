#include "cherry/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cherry {

BigReal bowen_dim_from_gaps(const std::vector<BigReal>& gap_lengths,
                            long precision_bits) {
  if (gap_lengths.empty())
    fail(ErrorKind::Domain, "bowen dimension needs at least one cover interval");
  for (const auto& g : gap_lengths)
    if (g.sign() <= 0 || !g.less_than(1))
      fail(ErrorKind::Domain, "cover lengths must lie in (0,1)");

  const long prec = precision_bits;
  BigReal one = BigReal::from_long(1, prec);
  auto pressure = [&](const BigReal& s) {
    BigReal sum = BigReal::from_long(0, prec);
    for (const auto& g : gap_lengths) sum += pow(g.round_to(prec), s);
    return sum - one;
  };

  // Pressure is strictly decreasing in s: gap count - 1 >= 0 at s = 0,
  // total gap length - 1 < 0 at s = 1.
  BigReal lo = BigReal::from_long(0, prec);
  BigReal hi = one;
  if (pressure(lo).sign() <= 0) return lo;
  if (pressure(hi).sign() >= 0) return hi;

  const BigReal half = BigReal::from_string("0.5", prec);
  const long iters = std::min<long>(prec / 2, 160);
  for (long i = 0; i < iters; ++i) {
    BigReal mid = lo + (hi - lo) * half;
    if (pressure(mid).sign() > 0) lo = mid; else hi = mid;
  }
  return lo + (hi - lo) * half;
}

BigReal bowen_dim(const DynamicalPartition& p) {
  std::vector<BigReal> gaps;
  gaps.reserve(p.long_gaps().size() + p.short_gaps().size());
  for (const auto& g : p.long_gaps()) gaps.push_back(g.arc.length());
  for (const auto& g : p.short_gaps()) gaps.push_back(g.arc.length());
  if (gaps.empty()) fail(ErrorKind::Domain, "partition has no gaps");
  return bowen_dim_from_gaps(gaps, gaps.front().precision());
}

std::vector<BoxCountPoint> box_count(const DynamicalPartition& p,
                                     const std::vector<BigReal>& epsilons) {
  for (size_t i = 0; i + 1 < epsilons.size(); ++i)
    if (!(epsilons[i + 1] < epsilons[i]))
      fail(ErrorKind::Domain, "epsilon grid must be positive and decreasing");

  std::vector<BoxCountPoint> out;
  for (const BigReal& eps : epsilons) {
    if (eps.sign() <= 0) fail(ErrorKind::Domain, "epsilon must be positive");
    long prec = eps.precision();
    // Box index ranges covered by each gap; wrap-around gaps split in two.
    std::vector<std::pair<long long, long long>> ranges;
    auto add = [&](const BigReal& l, const BigReal& r) {
      long long k0 = floor_of(l / eps).to_long();
      long long k1 = floor_of(r / eps).to_long();
      ranges.emplace_back(k0, k1);
    };
    auto add_gap = [&](const Arc& gap) {
      BigReal l = gap.left().rep();
      BigReal end = l + gap.length();
      if (end.greater_than(1)) {
        add(l, BigReal::from_long(1, prec));  // clamps into the last box
        add(BigReal::from_long(0, prec), end - BigReal::from_long(1, prec));
      } else {
        add(l, end);
      }
    };
    for (const auto& g : p.long_gaps()) add_gap(g.arc);
    for (const auto& g : p.short_gaps()) add_gap(g.arc);

    long long last_box = floor_of((BigReal::from_long(1, prec) -
                                   BigReal::pow2(-prec + 4, prec)) / eps)
                             .to_long();
    std::sort(ranges.begin(), ranges.end());
    long long count = 0;
    long long cursor = -1;
    for (auto [k0, k1] : ranges) {
      k1 = std::min(k1, last_box);
      k0 = std::max(k0, 0LL);
      if (k1 < k0) continue;
      if (k0 > cursor) {
        count += k1 - k0 + 1;
        cursor = k1;
      } else if (k1 > cursor) {
        count += k1 - cursor;
        cursor = k1;
      }
    }
    out.push_back({eps, count});
  }
  return out;
}

double box_dimension_slope(const std::vector<BoxCountPoint>& pts) {
  if (pts.size() < 2) fail(ErrorKind::Domain, "slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    double x = -std::log(p.epsilon.to_double());  // log(1/eps)
    double y = std::log(static_cast<double>(p.count));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DimensionEstimate estimate_dimension(const FlatCircleMap& m, const BackwardOrbit& orbit,
                                     const ConvergentTable& table, long level_lo,
                                     long level_hi) {
  if (level_lo < 1 || level_hi < level_lo)
    fail(ErrorKind::Domain, "bad dimension level range");
  DimensionEstimate est;
  for (long n = level_lo; n <= level_hi; ++n) {
    DynamicalPartition part = DynamicalPartition::build(m, orbit, table, n);
    std::vector<BigReal> gaps;
    for (const auto& g : part.long_gaps()) gaps.push_back(g.arc.length());
    for (const auto& g : part.short_gaps()) gaps.push_back(g.arc.length());
    BigReal total = BigReal::from_long(0, m.precision());
    for (const auto& g : gaps) total += g;
    BigReal mean = total / BigReal::from_long(static_cast<long>(gaps.size()), m.precision());
    BigReal d = bowen_dim_from_gaps(gaps, m.precision());
    est.levels.push_back({n, static_cast<long long>(gaps.size()), mean, d});
  }

  if (est.levels.size() >= 3) {
    const BigReal& x0 = est.levels[est.levels.size() - 3].d_n;
    const BigReal& x1 = est.levels[est.levels.size() - 2].d_n;
    const BigReal& x2 = est.levels[est.levels.size() - 1].d_n;
    BigReal denom = x2 - x1 - (x1 - x0);
    BigReal tiny = BigReal::pow2(-m.precision() / 2, m.precision());
    BigReal extrap = (abs(denom) > tiny) ? x2 - (x2 - x1) * (x2 - x1) / denom : x2;
    if (extrap.sign() < 0) extrap = BigReal::from_long(0, m.precision());
    if (extrap.greater_than(1)) extrap = BigReal::from_long(1, m.precision());
    est.uncertainty = abs(extrap - x2) + abs(x2 - x1);
    est.extrapolated = std::move(extrap);
  }
  return est;
}

DichotomyReport dichotomy_report(const DimensionEstimate& degenerate_run,
                                 const DimensionEstimate& bounded_run,
                                 const BigReal& deg_ell1, const BigReal& deg_ell2,
                                 const BigReal& bnd_ell1, const BigReal& bnd_ell2) {
  if (deg_ell1 == bnd_ell1 && deg_ell2 == bnd_ell2)
    fail(ErrorKind::Domain,
         "dichotomy report needs runs from different exponent regions");
  if (degenerate_run.levels.size() < 3 || bounded_run.levels.size() < 3)
    fail(ErrorKind::Depth, "dichotomy report needs at least three levels per run");

  DichotomyReport rep;
  long prec = degenerate_run.levels.front().d_n.precision();
  BigReal deg_cap = BigReal::from_string("0.15", prec);
  BigReal bnd_floor = BigReal::from_string("0.05", prec);
  BigReal trend_slop = BigReal::from_string("0.005", prec);

  const auto& dl = degenerate_run.levels;
  const auto& bl = bounded_run.levels;

  bool deg_final = dl.back().d_n < deg_cap;
  bool deg_decreasing = true;
  size_t tail = std::min<size_t>(4, dl.size());
  for (size_t i = dl.size() - tail; i + 1 < dl.size(); ++i)
    if (!(dl[i + 1].d_n < dl[i].d_n)) deg_decreasing = false;
  rep.degenerate_ok = deg_final && deg_decreasing;

  bool bnd_final = bl.back().d_n > bnd_floor;
  bool bnd_trend = true;
  for (size_t i = bl.size() - 3; i + 1 < bl.size(); ++i)
    if (bl[i + 1].d_n < bl[i].d_n - trend_slop) bnd_trend = false;
  rep.bounded_ok = bnd_final && bnd_trend;

  auto short_dec = [](const BigReal& v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.to_double());
    return std::string(buf);
  };
  rep.detail = "degenerate final D = " + short_dec(dl.back().d_n) +
               " (cap 0.15, decreasing tail: " + (deg_decreasing ? "yes" : "no") +
               "); bounded final D = " + short_dec(bl.back().d_n) +
               " (floor 0.05, tail trend: " + (bnd_trend ? "ok" : "violated") + ")";
  return rep;
}

}  // namespace cherry
