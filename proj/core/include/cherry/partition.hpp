#pragma once

#include <optional>
#include <vector>

#include "cherry/rotation.hpp"

namespace cherry {

/// Successive preimages f^{-i}(U), i = 0..N, with a per-entry record of the
/// endpoint residual |f(endpoint) - target| achieved by the pullback.
class BackwardOrbit {
 public:
  static BackwardOrbit build(const FlatCircleMap& m, long count);

  long count() const { return static_cast<long>(arcs_.size()) - 1; }
  const Arc& arc(long i) const;
  const BigReal& residual(long i) const { return residuals_[i]; }
  BigReal max_residual() const;
  const BigReal& min_length() const { return min_length_; }

  /// Pairwise-disjointness scan over arcs [0, upto]; returns the first
  /// overlapping pair if any.
  std::optional<std::pair<long, long>> find_overlap(long upto) const;

 private:
  BackwardOrbit(std::vector<Arc> arcs, std::vector<BigReal> residuals,
                BigReal min_length)
      : arcs_(std::move(arcs)),
        residuals_(std::move(residuals)),
        min_length_(std::move(min_length)) {}

  std::vector<Arc> arcs_;
  std::vector<BigReal> residuals_;
  BigReal min_length_;
};

/// Forward images f^i(U): entry 0 is the arc U itself, entries i >= 1 are
/// the points f^{i-1}(c).
class ForwardOrbit {
 public:
  static ForwardOrbit build(const FlatCircleMap& m, long count);

  long count() const { return static_cast<long>(points_.size()); }
  /// Point i >= 1.
  const CirclePoint& point(long i) const;

 private:
  explicit ForwardOrbit(std::vector<CirclePoint> pts) : points_(std::move(pts)) {}
  std::vector<CirclePoint> points_;  // points_[i-1] = f^i(U)
};

/// One gap of a dynamical partition together with its combinatorial label:
/// the pair of backward-orbit indices it separates.
struct PartitionGap {
  long pair_low = 0;   // i
  long pair_high = 0;  // i + q_n (long gap) or i + q_{n+1} (short gap)
  Arc arc;
};

/// Level-n dynamical partition: the first q_{n+1}+q_n preimages of U
/// (marked) plus the gaps between them, labeled long/short by the index
/// arithmetic of the partition structure and validated geometrically.
class DynamicalPartition {
 public:
  static DynamicalPartition build(const FlatCircleMap& m, const BackwardOrbit& orbit,
                                  const ConvergentTable& table, long level);

  long level() const { return level_; }
  long marked_count() const { return marked_count_; }
  const std::vector<PartitionGap>& long_gaps() const { return long_gaps_; }
  const std::vector<PartitionGap>& short_gaps() const { return short_gaps_; }
  /// |1 - total length of marked arcs and gaps|.
  const BigReal& tiling_defect() const { return tiling_defect_; }
  const BackwardOrbit& orbit() const { return *orbit_; }

  /// Long gap with pair {i, i + q_n}.
  const PartitionGap& long_gap(long i) const;
  /// Short gap with pair {i, i + q_{n+1}}.
  const PartitionGap& short_gap(long i) const;

  /// Every piece (marked arc or gap) of this partition as arcs, for audits.
  std::vector<Arc> all_pieces() const;

 private:
  DynamicalPartition(long level, long marked, std::vector<PartitionGap> lg,
                     std::vector<PartitionGap> sg, BigReal defect,
                     const BackwardOrbit* orbit)
      : level_(level),
        marked_count_(marked),
        long_gaps_(std::move(lg)),
        short_gaps_(std::move(sg)),
        tiling_defect_(std::move(defect)),
        orbit_(orbit) {}

  long level_;
  long marked_count_;
  std::vector<PartitionGap> long_gaps_;   // indexed by i
  std::vector<PartitionGap> short_gaps_;  // indexed by i
  BigReal tiling_defect_;
  const BackwardOrbit* orbit_;
};

struct RefinementReport {
  long checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that every piece of the finer partition lies inside exactly one
/// piece of the coarser one (consecutive levels).
RefinementReport refinement_check(const DynamicalPartition& coarse,
                                  const DynamicalPartition& fine);

struct ComparabilityReport {
  // min over marked arcs A and adjacent gaps B of |A|/|B|, and the count of
  // ratios inspected.
  BigReal min_ratio;
  long pairs = 0;
};

/// Prop-5 style audit: marked arcs versus their adjacent gaps.
ComparabilityReport comparability_audit(const DynamicalPartition& p);

}  // namespace cherry
