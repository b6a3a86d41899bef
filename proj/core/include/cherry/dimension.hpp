#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cherry/partition.hpp"

namespace cherry {

/// Root s of sum |I|^s = 1 over the given cover lengths, by bisection on
/// [0, 1]. The sum is strictly decreasing in s, equals the cover count at
/// s = 0 and the total length at s = 1.
BigReal bowen_dim_from_gaps(const std::vector<BigReal>& gap_lengths,
                            long precision_bits);

/// Bowen-type pressure root on the gaps of a dynamical partition (the
/// natural covers of the non-wandering set).
BigReal bowen_dim(const DynamicalPartition& p);

struct BoxCountPoint {
  BigReal epsilon;
  long long count = 0;
};

/// Number of eps-boxes [k eps, (k+1) eps) meeting the complement of the
/// marked arcs, per epsilon.
std::vector<BoxCountPoint> box_count(const DynamicalPartition& p,
                                     const std::vector<BigReal>& epsilons);

/// Least-squares slope of log(count) against log(1/eps).
double box_dimension_slope(const std::vector<BoxCountPoint>& pts);

struct DimensionLevel {
  long n = 0;
  long long gap_count = 0;
  BigReal mean_gap;
  BigReal d_n;
};

struct DimensionEstimate {
  std::vector<DimensionLevel> levels;
  std::string method = "bowen-pressure";
  std::optional<BigReal> extrapolated;  // Aitken delta-squared on the tail
  std::optional<BigReal> uncertainty;
};

/// D_n across partition levels [level_lo, level_hi], with an Aitken
/// extrapolation of the tail attached when three levels are available.
DimensionEstimate estimate_dimension(const FlatCircleMap& m, const BackwardOrbit& orbit,
                                     const ConvergentTable& table, long level_lo,
                                     long level_hi);

struct DichotomyReport {
  bool degenerate_ok = false;  // decreasing tail, final level < 0.15
  bool bounded_ok = false;     // final level > 0.05, non-decreasing tail trend
  std::string detail;
  bool pass() const { return degenerate_ok && bounded_ok; }
};

/// Compares a degenerate-regime run against a bounded-regime run of the
/// same rotation number. The 0.15/0.05 thresholds are desk-scale artifact
/// conventions, not paper values.
DichotomyReport dichotomy_report(const DimensionEstimate& degenerate_run,
                                 const DimensionEstimate& bounded_run,
                                 const BigReal& deg_ell1, const BigReal& deg_ell2,
                                 const BigReal& bnd_ell1, const BigReal& bnd_ell2);

}  // namespace cherry
