#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cherry/flat_map.hpp"

namespace cherry {

/// Continued fraction [0; a_1, a_2, ...] of a rotation number in [0,1).
/// `head` holds a finite prefix, `tail` an optional repeating block that
/// makes the expansion infinite (bounded type).
struct ContinuedFraction {
  std::vector<long> head;
  std::vector<long> tail;

  /// 1-based partial quotient a_n; expands the periodic tail as needed.
  long quotient(long n) const;
  /// Number of quotients available (LONG_MAX when a tail is present).
  long available() const;
  bool bounded_type() const { return !tail.empty(); }
  /// True when the full expansion is [x y x y ...]; outputs a_odd = a_1 and
  /// a_even = a_2 positions of the pattern.
  bool biperiodic(long* a_odd, long* a_even) const;

  /// Accepted forms: "golden", "[1,2]rep", "[3]rep", "[1,2,3]" (finite).
  static ContinuedFraction parse(const std::string& spec);
  std::string to_spec() const;
};

/// Denominators/numerators of the convergents, indexed as q_1 = 1,
/// q_2 = a_1, q_{n+1} = a_n q_n + q_{n-1} (and p_1 = 0, p_2 = 1 alongside).
class ConvergentTable {
 public:
  ConvergentTable(std::vector<long long> q, std::vector<long long> p)
      : q_(std::move(q)), p_(std::move(p)) {}

  long depth() const { return static_cast<long>(q_.size()) - 1; }
  long long q(long n) const;
  long long p(long n) const;

 private:
  std::vector<long long> q_, p_;  // index 0 unused
};

ConvergentTable convergents(const ContinuedFraction& cf, long depth);

/// Value of the fraction truncated after `num_quotients` quotients.
BigReal cf_value(const ContinuedFraction& cf, long num_quotients, long precision_bits);

/// Birkhoff estimate of the rotation number from n_iters lift steps.
/// Returns (estimate, error bound 1/n).
std::pair<BigReal, BigReal> rotation_number_estimate(const FlatCircleMap& m,
                                                     long n_iters,
                                                     const CirclePoint& x0);

/// Finds the translation parameter c so the orbit of r(U) realizes the
/// closest-return combinatorics of `target` up to level `depth`, by nested
/// bisection on c (rho is nondecreasing in c). An optional initial c is
/// accepted first if it already satisfies every level.
FlatCircleMap tune_parameter(const BigReal& ell1, const BigReal& ell2,
                             const Arc& flat, const ContinuedFraction& target,
                             long depth, long precision_bits,
                             const CirclePoint* initial_c = nullptr);

/// Empirical closest-return times of the orbit of r(U) under the distance to
/// the flat piece, verified against the target's convergent denominators.
/// Returns the times aligned per level (entry n corresponds to q_n).
std::vector<long long> closest_returns(const FlatCircleMap& m, long depth);

/// Raw strict-improvement times of the distance to U over the first
/// max_steps iterates, no verification.
std::vector<long long> scan_closest_returns(const FlatCircleMap& m,
                                            long long max_steps);

}  // namespace cherry
