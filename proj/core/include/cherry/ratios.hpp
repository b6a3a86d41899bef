#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cherry/partition.hpp"

namespace cherry {

/// Parity convention shared by every checker: sequences indexed by an even
/// level carry exponent ell1, odd levels carry ell2.
inline const BigReal& parity_exponent(long n, const BigReal& ell1, const BigReal& ell2) {
  return (n % 2 == 0) ? ell1 : ell2;
}

/// All scaling-ratio data at one partition level.
struct LevelRatios {
  long n = 0;
  std::optional<BigReal> alpha;   // gap/(gap+arc) at the q_n preimage
  std::optional<BigReal> sigma;   // |(0,q_n)| / |(q_{n-1},0)|
  std::optional<BigReal> s;       // |[-q_{n-2},0]| / |U|
  std::optional<BigReal> tau;     // |(0,q_n)| / |(0,q_{n-2})|
  std::optional<BigReal> kappa;   // |(0,q_n)| / |(0,-q_{n-1})|
  std::optional<BigReal> nu;      // -ln alpha
  std::optional<BigReal> fsigma;  // |(1,q_n+1)| / |(q_{n-1}+1,1)|
  std::vector<BigReal> beta;      // k = 0..a_{n-1}
  std::vector<BigReal> gamma1;    // raw gap lengths, k = 0..a_{n-1}
  std::vector<BigReal> w;         // i = 0..a_{n-1}-1
};

class RatioSeries {
 public:
  RatioSeries(BigReal ell1, BigReal ell2, std::vector<long> quotients,
              long depth, long precision_bits)
      : ell1_(std::move(ell1)),
        ell2_(std::move(ell2)),
        quotients_(std::move(quotients)),
        depth_(depth),
        prec_(precision_bits),
        levels_(depth + 1) {}

  const BigReal& ell1() const { return ell1_; }
  const BigReal& ell2() const { return ell2_; }
  long depth() const { return depth_; }
  long precision() const { return prec_; }
  long quotient(long n) const;  // a_n
  const LevelRatios& level(long n) const;
  LevelRatios& level_mut(long n);

  const BigReal& alpha(long n) const;
  const BigReal& sigma(long n) const;
  const BigReal& s_ratio(long n) const;
  const BigReal& tau(long n) const;
  const BigReal& kappa(long n) const;
  const BigReal& nu(long n) const;
  const BigReal& beta(long n, long k) const;
  const BigReal& gamma1(long n, long k) const;

 private:
  const BigReal& field(long n, const std::optional<BigReal>& v, const char* name) const;

  BigReal ell1_, ell2_;
  std::vector<long> quotients_;
  long depth_;
  long prec_;
  std::vector<LevelRatios> levels_;
};

/// Computes every ratio series up to `depth` from precomputed orbits.
/// The backward orbit must reach q_depth, the forward orbit q_depth + 1.
RatioSeries compute_ratios(const FlatCircleMap& m, const BackwardOrbit& back,
                           const ForwardOrbit& fwd, const ConvergentTable& table,
                           long depth);

/// Lengths |(0, q_n)| of the gaps between U and its closest forward returns,
/// n = 1..depth. These shrink at least exponentially.
std::vector<BigReal> return_gaps(const FlatCircleMap& m, const ForwardOrbit& fwd,
                                 const ConvergentTable& table, long depth);

// -- cross-ratio machinery ---------------------------------------------------

/// Four circle points in strict positive cyclic order spanning less than a
/// full turn.
class Quadruple {
 public:
  Quadruple(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c,
            const CirclePoint& d);

  const CirclePoint& a() const { return a_; }
  CirclePoint b() const { return mod1(a_.rep() + o2_); }
  CirclePoint c() const { return mod1(a_.rep() + o3_); }
  CirclePoint d() const { return mod1(a_.rep() + o4_); }
  const BigReal& o2() const { return o2_; }
  const BigReal& o3() const { return o3_; }
  const BigReal& o4() const { return o4_; }

 private:
  CirclePoint a_;
  BigReal o2_, o3_, o4_;  // offsets of b, c, d from a; 0 < o2 < o3 < o4 < 1
};

/// Cr(a,b,c,d) = |b-a||d-c| / (|c-a||d-b|).
BigReal cross_cr(const Quadruple& q);
/// Po(a,b,c,d) = |d-a||b-c| / (|c-a||d-b|); Cr + Po = 1.
BigReal cross_po(const Quadruple& q);

struct DistortionStep {
  BigReal dcr, dpo;
  bool outer_clear = false;  // [a,d] missed the closure of U: diffeo step
};

struct DistortionReport {
  std::vector<DistortionStep> steps;
  BigReal prod_dcr, prod_dpo;
  long multiplicity = 0;          // max overlap count among the outer intervals
  bool single_step_po_ok = true;  // DPo >= 1 on every diffeo step
};

/// Pushes a quadruple `steps` times through f, recording the cross-ratio
/// distortions. Throws if a middle interval (b,c) ever meets the flat piece
/// (hypothesis of the cross-ratio inequality).
DistortionReport distortion_audit(const FlatCircleMap& m, const Quadruple& q0,
                                  long steps);

// -- inequality checkers -----------------------------------------------------

struct CheckRecord {
  std::string check;
  long level = 0;
  BigReal lhs, rhs, slack;
  bool pass = false;
};

/// A-priori bounds on alpha_n^(e(n)/2): < 0.55 always, < 0.3 at least every
/// other level, and the 0.44/0.16 alternative when a level exceeds 0.3.
/// Scoped to (ell1, ell2) in [1,2]^2; refuses other exponents.
std::vector<CheckRecord> verify_apriori(const RatioSeries& s, long n0 = 5);

/// Cross-ratio lemma at one level: for k < a_{n-1},
/// (B + A g)(1 + g) / ((1 + A g)(B + g)) <= s_n beta_n(k+1) with
/// B = beta_n(k)^e(n), A = alpha_{n-1}^e(n), g the powered gap ratio.
std::vector<CheckRecord> verify_lemma1(const RatioSeries& s, long n);

/// Recursive bound alpha_n^e(n) <= M_n(e(n)) alpha_{n-2}^2 for exponents > 1;
/// for ell1 = ell2 = 1 reports the implied constant of the linear form.
std::vector<CheckRecord> verify_recursion(const RatioSeries& s, long n);

/// The M_n factor of the recursion, exposed for direct evaluation:
/// s_{n-1}^2 (2/l) / (1 + sqrt(1 - 2(l-1)/l s_{n-1} a_{n-1})) / (1 - a_{n-2})
/// * sigma_n / sigma_{n-2}.
BigReal recursion_m_factor(const BigReal& ell, const BigReal& s_prev,
                           const BigReal& alpha_prev, const BigReal& alpha_prev2,
                           const BigReal& sigma_n, const BigReal& sigma_prev2);

/// Lower-bound checks for bounded geometry: implied constants of the kappa
/// bound, the two-level alpha recursion, and the beta-chain comparison.
/// Values are reported; boundedness/trend judgments belong to the caller.
std::vector<CheckRecord> verify_lower_bounds(const RatioSeries& s);

/// nu_n = -ln alpha_n with the residuals of the order-two recursive affine
/// inequalities (implied additive constants).
std::vector<CheckRecord> nu_residuals(const RatioSeries& s);

/// w_n(i)/alpha_{n-1} for i >= 1 and w_n(0)^e(n)/alpha_{n-1}: the
/// comparability band of the covering lemma.
std::vector<CheckRecord> w_diagnostic(const RatioSeries& s, long n);

}  // namespace cherry
