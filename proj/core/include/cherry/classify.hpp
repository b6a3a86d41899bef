#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cherry/rotation.hpp"

namespace cherry {

/// t_i(j) = (1 - l_i^-j) / (l_i - 1) for l_i > 1, the geometric-sum factor
/// of the recursive affine inequalities. `which` selects ell1 or ell2.
BigReal t_func(int which, long j, const BigReal& ell1, const BigReal& ell2);

/// 2x2 coefficient matrix of the recursive affine inequality at one level.
struct TransferMatrix {
  std::array<std::array<BigReal, 2>, 2> m;
  bool even_level = false;

  TransferMatrix(BigReal a00, BigReal a01, BigReal a10, BigReal a11, bool even)
      : m{{{std::move(a00), std::move(a01)}, {std::move(a10), std::move(a11)}}},
        even_level(even) {}

  static TransferMatrix multiply(const TransferMatrix& a, const TransferMatrix& b);
  BigReal det() const;
  BigReal trace() const;
  BigReal entry_max_abs() const;
  /// Spectral norm (largest singular value).
  BigReal op_norm() const;
  /// Eigenvalues, ascending, when real.
  std::pair<BigReal, BigReal> eigenvalues() const;
};

/// A(n) per level parity: even levels [[ (l2/l1) t2(a_n), l1^-a_{n-1} ], [1, 0]],
/// odd levels [[ (l1/l2) t1(a_n), l2^-a_{n-1} ], [1, 0]].
TransferMatrix transfer_matrix(bool even_level, long a_this, long a_prev,
                               const BigReal& ell1, const BigReal& ell2);

/// Closed-form eigenvalues (lambda_s, lambda_u) of the bi-periodic product
/// matrix for rotation number [a b a b ...] (a at even levels, b at odd).
std::pair<BigReal, BigReal> biperiodic_eigen(long a, long b, const BigReal& ell1,
                                             const BigReal& ell2);

struct CurvePoint {
  BigReal ell1;
  std::optional<BigReal> ell2;  // empty when the curve exits the domain here
  std::optional<BigReal> lambda_u_residual;
};

/// Traces the lambda_u = 1 transition curve: for each ell1 in the grid,
/// solves lambda_u(a, b; ell1, ell2) = 1 for ell2 by bisection. The output
/// ell2 values are verified to decrease along increasing ell1.
std::vector<CurvePoint> curve_trace(long a, long b, const std::vector<BigReal>& ell1_grid,
                                    long precision_bits);

struct MatrixAuditLevel {
  long n = 0;
  BigReal entry_max;
  BigReal op_norm;
};

struct MatrixAuditReport {
  std::vector<MatrixAuditLevel> levels;       // cumulative products at even n
  std::optional<long> contraction_onset;      // first n with op norm < 1
  bool entry_bound_ok = true;                 // entries <= max(l1/l2, l2/l1)
  BigReal entry_bound;

  explicit MatrixAuditReport(BigReal bound) : entry_bound(std::move(bound)) {}
};

/// Products A-bar(n) A-bar(n-2) ... A-bar(4) with A-bar(n) = A(n)A(n-1),
/// against the uniform entry bound and the contraction criterion.
MatrixAuditReport matrix_product_audit(const ContinuedFraction& cf, const BigReal& ell1,
                                       const BigReal& ell2, long n_max,
                                       long precision_bits);

/// W'(x, y, l1, l2) =
///   [ l1/2 + (l1/2) sqrt(1 - (2(l1-1)/l1) x^(2/l2)) ]^-1 * y^(4/l1-2) / (1 - y^(2/l1)).
BigReal wprime(const BigReal& x, const BigReal& y, const BigReal& ell1,
               const BigReal& ell2);

struct WprimeCheck {
  BigReal w_055_016, w_03_044, product;
  bool ok_09 = false, ok_098 = false, ok_085 = false;
  bool all_ok() const { return ok_09 && ok_098 && ok_085; }
};

/// The three pinned bounds at ell1 = ell2 = 2:
/// W'(0.55,0.16) < 0.9, W'(0.3,0.44) < 0.98, W'(0.55,0.16) W'(0.16,0.55) < 0.85.
WprimeCheck wprime_constants_check(long precision_bits);

enum class GeometryRegion { Degenerate, Bounded, Critical, Unknown };
enum class VerdictBasis { TheoremRegion, LambdaCriterion, EmpiricalOnly };

struct GeometryVerdict {
  GeometryRegion region = GeometryRegion::Unknown;
  VerdictBasis basis = VerdictBasis::EmpiricalOnly;
  std::optional<BigReal> lambda_u, lambda_s;  // present iff CF is bi-periodic
  std::string cf_spec;
  BigReal ell1, ell2;
  std::string note;

  GeometryVerdict(BigReal e1, BigReal e2)
      : ell1(std::move(e1)), ell2(std::move(e2)) {}
};

std::string to_string(GeometryRegion r);
std::string to_string(VerdictBasis b);

/// Region verdict from the theorem regions and, for bi-periodic rotation
/// numbers, the eigenvalue criterion. Critical tolerance on lambda_u is 1e-9.
GeometryVerdict classify_point(const ContinuedFraction& cf, const BigReal& ell1,
                               const BigReal& ell2, long precision_bits);

}  // namespace cherry
