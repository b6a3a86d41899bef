#pragma once

#include "cherry/bigreal.hpp"

namespace cherry {

/// Euler beta function B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q), p, q > 0.
BigReal beta_fn(const BigReal& p, const BigReal& q);

/// Regularized incomplete beta function I_x(p, q) for x in [0, 1], p, q > 0.
///
/// Continued-fraction evaluation with the symmetry reduction
/// I_x(p,q) = 1 - I_{1-x}(q,p) applied for x > p/(p+q), so accuracy is
/// uniform near both endpoints. Relative error is below 2^(8-P) where P is
/// the minimum precision of the arguments.
BigReal reg_inc_beta(const BigReal& x, const BigReal& p, const BigReal& q);

/// Inverse of reg_inc_beta in x: returns x with I_x(p,q) = y.
///
/// Bisection on reg_inc_beta; the result satisfies both
/// |x - x_true| <= 2^(16-P) and |I_x(p,q) - y| <= 2^(16-P).
BigReal inv_reg_inc_beta(const BigReal& y, const BigReal& p, const BigReal& q);

}  // namespace cherry
