#pragma once

#include <functional>

#include "cherry/bigreal.hpp"

namespace cherry {

/// Plain bisection for a monotone (or at least single-crossing) function.
///
/// Requires g(lo) and g(hi) to have opposite signs, or one of them to be
/// exactly zero. Midpoints are computed as lo + (hi-lo)/2 and an exact zero
/// of g at a midpoint shrinks the bracket toward lo, so the iterate sequence
/// is fully deterministic. Returns the midpoint of the final bracket, whose
/// width is at most `tol`.
BigReal bisect_root(const std::function<BigReal(const BigReal&)>& g,
                    const BigReal& lo, const BigReal& hi, const BigReal& tol);

}  // namespace cherry
