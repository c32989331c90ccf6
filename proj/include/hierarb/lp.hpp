#pragma once

#include <vector>

#include "hierarb/rational.hpp"

namespace hierarb::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  RationalVector x;
  Rational objective = 0;
};

/// maximize c.x  subject to  A x = b,  x >= 0.
/// Dense two-phase simplex in exact arithmetic with Bland's rule, so it
/// terminates on degenerate problems. Intended for desk-scale instances.
Solution maximize(const std::vector<RationalVector>& A, const RationalVector& b,
                  const RationalVector& c);

}  // namespace hierarb::lp
