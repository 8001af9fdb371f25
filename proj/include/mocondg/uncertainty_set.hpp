#pragma once

#include "mocondg/types.hpp"

namespace mocondg {

/// Z = { z : -delta e <= B z <= delta e } with B nonsingular and delta > 0.
/// Equivalently Z = { z : A z <= b } with A = [B; -B] and b = delta e.
class PolyhedralUncertaintySet {
 public:
  PolyhedralUncertaintySet(Matrix B, double delta);

  const Matrix& B() const { return B_; }
  double delta() const { return delta_; }
  int dim() const { return static_cast<int>(B_.rows()); }

  Matrix A() const;
  Vector b() const;

  /// sup { ||z|| : z in Z }, the Lipschitz constant of the support function.
  /// Exact by vertex enumeration for dim() <= 12, otherwise the upper bound
  /// delta * sqrt(n) / sigma_min(B).
  double max_norm() const { return max_norm_; }

 private:
  Matrix B_;
  double delta_;
  double max_norm_ = 0.0;
};

}  // namespace mocondg
