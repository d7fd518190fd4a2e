#pragma once

#include "sensel/model.hpp"

#include <vector>

namespace sensel {

/// Finite-horizon LQR gains for slots 1..K and the cost-to-go matrices.
///
/// Indexing follows the recursion as printed: L_k = (E + B'M_kB)^{-1} B'M_k A
/// pairs slot k with M_k (not M_{k+1}), starting from M_K = D and stepping
/// M_{k-1} = D + A'(M_k - M_kB(E + B'M_kB)^{-1}B'M_k)A down to M_0.
class GainSchedule {
 public:
  GainSchedule(std::vector<Matrix> gains, std::vector<Matrix> cost_to_go);

  int horizon() const { return static_cast<int>(gains_.size()); }
  /// L_k for 1 <= k <= K; throws IndexError otherwise.
  const Matrix& gain(int k) const;
  /// M_k for 0 <= k <= K; throws IndexError otherwise.
  const Matrix& cost_to_go(int k) const;

 private:
  std::vector<Matrix> gains_;       // gains_[k-1] = L_k
  std::vector<Matrix> cost_to_go_;  // cost_to_go_[k] = M_k
};

/// Throws DimensionError on shape mismatch, NumericalError if E + B'MB is not
/// PD or some M_k leaves the PSD cone.
GainSchedule riccati_backward(const PlantModel& plant, const CostWeights& costs, int horizon);

/// u_k = -L_k x_hat, in deviation coordinates.
Vector control_input(const GainSchedule& g, int k, const Vector& x_hat);

}  // namespace sensel
