#include "sensel/controller.hpp"

#include "sensel/errors.hpp"

#include <fmt/format.h>

namespace sensel {

GainSchedule::GainSchedule(std::vector<Matrix> gains, std::vector<Matrix> cost_to_go)
    : gains_(std::move(gains)), cost_to_go_(std::move(cost_to_go)) {
  if (cost_to_go_.size() != gains_.size() + 1) {
    throw DimensionError(fmt::format("gain schedule needs K+1 cost-to-go matrices for K = {} "
                                     "gains, got {}",
                                     gains_.size(), cost_to_go_.size()));
  }
}

const Matrix& GainSchedule::gain(int k) const {
  if (k < 1 || k > horizon()) {
    throw IndexError(fmt::format("gain index {} outside horizon [1, {}]", k, horizon()));
  }
  return gains_[static_cast<std::size_t>(k - 1)];
}

const Matrix& GainSchedule::cost_to_go(int k) const {
  if (k < 0 || k > horizon()) {
    throw IndexError(fmt::format("cost-to-go index {} outside [0, {}]", k, horizon()));
  }
  return cost_to_go_[static_cast<std::size_t>(k)];
}

GainSchedule riccati_backward(const PlantModel& plant, const CostWeights& costs, int horizon) {
  const Matrix& A = plant.A;
  const Matrix& B = plant.B;
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (horizon < 1) throw DimensionError(fmt::format("horizon must be >= 1, got {}", horizon));
  if (A.cols() != n || B.rows() != n || costs.D.rows() != n || costs.D.cols() != n ||
      costs.E.rows() != m || costs.E.cols() != m) {
    throw DimensionError(fmt::format("riccati_backward: A {}x{}, B {}x{}, D {}x{}, E {}x{}",
                                     A.rows(), A.cols(), B.rows(), B.cols(), costs.D.rows(),
                                     costs.D.cols(), costs.E.rows(), costs.E.cols()));
  }

  const auto K = static_cast<std::size_t>(horizon);
  std::vector<Matrix> gains(K);
  std::vector<Matrix> M(K + 1);
  M[K] = costs.D;
  for (std::size_t k = K; k >= 1; --k) {
    const Matrix& Mk = M[k];
    const Matrix BtM = B.transpose() * Mk;
    const Matrix S = costs.E + BtM * B;
    // L_k uses this step's M_k.
    gains[k - 1] = solve_left_spd(S, BtM * A, "E + B'M_kB");
    const Matrix correction = BtM.transpose() * solve_left_spd(S, BtM, "E + B'M_kB");
    M[k - 1] = symmetrized(costs.D + A.transpose() * (Mk - correction) * A);
    require_psd(M[k - 1], fmt::format("cost-to-go M_{}", k - 1));
  }
  return GainSchedule(std::move(gains), std::move(M));
}

Vector control_input(const GainSchedule& g, int k, const Vector& x_hat) {
  const Matrix& L = g.gain(k);
  if (L.cols() != x_hat.size()) {
    throw DimensionError(fmt::format("gain L_{} has {} columns, estimate has length {}", k,
                                     L.cols(), x_hat.size()));
  }
  return -(L * x_hat);
}

}  // namespace sensel
