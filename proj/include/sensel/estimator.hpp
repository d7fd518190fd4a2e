#pragma once

#include "sensel/model.hpp"

namespace sensel {

/// Posterior deviation estimate and its error covariance at slot k.
struct BeliefState {
  Vector x_hat;
  Matrix P;
  int k = 0;
};

/// Prior (process-updated) estimate before the slot's measurement.
struct Prediction {
  Vector x_hat_minus;
  Matrix P_minus;
};

/// x^- = A x + B u,  P^- = A P A' + Q (re-symmetrized).
Prediction predict(const BeliefState& b, const Vector& u, const PlantModel& plant);

/// K = P^- H' (H P^- H' + R)^{-1}, computed by a Cholesky solve against the
/// innovation covariance. Throws NumericalError if that covariance is not PD.
Matrix kalman_gain(const Matrix& P_minus, const Sensor& sensor);

/// x = x^- + K (y - H x^-),  P = (I - K H) P^- (re-symmetrized).
/// The returned belief carries k = 0; callers stamp the slot index.
BeliefState update(const Prediction& pred, const Vector& y, const Sensor& sensor);

/// One predict-then-update cycle of the covariance alone. Never touches a
/// measurement, which is what lets schedules be planned offline.
Matrix covariance_step(const Matrix& P, const PlantModel& plant, const Sensor& sensor);

}  // namespace sensel
