#include "sensel/estimator.hpp"

#include "sensel/errors.hpp"

#include <fmt/format.h>

namespace sensel {

namespace {

void check_plant(const PlantModel& plant, Eigen::Index n) {
  if (plant.A.rows() != n || plant.A.cols() != n || plant.Q.rows() != n || plant.Q.cols() != n) {
    throw DimensionError(fmt::format("plant is {}x{} (Q {}x{}) but covariance is {}x{}",
                                     plant.A.rows(), plant.A.cols(), plant.Q.rows(),
                                     plant.Q.cols(), n, n));
  }
}

void check_sensor(const Sensor& sensor, Eigen::Index n) {
  const Eigen::Index p = sensor.H.rows();
  if (sensor.H.cols() != n || sensor.R.rows() != p || sensor.R.cols() != p) {
    throw DimensionError(fmt::format("sensor H is {}x{}, R is {}x{}, state dimension {}", p,
                                     sensor.H.cols(), sensor.R.rows(), sensor.R.cols(), n));
  }
}

Matrix predicted_covariance(const Matrix& P, const PlantModel& plant) {
  return symmetrized(plant.A * P * plant.A.transpose() + plant.Q);
}

Matrix posterior_covariance(const Matrix& P_minus, const Matrix& gain, const Sensor& sensor) {
  const Eigen::Index n = P_minus.rows();
  Matrix P = symmetrized((Matrix::Identity(n, n) - gain * sensor.H) * P_minus);
  require_psd(P, "posterior covariance");
  return P;
}

}  // namespace

Prediction predict(const BeliefState& b, const Vector& u, const PlantModel& plant) {
  const Eigen::Index n = b.x_hat.size();
  if (b.P.rows() != n || b.P.cols() != n) {
    throw DimensionError(fmt::format("belief estimate has length {} but P is {}x{}", n,
                                     b.P.rows(), b.P.cols()));
  }
  check_plant(plant, n);
  if (plant.B.rows() != n || plant.B.cols() != u.size()) {
    throw DimensionError(fmt::format("B is {}x{} but control has length {}", plant.B.rows(),
                                     plant.B.cols(), u.size()));
  }
  return {plant.A * b.x_hat + plant.B * u, predicted_covariance(b.P, plant)};
}

Matrix kalman_gain(const Matrix& P_minus, const Sensor& sensor) {
  const Eigen::Index n = P_minus.rows();
  if (P_minus.cols() != n) throw DimensionError("kalman_gain: P_minus is not square");
  check_sensor(sensor, n);
  const Matrix PHt = P_minus * sensor.H.transpose();
  const Matrix S = sensor.H * PHt + sensor.R;
  return solve_right_spd(PHt, S, "innovation covariance");
}

BeliefState update(const Prediction& pred, const Vector& y, const Sensor& sensor) {
  const Eigen::Index n = pred.x_hat_minus.size();
  if (pred.P_minus.rows() != n || pred.P_minus.cols() != n) {
    throw DimensionError("update: prediction estimate and covariance disagree in size");
  }
  check_sensor(sensor, n);
  if (y.size() != sensor.H.rows()) {
    throw DimensionError(fmt::format("measurement has length {}, sensor expects {}", y.size(),
                                     sensor.H.rows()));
  }
  const Matrix gain = kalman_gain(pred.P_minus, sensor);
  BeliefState out;
  out.x_hat = pred.x_hat_minus + gain * (y - sensor.H * pred.x_hat_minus);
  out.P = posterior_covariance(pred.P_minus, gain, sensor);
  return out;
}

Matrix covariance_step(const Matrix& P, const PlantModel& plant, const Sensor& sensor) {
  const Eigen::Index n = P.rows();
  if (P.cols() != n) throw DimensionError("covariance_step: P is not square");
  check_plant(plant, n);
  const Matrix P_minus = predicted_covariance(P, plant);
  return posterior_covariance(P_minus, kalman_gain(P_minus, sensor), sensor);
}

}  // namespace sensel
