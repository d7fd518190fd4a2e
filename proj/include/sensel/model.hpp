#pragma once

#include "sensel/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace sensel {

/// Discrete linear deviation dynamics: dx_k = A dx_{k-1} + B u_{k-1} + w, w ~ N(0, Q).
struct PlantModel {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix Q;  // n x n, symmetric PSD

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index control_dim() const { return B.cols(); }
};

/// One sensor: dy = H dx + v, v ~ N(0, R).
struct Sensor {
  Matrix H;  // p x n
  Matrix R;  // p x p, symmetric positive definite

  Eigen::Index measurement_dim() const { return H.rows(); }
};

/// Sensors are addressed by 1-based index throughout, matching how schedules
/// are written ("2 3 1 2 3 1 ...").
struct SensorSuite {
  std::vector<Sensor> sensors;

  int size() const { return static_cast<int>(sensors.size()); }
  /// Throws IndexError outside [1, size()].
  const Sensor& at(int index) const;
  Eigen::Index max_measurement_dim() const;
};

/// Quadratic penalties of the stage cost dx' D dx + u' E u.
struct CostWeights {
  Matrix D;  // n x n, SPD
  Matrix E;  // m x m, SPD
};

inline constexpr int kDefaultHorizon = 40;
inline constexpr int kDefaultRoundRobinStart = 2;

struct Scenario {
  PlantModel plant;
  SensorSuite sensors;
  CostWeights costs;
  Vector x0;  // initial deviation
  Matrix P0;  // initial estimation covariance
  int horizon = kDefaultHorizon;
  int window = 5;
  int round_robin_start = kDefaultRoundRobinStart;
};

/// Absolute operating point the deviation coordinates are taken about.
struct Setpoint {
  Vector x_star;
  std::vector<Vector> y_star;  // one per sensor
};

struct Violation {
  std::string path;     // e.g. "sensors[1].R" or "window"
  std::string message;
};

/// Every invariant violation in s; empty when s is valid. Never throws on
/// finite-valued input and reports non-finite entries as violations.
std::vector<Violation> validate_scenario(const Scenario& s);

/// x_abs - x_star. Throws DimensionError on length mismatch.
Vector to_deviation(const Vector& x_abs, const Setpoint& sp);

/// x_star + dx. Throws DimensionError on length mismatch.
Vector from_deviation(const Vector& dx, const Setpoint& sp);

/// y_abs - y_star[sensor]; sensor is 1-based.
Vector measurement_to_deviation(const Vector& y_abs, const Setpoint& sp, int sensor);

/// The worked three-bus example: diagonal A, coupled B, one scalar sensor per
/// bus (sensor i reads bus i), P0 = I, K = 40, d = 5.
Scenario three_bus_scenario();

}  // namespace sensel
