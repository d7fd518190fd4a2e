#include "sensel/model.hpp"

#include "sensel/errors.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace sensel {

const Sensor& SensorSuite::at(int index) const {
  if (index < 1 || index > size()) {
    throw IndexError(fmt::format("sensor index {} outside [1, {}]", index, size()));
  }
  return sensors[static_cast<std::size_t>(index - 1)];
}

Eigen::Index SensorSuite::max_measurement_dim() const {
  Eigen::Index p = 0;
  for (const auto& s : sensors) p = std::max(p, s.measurement_dim());
  return p;
}

namespace {

class Checker {
 public:
  void fail(std::string path, std::string message) {
    out_.push_back({std::move(path), std::move(message)});
  }

  /// Shape and finiteness; returns false when later checks should be skipped.
  bool shape(const Matrix& m, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
      fail(path, fmt::format("expected {}x{}, got {}x{}", rows, cols, m.rows(), m.cols()));
      return false;
    }
    if (!m.allFinite()) {
      fail(path, "contains non-finite entries");
      return false;
    }
    return true;
  }

  void symmetric(const Matrix& m, const std::string& path, bool strictly_positive) {
    const double asym = asymmetry(m);
    if (asym > kSymmetryTol) {
      fail(path, fmt::format("not symmetric (max |M_ij - M_ji| = {:.3g})", asym));
      return;
    }
    if (m.size() == 0) return;
    const double lo = min_eigenvalue(m);
    if (strictly_positive && !(lo > 0.0)) {
      fail(path, fmt::format("not positive definite (min eigenvalue {:.6g})", lo));
    } else if (!strictly_positive && lo < -kPsdTol) {
      fail(path, fmt::format("not positive semidefinite (min eigenvalue {:.6g})", lo));
    }
  }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  Checker c;
  const Eigen::Index n = s.plant.A.rows();
  const Eigen::Index m = s.plant.B.cols();

  if (n == 0) c.fail("A", "state dimension is zero");
  c.shape(s.plant.A, "A", n, n);
  c.shape(s.plant.B, "B", n, m);
  if (m == 0) c.fail("B", "control dimension is zero");
  if (c.shape(s.plant.Q, "Q", n, n)) c.symmetric(s.plant.Q, "Q", false);

  if (s.sensors.size() < 1) c.fail("sensors", "at least one sensor is required");
  for (int i = 0; i < s.sensors.size(); ++i) {
    const Sensor& sensor = s.sensors.sensors[static_cast<std::size_t>(i)];
    const std::string base = fmt::format("sensors[{}]", i);
    const Eigen::Index p = sensor.H.rows();
    if (p == 0) c.fail(base + ".H", "sensor has no measurement rows");
    c.shape(sensor.H, base + ".H", p, n);
    if (c.shape(sensor.R, base + ".R", p, p)) c.symmetric(sensor.R, base + ".R", true);
  }

  if (c.shape(s.costs.D, "D", n, n)) c.symmetric(s.costs.D, "D", true);
  if (c.shape(s.costs.E, "E", m, m)) c.symmetric(s.costs.E, "E", true);

  if (s.x0.size() != n) {
    c.fail("x0", fmt::format("expected length {}, got {}", n, s.x0.size()));
  } else if (!s.x0.allFinite()) {
    c.fail("x0", "contains non-finite entries");
  }
  if (c.shape(s.P0, "P0", n, n)) c.symmetric(s.P0, "P0", false);

  if (s.horizon < 1) c.fail("K", fmt::format("horizon must be >= 1, got {}", s.horizon));
  if (s.window < 1 || s.window > std::max(s.horizon, 1)) {
    c.fail("d", fmt::format("window must satisfy 1 <= d <= K = {}, got {}", s.horizon, s.window));
  }
  if (s.round_robin_start < 1 || s.round_robin_start > std::max(s.sensors.size(), 1)) {
    c.fail("round_robin_start", fmt::format("must lie in [1, {}], got {}", s.sensors.size(),
                                            s.round_robin_start));
  }
  return c.take();
}

Vector to_deviation(const Vector& x_abs, const Setpoint& sp) {
  if (x_abs.size() != sp.x_star.size()) {
    throw DimensionError(fmt::format("to_deviation: state has length {}, setpoint {}",
                                     x_abs.size(), sp.x_star.size()));
  }
  return x_abs - sp.x_star;
}

Vector from_deviation(const Vector& dx, const Setpoint& sp) {
  if (dx.size() != sp.x_star.size()) {
    throw DimensionError(fmt::format("from_deviation: deviation has length {}, setpoint {}",
                                     dx.size(), sp.x_star.size()));
  }
  return sp.x_star + dx;
}

Vector measurement_to_deviation(const Vector& y_abs, const Setpoint& sp, int sensor) {
  if (sensor < 1 || sensor > static_cast<int>(sp.y_star.size())) {
    throw IndexError(fmt::format("sensor index {} outside [1, {}]", sensor, sp.y_star.size()));
  }
  const Vector& ref = sp.y_star[static_cast<std::size_t>(sensor - 1)];
  if (y_abs.size() != ref.size()) {
    throw DimensionError(fmt::format("measurement has length {}, setpoint {}", y_abs.size(),
                                     ref.size()));
  }
  return y_abs - ref;
}

Scenario three_bus_scenario() {
  Scenario s;
  s.plant.A = Eigen::Vector3d(1.03, 1.02, 1.05).asDiagonal();
  s.plant.B.resize(3, 3);
  s.plant.B << 0.6, 0.1, 0.2,
               0.1, 0.7, 0.15,
               0.2, 0.15, 0.8;
  s.plant.Q = Eigen::Vector3d(0.05, 0.02, 0.01).asDiagonal();

  const double r[3] = {0.1, 0.2, 2.0};
  for (int i = 0; i < 3; ++i) {
    Sensor sensor;
    sensor.H = Matrix::Zero(1, 3);
    sensor.H(0, i) = 1.0;
    sensor.R = Matrix::Constant(1, 1, r[i]);
    s.sensors.sensors.push_back(std::move(sensor));
  }
  s.costs.D = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  s.costs.E = 5.0 * Matrix::Identity(3, 3);
  s.x0 = Eigen::Vector3d(30.0, 10.0, 20.0);
  s.P0 = Matrix::Identity(3, 3);
  s.horizon = 40;
  s.window = 5;
  s.round_robin_start = 2;
  return s;
}

}  // namespace sensel
