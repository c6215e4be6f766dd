#include "cbf/dynamics.hpp"

#include <cmath>

namespace cbf {

Vec rk4_step(const VectorField& field, const Vec& x, const Vec& u, double dt) {
  const Vec k1 = field.f(x, u);
  const Vec k2 = field.f(x + (0.5 * dt) * k1, u);
  const Vec k3 = field.f(x + (0.5 * dt) * k2, u);
  const Vec k4 = field.f(x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat rk4_state_jacobian(const VectorField& field, const Vec& x, const Vec& u, double dt) {
  const int n = field.state_dim;
  const Mat eye = Mat::Identity(n, n);

  const Vec k1 = field.f(x, u);
  const Vec x2 = x + (0.5 * dt) * k1;
  const Vec k2 = field.f(x2, u);
  const Vec x3 = x + (0.5 * dt) * k2;
  const Vec k3 = field.f(x3, u);
  const Vec x4 = x + dt * k3;

  const Mat a1 = field.df_dx(x, u);
  const Mat a2 = field.df_dx(x2, u) * (eye + (0.5 * dt) * a1);
  const Mat a3 = field.df_dx(x3, u) * (eye + (0.5 * dt) * a2);
  const Mat a4 = field.df_dx(x4, u) * (eye + dt * a3);
  return eye + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
}

Mat rk4_input_jacobian(const VectorField& field, const Vec& x, const Vec& u, double dt) {
  const Vec k1 = field.f(x, u);
  const Vec x2 = x + (0.5 * dt) * k1;
  const Vec k2 = field.f(x2, u);
  const Vec x3 = x + (0.5 * dt) * k2;
  const Vec k3 = field.f(x3, u);
  const Vec x4 = x + dt * k3;

  const Mat b1 = field.df_du(x, u);
  const Mat b2 = field.df_dx(x2, u) * ((0.5 * dt) * b1) + field.df_du(x2, u);
  const Mat b3 = field.df_dx(x3, u) * ((0.5 * dt) * b2) + field.df_du(x3, u);
  const Mat b4 = field.df_dx(x4, u) * (dt * b3) + field.df_du(x4, u);
  return (dt / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
}

Vec benchmark_vector_field(const Vec& x, const Vec& u) {
  Vec out(2);
  out[0] = x[1] + std::cos(x[0]);
  out[1] = (1.0 - x[0] * x[0]) * x[1] - x[0] + std::sin(x[0]) + u[0];
  return out;
}

System benchmark_system(double dt) {
  System sys;
  sys.name = "benchmark";
  sys.dt = dt;
  sys.field.state_dim = 2;
  sys.field.input_dim = 1;
  sys.field.f = benchmark_vector_field;
  sys.field.df_dx = [](const Vec& x, const Vec&) {
    Mat j(2, 2);
    j(0, 0) = -std::sin(x[0]);
    j(0, 1) = 1.0;
    j(1, 0) = -2.0 * x[0] * x[1] - 1.0 + std::cos(x[0]);
    j(1, 1) = 1.0 - x[0] * x[0];
    return j;
  };
  sys.field.df_du = [](const Vec&, const Vec&) {
    Mat j(2, 1);
    j(0, 0) = 0.0;
    j(1, 0) = 1.0;
    return j;
  };
  sys.input_box = Box(Vec::Constant(1, -2.0), Vec::Constant(1, 2.0));

  // radii squared: 0.4^2, 1.2^2, 2^2, 2.5^2, 2.8^2
  sys.unsafe = [](const Vec& x) {
    const double n2 = x.squaredNorm();
    return n2 <= 0.16 || n2 >= 7.84;
  };
  sys.safe = [](const Vec& x) {
    const double n2 = x.squaredNorm();
    return n2 > 1.44 && n2 <= 4.0;
  };
  sys.decay_region = [](const Vec& x) { return x.squaredNorm() <= 6.25; };

  sys.sampling_box = Box::cube(2, 3.0);
  sys.verify_box = Box::cube(2, 2.5);
  return sys;
}

System make_system(const std::string& name, double dt) {
  if (name == "benchmark") return benchmark_system(dt);
  throw ConfigError("unknown system: " + name);
}

std::vector<Vec> simulate(const System& sys, const std::function<Vec(const Vec&)>& law,
                          const Vec& x0, int steps) {
  if (steps < 0) throw ConfigError("simulate: negative step count");
  std::vector<Vec> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  traj.push_back(x0);
  for (int t = 0; t < steps; ++t) {
    const Vec& x = traj.back();
    traj.push_back(sys.step(x, law(x)));
  }
  return traj;
}

}  // namespace cbf
