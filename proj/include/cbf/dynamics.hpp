#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cbf/types.hpp"

namespace cbf {

// Continuous-time vector field xdot = f(x, u) with analytic Jacobians.
// The Jacobians drive exact reverse-mode gradients through the RK4 step and
// the discrete-map sensitivity bounds used for Lipschitz estimation.
struct VectorField {
  int state_dim = 0;
  int input_dim = 0;
  std::function<Vec(const Vec&, const Vec&)> f;
  std::function<Mat(const Vec&, const Vec&)> df_dx;
  std::function<Mat(const Vec&, const Vec&)> df_du;
};

// Classical RK4 update with u held constant over the step (zero-order hold).
Vec rk4_step(const VectorField& field, const Vec& x, const Vec& u, double dt);

// Exact Jacobians of the discrete map (x, u) -> rk4_step(x, u).
Mat rk4_state_jacobian(const VectorField& field, const Vec& x, const Vec& u, double dt);
Mat rk4_input_jacobian(const VectorField& field, const Vec& x, const Vec& u, double dt);

// A discrete-time control system: sampled vector field plus the set data the
// synthesis and verification stages need. Predicates are exact membership
// tests; boxes are the sampling domains.
struct System {
  std::string name;
  VectorField field;
  double dt = 0.1;
  Box input_box;  // admissible inputs U

  std::function<bool(const Vec&)> unsafe;        // X_u
  std::function<bool(const Vec&)> safe;          // X_s
  std::function<bool(const Vec&)> decay_region;  // D

  Box sampling_box;  // training sample domain
  Box verify_box;    // certification domain (contains D)

  Vec step(const Vec& x, const Vec& u) const { return rk4_step(field, x, u, dt); }
};

// 2-state benchmark:
//   x1dot = x2 + cos(x1)
//   x2dot = (1 - x1^2) x2 - x1 + sin(x1) + u
// U = [-2, 2], X_u = 0.4B ∪ {x'x >= 2.8^2}, X_s = 2B \ 1.2B, D = 2.5B,
// where B is the euclidean unit ball. Training samples come from [-3,3]^2,
// verification runs over [-2.5,2.5]^2.
Vec benchmark_vector_field(const Vec& x, const Vec& u);
System benchmark_system(double dt = 0.1);

// Registry lookup for config files; throws ConfigError for unknown names.
System make_system(const std::string& name, double dt);

// Closed-loop rollout x_{t+1} = sys.step(x_t, law(x_t)), length steps+1.
std::vector<Vec> simulate(const System& sys, const std::function<Vec(const Vec&)>& law,
                          const Vec& x0, int steps);

}  // namespace cbf
