#pragma once

#include "cbf/dynamics.hpp"
#include "cbf/mlp.hpp"
#include "cbf/types.hpp"

namespace cbf {

// Box-constrained control law in closed form:
//   u(x) = clamp(-Q^{-1} c(x), u_lo, u_hi)
// with diagonal Q > 0 and a feature net c : R^{n_x} -> R^{n_u}.
// This is the exact minimizer of 0.5 u'Qu + c(x)'u over the box.
struct Controller {
  Mlp feature_net;
  Vec q_diag;
  Vec u_lo;
  Vec u_hi;

  int state_dim() const { return feature_net.input_dim(); }
  int input_dim() const { return feature_net.output_dim(); }
  void validate() const;
};

Vec control_law(const Controller& ctrl, const Vec& x);
Vec control_law(const Controller& ctrl, const Vec& x, MlpWorkspace& ws);

struct ControlLawGrad {
  Vec u;              // clamped input
  Vec pre;            // -Q^{-1} c(x) before clamping
  Vec interior_mask;  // 1 where the box constraint is inactive (kink counts as interior)
  Mat wrt_params;     // n_u x param_count(feature_net)
  Mat wrt_x;          // n_u x n_x
};

// Chain rule through -Q^{-1} c with the clamp treated as pass-through on the
// closed box and zero outside (interior branch at the kink).
ControlLawGrad control_law_grad(const Controller& ctrl, const Vec& x);

// max_j(1/Q_j) * lipschitz_upper(c); the clamp is 1-Lipschitz, so this
// bounds the full law.
double controller_lipschitz(const Controller& ctrl);

// One closed-loop step x+ = rk4(f, x, u(x), dt); u_out receives the applied
// input when non-null.
Vec closed_loop_step(const System& sys, const Controller& ctrl, const Vec& x,
                     Vec* u_out = nullptr);

std::vector<Vec> simulate(const System& sys, const Controller& ctrl, const Vec& x0, int steps);

}  // namespace cbf
