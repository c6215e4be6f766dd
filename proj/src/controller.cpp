#include "cbf/controller.hpp"

namespace cbf {

void Controller::validate() const {
  if (q_diag.size() != input_dim() || u_lo.size() != input_dim() || u_hi.size() != input_dim()) {
    throw ConfigError("controller: dimension mismatch");
  }
  for (int i = 0; i < q_diag.size(); ++i) {
    if (!(q_diag[i] > 0.0)) throw ConfigError("controller: q_diag must be positive");
    if (!(u_lo[i] < u_hi[i])) throw ConfigError("controller: u_lo must be below u_hi");
  }
}

Vec control_law(const Controller& ctrl, const Vec& x, MlpWorkspace& ws) {
  mlp_forward(ctrl.feature_net, x, ws);
  Vec u = -(ws.act.back().array() / ctrl.q_diag.array());
  return u.cwiseMax(ctrl.u_lo).cwiseMin(ctrl.u_hi);
}

Vec control_law(const Controller& ctrl, const Vec& x) {
  MlpWorkspace ws;
  return control_law(ctrl, x, ws);
}

ControlLawGrad control_law_grad(const Controller& ctrl, const Vec& x) {
  ControlLawGrad out;
  MlpWorkspace ws;
  mlp_forward(ctrl.feature_net, x, ws);
  const Vec c = ws.act.back();
  out.pre = -(c.array() / ctrl.q_diag.array());
  out.u = out.pre.cwiseMax(ctrl.u_lo).cwiseMin(ctrl.u_hi);
  out.interior_mask.resize(out.pre.size());
  for (int i = 0; i < out.pre.size(); ++i) {
    out.interior_mask[i] =
        (out.pre[i] >= ctrl.u_lo[i] && out.pre[i] <= ctrl.u_hi[i]) ? 1.0 : 0.0;
  }

  const int n_u = ctrl.input_dim();
  out.wrt_params.resize(n_u, ctrl.feature_net.param_count());
  Vec upstream = Vec::Zero(n_u);
  Vec grad = Vec::Zero(ctrl.feature_net.param_count());
  for (int i = 0; i < n_u; ++i) {
    upstream.setZero();
    upstream[i] = 1.0;
    grad.setZero();
    mlp_backward(ctrl.feature_net, ws, upstream, 1.0, &grad, nullptr);
    out.wrt_params.row(i) = (-out.interior_mask[i] / ctrl.q_diag[i]) * grad.transpose();
  }

  const Mat dc_dx = mlp_grad_input(ctrl.feature_net, x);
  out.wrt_x.resize(n_u, ctrl.state_dim());
  for (int i = 0; i < n_u; ++i) {
    out.wrt_x.row(i) = (-out.interior_mask[i] / ctrl.q_diag[i]) * dc_dx.row(i);
  }
  return out;
}

double controller_lipschitz(const Controller& ctrl) {
  const double inv_q_max = (1.0 / ctrl.q_diag.array()).maxCoeff();
  return inv_q_max * lipschitz_upper(ctrl.feature_net);
}

Vec closed_loop_step(const System& sys, const Controller& ctrl, const Vec& x, Vec* u_out) {
  const Vec u = control_law(ctrl, x);
  if (u_out != nullptr) *u_out = u;
  return sys.step(x, u);
}

std::vector<Vec> simulate(const System& sys, const Controller& ctrl, const Vec& x0, int steps) {
  return simulate(sys, [&](const Vec& x) { return control_law(ctrl, x); }, x0, steps);
}

}  // namespace cbf
