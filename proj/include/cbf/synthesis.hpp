#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cbf/controller.hpp"
#include "cbf/dynamics.hpp"
#include "cbf/mlp.hpp"
#include "cbf/types.hpp"

namespace cbf {

struct SynthConfig {
  double alpha = 0.01;
  double delta = 0.01;
  double l_u = 0.1;   // required barrier margin on unsafe samples
  double tau_u = 2.0;
  double tau_s = 1.0;
  double tau_d = 10.0;
  double tau_r = 0.00025;

  int sample_budget = 20000;
  Box box;  // empty -> system sampling box

  std::vector<int> h_hidden = {10, 10};
  std::vector<int> c_hidden = {10};
  Vec q_diag;  // empty -> ones

  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int warm_steps = 5000;   // stage 1: classification only (tau_d = 0)
  int main_steps = 20000;  // stage 2: full objective
  int refine_steps = 5000; // stage-2 steps when retraining on counterexamples
  int log_every = 100;

  std::uint64_t seed = 0;
  int threads = 0;

  void validate() const;
};

// Sample sets routed by predicate; a point may belong to both safe and decay.
struct SampleSets {
  std::vector<Vec> safe_set;    // Z_s
  std::vector<Vec> unsafe_set;  // Z_u
  std::vector<Vec> decay_set;   // Z_d
};

// Uniform draws from the box, each routed to every set whose predicate it
// satisfies. Throws ConfigError if any set comes out empty.
SampleSets sample_datasets(const System& sys, const SynthConfig& cfg, Rng& rng);

// Penalized objective:
//   tau_r |theta|^2
//   + tau_u/|Z_u| sum max(l_u - h, 0)
//   + tau_s/|Z_s| sum max(h, 0)
//   + tau_d/|Z_d| sum max(h(f(x,u(x))) - (1-alpha) h(x) + delta, 0)
// theta = [h params; c params]. Gradient is exact reverse mode through the
// closed-loop step. include_decay=false drops the last term (stage 1).
double penalized_loss(const Mlp& h_net, const Controller& ctrl, const System& sys,
                      const SampleSets& sets, const SynthConfig& cfg, Vec* grad,
                      bool include_decay = true);

struct ViolationReport {
  long unsafe_count = 0;  // h <= 0 on an unsafe sample
  long safe_count = 0;    // h > 0 on a safe sample
  long decay_count = 0;   // h(f(x,u(x))) - (1-alpha) h(x) + delta > 0
  long input_count = 0;   // u(x) outside U (clamp makes this structural zero)
  double worst_unsafe = 0.0;  // min h over Z_u
  double worst_safe = 0.0;    // max h over Z_s
  double worst_decay = 0.0;   // max decay residual over Z_d
  double classification_accuracy = 1.0;
  double decay_satisfaction = 1.0;  // fraction of Z_d with residual <= 0
};

ViolationReport violation_report(const Mlp& h_net, const Controller& ctrl, const System& sys,
                                 const SampleSets& sets, const SynthConfig& cfg);

struct TrainLogEntry {
  int step = 0;
  int stage = 0;
  double loss = 0.0;
  long unsafe_violations = 0;
  long safe_violations = 0;
  long decay_violations = 0;
};

struct TrainResult {
  Mlp h_net;
  Controller ctrl;
  std::vector<TrainLogEntry> log;
  SampleSets sets;
};

// Stage 1 runs Adam on the classification objective (tau_d = 0), stage 2 on
// the full objective, warm-started from stage 1. Deterministic given the
// seed. Throws TrainingAbort on a non-finite loss.
TrainResult train(const System& sys, const SynthConfig& cfg);

// Stage-2-only retraining from existing parameters with extra decay samples
// appended; used by the counterexample refinement loop.
TrainResult retrain_with_counterexamples(const System& sys, const SynthConfig& cfg,
                                         const Mlp& h_net, const Controller& ctrl,
                                         const std::vector<Vec>& extra_decay, int steps);

struct AdamConfig {
  double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

// Minimizes f(theta, grad) -> loss. on_step(step, loss) runs after every
// update. Aborts on non-finite loss.
Vec run_adam(const std::function<double(const Vec&, Vec&)>& f, Vec theta, int steps,
             const AdamConfig& cfg,
             const std::function<void(int, double)>& on_step = nullptr);

}  // namespace cbf
