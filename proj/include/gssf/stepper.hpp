#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace gssf {

enum class Scheme { Rk4ip, StrangRk4 };

struct StepPlan {
  int steps = 1;
  double dt = 0.0;
  Scheme scheme = Scheme::Rk4ip;
  std::vector<int> checkpoint_steps;  // ascending step indices (0..steps)

  static StepPlan make(double t_final, int steps, Scheme scheme) {
    if (steps < 1) throw std::invalid_argument("stepper: steps must be >= 1");
    if (!(t_final > 0.0)) throw std::invalid_argument("stepper: t_final must be positive");
    StepPlan p;
    p.steps = steps;
    p.dt = t_final / steps;
    p.scheme = scheme;
    return p;
  }
};

// One RK4-in-the-interaction-picture step. nl(state, out) writes the
// nonlinear derivative; lin_half(state) applies the exact linear map for
// dt/2 (a linear map, so applying it to derivative containers is valid).
template <class State, class NlRhs, class LinHalf>
void rk4ip_step(State& s, double dt, NlRhs&& nl, LinHalf&& lin_half) {
  State k1 = s;
  nl(s, k1);        // k1 = N(s)
  lin_half(k1);
  lin_half(s);      // s now in the interaction picture

  State tmp = s;
  tmp.add_scaled(k1, 0.5 * dt);
  State k2 = s;
  nl(tmp, k2);

  tmp = s;
  tmp.add_scaled(k2, 0.5 * dt);
  State k3 = s;
  nl(tmp, k3);

  tmp = s;
  tmp.add_scaled(k3, dt);
  lin_half(tmp);
  State k4 = s;
  nl(tmp, k4);

  s.add_scaled(k1, dt / 6.0);
  s.add_scaled(k2, dt / 3.0);
  s.add_scaled(k3, dt / 3.0);
  lin_half(s);
  s.add_scaled(k4, dt / 6.0);
}

// Plain RK4 substep on the nonlinear flow alone (used by the Strang scheme).
template <class State, class NlRhs>
void rk4_nl_step(State& s, double dt, NlRhs&& nl) {
  State k1 = s;
  nl(s, k1);
  State tmp = s;
  tmp.add_scaled(k1, 0.5 * dt);
  State k2 = s;
  nl(tmp, k2);
  tmp = s;
  tmp.add_scaled(k2, 0.5 * dt);
  State k3 = s;
  nl(tmp, k3);
  tmp = s;
  tmp.add_scaled(k3, dt);
  State k4 = s;
  nl(tmp, k4);
  s.add_scaled(k1, dt / 6.0);
  s.add_scaled(k2, dt / 3.0);
  s.add_scaled(k3, dt / 3.0);
  s.add_scaled(k4, dt / 6.0);
}

// Drives a full trajectory and invokes on_checkpoint(step_index, state) with
// the state in its physical picture. Consecutive Strang half-steps are
// merged except across checkpoints, which changes nothing mathematically.
template <class State, class NlRhs, class LinStep>
void propagate(State& s, const StepPlan& plan, NlRhs&& nl, LinStep&& lin,
               const std::function<void(int, State&)>& on_checkpoint) {
  auto is_checkpoint = [&](int idx) {
    for (int c : plan.checkpoint_steps)
      if (c == idx) return true;
    return false;
  };
  auto lin_half = [&](State& x) { lin(x, 0.5 * plan.dt); };

  if (on_checkpoint && is_checkpoint(0)) on_checkpoint(0, s);

  if (plan.scheme == Scheme::Rk4ip) {
    for (int i = 0; i < plan.steps; ++i) {
      rk4ip_step(s, plan.dt, nl, lin_half);
      s.symmetrize();
      if (on_checkpoint && is_checkpoint(i + 1)) on_checkpoint(i + 1, s);
    }
    return;
  }

  // Strang: L(dt/2) N(dt) L(dt/2), with adjacent linear half-steps fused
  bool open = false;  // true if a trailing half linear step is pending
  for (int i = 0; i < plan.steps; ++i) {
    lin(s, open ? plan.dt : 0.5 * plan.dt);
    open = false;
    rk4_nl_step(s, plan.dt, nl);
    s.symmetrize();
    if ((on_checkpoint && is_checkpoint(i + 1)) || i + 1 == plan.steps) {
      lin(s, 0.5 * plan.dt);
      if (on_checkpoint && is_checkpoint(i + 1)) on_checkpoint(i + 1, s);
    } else {
      open = true;
    }
  }
}

}  // namespace gssf
