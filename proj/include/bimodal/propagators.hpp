#pragma once

// Evolution matrices for one atom crossing the bimodal cavity.
//
// Frame: every matrix lives in the frame rotating with omega_1 times the total
// excitation number. In the single-excitation sector {V1, V6, V8} the free
// energies are then Delta(t) on V1, -delta on V6 and 0 on V8. The closed forms
// below agree with this frame on that sector wherever it is populated (u1 keeps
// V6 fixed, which only matters if V6 carries amplitude when u1 acts).
// The integrated (non-resonant) matrices use the frame on all 8 states.

#include <functional>

#include "bimodal/linalg.hpp"
#include "bimodal/pulse.hpp"

namespace bimodal {

/// Two-level solution functions. For a pair (e, g) coupled by one mode:
///   U_ee = x, U_eg = y, U_ge = ybar, U_gg = xbar.
struct RabiFunctions {
  Complex x{1.0, 0.0};
  Complex xbar{1.0, 0.0};
  Complex y{0.0, 0.0};
  Complex ybar{0.0, 0.0};

  /// max(| |x|^2 + |ybar|^2 - 1 |, | |xbar|^2 + |y|^2 - 1 |)
  double pair_defect() const;
};

enum class OdeMethod { rk4_fixed };

struct OdeSettings {
  double step = kDefaultOdeStep;  // us; the interval is split into ceil(len / step) equal steps
  OdeMethod method = OdeMethod::rk4_fixed;
  double max_defect = 1e-9;

  static OdeSettings from(const ExperimentParams& p);
};

using DetuningFn = std::function<double(double)>;

// Resonant closed forms. `t` is the duration of the segment.
Propagator u1_resonant(double t, double omega);
Propagator u2_resonant(double t, double omega, double delta);
Propagator u3_free(double t, double delta);
Propagator u4_probe_mode1(double t, double omega, double delta);

/// Integrates
///   i y'    = (Omega/2) xbar + (Delta/2) y      i xbar' = (Omega/2) y - (Delta/2) xbar
///   i x'    = (Omega/2) ybar + (Delta/2) x      i ybar' = (Omega/2) x - (Delta/2) ybar
/// from the identity at t_from to t_to with fixed-step RK4.
/// Throws ConvergenceError when the pairwise norms drift by more than ode.max_defect.
RabiFunctions integrate_rabi(const DetuningFn& detuning, double t_from, double t_to, double omega,
                             const OdeSettings& ode);

/// Non-resonant evolution coupled to mode 1 only (H_-), over [t_from, t_to].
Propagator u_minus(const DetuningFn& detuning, double t_from, double t_to, double omega, double delta,
                   const OdeSettings& ode);
/// Non-resonant evolution coupled to mode 2 only (H_+), over [t_from, t_to].
Propagator u_plus(const DetuningFn& detuning, double t_from, double t_to, double omega, double delta,
                  const OdeSettings& ode);

/// Window evolution under f1 H_- + f2 H_+ + f1 f2 lambda (a1^+ a2 + a2^+ a1), integrated as the
/// full 8x8 matrix equation i dU/dt = H(t) U. Matrix elements of the mode-mode term that leave
/// the 8-state space are dropped.
Propagator u_cross(const DetuningFn& detuning, const SwitchFunctions& switches, double t_from, double t_to,
                   double omega, double delta, double lambda, const OdeSettings& ode);

/// Frame Hamiltonian used by u_cross at time t (exposed for diagnostics and tests).
Propagator cross_hamiltonian(double detuning, SwitchWeights w, double omega, double delta, double lambda);

// Window-level helpers: H_- over the first half of the window, H_+ over the second half,
// the cross-coupled evolution over the whole window. The ODE step is capped at
// width / 64 so that short windows are still resolved.
Propagator u_minus(const ExperimentParams& p, const Window& w);
Propagator u_plus(const ExperimentParams& p, const Window& w);
Propagator u_cross(const ExperimentParams& p, const Window& w);

}  // namespace bimodal
