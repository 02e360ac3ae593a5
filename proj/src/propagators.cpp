#include "bimodal/propagators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bimodal/errors.hpp"

namespace bimodal {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex phase(double angle) { return std::polar(1.0, angle); }

std::size_t step_count(double length, double step) {
  if (length <= 0.0) return 0;
  const double n = std::ceil(length / step - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, n));
}

// Places a two-level block (e, g) into u, scaled by a common phase.
void set_pair(Propagator& u, Basis e, Basis g, const RabiFunctions& r, Complex scale) {
  u(e, e) = scale * r.x;
  u(e, g) = scale * r.y;
  u(g, e) = scale * r.ybar;
  u(g, g) = scale * r.xbar;
}

RabiFunctions resonant_functions(double t, double omega) {
  const double c = std::cos(0.5 * omega * t);
  const double s = std::sin(0.5 * omega * t);
  return {c, c, -kI * s, -kI * s};
}

// State of the two-level ODE plus the running integral of the detuning.
struct RabiState {
  std::array<Complex, 4> v;  // x, xbar, y, ybar
  double area = 0.0;
};

RabiState rabi_rhs(const RabiState& s, double omega, double det) {
  const Complex x = s.v[0], xbar = s.v[1], y = s.v[2], ybar = s.v[3];
  const double h = 0.5 * omega, d = 0.5 * det;
  RabiState r;
  r.v[0] = -kI * (h * ybar + d * x);
  r.v[1] = -kI * (h * y - d * xbar);
  r.v[2] = -kI * (h * xbar + d * y);
  r.v[3] = -kI * (h * x - d * ybar);
  r.area = det;
  return r;
}

RabiState axpy(const RabiState& a, double k, const RabiState& b) {
  RabiState r;
  for (std::size_t i = 0; i < 4; ++i) r.v[i] = a.v[i] + k * b.v[i];
  r.area = a.area + k * b.area;
  return r;
}

struct RabiSolution {
  RabiFunctions functions;
  double detuning_area;  // integral of Delta over the interval
};

RabiSolution solve_rabi(const DetuningFn& detuning, double t_from, double t_to, double omega,
                        const OdeSettings& ode) {
  if (!(t_to >= t_from)) throw InvalidParams("integration interval runs backwards");
  if (!(ode.step > 0.0)) throw InvalidParams("ODE step must be positive");
  RabiState s{{Complex{1.0}, Complex{1.0}, Complex{0.0}, Complex{0.0}}, 0.0};
  const std::size_t n = step_count(t_to - t_from, ode.step);
  const double h = n ? (t_to - t_from) / static_cast<double>(n) : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t_from + static_cast<double>(k) * h;
    const double d0 = detuning(t);
    const double dm = detuning(t + 0.5 * h);
    const double d1 = detuning(k + 1 == n ? t_to : t + h);
    const RabiState k1 = rabi_rhs(s, omega, d0);
    const RabiState k2 = rabi_rhs(axpy(s, 0.5 * h, k1), omega, dm);
    const RabiState k3 = rabi_rhs(axpy(s, 0.5 * h, k2), omega, dm);
    const RabiState k4 = rabi_rhs(axpy(s, h, k3), omega, d1);
    for (std::size_t i = 0; i < 4; ++i) s.v[i] += (h / 6.0) * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    s.area += (h / 6.0) * (k1.area + 2.0 * k2.area + 2.0 * k3.area + k4.area);
  }
  RabiSolution out{{s.v[0], s.v[1], s.v[2], s.v[3]}, s.area};
  const double defect = out.functions.pair_defect();
  if (defect > ode.max_defect) {
    std::ostringstream msg;
    msg << "RK4 step " << h << " us did not converge: pair defect " << defect << " > " << ode.max_defect;
    throw ConvergenceError(msg.str(), defect);
  }
  return out;
}

template <typename HamiltonianAt>
Propagator integrate_matrix(HamiltonianAt&& hamiltonian, double t_from, double t_to, const OdeSettings& ode) {
  if (!(t_to >= t_from)) throw InvalidParams("integration interval runs backwards");
  if (!(ode.step > 0.0)) throw InvalidParams("ODE step must be positive");
  Propagator u = Propagator::identity();
  const std::size_t n = step_count(t_to - t_from, ode.step);
  const double h = n ? (t_to - t_from) / static_cast<double>(n) : 0.0;
  auto rhs = [](const Propagator& hm, const Propagator& v) { return -kI * compose(hm, v); };
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t_from + static_cast<double>(k) * h;
    const Propagator h0 = hamiltonian(t);
    const Propagator hm = hamiltonian(t + 0.5 * h);
    const Propagator h1 = hamiltonian(k + 1 == n ? t_to : t + h);
    const Propagator k1 = rhs(h0, u);
    const Propagator k2 = rhs(hm, u + Complex(0.5 * h) * k1);
    const Propagator k3 = rhs(hm, u + Complex(0.5 * h) * k2);
    const Propagator k4 = rhs(h1, u + Complex(h) * k3);
    u += Complex(h / 6.0) * (k1 + Complex(2.0) * k2 + Complex(2.0) * k3 + k4);
  }
  return u;
}

// Profiles and switches vary on the scale of the window itself, so the step must
// resolve the window even when it is much shorter than the configured step.
constexpr double kMinStepsPerWindow = 64.0;

OdeSettings window_settings(const ExperimentParams& p, const Window& w) {
  OdeSettings s = OdeSettings::from(p);
  s.step = std::min(s.step, w.width / kMinStepsPerWindow);
  return s;
}

void check_unitary(const Propagator& u, const OdeSettings& ode, const char* what) {
  const double defect = unitarity_defect(u);
  if (defect > ode.max_defect) {
    std::ostringstream msg;
    msg << what << ": RK4 did not converge, unitarity defect " << defect << " > " << ode.max_defect;
    throw ConvergenceError(msg.str(), defect);
  }
}

}  // namespace

double RabiFunctions::pair_defect() const {
  return std::max(std::abs(std::norm(x) + std::norm(ybar) - 1.0), std::abs(std::norm(xbar) + std::norm(y) - 1.0));
}

OdeSettings OdeSettings::from(const ExperimentParams& p) {
  OdeSettings s;
  s.step = p.ode_step;
  return s;
}

Propagator u1_resonant(double t, double omega) {
  Propagator u = Propagator::identity();
  const RabiFunctions r = resonant_functions(t, omega);
  set_pair(u, Basis::V1, Basis::V8, r, 1.0);
  set_pair(u, Basis::V7, Basis::V2, r, 1.0);
  return u;
}

Propagator u2_resonant(double t, double omega, double delta) {
  Propagator u = Propagator::identity();
  const RabiFunctions r = resonant_functions(t, omega);
  const Complex prime = phase(delta * t);
  set_pair(u, Basis::V1, Basis::V6, r, prime);
  set_pair(u, Basis::V5, Basis::V2, r, prime);
  return u;
}

Propagator u3_free(double t, double delta) {
  Propagator u = Propagator::identity();
  u(Basis::V6, Basis::V6) = phase(delta * t);
  return u;
}

Propagator u4_probe_mode1(double t, double omega, double delta) {
  Propagator u = u1_resonant(t, omega);
  u(Basis::V6, Basis::V6) = phase(delta * t);
  return u;
}

RabiFunctions integrate_rabi(const DetuningFn& detuning, double t_from, double t_to, double omega,
                             const OdeSettings& ode) {
  return solve_rabi(detuning, t_from, t_to, omega, ode).functions;
}

Propagator u_minus(const DetuningFn& detuning, double t_from, double t_to, double omega, double delta,
                   const OdeSettings& ode) {
  const RabiSolution sol = solve_rabi(detuning, t_from, t_to, omega, ode);
  const double area = sol.detuning_area;
  const double shift = delta * (t_to - t_from);
  // Diagonal energies: V1 D, V2 -d, V3 D-d, V4 0, V5 D, V6 -d, V7 D-d, V8 0.
  Propagator u;
  set_pair(u, Basis::V1, Basis::V8, sol.functions, phase(-0.5 * area));
  set_pair(u, Basis::V7, Basis::V2, sol.functions, phase(-0.5 * area + shift));
  u(Basis::V3, Basis::V3) = phase(-(area - shift));
  u(Basis::V4, Basis::V4) = 1.0;
  u(Basis::V5, Basis::V5) = phase(-area);
  u(Basis::V6, Basis::V6) = phase(shift);
  return u;
}

Propagator u_plus(const DetuningFn& detuning, double t_from, double t_to, double omega, double delta,
                  const OdeSettings& ode) {
  const DetuningFn shifted = [&](double t) { return detuning(t) + delta; };
  const RabiSolution sol = solve_rabi(shifted, t_from, t_to, omega, ode);
  const double shift = delta * (t_to - t_from);
  const double area = sol.detuning_area - shift;  // integral of Delta itself
  // Pair energies (D, -d) sit (D - d)/2 above the symmetric two-level form.
  const Complex pair_phase = phase(-0.5 * (area - shift));
  Propagator u;
  set_pair(u, Basis::V1, Basis::V6, sol.functions, pair_phase);
  set_pair(u, Basis::V5, Basis::V2, sol.functions, pair_phase);
  u(Basis::V3, Basis::V3) = phase(-(area - shift));
  u(Basis::V4, Basis::V4) = 1.0;
  u(Basis::V7, Basis::V7) = phase(-(area - shift));
  u(Basis::V8, Basis::V8) = 1.0;
  return u;
}

Propagator cross_hamiltonian(double detuning, SwitchWeights w, double omega, double delta, double lambda) {
  Propagator h;
  const std::array<double, kDim> energy{detuning, -delta, detuning - delta, 0.0,
                                        detuning, -delta, detuning - delta, 0.0};
  for (std::size_t i = 0; i < kDim; ++i) h(i, i) = energy[i];
  auto couple = [&h](Basis a, Basis b, double g) {
    h(a, b) += g;
    h(b, a) += g;
  };
  const double g1 = 0.5 * omega * w.f1;
  const double g2 = 0.5 * omega * w.f2;
  const double gi = lambda * w.f1 * w.f2;
  couple(Basis::V1, Basis::V8, g1);  // |e,0,0> <-> |g,1,0>
  couple(Basis::V7, Basis::V2, g1);  // |e,0,1> <-> |g,1,1>
  couple(Basis::V1, Basis::V6, g2);  // |e,0,0> <-> |g,0,1>
  couple(Basis::V5, Basis::V2, g2);  // |e,1,0> <-> |g,1,1>
  couple(Basis::V6, Basis::V8, gi);  // |g,0,1> <-> |g,1,0>
  couple(Basis::V7, Basis::V5, gi);  // |e,0,1> <-> |e,1,0>
  return h;
}

Propagator u_cross(const DetuningFn& detuning, const SwitchFunctions& switches, double t_from, double t_to,
                   double omega, double delta, double lambda, const OdeSettings& ode) {
  auto piece = [&](double a, double b, Side side) {
    return integrate_matrix(
        [&](double t) { return cross_hamiltonian(detuning(t), switch_at(switches, t, side), omega, delta, lambda); },
        a, b, ode);
  };
  const double mid = switches.window_start + 0.5 * switches.window_width;
  Propagator u = (mid > t_from && mid < t_to)
                     ? compose(piece(mid, t_to, Side::right), piece(t_from, mid, Side::left))
                     : piece(t_from, t_to, t_from >= mid ? Side::right : Side::left);
  check_unitary(u, ode, "u_cross");
  return u;
}

Propagator u_minus(const ExperimentParams& p, const Window& w) {
  if (w.width <= 0.0) return Propagator::identity();
  const DetuningProfile prof = detuning_profile(p, w);
  return u_minus([prof](double t) { return detuning_at(prof, t); }, w.start, w.mid(), p.omega, p.delta,
                 window_settings(p, w));
}

Propagator u_plus(const ExperimentParams& p, const Window& w) {
  if (w.width <= 0.0) return Propagator::identity();
  const DetuningProfile prof = detuning_profile(p, w);
  return u_plus([prof](double t) { return detuning_at(prof, t); }, w.mid(), w.end(), p.omega, p.delta,
                window_settings(p, w));
}

Propagator u_cross(const ExperimentParams& p, const Window& w) {
  if (w.width <= 0.0) return Propagator::identity();
  const DetuningProfile prof = detuning_profile(p, w);
  return u_cross([prof](double t) { return detuning_at(prof, t); }, switch_functions(p, w), w.start, w.end(),
                 p.omega, p.delta, p.lambda_coupling, window_settings(p, w));
}

}  // namespace bimodal
