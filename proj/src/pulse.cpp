#include "bimodal/pulse.hpp"

#include <cmath>
#include <string>

#include "bimodal/errors.hpp"

namespace bimodal {

namespace {

constexpr double kPi = std::numbers::pi;

std::string normalized(std::string_view s) {
  std::string r(s);
  for (auto& c : r)
    if (c == '-') c = '_';
  return r;
}

// Fractional position inside the window, clamped to [0, 1].
double window_fraction(double start, double width, double t) {
  if (t <= start) return 0.0;
  if (t >= start + width) return 1.0;
  return (t - start) / width;
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::stepwise: return "stepwise";
    case Model::smooth: return "smooth";
    case Model::channel: return "channel";
  }
  return "?";
}

std::string_view to_string(ProfileShape s) {
  return s == ProfileShape::linear ? "linear" : "raised-cosine";
}

std::string_view to_string(SwitchShape s) {
  return s == SwitchShape::step ? "step" : "raised-cosine";
}

Model parse_model(std::string_view s) {
  const auto n = normalized(s);
  if (n == "stepwise") return Model::stepwise;
  if (n == "smooth") return Model::smooth;
  if (n == "channel") return Model::channel;
  throw InvalidParams("unknown model '" + std::string(s) + "'");
}

ProfileShape parse_profile_shape(std::string_view s) {
  const auto n = normalized(s);
  if (n == "linear") return ProfileShape::linear;
  if (n == "raised_cosine") return ProfileShape::raised_cosine;
  throw InvalidParams("unknown profile shape '" + std::string(s) + "'");
}

SwitchShape parse_switch_shape(std::string_view s) {
  const auto n = normalized(s);
  if (n == "step") return SwitchShape::step;
  if (n == "raised_cosine") return SwitchShape::raised_cosine;
  throw InvalidParams("unknown switch shape '" + std::string(s) + "'");
}

void ExperimentParams::validate() const {
  if (!(omega > 0.0)) throw InvalidParams("omega must be positive");
  if (!(delta > 0.0)) throw InvalidParams("delta must be positive");
  if (!(t_switch >= 0.0)) throw InvalidParams("t_switch must be non-negative");
  if (!(t_switch < kPi / omega))
    throw InvalidParams("t_switch must be shorter than pi/Omega (" + std::to_string(kPi / omega) + " us)");
  if (!(ode_step > 0.0)) throw InvalidParams("ode_step must be positive");
  if (!std::isfinite(lambda_coupling)) throw InvalidParams("lambda must be finite");
}

Window source_window(const ExperimentParams& p) {
  return {0.5 * (kPi / p.omega - p.t_switch), p.t_switch};
}

Window probe_window(const ExperimentParams& p) {
  return {kPi / p.omega - 0.5 * p.t_switch, p.t_switch};
}

double detuning_at(const DetuningProfile& p, double t) {
  if (p.window_width <= 0.0) return t <= p.window_start ? 0.0 : -p.depth;
  const double u = window_fraction(p.window_start, p.window_width, t);
  switch (p.shape) {
    case ProfileShape::linear: return -p.depth * u;
    case ProfileShape::raised_cosine: return -0.5 * p.depth * (1.0 - std::cos(kPi * u));
  }
  return 0.0;
}

DetuningProfile detuning_profile(const ExperimentParams& p, const Window& w) {
  return {p.profile_shape, w.start, w.width, p.delta};
}

SwitchWeights switch_at(const SwitchFunctions& f, double t) { return switch_at(f, t, Side::left); }

SwitchWeights switch_at(const SwitchFunctions& f, double t, Side side) {
  const double mid = f.window_start + 0.5 * f.window_width;
  double f1 = 0.0;
  if (f.shape == SwitchShape::step || f.window_width <= 0.0) {
    f1 = (t < mid || (t == mid && side == Side::left)) ? 1.0 : 0.0;
  } else {
    const double u = window_fraction(f.window_start, f.window_width, t);
    const double c = std::cos(0.5 * kPi * u);
    f1 = u >= 1.0 ? 0.0 : c * c;  // cos(pi/2) is not exactly zero in floating point
  }
  return {f1, 1.0 - f1};
}

SwitchFunctions switch_functions(const ExperimentParams& p, const Window& w) {
  return {p.switch_shape, w.start, w.width};
}

double peak_overlap(const SwitchFunctions& f) {
  if (f.window_width <= 0.0 || f.shape == SwitchShape::step) return 0.0;
  return 0.25;
}

double normalize_lambda(double omega, const SwitchFunctions& f) {
  return normalize_lambda(omega, peak_overlap(f));
}

double normalize_lambda(double omega, double peak) {
  if (!(peak > 0.0)) throw InvalidParams("no overlap window");
  return omega / peak;
}

}  // namespace bimodal
