#pragma once

// Time-dependent model ingredients. Units: time in microseconds, angular
// frequencies in rad/us. Ordinary frequencies in kHz convert via omega = 2*pi*nu.

#include <numbers>
#include <string>
#include <string_view>

namespace bimodal {

enum class Model { stepwise, smooth, channel };
enum class ProfileShape { linear, raised_cosine };
enum class SwitchShape { step, raised_cosine };

std::string_view to_string(Model m);
std::string_view to_string(ProfileShape s);
std::string_view to_string(SwitchShape s);
/// Accepts the CLI spellings ("raised-cosine") as well as "raised_cosine".
Model parse_model(std::string_view s);
ProfileShape parse_profile_shape(std::string_view s);
SwitchShape parse_switch_shape(std::string_view s);

/// kHz -> rad/us
constexpr double khz_to_angular(double khz) { return 2.0 * std::numbers::pi * khz * 1e-3; }
constexpr double angular_to_khz(double w) { return w / (2.0 * std::numbers::pi) * 1e3; }

inline constexpr double kDefaultOmegaKhz = 47.0;
inline constexpr double kDefaultDeltaKhz = 128.3;
inline constexpr double kDefaultOdeStep = 0.01;  // us

struct ExperimentParams {
  double omega = khz_to_angular(kDefaultOmegaKhz);  // atom-field coupling
  double delta = khz_to_angular(kDefaultDeltaKhz);  // mode splitting w1 - w2
  double lambda_coupling = 4.0 * khz_to_angular(kDefaultOmegaKhz);
  double t_switch = 0.0;  // us; width of the non-resonant window
  Model model = Model::stepwise;
  ProfileShape profile_shape = ProfileShape::raised_cosine;
  SwitchShape switch_shape = SwitchShape::raised_cosine;
  double ode_step = kDefaultOdeStep;

  /// Throws InvalidParams.
  void validate() const;

  /// Time spent by one atom inside the cavity, 3*pi/(2*Omega).
  double transit_time() const { return 1.5 * std::numbers::pi / omega; }
  /// Ideal phase offset pi*delta/(2*Omega) of P(T).
  double ideal_phase() const { return std::numbers::pi * delta / (2.0 * omega); }
};

/// A switching window [start, start + width].
struct Window {
  double start = 0.0;
  double width = 0.0;

  double mid() const { return start + 0.5 * width; }
  double end() const { return start + width; }
};

/// Source window centered at pi/(2 Omega), in source time (t = 0 when the source enters).
Window source_window(const ExperimentParams& p);
/// Probe window centered at pi/Omega, in probe-local time (t = 0 at the delay T).
Window probe_window(const ExperimentParams& p);

/// Delta(t): 0 before the window, -depth after, monotone ramp inside.
struct DetuningProfile {
  ProfileShape shape = ProfileShape::raised_cosine;
  double window_start = 0.0;
  double window_width = 0.0;
  double depth = 0.0;
};

double detuning_at(const DetuningProfile& p, double t);

DetuningProfile detuning_profile(const ExperimentParams& p, const Window& w);

/// Weights f1, f2 of the mode-1 and mode-2 Hamiltonians; f2 = 1 - f1.
struct SwitchFunctions {
  SwitchShape shape = SwitchShape::raised_cosine;
  double window_start = 0.0;
  double window_width = 0.0;
};

struct SwitchWeights {
  double f1;
  double f2;
};

/// Which one-sided limit to take where the step shape jumps (at the midpoint).
enum class Side { left, right };

SwitchWeights switch_at(const SwitchFunctions& f, double t);
SwitchWeights switch_at(const SwitchFunctions& f, double t, Side side);

SwitchFunctions switch_functions(const ExperimentParams& p, const Window& w);

/// max_t f1(t) f2(t); 1/4 for the raised cosine, 0 for a step or an empty window.
double peak_overlap(const SwitchFunctions& f);

/// lambda such that lambda * max(f1 f2) = Omega. Throws InvalidParams("no overlap window")
/// when the switch functions never overlap.
double normalize_lambda(double omega, const SwitchFunctions& f);
double normalize_lambda(double omega, double peak_overlap);

}  // namespace bimodal
