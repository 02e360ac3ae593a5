#pragma once

// Command-line front end: simulate | sweep | entangle-check | fit.
//
// Exit codes: 0 success, 1 config/usage error, 2 entanglement check failed, 3 I/O error.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bimodal/analysis.hpp"
#include "bimodal/pulse.hpp"

namespace bimodal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  double omega_khz = kDefaultOmegaKhz;
  double delta_khz = kDefaultDeltaKhz;
  std::optional<double> lambda;  // rad/us; empty means "auto"
  double t_switch_us = 0.0;
  Model model = Model::stepwise;
  ProfileShape profile = ProfileShape::raised_cosine;
  SwitchShape switch_shape = SwitchShape::raised_cosine;
  double ode_step_us = kDefaultOdeStep;

  std::vector<Interval> intervals;  // empty: command default
  std::size_t points = 91;
  std::vector<double> t_switch_grid;  // empty: command default
  std::string out_path;               // empty: standard output
  std::string data_path;

  FitKind fit_kind = FitKind::plain_cosine;
  double alpha = 0.0;
  double beta = 0.0;

  /// Converts to internal units and resolves lambda ("auto" gives Omega / max(f1 f2)).
  ExperimentParams params() const;
};

/// Applies one `key=value` setting. Keys use the long flag names with '-' or '_'
/// (e.g. "t-switch-us", "t_switch_us"). Throws InvalidParams for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads a plain-text key=value file ('#' comments). Throws IoError / InvalidParams.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

/// Fixed-notation-free, locale-independent formatting with 12 significant digits.
std::string format_number(double v);

int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_entangle_check(const RunConfig& cfg, std::ostream& out);
/// CSV to `out`, human-readable summary to `log`.
int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Full entry point; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bimodal::cli
