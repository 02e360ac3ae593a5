#pragma once

// Sampling of P(T), cosine / damped-cosine fits and switching-time sweeps.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bimodal/pulse.hpp"
#include "bimodal/sequences.hpp"

namespace bimodal {

struct Sample {
  double t;  // delay T, us
  double p;  // probability
};

struct Interval {
  std::string label;
  double lo;  // us
  double hi;  // us
};

/// I1=[48,57], I2=[200,207], I3=[400,408], I4=[699,706] us.
std::vector<Interval> default_intervals();

/// Parses "lo:hi" or "label=lo:hi"; unlabeled intervals get `fallback_label`.
Interval parse_interval(const std::string& text, const std::string& fallback_label);

enum class FitKind { plain_cosine, damped_cosine };

/// Fit model. Plain:  P = [1 + cos(w T + phi)] / 2.
/// Damped: P = A(T) [1 + cos(w T + phi)] / 2 + B(T), with xi = T - free_start,
///   A = exp(-(alpha + beta) xi),
///   B = [exp(-2 alpha xi) + exp(-2 beta xi) - 2 exp(-(alpha + beta) xi)] / 4.
/// In both cases amplitude and offset are left free during the fit.
struct FitModel {
  FitKind kind = FitKind::plain_cosine;
  double alpha = 0.0;       // 1/us
  double beta = 0.0;        // 1/us
  double free_start = 0.0;  // us; origin of xi, normally 3pi/(2 Omega)

  double envelope(double T) const;
  double background(double T) const;
  /// Noiseless model value, for generating synthetic traces.
  double evaluate(double T, double omega, double phi) const;
};

struct FitResult {
  double omega_fit = 0.0;     // rad/us
  double phi_fit = 0.0;       // rad, in (-pi, pi] unless unwrapped by the caller
  double residual_rms = 0.0;
  double amplitude = 0.0;     // fitted cosine amplitude (1/2 for an ideal trace)
  std::string interval;
};

struct SweepRow {
  double t_switch = 0.0;  // us
  std::string interval;
  double omega_rel = 0.0;  // omega_fit / delta
  double phi_rel = 0.0;    // phi_fit / (pi delta / 2 Omega)
};

/// Uniform grid over [lo, hi] including both ends, evaluated with run_full.
std::vector<Sample> sample_probability(const ExperimentParams& p, const Interval& iv, std::size_t n_points);
std::vector<Sample> sample_probability(const Timeline& timeline, const Interval& iv, std::size_t n_points);

/// Least-squares fit of `model` over (omega, phi): scans omega over +-5% of
/// `omega_hint` (2001 points), solving the linear problem in (cos, sin, offset) at each,
/// then refines the best omega by golden-section search to relative width 1e-10 and
/// finishes with Gauss-Newton steps on the full model (kept only while the RSS does not grow).
/// Throws FitError("no oscillation") for a flat signal and FitError("insufficient span")
/// when the samples cover less than half a period of omega_hint.
FitResult fit_cosine(std::span<const Sample> samples, const FitModel& model, double omega_hint);

/// phi_raw + 2 pi k, with k minimizing |result - reference|.
double unwrap_phase(double phi_raw, double reference);

/// One row per (t_switch, interval), sorted by t_switch then interval order.
/// Phase branches: the first interval of the first grid point is taken nearest the ideal
/// phase; each later interval nearest the previous interval; the first interval of each later
/// grid point nearest the first interval of the preceding grid point.
std::vector<SweepRow> sweep_switch_time(const ExperimentParams& p, std::span<const double> t_switch_grid,
                                        std::span<const Interval> intervals, std::size_t n_points = 91);

/// Two-column text traces: "T_us P" per line, separated by comma, semicolon or
/// whitespace. '#' starts a comment. A leading non-numeric header line is skipped.
/// Throws ParseError with the offending line number.
std::vector<Sample> read_trace(std::istream& in);
std::vector<Sample> read_trace_file(const std::filesystem::path& path);

}  // namespace bimodal
