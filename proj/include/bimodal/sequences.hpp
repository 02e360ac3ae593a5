#pragma once

// Full experimental timelines: source atom on [0, 3pi/2Omega], free evolution up to
// the delay T, probe atom on [T, T + 3pi/2Omega]. The initial state is |e,0,0> = V1.

#include <array>
#include <string>
#include <vector>

#include "bimodal/linalg.hpp"
#include "bimodal/pulse.hpp"

namespace bimodal {

struct SequenceResult {
  StateVector final_state;
  double p_excited = 0.0;  // |c1|^2 after the probe
  StateVector mid_state;   // after the source atom
};

/// One factor of a composed sequence, kept for auditing.
struct NamedFactor {
  std::string name;
  Propagator u;
};

/// Source-interval propagator for the configured model.
///   stepwise: U2(pi/Omega) U1(pi/2Omega)
///   smooth:   U2(pi/Omega - ts/2) U+ U- U1((pi/Omega - ts)/2)
///   channel:  U2(pi/Omega - ts/2) Ux  U1((pi/Omega - ts)/2)
Propagator run_source(const ExperimentParams& p);

/// Probe-interval propagator (independent of T): mode 1 first, then mode 2.
///   stepwise: U5(pi/2Omega) U4(pi/Omega)
///   smooth:   U5((pi/Omega - ts)/2) U+ U- U4(pi/Omega - ts/2)
///   channel:  U5((pi/Omega - ts)/2) Ux  U4(pi/Omega - ts/2)
Propagator run_probe(const ExperimentParams& p);

/// Precomputes the source and probe propagators of one parameter set so that
/// many delays can be evaluated cheaply. Immutable after construction.
class Timeline {
 public:
  explicit Timeline(const ExperimentParams& p);

  const ExperimentParams& params() const { return params_; }
  const Propagator& source() const { return source_; }
  const Propagator& probe() const { return probe_; }
  /// Every elementary factor built for the source and the probe, in time order.
  const std::vector<NamedFactor>& factors() const { return factors_; }
  const StateVector& mid_state() const { return mid_state_; }

  /// Throws InvalidParams when T < 3pi/2Omega.
  SequenceResult run(double T) const;
  double probability(double T) const;

 private:
  ExperimentParams params_;
  std::vector<NamedFactor> factors_;
  Propagator source_;
  Propagator probe_;
  StateVector mid_state_;
};

SequenceResult run_full(const ExperimentParams& p, double T);

/// [1 + cos(delta T + pi delta / 2 Omega)] / 2
double ideal_probability(const ExperimentParams& p, double T);

/// Schmidt coefficients (descending) of the two-mode state in the atom-ground branch,
/// renormalized. For the ideal source this is (1/sqrt2, 1/sqrt2).
std::array<double, 2> schmidt_coefficients(const StateVector& s);

/// Population outside {V1, V6, V8}.
double leakage(const StateVector& s);

}  // namespace bimodal
