#include "bimodal/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bimodal/errors.hpp"
#include "bimodal/propagators.hpp"

namespace bimodal {

namespace {

constexpr double kPi = std::numbers::pi;

Propagator product(const std::vector<NamedFactor>& factors, std::size_t first, std::size_t last) {
  Propagator acc = Propagator::identity();
  for (std::size_t k = first; k < last; ++k) acc = compose(factors[k].u, acc);
  return acc;
}

// Appends the window factors (U- then U+, or Ux) for window `w`.
void append_window(std::vector<NamedFactor>& out, const ExperimentParams& p, const Window& w,
                   const std::string& tag) {
  if (p.t_switch <= 0.0) return;
  if (p.model == Model::smooth) {
    out.push_back({tag + ".u_minus", u_minus(p, w)});
    out.push_back({tag + ".u_plus", u_plus(p, w)});
  } else if (p.model == Model::channel) {
    out.push_back({tag + ".u_cross", u_cross(p, w)});
  }
}

std::vector<NamedFactor> source_factors(const ExperimentParams& p) {
  const double half = kPi / (2.0 * p.omega);
  const double full = kPi / p.omega;
  std::vector<NamedFactor> f;
  if (p.model == Model::stepwise) {
    f.push_back({"source.u1", u1_resonant(half, p.omega)});
    f.push_back({"source.u2", u2_resonant(full, p.omega, p.delta)});
    return f;
  }
  f.push_back({"source.u1", u1_resonant(half - 0.5 * p.t_switch, p.omega)});
  append_window(f, p, source_window(p), "source");
  f.push_back({"source.u2", u2_resonant(full - 0.5 * p.t_switch, p.omega, p.delta)});
  return f;
}

std::vector<NamedFactor> probe_factors(const ExperimentParams& p) {
  const double half = kPi / (2.0 * p.omega);
  const double full = kPi / p.omega;
  std::vector<NamedFactor> f;
  if (p.model == Model::stepwise) {
    f.push_back({"probe.u4", u4_probe_mode1(full, p.omega, p.delta)});
    f.push_back({"probe.u5", u2_resonant(half, p.omega, p.delta)});
    return f;
  }
  f.push_back({"probe.u4", u4_probe_mode1(full - 0.5 * p.t_switch, p.omega, p.delta)});
  append_window(f, p, probe_window(p), "probe");
  f.push_back({"probe.u5", u2_resonant(half - 0.5 * p.t_switch, p.omega, p.delta)});
  return f;
}

}  // namespace

Timeline::Timeline(const ExperimentParams& p) : params_(p) {
  params_.validate();
  factors_ = source_factors(params_);
  const std::size_t n_source = factors_.size();
  auto probe = probe_factors(params_);
  factors_.insert(factors_.end(), probe.begin(), probe.end());
  source_ = product(factors_, 0, n_source);
  probe_ = product(factors_, n_source, factors_.size());
  mid_state_ = apply(source_, StateVector::basis(Basis::V1));
}

SequenceResult Timeline::run(double T) const {
  const double free_time = T - params_.transit_time();
  // Tolerate rounding when T is computed as exactly the transit time.
  if (!(free_time >= -1e-12 * params_.transit_time()))
    throw InvalidParams("delay T must be at least 3pi/(2 Omega) = " + std::to_string(params_.transit_time()) +
                        " us");
  SequenceResult r;
  r.mid_state = mid_state_;
  const StateVector before_probe = apply(u3_free(std::max(free_time, 0.0), params_.delta), mid_state_);
  r.final_state = apply(probe_, before_probe);
  r.p_excited = std::clamp(r.final_state.probability(Basis::V1), 0.0, 1.0);
  return r;
}

double Timeline::probability(double T) const { return run(T).p_excited; }

Propagator run_source(const ExperimentParams& p) {
  p.validate();
  const auto f = source_factors(p);
  return product(f, 0, f.size());
}

Propagator run_probe(const ExperimentParams& p) {
  p.validate();
  const auto f = probe_factors(p);
  return product(f, 0, f.size());
}

SequenceResult run_full(const ExperimentParams& p, double T) { return Timeline(p).run(T); }

double ideal_probability(const ExperimentParams& p, double T) {
  return 0.5 * (1.0 + std::cos(p.delta * T + p.ideal_phase()));
}

std::array<double, 2> schmidt_coefficients(const StateVector& s) {
  // Rows: photons in M1; columns: photons in M2; atom in |g>.
  const Complex m00 = s[Basis::V4], m01 = s[Basis::V6], m10 = s[Basis::V8], m11 = s[Basis::V2];
  const double frob = std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11);
  if (frob <= 0.0) return {0.0, 0.0};
  const double det2 = std::norm(m00 * m11 - m01 * m10) / (frob * frob);
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * det2));
  return {std::sqrt(0.5 * (1.0 + disc)), std::sqrt(std::max(0.0, 0.5 * (1.0 - disc)))};
}

double leakage(const StateVector& s) {
  double out = 0.0;
  for (Basis b : {Basis::V2, Basis::V3, Basis::V4, Basis::V5, Basis::V7}) out += s.probability(b);
  return out;
}

}  // namespace bimodal
