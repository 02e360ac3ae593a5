#include "bimodal/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>

#include "bimodal/errors.hpp"

namespace bimodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::size_t kScanPoints = 2001;
constexpr double kScanHalfWidth = 0.05;
constexpr double kGoldenRelWidth = 1e-10;
constexpr double kFlatAmplitude = 1e-6;

double wrap_pi(double phi) {
  double r = std::remainder(phi, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Linear sub-problem at fixed omega, on times centered at t_center:
//   target = a * A cos(w s) + b * A sin(w s) + c * A, with s = T - t_center.
struct LinearSolution {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rss = 0.0;
};

class LinearProblem {
 public:
  LinearProblem(std::span<const Sample> samples, const FitModel& model) {
    const std::size_t n = samples.size();
    t_center_ = 0.5 * (samples.front().t + samples.back().t);
    shifted_.resize(static_cast<Eigen::Index>(n));
    envelope_.resize(static_cast<Eigen::Index>(n));
    target_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      const double T = samples[k].t;
      shifted_(i) = T - t_center_;
      envelope_(i) = model.kind == FitKind::damped_cosine ? model.envelope(T) : 1.0;
      target_(i) = samples[k].p - (model.kind == FitKind::damped_cosine ? model.background(T) : 0.0);
    }
  }

  double t_center() const { return t_center_; }

  // One Gauss-Newton step on the full model in (a, b, c, omega) starting from the linear
  // solution at `omega`. The bracket search locates omega only as well as the flat RSS
  // minimum allows; this recovers the remaining digits.
  double polish(double omega) const {
    const LinearSolution s = solve(omega);
    const Eigen::Index n = target_.size();
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = shifted_(i), env = envelope_(i);
      const double cs = std::cos(omega * x), sn = std::sin(omega * x);
      jac(i, 0) = env * cs;
      jac(i, 1) = env * sn;
      jac(i, 2) = env;
      jac(i, 3) = env * x * (s.b * cs - s.a * sn);
      resid(i) = target_(i) - env * (s.a * cs + s.b * sn + s.c);
    }
    const Eigen::Vector4d step = jac.colPivHouseholderQr().solve(resid);
    return omega + step(3);
  }

  LinearSolution solve(double omega) const {
    const Eigen::Index n = target_.size();
    Eigen::MatrixXd design(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double arg = omega * shifted_(i);
      design(i, 0) = envelope_(i) * std::cos(arg);
      design(i, 1) = envelope_(i) * std::sin(arg);
      design(i, 2) = envelope_(i);
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(target_);
    LinearSolution s{coef(0), coef(1), coef(2), (design * coef - target_).squaredNorm()};
    return s;
  }

 private:
  double t_center_ = 0.0;
  Eigen::VectorXd shifted_;
  Eigen::VectorXd envelope_;
  Eigen::VectorXd target_;
};

std::optional<double> parse_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t j0 = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > j0) out.push_back(line.substr(j0, i - j0));
  }
  return out;
}

}  // namespace

std::vector<Interval> default_intervals() {
  return {{"I1", 48.0, 57.0}, {"I2", 200.0, 207.0}, {"I3", 400.0, 408.0}, {"I4", 699.0, 706.0}};
}

Interval parse_interval(const std::string& text, const std::string& fallback_label) {
  std::string label = fallback_label;
  std::string_view body = text;
  if (const auto eq = body.find('='); eq != std::string_view::npos) {
    label = std::string(body.substr(0, eq));
    body.remove_prefix(eq + 1);
  }
  const auto colon = body.find(':');
  if (colon == std::string_view::npos) throw InvalidParams("interval '" + text + "' is not of the form lo:hi");
  const auto lo = parse_double(body.substr(0, colon));
  const auto hi = parse_double(body.substr(colon + 1));
  if (!lo || !hi) throw InvalidParams("interval '" + text + "' has non-numeric bounds");
  if (!(*hi > *lo)) throw InvalidParams("interval '" + text + "' must have hi > lo");
  if (label.empty()) throw InvalidParams("interval '" + text + "' has an empty label");
  return {label, *lo, *hi};
}

double FitModel::envelope(double T) const {
  if (kind == FitKind::plain_cosine) return 1.0;
  const double xi = T - free_start;
  return std::exp(-(alpha + beta) * xi);
}

double FitModel::background(double T) const {
  if (kind == FitKind::plain_cosine) return 0.0;
  const double xi = T - free_start;
  return 0.25 * (std::exp(-2.0 * alpha * xi) + std::exp(-2.0 * beta * xi) - 2.0 * std::exp(-(alpha + beta) * xi));
}

double FitModel::evaluate(double T, double omega, double phi) const {
  return envelope(T) * 0.5 * (1.0 + std::cos(omega * T + phi)) + background(T);
}

std::vector<Sample> sample_probability(const ExperimentParams& p, const Interval& iv, std::size_t n_points) {
  return sample_probability(Timeline(p), iv, n_points);
}

std::vector<Sample> sample_probability(const Timeline& timeline, const Interval& iv, std::size_t n_points) {
  if (n_points < 2) throw InvalidParams("need at least 2 sample points");
  if (!(iv.hi >= iv.lo)) throw InvalidParams("interval " + iv.label + " has hi < lo");
  std::vector<Sample> out;
  out.reserve(n_points);
  const double step = (iv.hi - iv.lo) / static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double T = k + 1 == n_points ? iv.hi : iv.lo + static_cast<double>(k) * step;
    out.push_back({T, timeline.probability(T)});
  }
  return out;
}

FitResult fit_cosine(std::span<const Sample> samples, const FitModel& model, double omega_hint) {
  if (samples.size() < 8) throw FitError("need at least 8 samples, got " + std::to_string(samples.size()));
  if (!(omega_hint > 0.0)) throw FitError("omega hint must be positive");
  std::vector<Sample> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });

  const auto [pmin, pmax] = std::minmax_element(sorted.begin(), sorted.end(),
                                                [](const Sample& a, const Sample& b) { return a.p < b.p; });
  if (pmax->p - pmin->p < kFlatAmplitude) throw FitError("no oscillation");
  const double span = sorted.back().t - sorted.front().t;
  if (span < kPi / omega_hint) throw FitError("insufficient span");

  const LinearProblem problem(sorted, model);
  const double w_lo = omega_hint * (1.0 - kScanHalfWidth);
  const double dw = omega_hint * 2.0 * kScanHalfWidth / static_cast<double>(kScanPoints - 1);
  std::size_t best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kScanPoints; ++k) {
    const double rss = problem.solve(w_lo + static_cast<double>(k) * dw).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best = k;
    }
  }

  // Golden-section refinement inside the neighbouring scan cells.
  double lo = w_lo + static_cast<double>(best == 0 ? 0 : best - 1) * dw;
  double hi = w_lo + static_cast<double>(std::min(best + 1, kScanPoints - 1)) * dw;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = problem.solve(x1).rss;
  double f2 = problem.solve(x2).rss;
  while (hi - lo > kGoldenRelWidth * omega_hint) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = problem.solve(x1).rss;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = problem.solve(x2).rss;
    }
  }
  double omega = 0.5 * (lo + hi);
  for (int k = 0; k < 3; ++k) {
    const double next = problem.polish(omega);
    if (!(std::abs(next - omega) <= dw) || problem.solve(next).rss > problem.solve(omega).rss) break;
    omega = next;
  }
  const LinearSolution sol = problem.solve(omega);
  const double amplitude = std::hypot(sol.a, sol.b);
  if (amplitude < kFlatAmplitude) throw FitError("no oscillation");

  FitResult r;
  r.omega_fit = omega;
  r.phi_fit = wrap_pi(std::atan2(-sol.b, sol.a) - omega * problem.t_center());
  r.residual_rms = std::sqrt(sol.rss / static_cast<double>(sorted.size()));
  r.amplitude = amplitude;
  return r;
}

double unwrap_phase(double phi_raw, double reference) {
  return phi_raw + kTwoPi * std::round((reference - phi_raw) / kTwoPi);
}

std::vector<SweepRow> sweep_switch_time(const ExperimentParams& p, std::span<const double> t_switch_grid,
                                        std::span<const Interval> intervals, std::size_t n_points) {
  std::vector<double> grid(t_switch_grid.begin(), t_switch_grid.end());
  for (double ts : grid)
    if (!(ts >= 0.0 && ts < kPi / p.omega)) throw InvalidParams("switching time outside [0, pi/Omega)");
  std::stable_sort(grid.begin(), grid.end());

  const double phi_ideal = p.ideal_phase();
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * intervals.size());
  std::optional<double> previous_first;
  for (double ts : grid) {
    ExperimentParams q = p;
    q.t_switch = ts;
    const Timeline timeline(q);
    double reference = previous_first.value_or(phi_ideal);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const auto samples = sample_probability(timeline, intervals[k], n_points);
      const FitResult fit = fit_cosine(samples, FitModel{}, p.delta);
      const double phi = unwrap_phase(fit.phi_fit, reference);
      if (k == 0) previous_first = phi;
      reference = phi;
      rows.push_back({ts, intervals[k].label, fit.omega_fit / p.delta, phi / phi_ideal});
    }
  }
  return rows;
}

std::vector<Sample> read_trace(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 2) throw ParseError("expected 2 columns, found " + std::to_string(fields.size()), line_no);
    const auto t = parse_double(fields[0]);
    const auto p = parse_double(fields[1]);
    if (!t || !p) {
      if (header_allowed && !t && !p) {
        header_allowed = false;
        continue;
      }
      throw ParseError("non-numeric value", line_no);
    }
    if (!std::isfinite(*t) || !std::isfinite(*p)) throw ParseError("non-finite value", line_no);
    header_allowed = false;
    out.push_back({*t, *p});
  }
  if (in.bad()) throw IoError("read failure");
  if (out.empty()) throw IoError("trace contains no data rows");
  return out;
}

std::vector<Sample> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace bimodal
