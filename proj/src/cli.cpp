#include "bimodal/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "bimodal/errors.hpp"
#include "bimodal/sequences.hpp"

namespace bimodal::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string canonical_key(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
    throw InvalidParams("--" + key + ": '" + value + "' is not a number");
  return out;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  const double d = to_double(key, value);
  if (d < 0.0 || d != std::floor(d)) throw InvalidParams("--" + key + ": '" + value + "' is not a count");
  return static_cast<std::size_t>(d);
}

// Writes `body` to the configured destination only once it is complete.
int emit(const RunConfig& cfg, std::ostream& out, const std::string& body) {
  if (cfg.out_path.empty()) {
    out << body;
    out.flush();
    return kExitOk;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw IoError("cannot open " + cfg.out_path + " for writing");
  file << body;
  if (!file) throw IoError("write to " + cfg.out_path + " failed");
  return kExitOk;
}

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  return os;
}

std::vector<Interval> intervals_or(const RunConfig& cfg, std::vector<Interval> fallback) {
  return cfg.intervals.empty() ? fallback : cfg.intervals;
}

struct MidStateReport {
  double abs_c6;
  double abs_c8;
  double rel_phase;  // arg(c6 / c8) in [0, 2pi)
  std::array<double, 2> schmidt;
  double excited;  // population left in |e>
};

MidStateReport report_mid_state(const StateVector& s) {
  const Complex c6 = s[Basis::V6], c8 = s[Basis::V8];
  double rel = std::arg(c6 / c8);
  if (rel < 0.0) rel += 2.0 * kPi;
  double excited = 0.0;
  for (Basis b : {Basis::V1, Basis::V3, Basis::V5, Basis::V7}) excited += s.probability(b);
  return {std::abs(c6), std::abs(c8), rel, schmidt_coefficients(s), excited};
}

void print_report(std::ostream& os, const std::string& title, const MidStateReport& r) {
  os << title << '\n';
  os << "  |c6|            = " << format_number(r.abs_c6) << '\n';
  os << "  |c8|            = " << format_number(r.abs_c8) << '\n';
  os << "  arg(c6/c8)      = " << format_number(r.rel_phase) << " rad\n";
  os << "  schmidt         = (" << format_number(r.schmidt[0]) << ", " << format_number(r.schmidt[1]) << ")\n";
  os << "  atom excited    = " << format_number(r.excited) << '\n';
}

}  // namespace

ExperimentParams RunConfig::params() const {
  ExperimentParams p;
  p.omega = khz_to_angular(omega_khz);
  p.delta = khz_to_angular(delta_khz);
  p.t_switch = t_switch_us;
  p.model = model;
  p.profile_shape = profile;
  p.switch_shape = switch_shape;
  p.ode_step = ode_step_us;
  if (lambda) {
    p.lambda_coupling = *lambda;
  } else if (model == Model::channel) {
    // Peak overlap depends only on the shape; a unit window keeps t_switch = 0 valid.
    p.lambda_coupling = normalize_lambda(p.omega, SwitchFunctions{switch_shape, 0.0, 1.0});
  } else {
    p.lambda_coupling = 4.0 * p.omega;
  }
  p.validate();
  return p;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = canonical_key(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "model") {
    cfg.model = parse_model(value);
  } else if (key == "t-switch-us") {
    cfg.t_switch_us = to_double(key, value);
  } else if (key == "omega-khz") {
    cfg.omega_khz = to_double(key, value);
  } else if (key == "delta-khz") {
    cfg.delta_khz = to_double(key, value);
  } else if (key == "lambda") {
    if (value == "auto")
      cfg.lambda.reset();
    else
      cfg.lambda = to_double(key, value);
  } else if (key == "profile") {
    cfg.profile = parse_profile_shape(value);
  } else if (key == "switch-shape") {
    cfg.switch_shape = parse_switch_shape(value);
  } else if (key == "interval") {
    cfg.intervals.push_back(parse_interval(value, "I" + std::to_string(cfg.intervals.size() + 1)));
  } else if (key == "points") {
    cfg.points = to_count(key, value);
  } else if (key == "ode-step-us") {
    cfg.ode_step_us = to_double(key, value);
  } else if (key == "out") {
    cfg.out_path = value;
  } else if (key == "grid") {
    cfg.t_switch_grid = parse_grid(value);
  } else if (key == "data") {
    cfg.data_path = value;
  } else if (key == "fit-model") {
    if (value == "plain" || value == "plain-cosine" || value == "plain_cosine")
      cfg.fit_kind = FitKind::plain_cosine;
    else if (value == "damped" || value == "damped-cosine" || value == "damped_cosine")
      cfg.fit_kind = FitKind::damped_cosine;
    else
      throw InvalidParams("unknown fit model '" + value + "'");
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, value);
  } else if (key == "beta") {
    cfg.beta = to_double(key, value);
  } else {
    throw InvalidParams("unknown setting '" + raw_key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string line;
  std::size_t line_no = 0;
  bool intervals_from_file = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidParams(path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = canonical_key(trim(line.substr(0, eq)));
    if (key == "interval" && !intervals_from_file) {
      cfg.intervals.clear();
      intervals_from_file = true;
    }
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const InvalidParams& e) {
      throw InvalidParams(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) throw InvalidParams("empty grid");
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InvalidParams("grid '" + text + "' must be lo:hi:step");
    const double lo = to_double("grid", parts[0]);
    const double hi = to_double("grid", parts[1]);
    const double step = to_double("grid", parts[2]);
    if (!(step > 0.0) || hi < lo) throw InvalidParams("grid '" + text + "' needs step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::stringstream ss(t);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(to_double("grid", part));
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const ExperimentParams p = cfg.params();
  const Timeline timeline(p);
  auto os = csv_stream();
  os << "T_us,P\n";
  for (const auto& iv : intervals_or(cfg, {default_intervals().front()})) {
    for (const auto& s : sample_probability(timeline, iv, cfg.points))
      os << format_number(s.t) << ',' << format_number(s.p) << '\n';
  }
  return emit(cfg, out, os.str());
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const ExperimentParams p = cfg.params();
  const std::vector<double> grid = cfg.t_switch_grid.empty() ? parse_grid("0:1:0.1") : cfg.t_switch_grid;
  const auto intervals = intervals_or(cfg, default_intervals());
  const auto rows = sweep_switch_time(p, grid, intervals, cfg.points);
  auto os = csv_stream();
  os << "t_switch_us,interval,omega_rel,phi_rel\n";
  for (const auto& r : rows)
    os << format_number(r.t_switch) << ',' << r.interval << ',' << format_number(r.omega_rel) << ','
       << format_number(r.phi_rel) << '\n';
  return emit(cfg, out, os.str());
}

int cmd_entangle_check(const RunConfig& cfg, std::ostream& out) {
  constexpr double kTol = 1e-9;
  const ExperimentParams p = cfg.params();
  ExperimentParams ideal = p;
  ideal.model = Model::stepwise;
  const MidStateReport step = report_mid_state(Timeline(ideal).mid_state());

  const double expected_abs = 1.0 / std::sqrt(2.0);
  const double expected_phase = std::fmod(p.delta * kPi / p.omega, 2.0 * kPi);
  double phase_err = std::abs(step.rel_phase - expected_phase);
  phase_err = std::min(phase_err, 2.0 * kPi - phase_err);
  const bool ok = std::abs(step.abs_c6 - expected_abs) <= kTol && std::abs(step.abs_c8 - expected_abs) <= kTol &&
                  phase_err <= kTol && std::abs(step.schmidt[0] - expected_abs) <= kTol &&
                  std::abs(step.schmidt[1] - expected_abs) <= kTol;

  auto os = csv_stream();
  os << "expected: |c6| = |c8| = " << format_number(expected_abs) << ", arg(c6/c8) = "
     << format_number(expected_phase) << " rad\n";
  print_report(os, "stepwise mid-state:", step);
  if (p.model != Model::stepwise) {
    const MidStateReport r = report_mid_state(Timeline(p).mid_state());
    print_report(os, std::string(to_string(p.model)) + " mid-state (t_switch = " + format_number(p.t_switch) + " us):",
                 r);
  }
  os << "stepwise check: " << (ok ? "PASS" : "FAIL") << '\n';
  emit(cfg, out, os.str());
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const ExperimentParams p = cfg.params();
  if (cfg.data_path.empty()) throw InvalidParams("fit needs a data file");
  const auto samples = read_trace_file(cfg.data_path);

  FitModel model;
  model.kind = cfg.fit_kind;
  model.alpha = cfg.alpha;
  model.beta = cfg.beta;
  model.free_start = p.transit_time();

  const double phi_ideal = p.ideal_phase();
  double reference = phi_ideal;
  auto os = csv_stream();
  auto summary = csv_stream();
  os << "interval,omega_rel,phi_rel,residual_rms\n";
  std::size_t fitted = 0;
  for (const auto& iv : intervals_or(cfg, default_intervals())) {
    std::vector<Sample> inside;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(inside),
                 [&](const Sample& s) { return s.t >= iv.lo && s.t <= iv.hi; });
    if (inside.empty()) continue;
    const FitResult r = fit_cosine(inside, model, p.delta);
    const double phi = unwrap_phase(r.phi_fit, reference);
    reference = phi;
    ++fitted;
    summary << iv.label << " [" << format_number(iv.lo) << ", " << format_number(iv.hi) << "] us: omega = "
            << format_number(r.omega_fit) << " rad/us, phi = " << format_number(phi)
            << " rad, amplitude = " << format_number(r.amplitude)
            << ", rms residual = " << format_number(r.residual_rms) << '\n';
    os << iv.label << ',' << format_number(r.omega_fit / p.delta) << ',' << format_number(phi / phi_ideal) << ','
       << format_number(r.residual_rms) << '\n';
  }
  if (fitted == 0) throw InvalidParams("no samples fall inside any configured interval");
  log << summary.str();
  return emit(cfg, out, os.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bimodal-cavity detuning simulator", "bimodal"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<CLI::App*> subs;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value file; flags override it");
    sub->add_option("--model", "stepwise | smooth | channel");
    sub->add_option("--t-switch-us", "switching time in us");
    sub->add_option("--omega-khz", "coupling Omega/2pi in kHz");
    sub->add_option("--delta-khz", "mode splitting delta/2pi in kHz");
    sub->add_option("--lambda", "mode-mode coupling in rad/us, or 'auto'");
    sub->add_option("--profile", "detuning ramp: linear | raised-cosine");
    sub->add_option("--switch-shape", "switch functions: step | raised-cosine");
    sub->add_option("--interval", "lo:hi or label=lo:hi in us (repeatable)")->expected(1, 1)->multi_option_policy(
        CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--points", "samples per interval");
    sub->add_option("--ode-step-us", "RK4 step in us");
    sub->add_option("--out", "output path (default standard output)");
    subs.push_back(sub);
  };
  auto* simulate = app.add_subcommand("simulate", "sample P(T) as CSV");
  auto* sweep = app.add_subcommand("sweep", "fit phase and frequency versus switching time");
  auto* entangle = app.add_subcommand("entangle-check", "report the two-mode state after the source atom");
  auto* fit = app.add_subcommand("fit", "fit a two-column trace per interval");
  for (auto* s : {simulate, sweep, entangle, fit}) add_common(s);
  sweep->add_option("--grid", "switching times: lo:hi:step or a comma list (us)");
  fit->add_option("data", "two-column trace file")->required();
  fit->add_option("--fit-model", "plain | damped");
  fit->add_option("--alpha", "dissipation constant alpha, 1/us");
  fit->add_option("--beta", "dissipation constant beta, 1/us");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    CLI::App* chosen = app.get_subcommands().front();
    bool cleared_intervals = false;
    for (const CLI::Option* opt : chosen->get_options()) {
      if (opt->count() == 0) continue;
      const std::string name = opt->get_name();
      if (name == "--config" || name == "--help") continue;
      const std::string key = opt->get_positional() ? "data" : name;
      if (key == "--interval" && !cleared_intervals) {
        cfg.intervals.clear();
        cleared_intervals = true;
      }
      for (const auto& v : opt->results()) apply_setting(cfg, key, v);
    }

    if (chosen == simulate) return cmd_simulate(cfg, out);
    if (chosen == sweep) return cmd_sweep(cfg, out);
    if (chosen == entangle) return cmd_entangle_check(cfg, out);
    return cmd_fit(cfg, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace bimodal::cli
