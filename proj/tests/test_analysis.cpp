#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bimodal/analysis.hpp"
#include "bimodal/errors.hpp"

using namespace bimodal;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<Sample> synthetic(const Interval& iv, std::size_t n, double omega, double phi,
                              const FitModel& model = {}) {
  std::vector<Sample> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double T = iv.lo + (iv.hi - iv.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    out.push_back({T, model.evaluate(T, omega, phi)});
  }
  return out;
}

double phase_distance(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

ExperimentParams with(Model m, double ts) {
  ExperimentParams p;
  p.model = m;
  p.t_switch = ts;
  return p;
}

}  // namespace

TEST(Intervals, DefaultsAndParsing) {
  const auto iv = default_intervals();
  ASSERT_EQ(iv.size(), 4u);
  EXPECT_EQ(iv[0].label, "I1");
  EXPECT_EQ(iv[0].lo, 48.0);
  EXPECT_EQ(iv[3].hi, 706.0);
  const Interval a = parse_interval("10:20", "X");
  EXPECT_EQ(a.label, "X");
  EXPECT_EQ(a.lo, 10.0);
  const Interval b = parse_interval("late=699.5:706", "X");
  EXPECT_EQ(b.label, "late");
  EXPECT_EQ(b.lo, 699.5);
  EXPECT_THROW(parse_interval("10-20", "X"), InvalidParams);
  EXPECT_THROW(parse_interval("20:10", "X"), InvalidParams);
  EXPECT_THROW(parse_interval("a:b", "X"), InvalidParams);
}

TEST(Sampling, StepwiseEqualsClosedForm) {
  const ExperimentParams p;
  const auto s = sample_probability(p, default_intervals()[0], 91);
  ASSERT_EQ(s.size(), 91u);
  EXPECT_EQ(s.front().t, 48.0);
  EXPECT_EQ(s.back().t, 57.0);
  EXPECT_NEAR(s[10].t, 49.0, 1e-12);
  for (const auto& x : s) EXPECT_NEAR(x.p, ideal_probability(p, x.t), 1e-12);
}

TEST(Sampling, TwoPointsAreTheEndpoints) {
  const auto s = sample_probability(ExperimentParams{}, {"I2", 200.0, 207.0}, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].t, 200.0);
  EXPECT_EQ(s[1].t, 207.0);
  EXPECT_THROW(sample_probability(ExperimentParams{}, {"I2", 200.0, 207.0}, 1), InvalidParams);
}

TEST(Sampling, ChannelLateIntervalIsBounded) {
  for (const auto& x : sample_probability(with(Model::channel, 0.33), default_intervals()[3], 91)) {
    EXPECT_GE(x.p, 0.0);
    EXPECT_LE(x.p, 1.0);
  }
}

TEST(Fit, RecoversItsOwnModel) {
  const ExperimentParams p;
  for (const auto& iv : default_intervals()) {
    const auto s = synthetic(iv, 91, p.delta, 4.29);
    const FitResult r = fit_cosine(s, FitModel{}, p.delta);
    EXPECT_NEAR(r.omega_fit / p.delta, 1.0, 1e-9) << iv.label;
    EXPECT_LE(phase_distance(r.phi_fit, 4.29), 1e-9 * 4.29) << iv.label;
    EXPECT_NEAR(r.amplitude, 0.5, 1e-9);
    EXPECT_LE(r.residual_rms, 1e-10);
  }
}

TEST(Fit, RecoversOffCenterFrequencies) {
  const double w = 0.8;
  for (double rel : {0.97, 1.0, 1.031}) {
    const auto s = synthetic({"x", 100.0, 140.0}, 200, w * rel, -2.0);
    const FitResult r = fit_cosine(s, FitModel{}, w);
    EXPECT_NEAR(r.omega_fit, w * rel, 1e-9);
    EXPECT_LE(phase_distance(r.phi_fit, -2.0), 1e-8);
  }
}

TEST(Fit, StepwiseSamplesGiveTheIdealPhase) {
  const ExperimentParams p;
  for (const auto& iv : default_intervals()) {
    const FitResult r = fit_cosine(sample_probability(p, iv, 91), FitModel{}, p.delta);
    EXPECT_NEAR(r.omega_fit / p.delta, 1.0, 1e-6) << iv.label;
    const double phi = unwrap_phase(r.phi_fit, p.ideal_phase());
    EXPECT_NEAR(phi, p.ideal_phase(), 1e-6) << iv.label;
    EXPECT_NEAR(phi, 4.29, 5e-3);
  }
}

TEST(Fit, DampedModelOnTheLateInterval) {
  const ExperimentParams p;
  FitModel m;
  m.kind = FitKind::damped_cosine;
  m.alpha = 0.001;
  m.beta = 0.001;
  m.free_start = p.transit_time();
  const double phi = 1.234;
  const auto s = synthetic(default_intervals()[3], 91, p.delta, phi, m);
  const FitResult r = fit_cosine(s, m, p.delta);
  EXPECT_NEAR(r.omega_fit, p.delta, 1e-4);
  EXPECT_LE(phase_distance(r.phi_fit, phi), 1e-4);
  // Amplitude is relative to the envelope, so the undamped value comes back.
  EXPECT_NEAR(r.amplitude, 0.5, 1e-6);
}

TEST(FitModelTest, ZeroDampingReducesToPlain) {
  FitModel m;
  m.kind = FitKind::damped_cosine;
  m.free_start = 15.96;
  for (double T : {20.0, 300.0}) {
    EXPECT_EQ(m.envelope(T), 1.0);
    EXPECT_EQ(m.background(T), 0.0);
    EXPECT_EQ(m.evaluate(T, 0.8, 0.3), FitModel{}.evaluate(T, 0.8, 0.3));
  }
}

TEST(Fit, RejectsDegenerateInputs) {
  const double w = 0.806;
  std::vector<Sample> flat;
  for (int k = 0; k < 50; ++k) flat.push_back({48.0 + 0.2 * k, 0.5});
  try {
    fit_cosine(flat, FitModel{}, w);
    FAIL();
  } catch (const FitError& e) {
    EXPECT_STREQ(e.what(), "no oscillation");
  }
  const auto narrow = synthetic({"n", 48.0, 49.0}, 20, w, 0.0);
  try {
    fit_cosine(narrow, FitModel{}, w);
    FAIL();
  } catch (const FitError& e) {
    EXPECT_STREQ(e.what(), "insufficient span");
  }
  EXPECT_THROW(fit_cosine(synthetic({"n", 48.0, 57.0}, 7, w, 0.0), FitModel{}, w), FitError);
}

TEST(Fit, BitwiseDeterministic) {
  const auto s = sample_probability(with(Model::smooth, 1.2), default_intervals()[1], 91);
  const FitResult a = fit_cosine(s, FitModel{}, ExperimentParams{}.delta);
  const FitResult b = fit_cosine(s, FitModel{}, ExperimentParams{}.delta);
  EXPECT_EQ(a.omega_fit, b.omega_fit);
  EXPECT_EQ(a.phi_fit, b.phi_fit);
  EXPECT_EQ(a.residual_rms, b.residual_rms);
}

TEST(Unwrap, Examples) {
  EXPECT_NEAR(unwrap_phase(4.29 - kTwoPi, 4.29), 4.29, 1e-12);
  EXPECT_NEAR(unwrap_phase(0.1, kTwoPi), kTwoPi + 0.1, 1e-12);
  EXPECT_NEAR(unwrap_phase(-3.0, 0.0), -3.0, 1e-15);
  const ExperimentParams p;
  const FitResult r = fit_cosine(sample_probability(p, default_intervals()[0], 91), FitModel{}, p.delta);
  EXPECT_NEAR(unwrap_phase(r.phi_fit, p.ideal_phase()), 4.29, 5e-3);
}

TEST(Sweep, NoSwitchingGivesUnitRatios) {
  const std::vector<double> grid{0.0};
  const auto iv = default_intervals();
  for (Model m : {Model::smooth, Model::channel}) {
    const auto rows = sweep_switch_time(with(m, 0.0), grid, iv);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
      EXPECT_NEAR(r.omega_rel, 1.0, 1e-6);
      EXPECT_NEAR(r.phi_rel, 1.0, 1e-6);
    }
  }
}

TEST(Sweep, RowsSortedAndSensitiveToSwitchTime) {
  const std::vector<double> grid{1.1, 1.0};
  const auto iv = default_intervals();
  for (Model m : {Model::smooth, Model::channel}) {
    const auto rows = sweep_switch_time(with(m, 0.0), grid, iv);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].t_switch, 1.0);
    EXPECT_EQ(rows[0].interval, "I1");
    EXPECT_EQ(rows[4].t_switch, 1.1);
    // A 10% change in the switching time moves the fitted phase.
    EXPECT_GT(std::abs(rows[4].phi_rel - rows[0].phi_rel), 1e-7) << to_string(m);
  }
  EXPECT_THROW(sweep_switch_time(ExperimentParams{}, std::vector<double>{11.0}, iv), InvalidParams);
}

TEST(SweepProperty, FrequencyShiftsAreSmallComparedToPhaseShifts) {
  std::vector<double> grid;
  for (double ts = 0.1; ts <= 1.0 + 1e-9; ts += 0.1) grid.push_back(ts);
  const auto iv = default_intervals();
  for (Model m : {Model::smooth, Model::channel}) {
    for (const auto& r : sweep_switch_time(with(m, 0.0), grid, iv)) {
      EXPECT_LE(std::abs(r.omega_rel - 1.0), std::abs(r.phi_rel - 1.0) / 10.0)
          << to_string(m) << " ts=" << r.t_switch << " " << r.interval;
    }
  }
}

TEST(SweepProperty, PhaseCurveIsContinuous) {
  std::vector<double> grid;
  for (double ts = 0.0; ts <= 4.0 + 1e-9; ts += 0.25) grid.push_back(ts);
  const auto iv = default_intervals();
  const auto rows = sweep_switch_time(with(Model::smooth, 0.0), grid, iv);
  const double phi = ExperimentParams{}.ideal_phase();
  for (std::size_t k = iv.size(); k < rows.size(); ++k) {
    EXPECT_LT(std::abs(rows[k].phi_rel - rows[k - iv.size()].phi_rel) * phi, kTwoPi);
  }
}

TEST(Trace, ParsesHeaderCommentsAndSeparators) {
  std::istringstream in("T_us,P\n# a comment\n48,0.5\n48.1; 0.6  # trailing\n\n48.2\t0.7\n");
  const auto s = read_trace(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].t, 48.1);
  EXPECT_EQ(s[2].p, 0.7);
}

TEST(Trace, ReportsTheOffendingLine) {
  std::istringstream in("48,0.5\n48.1,0.6\n48.2,abc\n");
  try {
    read_trace(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream three("1,2,3\n");
  EXPECT_THROW(read_trace(three), ParseError);
}

TEST(Trace, EmptyInputIsAnError) {
  std::istringstream empty("");
  EXPECT_THROW(read_trace(empty), IoError);
  std::istringstream only_header("T_us,P\n# nothing\n");
  EXPECT_THROW(read_trace(only_header), IoError);
  EXPECT_THROW(read_trace_file("/nonexistent/trace.csv"), IoError);
}
