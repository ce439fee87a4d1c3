#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "triqi/errors.hpp"
#include "triqi/experiments.hpp"

namespace triqi {
namespace {

std::string to_csv(const Table& t) {
  std::ostringstream out;
  emit(t, Format::csv, out);
  return out.str();
}

SweepSpec small_spec() {
  SweepSpec s;
  s.axes = {{"eta", {"0", "0.05"}}, {"idler", {"paper-pure", "traced"}}};
  s.fixed.theta = 0.1;
  s.fixed.nbar2 = s.fixed.nbar3 = 3.0;
  s.fixed.cutoffs = {2, 6, 6};
  s.fixed.max_tail = 1.0;
  s.outputs = {"q_half", "exponent", "helstrom"};
  return s;
}

TEST(Sweep, ZeroEtaHasZeroExponent) {
  const Table t = run_sweep(small_spec());
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.columns.front(), "eta");
  EXPECT_EQ(t.columns.back(), "error");
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_DOUBLE_EQ(t.number(r, "eta"), 0.0);
    EXPECT_LT(t.number(r, "exponent"), 1e-12);
    EXPECT_EQ(t.text(r, "error"), "");
  }
  EXPECT_EQ(t.text(0, "idler"), "paper-pure");
  EXPECT_EQ(t.text(1, "idler"), "traced");
  EXPECT_NEAR(t.number(2, "q_half"), 0.9969204941134269, 1e-13);
  EXPECT_NEAR(t.number(3, "q_half"), 0.9973145669230956, 1e-13);
}

TEST(Sweep, MatchesSingleShotCalls) {
  const SweepSpec spec = small_spec();
  const Table t = run_sweep(spec);
  ProtocolParams p = spec.fixed;
  p.eta = 0.05;
  p.idler = IdlerVariant::traced;
  const HypothesisPair pair = build_hypotheses(p);
  EXPECT_EQ(t.number(3, "q_half"), q_s(pair.rho0, pair.rho1, 0.5));
  EXPECT_EQ(t.number(3, "helstrom"), helstrom_optimum(pair.rho0, pair.rho1));
  EXPECT_EQ(t.number(3, "exponent"), chernoff(pair.rho0, pair.rho1, spec.tol).exponent);
}

TEST(Sweep, RatioExamples) {
  SweepSpec s;
  s.axes = {{"ns", {"0.01", "0.1"}}};
  s.outputs = {"ratio"};
  const Table t = run_sweep(s);
  EXPECT_NEAR(t.number(0, "ratio"), 100.0, 1e-12);
  EXPECT_NEAR(t.number(1, "ratio"), 10.0, 1e-12);
}

TEST(Sweep, Factor100Preset) {
  const Table t = run_sweep(factor100_spec());
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_NEAR(t.number(r, "ratio") / t.number(r, "inv_ns"), 1.0, 1e-14);
  }
  EXPECT_NEAR(t.number(1, "ratio"), 100.0, 1e-12);
}

TEST(Sweep, BadPointGoesToErrorColumn) {
  SweepSpec s;
  s.axes = {{"eta", {"0.01", "1.5"}}};
  s.fixed.cutoffs = {2, 6, 6};
  s.fixed.max_tail = 1.0;
  s.outputs = {"q_half"};
  const Table t = run_sweep(s);
  EXPECT_EQ(t.text(0, "error"), "");
  EXPECT_NE(t.text(1, "error"), "");
  EXPECT_TRUE(std::isnan(t.number(1, "q_half")));
  EXPECT_TRUE(std::isnan(t.number(1, "high_noise")));
}

TEST(Sweep, ValidationAndCap) {
  SweepSpec s = small_spec();
  s.max_points = 3;
  EXPECT_THROW(run_sweep(s), UsageError);
  s = small_spec();
  s.outputs = {"nonsense"};
  EXPECT_THROW(s.validate(), UsageError);
  s = small_spec();
  s.axes.push_back({"eta", {"0.1"}});
  EXPECT_THROW(s.validate(), UsageError);
  EXPECT_EQ(small_spec().point_count(), 4u);
}

TEST(Sweep, SpecFromConfig) {
  std::istringstream in("theta=0.02\noutputs=q_half,ratio\ntol=1e-7\naxis.nbar=5,10\n");
  const SweepSpec s = sweep_spec(parse_config(in));
  EXPECT_DOUBLE_EQ(s.fixed.theta, 0.02);
  EXPECT_EQ(s.outputs, (std::vector<std::string>{"q_half", "ratio"}));
  EXPECT_DOUBLE_EQ(s.tol, 1e-7);
  EXPECT_EQ(s.point_count(), 2u);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  SweepSpec a = small_spec();
  a.threads = 1;
  SweepSpec b = small_spec();
  b.threads = 4;
  const std::string first = to_csv(run_sweep(a));
  EXPECT_EQ(first, to_csv(run_sweep(b)));
  EXPECT_EQ(first, to_csv(run_sweep(a)));
}

TEST(Csv, EmptyAndSingleRow) {
  Table t;
  t.columns = {"a", "b"};
  EXPECT_EQ(to_csv(t), "a,b\n");
  t.rows.push_back({0.1, std::string("x")});
  EXPECT_EQ(to_csv(t), "a,b\n0.10000000000000001,x\n");
}

TEST(Csv, RoundTripIsBitExact) {
  Table t;
  t.columns = {"x", "label"};
  const double values[] = {0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::nextafter(1.0, 2.0), 0.0};
  for (double v : values) t.rows.push_back({v, std::string("p,q \"r\"")});
  t.rows.push_back({std::numeric_limits<double>::quiet_NaN(), std::string("")});
  std::istringstream in(to_csv(t));
  const Table back = read_csv(in);
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t r = 0; r + 1 < t.rows.size(); ++r) {
    EXPECT_EQ(back.number(r, "x"), std::get<double>(t.rows[r][0]));
    EXPECT_EQ(back.text(r, "label"), "p,q \"r\"");
  }
  EXPECT_TRUE(std::isnan(back.number(t.rows.size() - 1, "x")));
}

TEST(Csv, FileRoundTrip) {
  const Table t = run_sweep(small_spec());
  const auto path = std::filesystem::temp_directory_path() / "triqi_roundtrip.csv";
  emit(t, Format::csv, path);
  const Table back = read_csv(path);
  EXPECT_EQ(compare_tables(t, back, 0.0), "");
  std::filesystem::remove(path);
}

TEST(CompareTables, ReportsDifferences) {
  Table a;
  a.columns = {"x"};
  a.rows = {{1.0}};
  Table b = a;
  b.rows[0][0] = 1.0 + 1e-9;
  EXPECT_EQ(compare_tables(a, b, 1e-8), "");
  EXPECT_NE(compare_tables(a, b, 1e-12), "");
  b.columns = {"y"};
  EXPECT_NE(compare_tables(a, b, 1.0), "");
}

TEST(Golden, AppendixRegimeSweep) {
  const auto path = golden_dir() / "golden_sweep.csv";
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  const Table expected = read_csv(path);
  const Table actual = run_sweep(appendix_regime_spec());
  EXPECT_EQ(compare_tables(expected, actual, 1e-9), "");
}

TEST(EvolutionTable, Shape) {
  const Table t = evolution_order_table();
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(t.number(0, "theta"), 0.2);
  EXPECT_TRUE(std::isnan(t.number(0, "ratio_full")));
  EXPECT_GT(t.number(1, "ratio_full"), 0.2);
  EXPECT_LT(t.number(2, "leakage"), 1e-8);
}

}  // namespace
}  // namespace triqi
