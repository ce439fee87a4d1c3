#include <gtest/gtest.h>

#include <sstream>

#include "triqi/config.hpp"
#include "triqi/errors.hpp"

namespace triqi {
namespace {

ConfigFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

TEST(Config, EntriesAndAxes) {
  const ConfigFile c = parse(
      "# comment\n"
      "\n"
      "theta = 0.01\n"
      "background=flat\n"
      "axis.eta=0.001, 0.01\n"
      "axis.nbar=20,50\n");
  ASSERT_EQ(c.entries.size(), 2u);
  EXPECT_EQ(c.entries[0].first, "theta");
  EXPECT_EQ(c.entries[0].second, "0.01");
  EXPECT_EQ(c.entries[1].second, "flat");
  ASSERT_EQ(c.axes.size(), 2u);
  EXPECT_EQ(c.axes[0].first, "eta");
  EXPECT_EQ(c.axes[0].second, (std::vector<std::string>{"0.001", "0.01"}));
  EXPECT_EQ(c.axes[1].first, "nbar");
}

TEST(Config, Rejects) {
  EXPECT_THROW(parse("theta 0.1\n"), UsageError);
  EXPECT_THROW(parse("=0.1\n"), UsageError);
  EXPECT_THROW(parse("axis.colour=1,2\n"), UsageError);
  EXPECT_THROW(parse("axis.eta=1\naxis.eta=2\n"), UsageError);
  EXPECT_THROW(parse("axis.eta=1,,2\n"), UsageError);
  EXPECT_THROW(load_config("/nonexistent/triqi.cfg"), UsageError);
}

TEST(Config, Scalars) {
  EXPECT_DOUBLE_EQ(parse_double("1e-3", "x"), 1e-3);
  EXPECT_DOUBLE_EQ(parse_double(" 2.5 ", "x"), 2.5);
  EXPECT_THROW(parse_double("abc", "x"), UsageError);
  EXPECT_THROW(parse_double("1.5x", "x"), UsageError);
  EXPECT_THROW(parse_double("", "x"), UsageError);
  EXPECT_EQ(parse_size("12", "n"), 12u);
  EXPECT_THROW(parse_size("-1", "n"), UsageError);
  EXPECT_THROW(parse_size("1.5", "n"), UsageError);
  EXPECT_EQ(split_list("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
}

TEST(Config, SetParam) {
  ProtocolParams p;
  set_param(p, "theta", "0.02");
  set_param(p, "nbar", "40");
  set_param(p, "background", "flat");
  set_param(p, "idler", "traced");
  set_param(p, "cutoff", "10");
  EXPECT_DOUBLE_EQ(p.theta, 0.02);
  EXPECT_DOUBLE_EQ(p.nbar2, 40.0);
  EXPECT_DOUBLE_EQ(p.nbar3, 40.0);
  EXPECT_EQ(p.background, BackgroundVariant::flat);
  EXPECT_EQ(p.idler, IdlerVariant::traced);
  EXPECT_EQ(p.cutoffs, (std::vector<std::size_t>{2, 10, 10}));
  set_param(p, "cutoff", "3,8,9");
  EXPECT_EQ(p.cutoffs, (std::vector<std::size_t>{3, 8, 9}));
  set_param(p, "nbar3", "7");
  EXPECT_DOUBLE_EQ(p.nbar3, 7.0);
  set_param(p, "kappa", "0.3");
  ASSERT_TRUE(p.kappa.has_value());
  EXPECT_DOUBLE_EQ(*p.kappa, 0.3);

  EXPECT_THROW(set_param(p, "cutoff", "3,8"), UsageError);
  EXPECT_THROW(set_param(p, "background", "pink"), UsageError);
  EXPECT_THROW(set_param(p, "colour", "1"), UsageError);
  EXPECT_TRUE(is_param_name("eta"));
  EXPECT_FALSE(is_param_name("outputs"));
}

}  // namespace
}  // namespace triqi
