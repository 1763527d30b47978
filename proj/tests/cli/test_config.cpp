#include <sstream>

#include <gtest/gtest.h>

#include "config.hpp"

namespace aicsel::cli {
namespace {

TEST(KeyValues, CommentsAndWhitespace) {
  std::istringstream in("# sweep settings\n qubits = 6 \n\nq=0.04  # perturbation\n");
  const auto kv = parse_key_values(in, "test.cfg");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("qubits"), "6");
  EXPECT_EQ(kv.at("q"), "0.04");
}

TEST(KeyValues, MissingEqualsNamesLine) {
  std::istringstream in("qubits=4\nreps 10\n");
  try {
    parse_key_values(in, "run.cfg");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("run.cfg:2"), std::string::npos) << e.what();
  }
}

TEST(Config, OverridesWinAndUnknownKeysFail) {
  Config c("sweep");
  EXPECT_EQ(c.integer("qubits"), 5);
  c.merge({{"qubits", "7"}, {"reps", "3"}}, "file");
  c.merge({{"qubits", "8"}}, "command line");
  EXPECT_EQ(c.integer("qubits"), 8);
  EXPECT_EQ(c.integer("reps"), 3);
  EXPECT_THROW(c.merge({{"shots", "100"}}, "file"), ValidationError);
  EXPECT_THROW(Config("plot"), ValidationError);
}

TEST(Config, TypedAccessors) {
  Config c("scaling-n");
  c.merge({{"n_list", "4, 6,8"}, {"q", "abc"}}, "t");
  EXPECT_EQ(c.integers("n_list"), (std::vector<int>{4, 6, 8}));
  EXPECT_THROW(c.real("q"), ValidationError);
  Config s("sweep");
  s.merge({{"m_grid", "15,30"}, {"pin_perturbation", "yes"}}, "t");
  EXPECT_EQ(s.unsigned64s("m_grid"), (std::vector<std::uint64_t>{15, 30}));
  EXPECT_TRUE(s.flag("pin_perturbation"));
}

TEST(Config, HashIgnoresExecutionKeys) {
  Config a("sweep"), b("sweep");
  b.merge({{"out", "elsewhere"}, {"workers", "8"}}, "t");
  EXPECT_EQ(a.hash(), b.hash());
  b.merge({{"seed", "2"}}, "t");
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_NE(Config("sweep").hash(), Config("scaling-q").hash());
}

}  // namespace
}  // namespace aicsel::cli
