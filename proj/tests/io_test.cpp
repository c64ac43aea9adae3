#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sbmcd/io.hpp"
#include "sbmcd/sampler.hpp"

namespace sbmcd::io {
namespace {

TEST(EdgeListTest, HeaderCommentsAndOneBasedIndices) {
  std::istringstream in("# two triangles\n6 2\n1 2\n2 3\n1 3  # closing edge\n\n4 5\n5 6\n4 6\n");
  const auto el = read_edge_list(in);
  EXPECT_EQ(el.graph.num_nodes(), 6u);
  EXPECT_EQ(el.k, 2u);
  EXPECT_EQ(el.graph.num_edges(), 6u);
  EXPECT_TRUE(el.graph.has_edge(0, 2));
  EXPECT_FALSE(el.graph.has_edge(2, 3));
}

TEST(EdgeListTest, WithoutHeaderUsesLargestIndexOrHint) {
  std::istringstream a("1 2\n2 4\n");
  const auto el = read_edge_list(a);
  EXPECT_EQ(el.graph.num_nodes(), 4u);
  EXPECT_FALSE(el.k.has_value());
  std::istringstream b("1 2\n2 4\n");
  EXPECT_EQ(read_edge_list(b, 10).graph.num_nodes(), 10u);
}

TEST(EdgeListTest, MalformedInputsAreRejected) {
  for (const char* text : {"1 2 3\n", "1 x\n", "0 1\n", "3 2\n1 4\n", "2 2\n", ""}) {
    std::istringstream in(text);
    EXPECT_ANY_THROW(read_edge_list(in)) << text;
  }
}

TEST(EdgeListTest, RoundTrip) {
  const auto [z, g] = sample(SbmParams::balanced(2, 8.0, 1.0, 0.1), 40, 3);
  std::ostringstream out;
  write_edge_list(out, g, 2);
  std::istringstream in(out.str());
  const auto back = read_edge_list(in);
  EXPECT_EQ(back.graph.edges(), g.edges());
  EXPECT_EQ(back.graph.num_nodes(), 40u);
}

TEST(LabelingIoTest, RoundTripAndValidation) {
  const Labeling z({0, 2, 1, 1, 0}, 3);
  std::ostringstream out;
  write_labeling(out, z);
  EXPECT_EQ(out.str(), "1\n3\n2\n2\n1\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_labeling(in), z);
  std::istringstream bad("1\n0\n");
  EXPECT_THROW(read_labeling(bad), FormatError);
  std::istringstream too_big("1\n4\n");
  EXPECT_THROW(read_labeling(too_big, 3), std::invalid_argument);
}

TEST(ParamsTest, ParsesAllKeys) {
  std::istringstream in(
      "# planted bisection\n"
      "k = 2\n"
      "pi = 0.4, 0.6\n"
      "S = 5, 1\n"
      "S = 1, 4\n"
      "rho_mode = custom_expr\n"
      "c = 2\n");
  const auto spec = params_from_key_values(read_key_values(in));
  EXPECT_EQ(spec.pi, (std::vector<double>{0.4, 0.6}));
  EXPECT_EQ(spec.shape, (Matrix<double>{{5, 1}, {1, 4}}));
  const auto p = spec.resolve(100);
  EXPECT_DOUBLE_EQ(p.rho, 2.0 * std::log(100.0) / 100.0);
  EXPECT_NO_THROW(p.validate());
}

TEST(ParamsTest, DefaultsAndErrors) {
  std::istringstream ok("k = 3\nS = 2,1,1\nS = 1,2,1\nS = 1,1,2\nrho = 0.1\n");
  const auto spec = params_from_key_values(read_key_values(ok));
  EXPECT_EQ(spec.pi.size(), 3u);
  EXPECT_NEAR(spec.pi[0], 1.0 / 3, 1e-15);
  EXPECT_EQ(spec.rho_mode, RhoMode::kConst);

  for (const char* text : {"S = 1\nrho = 0.1\n", "k = 2\nS = 1,1\nrho = 0.1\n",
                           "k = 1\nS = 1\n", "k = 1\nS = 1\nrho_mode = weird\n",
                           "k = 2\npi = 1\nS = 1,1\nS = 1,1\nrho = 0.1\n", "k 2\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(params_from_key_values(read_key_values(in)), FormatError) << text;
  }
}

TEST(ParamsTest, ReadsShippedFixture) {
  const auto spec = read_params(SBMCD_TEST_DATA_DIR "/bisection.params");
  EXPECT_EQ(spec.rho_mode, RhoMode::kLogNOverN);
  EXPECT_EQ(spec.shape(0, 0), 4.0);
}

}  // namespace
}  // namespace sbmcd::io
