#include <regex>

#include <gtest/gtest.h>

#include "lot/io.hpp"
#include "lot/svg.hpp"
#include "test_support.hpp"

namespace lot {
namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(MeasureJson, RoundTripAndRequiredFields) {
  Rng rng(1);
  const auto mu = testing::random_weighted(rng, 7, 3);
  const auto back = measure_from_json(measure_to_json(mu));
  EXPECT_EQ(back, mu);
  EXPECT_EQ(measure_fingerprint(back), measure_fingerprint(mu));

  auto j = measure_to_json(mu);
  j.erase("weights");
  EXPECT_THROW(measure_from_json(j), Error);
  auto k = measure_to_json(mu);
  k["dim"] = 2;
  EXPECT_THROW(measure_from_json(k), Error);
}

TEST(DistanceCsv, Layout) {
  DistanceMatrix m;
  m.labels = {"a", "b"};
  m.entries = Eigen::MatrixXd{{0.0, 1.5}, {1.5, 0.0}};
  const auto csv = distance_matrix_to_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), ",a,b");
  EXPECT_EQ(count(csv, "\n"), 3u);
}

TEST(Svg, EmptyHasAxesOnly) {
  const auto svg = svg_scatter({}, {}, "empty");
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.find("<svg") != std::string::npos, true);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "class=\"pt "), 0u);
  EXPECT_NE(svg.find("axis"), std::string::npos);
}

TEST(Svg, OneMarkerPerPointAndDeterministic) {
  Rng rng(2);
  std::vector<std::array<double, 2>> pts;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    pts.push_back({rng.normal(), rng.normal()});
    labels.push_back(i % 3 ? 1 : -1);
  }
  const auto svg = svg_scatter(pts, labels, "t");
  EXPECT_EQ(count(svg, "class=\"pt "), 200u);
  EXPECT_EQ(count(svg, "class=\"pt neg\""), 67u);
  EXPECT_EQ(svg, svg_scatter(pts, labels, "t"));
}

}  // namespace
}  // namespace lot
