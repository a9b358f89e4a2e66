#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "specdim/corpus.hpp"
#include "specdim/error.hpp"
#include "specdim/mds.hpp"
#include "specdim/synthetic.hpp"

using namespace specdim;

namespace {

// Distance matrix of seeded random points in the plane, computed here
// rather than through the library.
DistanceMatrix planar_delta(std::size_t n, std::uint64_t seed, std::vector<Point2>* points = nullptr) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::vector<Point2> p(n);
  for (auto& q : p) q = {coord(rng), coord(rng)};
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = p[i][0] - p[j][0], dy = p[i][1] - p[j][1];
      rows[i][j] = std::sqrt(dx * dx + dy * dy);
    }
  }
  if (points) *points = p;
  return DistanceMatrix::from_rows(rows);
}

double max_deviation(const DistanceMatrix& a, const DistanceMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs(a(i, j) - b(i, j)));
  return worst;
}

void expect_non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]) << "step " << i;
}

}  // namespace

TEST(Mds, TwoPointsAreExact) {
  DistanceMatrix d(2);
  d.set(0, 1, 4.0);
  const auto res = mds_project(d, {.seed = 3});
  EXPECT_NEAR(euclidean_distances(res.coordinates)(0, 1), 4.0, 1e-9);
  EXPECT_NEAR(res.stress, 0.0, 1e-12);
}

TEST(Mds, EquilateralTriangle) {
  DistanceMatrix d(3);
  d.set(0, 1, 1.0);
  d.set(0, 2, 1.0);
  d.set(1, 2, 1.0);
  const auto res = mds_project(d, {.seed = 0});
  const auto out = euclidean_distances(res.coordinates);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) EXPECT_NEAR(out(i, j), 1.0, 1e-4);
  EXPECT_LT(res.stress, 1e-8);
  expect_non_increasing(res.stress_trace);
}

TEST(Mds, RecoversPlanarConfiguration) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto delta = planar_delta(10, 100 + seed);
    const auto res = mds_project(delta, {.seed = seed});
    EXPECT_LT(max_deviation(euclidean_distances(res.coordinates), delta), 1e-3) << "seed " << seed;
    expect_non_increasing(res.stress_trace);
  }
}

TEST(Mds, StressIsRecomputableAndCentered) {
  const auto delta = planar_delta(12, 9);
  const auto res = mds_project(delta, {.seed = 4, .max_iter = 20});
  EXPECT_NEAR(res.stress, raw_stress(delta, res.coordinates), 1e-12 * std::max(1.0, res.stress));
  double mx = 0.0, my = 0.0;
  for (const auto& p : res.coordinates) {
    mx += p[0];
    my += p[1];
  }
  EXPECT_NEAR(mx, 0.0, 1e-9);
  EXPECT_NEAR(my, 0.0, 1e-9);
  EXPECT_LE(res.iterations, 20u);
  ASSERT_FALSE(res.stress_trace.empty());
  EXPECT_DOUBLE_EQ(res.stress_trace.back(), res.stress);
}

TEST(Mds, TraceNonIncreasingOnNonEuclideanInput) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int run = 0; run < 10; ++run) {
    DistanceMatrix d(15);
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = i + 1; j < 15; ++j) d.set(i, j, u(rng));
    const auto res = mds_project(d, {.seed = static_cast<std::uint64_t>(run)});
    expect_non_increasing(res.stress_trace);
  }
}

TEST(Mds, SeededDeterminism) {
  const auto delta = planar_delta(20, 11);
  const auto a = mds_project(delta, {.seed = 8});
  const auto b = mds_project(delta, {.seed = 8});
  EXPECT_EQ(a.coordinates, b.coordinates);
  EXPECT_EQ(a.stress_trace, b.stress_trace);
}

TEST(Mds, RestartsNeverWorse) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  DistanceMatrix d(12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i + 1; j < 12; ++j) d.set(i, j, u(rng));
  const auto one = mds_project(d, {.seed = 2, .restarts = 1});
  const auto many = mds_project(d, {.seed = 2, .restarts = 5});
  EXPECT_LE(many.stress, one.stress);
}

TEST(Mds, ValidationErrors) {
  EXPECT_THROW(DistanceMatrix::from_rows({{0, 1}, {2, 0}}), ValidationError);
  EXPECT_THROW(DistanceMatrix::from_rows({{1, 1}, {1, 0}}), ValidationError);
  EXPECT_THROW(DistanceMatrix::from_rows({{0, -1}, {-1, 0}}), ValidationError);
  EXPECT_THROW(DistanceMatrix::from_rows({{0, 1}, {1}}), ValidationError);
  EXPECT_THROW(DistanceMatrix::from_rows({{0, NAN}, {NAN, 0}}), ValidationError);
  EXPECT_THROW(mds_project(DistanceMatrix(1)), ValidationError);
  DistanceMatrix d(2);
  d.set(0, 1, 1.0);
  EXPECT_THROW(mds_project(d, {.max_iter = 0}), ValidationError);
}

TEST(PairwiseDistances, HandChecked) {
  const std::vector<std::vector<double>> line{{0}, {3}, {7}};
  const auto d = pairwise_distances(line, Metric::L2);
  EXPECT_DOUBLE_EQ(d(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(d(0, 2), 7.0);
  EXPECT_DOUBLE_EQ(d(1, 2), 4.0);
  EXPECT_DOUBLE_EQ(d(2, 1), 4.0);
  EXPECT_DOUBLE_EQ(d(1, 1), 0.0);

  const std::vector<std::vector<float>> same(4, std::vector<float>{0.5f, -1.0f, 2.0f});
  for (Metric m : {Metric::L2, Metric::Cosine}) {
    const auto z = pairwise_distances(same, m);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(z(i, j), 0.0, 1e-12);
  }
  EXPECT_THROW(pairwise_distances(std::vector<std::vector<double>>{}, Metric::L2), EmptyInputError);
  EXPECT_THROW(pairwise_distances(std::vector<std::vector<double>>{{1, 2}, {1}}, Metric::L2), DimensionMismatchError);
}

TEST(PairwiseDistances, TopicBlocksUnderCosine) {
  const auto docs = make_topic_documents(standard_corpus_config());
  const auto recs = embed_documents(docs, 768, 42);
  std::vector<std::vector<float>> vecs;
  for (const auto& r : recs) vecs.push_back(r.vector);
  const auto d = pairwise_distances(vecs, Metric::Cosine);
  double intra = 0.0, inter = 0.0;
  std::size_t ni = 0, nx = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (docs[i].label == docs[j].label) {
        intra += d(i, j);
        ++ni;
      } else {
        inter += d(i, j);
        ++nx;
      }
    }
  }
  EXPECT_LT(intra / ni, inter / nx);
}
