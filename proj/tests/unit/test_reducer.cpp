#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "oracles.hpp"
#include "specdim/error.hpp"
#include "specdim/reducer.hpp"

using namespace specdim;
using specdim::testing::random_real;

TEST(MakeSpec, FloorsTheTargetSize) {
  EXPECT_EQ(make_spec(768, 5).target_dim, 153u);  // 153.6
  EXPECT_EQ(make_spec(768, 8).target_dim, 96u);
  EXPECT_EQ(make_spec(768, 10).target_dim, 76u);  // 76.8
  EXPECT_EQ(make_spec(768, 1).target_dim, 768u);
  EXPECT_EQ(make_spec(768, 2.5).target_dim, 307u);
  const auto spec = make_spec(768, 8);
  EXPECT_EQ(spec.source_dim, 768u);
  ASSERT_TRUE(spec.factor.has_value());
  EXPECT_DOUBLE_EQ(*spec.factor, 8.0);
  EXPECT_DOUBLE_EQ(spec.ratio(), 8.0);
}

TEST(MakeSpec, RejectsInvalidFactors) {
  EXPECT_THROW(make_spec(768, 0.5), InvalidSpecError);
  EXPECT_THROW(make_spec(768, 0.0), InvalidSpecError);
  EXPECT_THROW(make_spec(768, -2.0), InvalidSpecError);
  EXPECT_THROW(make_spec(768, std::nan("")), InvalidSpecError);
  EXPECT_THROW(make_spec(4, 5.0), InvalidSpecError);  // zero dims
  EXPECT_THROW(make_spec(0, 1.0), InvalidSpecError);
  EXPECT_THROW(make_spec_for_target(10, 0), InvalidSpecError);
  EXPECT_THROW(make_spec_for_target(10, 11), InvalidSpecError);
  EXPECT_NO_THROW(make_spec_for_target(10, 10));
}

TEST(Reduce, KeepsThePrefix) {
  const std::vector<double> a{5, 3, 2, 1};
  const auto out = reduce(a, make_spec_for_target(4, 2));
  EXPECT_EQ(out.amplitudes, (std::vector<double>{5, 3}));
  EXPECT_EQ(out.source_dim(), 4u);
}

TEST(Reduce, IdentityWhenTargetEqualsSource) {
  const auto a = random_real(50, 3, 0.0, 2.0);
  EXPECT_EQ(reduce(a, make_spec(50, 1)).amplitudes, a);
}

TEST(Reduce, DimensionMismatchNamesBothLengths) {
  const std::vector<double> a{1, 2, 3};
  try {
    reduce(a, make_spec_for_target(4, 2));
    FAIL() << "expected DimensionMismatchError";
  } catch (const DimensionMismatchError& e) {
    EXPECT_EQ(e.expected(), 4u);
    EXPECT_EQ(e.actual(), 3u);
    EXPECT_NE(std::string(e.what()).find('4'), std::string::npos);
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos);
  }
}

TEST(TransformEmbedding, ImpulseAndConstant) {
  const std::vector<double> impulse{1, 0, 0, 0};
  const auto a = transform_embedding(impulse, make_spec_for_target(4, 2)).amplitudes;
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0], 1.0, 1e-15);
  EXPECT_NEAR(a[1], 1.0, 1e-15);

  const std::vector<double> ones(8, 1.0);
  const auto c = transform_embedding(ones, make_spec_for_target(8, 3)).amplitudes;
  EXPECT_NEAR(c[0], 8.0, 1e-12);
  EXPECT_NEAR(c[1], 0.0, 1e-12);
  EXPECT_NEAR(c[2], 0.0, 1e-12);
}

TEST(TransformEmbedding, DcTermIsTheCoordinateSum) {
  const auto u = random_real(768, 153);
  long double sum = 0.0L;
  for (double v : u) sum += v;
  const auto out = transform_embedding(u, make_spec(768, 5));
  ASSERT_EQ(out.amplitudes.size(), 153u);
  EXPECT_NEAR(out.amplitudes[0], std::fabs(static_cast<double>(sum)), 1e-9);
}

TEST(TransformEmbedding, MatchesDirectDftPipeline) {
  const auto spec = make_spec(768, 8);
  const auto u = random_real(768, 96);
  const auto fast = transform_embedding(u, spec).amplitudes;
  const auto full = amplitude_spectrum(dft_direct(u));
  ASSERT_EQ(fast.size(), 96u);
  for (std::size_t k = 0; k < 96; ++k) EXPECT_NEAR(fast[k], full[k], 1e-9) << "k=" << k;
}

TEST(TransformEmbedding, PrefixConsistency) {
  const auto u = random_real(300, 8);
  const auto small = transform_embedding(u, make_spec_for_target(300, 20)).amplitudes;
  const auto large = transform_embedding(u, make_spec_for_target(300, 75)).amplitudes;
  for (std::size_t k = 0; k < small.size(); ++k) EXPECT_EQ(small[k], large[k]);
}

TEST(TransformEmbedding, InvariantUnderCircularShift) {
  const auto spec = make_spec(768, 8);
  const auto u = random_real(768, 21);
  const auto base = transform_embedding(u, spec).amplitudes;
  for (std::size_t shift : {1, 5, 100, 767}) {
    auto rotated = u;
    std::rotate(rotated.begin(), rotated.begin() + static_cast<std::ptrdiff_t>(shift), rotated.end());
    const auto out = transform_embedding(rotated, spec).amplitudes;
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(out[k], base[k], 1e-9) << "shift=" << shift;
  }
}

TEST(TransformEmbedding, ScalingEquivariance) {
  const auto spec = make_spec(153, 3);
  const auto u = random_real(153, 4);
  const auto base = transform_embedding(u, spec).amplitudes;
  for (double alpha : {0.0, 0.25, 3.0}) {
    auto scaled = u;
    for (double& x : scaled) x *= alpha;
    const auto out = transform_embedding(scaled, spec).amplitudes;
    for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(out[k], alpha * base[k], 1e-9);
  }
}

TEST(TransformEmbedding, DeterministicBytes) {
  const auto spec = make_spec(768, 5);
  const auto u = random_real(768, 99);
  const auto a = transform_embedding(u, spec).amplitudes;
  const auto b = transform_embedding(u, spec).amplitudes;
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
}

TEST(TransformEmbedding, AmplitudesNonNegative) {
  const auto out = transform_embedding(random_real(97, 1), make_spec_for_target(97, 40)).amplitudes;
  for (double a : out) {
    EXPECT_GE(a, 0.0);
    EXPECT_TRUE(std::isfinite(a));
  }
}

TEST(TransformEmbedding, Errors) {
  const auto spec = make_spec(8, 2);
  EXPECT_THROW(transform_embedding(std::vector<double>(7, 1.0), spec), DimensionMismatchError);
  std::vector<double> bad(8, 1.0);
  bad[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(transform_embedding(bad, spec), NonFiniteError);
}

TEST(SpectralReducer, AgreesWithFreeFunction) {
  const auto spec = make_spec(768, 8);
  const SpectralReducer reducer(spec);
  const auto u = random_real(768, 12);
  EXPECT_EQ(reducer(std::span<const double>(u)).amplitudes, transform_embedding(u, spec).amplitudes);
  std::vector<float> uf(u.begin(), u.end());
  const auto f32 = reducer.reduce_to_f32(uf);
  const auto f64 = transform_embedding(std::span<const float>(uf), spec).amplitudes;
  for (std::size_t k = 0; k < f32.size(); ++k) EXPECT_EQ(f32[k], static_cast<float>(f64[k]));
}
