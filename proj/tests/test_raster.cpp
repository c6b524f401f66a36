#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hspan/raster.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hspan;

namespace {

oracle::Img to_img(const Grid<double>& g) {
  oracle::Img out(g.width(), g.height());
  out.v = g.samples();
  return out;
}

Grid<double> random_grid(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Grid<double> g(w, h);
  for (double& v : g.samples()) v = u(rng);
  return g;
}

}  // namespace

TEST(MtfKernel, SigmaMatchesClosedForm) {
  const double sigma = mtf_gaussian_sigma(0.3, 6);
  EXPECT_NEAR(sigma, 6.0 * std::sqrt(-2.0 * std::log(0.3) / (std::numbers::pi * std::numbers::pi)), 1e-12);
  EXPECT_NEAR(sigma, 2.9636, 1e-4);
}

TEST(MtfKernel, GainAtReducedNyquistIsThreeTenths) {
  const auto k = mtf_gaussian_kernel(MtfSpec{});
  ASSERT_TRUE(k.separable_factor().has_value());
  EXPECT_NEAR(oracle::dtft_magnitude(*k.separable_factor(), 1.0 / 12.0), 0.3, 1e-3);
  // The oracle's independently sampled Gaussian agrees coefficient by coefficient.
  const auto ref = oracle::mtf_factor(0.3, 6, 41);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR((*k.separable_factor())[i], ref[i], 1e-15);
}

TEST(MtfKernel, GainHoldsAcrossParameters) {
  for (double g : {0.2, 0.3, 0.45}) {
    for (int ratio : {2, 4, 6}) {
      MtfSpec spec{g, ratio, 8 * ratio + 1};
      const auto k = mtf_gaussian_kernel(spec);
      EXPECT_NEAR(oracle::dtft_magnitude(*k.separable_factor(), 0.5 / ratio), g, 1e-3)
          << "g=" << g << " ratio=" << ratio;
      EXPECT_NEAR(k.sum(), 1.0, 1e-12);
    }
  }
}

TEST(MtfKernel, UnitSumAndFlipSymmetry) {
  const auto k = mtf_gaussian_kernel(MtfSpec{});
  EXPECT_NEAR(k.sum(), 1.0, 1e-12);
  const std::size_t n = k.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(k(i, j), k(n - 1 - i, j));
      EXPECT_EQ(k(i, j), k(i, n - 1 - j));
    }
}

TEST(MtfKernel, RejectsWindowTooSmallForSupport) {
  EXPECT_THROW(mtf_gaussian_kernel(MtfSpec{0.3, 6, 13}), ValidationError);
  EXPECT_NO_THROW(mtf_gaussian_kernel(MtfSpec{0.3, 6, 41}));
}

TEST(MtfKernel, SpecValidation) {
  EXPECT_THROW((MtfSpec{0.0, 6, 41}).validate(), ValidationError);
  EXPECT_THROW((MtfSpec{1.0, 6, 41}).validate(), ValidationError);
  EXPECT_THROW((MtfSpec{0.3, 6, 40}).validate(), ValidationError);
  EXPECT_THROW((MtfSpec{0.3, 6, 11}).validate(), ValidationError);
  EXPECT_THROW((MtfSpec{0.3, 1, 41}).validate(), ValidationError);
}

TEST(MtfKernel, IdealLowPassIsUnitSumAndPassesDc) {
  MtfSpec spec;
  spec.shape = MtfShape::ideal;
  const auto k = mtf_gaussian_kernel(spec);
  EXPECT_NEAR(k.sum(), 1.0, 1e-12);
  EXPECT_NEAR(oracle::dtft_magnitude(*k.separable_factor(), 0.0), 1.0, 1e-12);
  EXPECT_LT(oracle::dtft_magnitude(*k.separable_factor(), 0.25), 0.01);
}

TEST(SccKernel, SumsToExactlyZero) { EXPECT_EQ(scc_highpass_kernel().sum(), 0.0); }

TEST(Convolve, ConstantBandIsPreserved) {
  Grid<double> g(20, 17, 3.25);
  const auto out = convolve_reflect(g.view(), Kernel2D::separable(detail::gaussian_factor(1.5, 9)));
  for (double v : out.samples()) EXPECT_NEAR(v, 3.25, 1e-12);
}

TEST(Convolve, ImpulseReproducesKernel) {
  Grid<double> g(9, 9, 0.0);
  g(4, 4) = 1.0;
  const auto k = Kernel2D::dense(3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto out = convolve_reflect(g.view(), k);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(out(3 + i, 3 + j), k(i, j));
  EXPECT_EQ(out(0, 0), 0.0);
}

TEST(Convolve, MatchesBruteForceOracle) {
  const auto g = random_grid(8, 8, 11);
  const std::vector<double> coeffs{0.1, -0.3, 0.2, 0.5, 1.0, -0.7, 0.05, 0.4, -0.2};
  const auto out = convolve_reflect(g.view(), Kernel2D::dense(3, coeffs));
  const auto ref = oracle::convolve(to_img(g), coeffs, 3);
  for (std::size_t i = 0; i < ref.v.size(); ++i) EXPECT_NEAR(out.samples()[i], ref.v[i], 1e-6);
}

TEST(Convolve, SeparablePathMatchesOracle) {
  const auto g = random_grid(13, 10, 12);
  const auto f = detail::gaussian_factor(1.2, 7);
  const auto out = convolve_reflect(g.view(), Kernel2D::separable(f));
  const auto ref = oracle::convolve(to_img(g), oracle::outer(f), 7);
  for (std::size_t i = 0; i < ref.v.size(); ++i) EXPECT_NEAR(out.samples()[i], ref.v[i], 1e-12);
}

TEST(Convolve, BandSmallerThanRadius) {
  Grid<double> g(3, 30, 1.0);
  EXPECT_THROW(convolve_reflect(g.view(), Kernel2D::separable(detail::gaussian_factor(1.0, 9))),
               ValidationError);
}

TEST(Decimate, ConstantBlock) {
  Grid<float> g(6, 6, 5.0f);
  const auto out = decimate(g.view(), 6);
  ASSERT_EQ(out.width(), 1u);
  EXPECT_EQ(out(0, 0), 5.0f);
}

TEST(Decimate, CenterOfBlockOffset) {
  Grid<float> g(12, 12, 0.0f);
  g(3, 3) = 1.0f;
  const auto out = decimate(g.view(), 6);
  EXPECT_EQ(out(0, 0), 1.0f);
  EXPECT_EQ(out(0, 1), 0.0f);
  EXPECT_EQ(out(1, 0), 0.0f);
  EXPECT_EQ(out(1, 1), 0.0f);
}

TEST(Decimate, NonDivisibleDimensions) {
  Grid<float> g(5, 6, 0.0f);
  try {
    decimate(g.view(), 6);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("non-divisible dimensions"), std::string::npos);
  }
}

TEST(Degrade, ConstantIsExactAtEverySample) {
  Grid<float> g(48, 48, 0.7f);
  const auto out = degrade(g.view(), MtfSpec{});
  EXPECT_EQ(out.width(), 8u);
  for (float v : out.samples()) EXPECT_NEAR(v, 0.7f, 1e-6f);
}

TEST(Degrade, MatchesConvolveThenSampleOracle) {
  const auto g = random_grid(384, 384, 13);
  const auto out = degrade(g.view(), MtfSpec{});
  ASSERT_EQ(out.width(), 64u);
  const auto ref = oracle::degrade(to_img(g), 0.3, 6);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.v.size(); ++i) worst = std::max(worst, std::abs(out.samples()[i] - ref.v[i]));
  EXPECT_LE(worst, 1e-6);
}

TEST(Degrade, BitIdenticalToDecimatedConvolution) {
  const auto g = random_grid(48, 42, 14);
  const auto k = mtf_gaussian_kernel(MtfSpec{});
  const auto full = convolve_reflect(g.view(), k);
  EXPECT_EQ(degrade(g.view(), k, 6), decimate(full.view(), 6));
}

TEST(Degrade, RampPreservedInInterior) {
  Grid<double> g(120, 120);
  for (std::size_t r = 0; r < 120; ++r)
    for (std::size_t c = 0; c < 120; ++c) g(r, c) = 0.01 * c + 0.02 * r;
  const auto out = degrade(g.view(), MtfSpec{});
  // Interior samples sit more than one kernel radius from the border.
  for (std::size_t i = 4; i < 16; ++i)
    for (std::size_t j = 4; j < 16; ++j)
      EXPECT_NEAR(out(i, j), g(6 * i + 3, 6 * j + 3), 1e-3);
}

TEST(Upsample, ConstantAndSinglePixel) {
  Grid<float> g(5, 4, 2.5f);
  const auto out = upsample_interp(g.view(), 6);
  EXPECT_EQ(out.width(), 30u);
  EXPECT_EQ(out.height(), 24u);
  for (float v : out.samples()) EXPECT_NEAR(v, 2.5f, 1e-6f);
  Grid<float> one(1, 1, 0.8f);
  const auto up = upsample_interp(one.view(), 6);
  for (float v : up.samples()) EXPECT_NEAR(v, 0.8f, 1e-6f);
}

TEST(Upsample, MatchesDirectBicubicOracle) {
  const auto g = random_grid(7, 5, 15);
  const auto out = upsample_interp(g.view(), 6);
  const auto ref = oracle::upsample(to_img(g), 6);
  for (std::size_t i = 0; i < ref.v.size(); ++i) EXPECT_NEAR(out.samples()[i], ref.v[i], 1e-12);
}

TEST(Upsample, InputGridIsInterpolated) {
  const auto g = random_grid(6, 6, 16);
  const auto up = upsample_interp(g.view(), 6);
  EXPECT_EQ(decimate(up.view(), 6), g);
}

TEST(Upsample, DegradeRoundTripOnSmoothBand) {
  const auto band = test::smooth_field(16, 16, 2.0, 17);
  const auto back = degrade(upsample_interp(band.view(), 6).view(), MtfSpec{});
  double lo = band.samples()[0], hi = lo, mad = 0.0;
  for (std::size_t i = 0; i < band.size(); ++i) {
    lo = std::min(lo, band.samples()[i]);
    hi = std::max(hi, band.samples()[i]);
    mad += std::abs(back.samples()[i] - band.samples()[i]);
  }
  mad /= static_cast<double>(band.size());
  EXPECT_LE(mad, 0.02 * (hi - lo));
}

TEST(HistogramMatch, IdentityAndHandExample) {
  Grid<double> src(2, 1, std::vector<double>{0.0, 1.0});
  const auto out = histogram_match_linear(src.view(), 10.0, 5.0);
  EXPECT_DOUBLE_EQ(out(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 15.0);

  const auto g = random_grid(9, 7, 18);
  const auto m = moments<double>(g.samples());
  const auto same = histogram_match_linear(g.view(), m.mean, m.stddev());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(same.samples()[i], g.samples()[i], 1e-12);
}

TEST(HistogramMatch, OutputMomentsHitTargets) {
  const auto g = random_grid(11, 13, 19);
  const auto out = histogram_match_linear(g.view(), -3.0, 0.25);
  const auto m = moments<double>(out.samples());
  EXPECT_NEAR(m.mean, -3.0, 1e-9);
  EXPECT_NEAR(m.stddev(), 0.25, 1e-9);
}

TEST(HistogramMatch, ZeroVarianceSource) {
  Grid<double> g(4, 4, 1.0);
  try {
    histogram_match_linear(g.view(), 0.0, 1.0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
}

TEST(LeastSquares, TargetInSpanGivesUnitR2) {
  std::mt19937_64 rng(20);
  std::normal_distribution<double> n;
  Eigen::MatrixXd x(60, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  const Eigen::VectorXd y = x * Eigen::Vector3d(0.5, -2.0, 1.25) + Eigen::VectorXd::Constant(60, 4.0);
  const auto fit = least_squares(x, y, true);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-9);
  EXPECT_NEAR(fit.coefficients[3], 4.0, 1e-9);
  EXPECT_NEAR(fit.coefficients[1], -2.0, 1e-9);
}

TEST(LeastSquares, OrthogonalTargetGivesZeroR2) {
  // Centered column [1,-1,1,-1] is orthogonal to the centered target [1,1,-1,-1].
  Eigen::MatrixXd x(4, 1);
  x << 1, -1, 1, -1;
  Eigen::VectorXd y(4);
  y << 1, 1, -1, -1;
  EXPECT_NEAR(least_squares(x, y, true).r_squared, 0.0, 1e-9);
}

TEST(LeastSquares, MatchesNormalEquationOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd x(50, 3);
  Eigen::VectorXd y(50);
  std::vector<std::vector<double>> cols(3, std::vector<double>(50));
  std::vector<double> yv(50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 3; ++j) cols[j][i] = x(i, j) = u(rng);
    yv[i] = y[i] = u(rng) + 0.3 * x(i, 0);
  }
  const auto fit = least_squares(x, y);
  const auto ref = oracle::normal_equations(cols, yv);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(fit.coefficients[j], ref.beta[j], 1e-6);
}

TEST(LeastSquares, ConstantTargetIsDegenerate) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 2);
  const auto fit = least_squares(x, Eigen::VectorXd::Constant(10, 3.0), true);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(std::isnan(fit.r_squared));
}

TEST(LeastSquares, RankDeficientGivesMinimumNorm) {
  // Two identical columns: the minimum-norm split is even.
  Eigen::MatrixXd x(5, 2);
  x.col(0) << 1, 2, 3, 4, 5;
  x.col(1) = x.col(0);
  const Eigen::VectorXd y = 2.0 * x.col(0);
  const auto fit = least_squares(x, y);
  EXPECT_EQ(fit.rank, 1);
  EXPECT_NEAR(fit.coefficients[0], 1.0, 1e-9);
  EXPECT_NEAR(fit.coefficients[1], 1.0, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-9);
}

TEST(LeastSquares, UnderdeterminedIsRejected) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(2, 2);
  EXPECT_THROW(least_squares(x, Eigen::VectorXd::Random(2)), ValidationError);
}

TEST(LeastSquares, StreamingMatchesSinglePass) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd x(1000, 4);
  Eigen::VectorXd y(1000);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = u(rng);
  const auto whole = least_squares(x, y);
  LeastSquaresAccumulator acc(4);
  for (Eigen::Index s = 0; s < 1000; s += 137) {
    const Eigen::Index len = std::min<Eigen::Index>(137, 1000 - s);
    acc.add_rows(x.middleRows(s, len), y.segment(s, len));
  }
  const auto streamed = acc.solve();
  EXPECT_NEAR(streamed.r_squared, whole.r_squared, 1e-12);
  EXPECT_LE((streamed.coefficients - whole.coefficients).norm(), 1e-12);
}

TEST(RegressOnBands, MatchesOracleWithIntercept) {
  const auto cube = test::random_cube(70, 70, 3, 23);  // > one 4096-pixel chunk
  std::vector<GridView<const float>> bands;
  for (std::size_t b = 0; b < 3; ++b) bands.push_back(cube.band(b));
  const auto target = test::uniform_samples(4900, 24);
  Grid<float> t(70, 70, target);
  const auto fit = regress_on_bands<float, float>(bands, t.view());
  const auto ref = oracle::regress(cube, std::vector<double>(target.begin(), target.end()));
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(fit.coefficients[static_cast<Eigen::Index>(j)], ref.beta[j], 1e-6);
  EXPECT_NEAR(fit.r_squared, ref.r2, 1e-9);
}

TEST(Moments, PopulationStatistics) {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = moments<double>(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.variance, 1.25);
  const std::vector<float> c(37, 0.1f);
  EXPECT_EQ(moments<float>(c).variance, 0.0);
}

TEST(Raster, DeterministicAcrossRuns) {
  const auto g = random_grid(36, 36, 25);
  EXPECT_EQ(degrade(g.view(), MtfSpec{}), degrade(g.view(), MtfSpec{}));
  EXPECT_EQ(upsample_interp(g.view(), 6), upsample_interp(g.view(), 6));
}
