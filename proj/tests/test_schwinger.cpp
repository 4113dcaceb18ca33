#include <gtest/gtest.h>

#include <numbers>

#include "dirac1d/errors.hpp"
#include "dirac1d/schwinger.hpp"

using namespace dirac1d;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeConfig lattice(int cutoff, double q = 1.0) { return LatticeConfig::make(2 * kPi, cutoff, q); }

}  // namespace

TEST(ModeSum, AgreesWithExplicitDoubleSum) {
  for (int h : {1, 2, 5}) {
    const auto cfg = lattice(h, 0.8);
    for (double d : {0.0, 0.3, -1.1, 2.9})
      for (Sector s : {Sector::both, Sector::up, Sector::down})
        EXPECT_NEAR(std::abs(schwinger_mode_sum(cfg, VacuumChoice::standard(), d, s) -
                             schwinger_standard_value(cfg, d, s)),
                    0.0, 1e-13);
  }
}

TEST(ModeSum, OddAndImaginary) {
  const auto cfg = lattice(3);
  const auto p = schwinger_standard(cfg);
  for (int k = -3; k <= 3; ++k) {
    EXPECT_NEAR(p.at_offset(k).real(), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.at_offset(k) + p.at_offset(-k)), 0.0, 1e-15);
  }
}

class OracleAgreement : public ::testing::TestWithParam<int> {};

TEST_P(OracleAgreement, StandardAndRegularized) {
  const auto cfg = lattice(GetParam());
  const FockBasis basis(cfg);
  EXPECT_LT((oracle_profile(basis, VacuumChoice::standard()).values - schwinger_standard(cfg).values)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  EXPECT_LT((oracle_profile(basis, VacuumChoice::regularized(1)).values - schwinger_regularized(cfg, {1}).values)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  const auto cross = oracle_profile(basis, VacuumChoice::standard(), Sector::up, Sector::down);
  EXPECT_LT(cross.values.cwiseAbs().maxCoeff(), 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Cutoffs, OracleAgreement, ::testing::Values(1, 2, 3));

TEST(Coincidence, TwelveOverPiSquaredAtCutoffTwo) {
  const auto cfg = lattice(2);
  EXPECT_NEAR(coincidence_derivative(cfg, VacuumChoice::standard()), 12.0 / (kPi * kPi), 1e-14);
  EXPECT_NEAR(standard_coincidence_sum(cfg), 12.0 / (kPi * kPi), 1e-14);
}

TEST(Coincidence, ClosedFormInCutoff) {
  for (int h = 1; h <= 10; ++h) {
    const auto cfg = lattice(h, 1.3);
    const double closed = 4 * 1.69 * cfg.kappa() * h * h * (h + 1) / std::pow(cfg.domain_length(), 2);
    EXPECT_NEAR(coincidence_derivative(cfg, VacuumChoice::standard()) / closed, 1.0, 1e-13);
  }
}

TEST(Regularized, FullCutoffIsStandard) {
  const auto cfg = lattice(4);
  EXPECT_LT((schwinger_regularized(cfg, {4}).values - schwinger_standard(cfg).values).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(schwinger_regularized(cfg, {5}), ConfigError);
}

TEST(Regularized, ProfileIndependentOfCutoff) {
  const auto ref = schwinger_regularized(lattice(2), {1});
  for (int h = 3; h <= 8; ++h) {
    const auto p = schwinger_regularized(lattice(h), {1});
    for (int k = -2; k <= 2; ++k)
      EXPECT_NEAR(std::abs(interpolate_profile(p, 2 * kPi, k * 2 * kPi / 5) - ref.at_offset(k)), 0.0, 1e-12) << h;
  }
}

TEST(Regularized, GridDerivativeConstantInCutoff) {
  const double ref = coincidence_derivative(lattice(2), VacuumChoice::regularized(1), DerivativeMethod::grid_resolved);
  for (int h = 3; h <= 8; ++h)
    EXPECT_NEAR(coincidence_derivative(lattice(h), VacuumChoice::regularized(1), DerivativeMethod::grid_resolved),
                ref, 1e-12);
}

TEST(Smearing, RegularizedVanishesAboveCut) {
  const auto cfg = lattice(3);
  TestFunctionPair pair{2, 3, Eigen::VectorXcd(2), Eigen::VectorXcd(2)};
  pair.f_modes << cplx(0.5, 0.1), cplx(-0.2, 0.3);
  pair.g_modes << cplx(0.0, -0.5), cplx(0.4, 0.0);
  EXPECT_LT(std::abs(smeared_schwinger(cfg, schwinger_regularized(cfg, {1}), pair)), 1e-12);
  EXPECT_GT(std::abs(smeared_schwinger(cfg, schwinger_standard(cfg), pair)), 1e-3);
}

TEST(Smearing, PairValidation) {
  const auto cfg = lattice(3);
  TestFunctionPair bad{2, 4, Eigen::VectorXcd::Zero(3), Eigen::VectorXcd::Zero(3)};
  EXPECT_THROW(validate_pair(cfg, bad), ConfigError);
  TestFunctionPair mismatched{1, 2, Eigen::VectorXcd::Zero(1), Eigen::VectorXcd::Zero(2)};
  EXPECT_THROW(validate_pair(cfg, mismatched), ConfigError);
}

TEST(Smearing, TestFunctionsAreRealTrigSums) {
  const auto cfg = lattice(3);
  Eigen::VectorXcd modes(1);
  modes << cplx(0.5, 0.0);
  const Eigen::VectorXd f = sample_test_function(cfg, 2, modes);
  for (int k = 0; k < cfg.grid_points(); ++k) EXPECT_NEAR(f(k), std::cos(2 * cfg.position(k)), 1e-14);
}

TEST(Scaling, StandardGrowsRegularizedFlat) {
  const auto st = schwinger_scaling(2 * kPi, 1.0, {2, 3, 4, 5, 6, 7, 8}, 1);
  ASSERT_EQ(st.rows.size(), 7u);
  for (std::size_t i = 1; i < st.rows.size(); ++i)
    EXPECT_GT(st.rows[i].standard_mode_sum, st.rows[i - 1].standard_mode_sum);
  EXPECT_LT(st.regularized_spread, 1e-12);
  EXPECT_NEAR(st.regularized.slope, 0.0, 1e-10);
  EXPECT_THROW(schwinger_scaling(2 * kPi, 1.0, {3}, 1), InsufficientDataError);
}
