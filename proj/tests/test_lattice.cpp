#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dirac1d/errors.hpp"
#include "dirac1d/lattice.hpp"

using namespace dirac1d;

namespace {

constexpr double kPi = std::numbers::pi;

// O(M^2) reference: c_r = (1/M) sum_k s_k exp(-2 pi i r k / M).
Eigen::VectorXcd naive_forward(const Eigen::VectorXcd& s) {
  const auto M = s.size();
  const auto h = (M - 1) / 2;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(M);
  for (Eigen::Index r = -h; r <= h; ++r)
    for (Eigen::Index k = 0; k < M; ++k)
      c(r + h) += s(k) * std::polar(1.0, -2.0 * kPi * double(r * k) / double(M)) / double(M);
  return c;
}

Eigen::VectorXcd random_samples(int M, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(M);
  for (int i = 0; i < M; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST(LatticeConfig, DerivedQuantities) {
  const auto cfg = LatticeConfig::make(2 * kPi, 3);
  EXPECT_EQ(cfg.grid_points(), 7);
  EXPECT_DOUBLE_EQ(cfg.kappa(), 1.0);
  EXPECT_DOUBLE_EQ(cfg.spacing(), 2 * kPi / 7);
  EXPECT_DOUBLE_EQ(cfg.position(7), 2 * kPi);
  EXPECT_EQ(cfg.grid().size(), 7);
  EXPECT_EQ(cfg.with_cutoff(5).grid_points(), 11);
}

TEST(LatticeConfig, RejectsBadParameters) {
  EXPECT_THROW(LatticeConfig::make(0.0, 3), ConfigError);
  EXPECT_THROW(LatticeConfig::make(-1.0, 3), ConfigError);
  EXPECT_THROW(LatticeConfig::make(1.0, 0), ConfigError);
}

TEST(Modes, ValidationFollowsSpinConstraint) {
  const auto cfg = LatticeConfig::make(2 * kPi, 2);
  EXPECT_NO_THROW(validate_mode(cfg, {2, Spin::up, Species::electron}));
  EXPECT_NO_THROW(validate_mode(cfg, {-1, Spin::down, Species::positron}));
  EXPECT_THROW(validate_mode(cfg, {-1, Spin::up, Species::electron}), InvalidModeError);
  EXPECT_THROW(validate_mode(cfg, {1, Spin::down, Species::electron}), InvalidModeError);
  EXPECT_THROW(validate_mode(cfg, {3, Spin::up, Species::positron}), InvalidModeError);
  EXPECT_THROW(validate_mode(cfg, {0, Spin::up, Species::electron}), InvalidModeError);
}

TEST(Modes, FieldModeMapping) {
  const auto cfg = LatticeConfig::make(2 * kPi, 2);
  const auto modes = field_modes(cfg);
  ASSERT_EQ(modes.size(), 8u);
  // Negative-energy slots are positron creators, positive-energy slots electron destroyers.
  for (const auto& m : modes) {
    const double energy = m.sigma() * m.r * cfg.kappa();
    EXPECT_EQ(field_mode_creates(m), energy < 0);
    const ModeIndex idx = ladder_mode_of(m);
    EXPECT_NO_THROW(validate_mode(cfg, idx));
    EXPECT_EQ(idx.species == Species::positron, energy < 0);
  }
  EXPECT_EQ(ladder_mode_of({0, 2}), (ModeIndex{2, Spin::up, Species::electron}));
  EXPECT_EQ(ladder_mode_of({0, -1}), (ModeIndex{1, Spin::up, Species::positron}));
  EXPECT_EQ(ladder_mode_of({1, -2}), (ModeIndex{-2, Spin::down, Species::electron}));
  EXPECT_EQ(ladder_mode_of({1, 1}), (ModeIndex{-1, Spin::down, Species::positron}));
}

TEST(BasisFunctions, OrthonormalOnGrid) {
  const auto cfg = LatticeConfig::make(3.0, 3);
  for (int p = -3; p <= 3; ++p) {
    if (p == 0) continue;
    for (Spin s : {Spin::up, Spin::down})
      for (int q = -3; q <= 3; ++q) {
        if (q == 0) continue;
        for (Spin t : {Spin::up, Spin::down}) {
          const cplx ip = grid_inner_product(cfg, basis_function(cfg, mode_momentum(cfg, p), s),
                                             basis_function(cfg, mode_momentum(cfg, q), t));
          EXPECT_NEAR(std::abs(ip - cplx(p == q && s == t ? 1.0 : 0.0)), 0.0, 1e-14);
        }
      }
  }
}

TEST(BasisFunctions, RejectsOffLatticeMomentum) {
  const auto cfg = LatticeConfig::make(2 * kPi, 2);
  EXPECT_THROW(basis_function(cfg, 0.5, Spin::up), InvalidMomentumError);
  EXPECT_THROW(basis_function(cfg, 3.0, Spin::up), InvalidMomentumError);
}

TEST(BasisFunctions, AreFreeEigenstates) {
  const auto cfg = LatticeConfig::make(2.5, 4);
  for (int p : {-4, -1, 2, 4})
    for (Spin s : {Spin::up, Spin::down}) {
      const SpinorGrid phi = basis_function(cfg, mode_momentum(cfg, p), s);
      const double eps = sign_of(s) * p * cfg.kappa();
      EXPECT_LT((apply_free_hamiltonian(cfg, phi) - eps * phi).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Spectral, ForwardMatchesNaiveDft) {
  for (int M : {1, 3, 7, 15, 33}) {
    const auto s = random_samples(M, 11 + M);
    EXPECT_LT((spectral::forward(s) - naive_forward(s)).cwiseAbs().maxCoeff(), 1e-13) << M;
  }
}

TEST(Spectral, RoundTripAndEvenSizeRejected) {
  const auto s = random_samples(9, 5);
  EXPECT_LT((spectral::inverse(spectral::forward(s)) - s).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(spectral::forward(Eigen::VectorXcd::Zero(8)), ShapeError);
}

TEST(Spectral, ConfiguredTransformChecksLength) {
  const auto cfg = LatticeConfig::make(1.0, 2);
  EXPECT_THROW(spectral_transform(cfg, Eigen::VectorXcd::Zero(7)), ShapeError);
  EXPECT_THROW(inverse_spectral_transform(cfg, Eigen::VectorXcd::Zero(3)), ShapeError);
}

// Discrete Dirichlet identity: sum_{|r|<=h} exp(2 pi i r k / N) = N delta_k0.
TEST(Spectral, DirichletKernelIdentity) {
  for (int h : {1, 2, 5}) {
    const int N = 2 * h + 1;
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(N);
    const auto s = spectral::inverse(ones);
    for (int k = 0; k < N; ++k) EXPECT_NEAR(std::abs(s(k) - cplx(k == 0 ? N : 0)), 0.0, 1e-13);
  }
}

TEST(Spectral, DerivativeExactForBandLimited) {
  const double L = 3.7;
  const int M = 9;
  Eigen::VectorXd f(M), df(M);
  const double k = 2 * kPi / L;
  for (int j = 0; j < M; ++j) {
    const double z = j * L / M;
    f(j) = std::sin(3 * k * z) + 0.5 * std::cos(k * z);
    df(j) = 3 * k * std::cos(3 * k * z) - 0.5 * k * std::sin(k * z);
  }
  EXPECT_LT((spectral::derivative(f, L) - df).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spectral, ResampleAndEvaluateAgree) {
  const double L = 2.0;
  const auto s = random_samples(7, 3);
  const auto fine = spectral::resample(s, 21);
  const auto c = spectral::forward(s);
  for (int j = 0; j < 21; ++j) EXPECT_NEAR(std::abs(fine(j) - spectral::evaluate(c, L, j * L / 21)), 0.0, 1e-13);
  // Coarse points are a subset of the fine grid.
  for (int j = 0; j < 7; ++j) EXPECT_NEAR(std::abs(fine(3 * j) - s(j)), 0.0, 1e-13);
}
