#include <gtest/gtest.h>

#include <numbers>

#include "dirac1d/dynamics.hpp"
#include "dirac1d/errors.hpp"

using namespace dirac1d;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeConfig lattice(int cutoff = 2) { return LatticeConfig::make(2 * kPi, cutoff); }

PotentialField sampled(const LatticeConfig& cfg, const PotentialFunctions& f, double dt = 0.01, double T = 1.0) {
  return sample_potential(cfg, dt, T, f.a0, f.a1);
}

}  // namespace

TEST(Evolution, ZeroPotentialIsFreeEvolution) {
  const auto cfg = lattice();
  const FockBasis basis(cfg);
  const FockVector s = two_electron_state(basis, 2, 1);
  const auto num = schrodinger_evolve_numeric(basis, s, sampled(cfg, presets::zero()), 100, 25);
  const auto free = free_evolution(basis, s, num.times);
  ASSERT_EQ(num.times.size(), 5u);
  for (std::size_t i = 0; i < num.states.size(); ++i)
    EXPECT_LT((num.states[i] - free.states[i]).norm(), 1e-12);
}

TEST(Evolution, RecordsFinalStepEvenIfOffStride) {
  const auto cfg = lattice(1);
  const FockBasis basis(cfg);
  const auto run = schrodinger_evolve_numeric(basis, vacuum_standard(basis), sampled(cfg, presets::zero()), 100, 30);
  EXPECT_DOUBLE_EQ(run.times.back(), 1.0);
  EXPECT_EQ(run.times.size(), 5u);
}

TEST(Evolution, StepCountMustDivideIntervals) {
  const auto cfg = lattice(1);
  const FockBasis basis(cfg);
  EXPECT_THROW(schrodinger_evolve_numeric(basis, vacuum_standard(basis), sampled(cfg, presets::zero()), 7),
               ConfigError);
  FockVector bad = vacuum_standard(basis) * 2.0;
  EXPECT_THROW(schrodinger_evolve_numeric(basis, bad, sampled(cfg, presets::zero()), 10), PreconditionError);
}

TEST(Evolution, UniformPotentialFactorsExactly) {
  const auto cfg = lattice();
  const FockBasis basis(cfg);
  const FockVector s = two_electron_state(basis, 2, 1);
  const auto pot = sampled(cfg, presets::uniform_pulse(0.6, -0.3, 1.0));
  const auto num = schrodinger_evolve_numeric(basis, s, pot, 100, 10);
  const auto ana = schrodinger_evolve_analytic(basis, s, pot, solve_phases(cfg, pot), num.times);
  EXPECT_GT(min_fidelity(num, ana), 1.0 - 1e-12);
  EXPECT_LT(max_norm_error(num), 1e-12);
}

TEST(Evolution, BandLimitedFidelityImprovesWithCutoff) {
  double previous = 1.0;
  for (int h : {2, 3}) {
    const auto cfg = lattice(h);
    const FockBasis basis(cfg);
    const auto pot = sampled(cfg, presets::mode_wave(cfg, 0.5, 0.25, 1, 0.0, 1.0));
    const FockVector s = two_electron_state(basis, 2, 1);
    const auto num = schrodinger_evolve_numeric(basis, s, pot, 100, 50);
    const auto ana = schrodinger_evolve_analytic(basis, s, pot, solve_phases(cfg, pot), num.times);
    const double infidelity = 1.0 - min_fidelity(num, ana);
    EXPECT_LE(infidelity, previous) << h;
    previous = infidelity;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(EnergyTheorem, NegligibleSidesBalance) {
  EXPECT_EQ(energy_balance(0.0, 2e-34).relative_error, 0.0);
  EXPECT_NEAR(energy_balance(1.0, 1.001).relative_error, 0.001 / 1.001, 1e-15);
}

TEST(Observables, FreeDensityMatchesEvolvedState) {
  const auto cfg = lattice();
  const FockBasis basis(cfg);
  const FockVector s = two_electron_state(basis, 2, 1);
  const auto D0 = one_body_density(basis, s);
  const auto evo = free_evolution(basis, s, {0.37});
  EXPECT_LT((free_density(cfg, D0, 0.37) - one_body_density(basis, evo.states[0])).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Observables, DensityProfileMatchesKernels) {
  const auto cfg = lattice();
  const FockBasis basis(cfg);
  const auto D = one_body_density(basis, two_electron_state(basis, 2, 1));
  const Eigen::VectorXd z = evaluation_grid(cfg, 9);
  const auto rho = density_profile(cfg, D, z, false, Sector::up);
  const auto J = density_profile(cfg, D, z, true);
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    EXPECT_NEAR(std::abs(rho(k) - one_body_expectation(charge_kernel(cfg, z(k), Sector::up), D)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(J(k) - one_body_expectation(current_kernel(cfg, z(k)), D)), 0.0, 1e-14);
  }
  EXPECT_THROW(evaluation_grid(cfg, 8), ConfigError);
}

TEST(Observables, TwoElectronCurrentShape) {
  const auto cfg = lattice(3);
  const FockBasis basis(cfg);
  const auto series = heisenberg_expectation(basis, two_electron_state(basis, 3, 1), uniform_times(1.0, 0.1));
  const double A = cfg.charge() / cfg.domain_length();
  for (Eigen::Index i = 0; i < series.times.size(); ++i)
    for (Eigen::Index k = 0; k < series.grid.size(); ++k)
      EXPECT_NEAR(series.current(i, k), A * (1 + std::cos(2 * (series.grid(k) - series.times(i)))), 1e-13);
  EXPECT_LT(series.max_imaginary, 1e-14);
}

TEST(Observables, ContinuityResidualIsSecondOrder) {
  const auto cfg = lattice(3);
  const FockBasis basis(cfg);
  const FockVector s = two_electron_state(basis, 3, 1);
  auto residual = [&](double dt) {
    const auto r = continuity_residuals(heisenberg_expectation(basis, s, uniform_times(1.0, dt)), cfg.domain_length());
    return std::max(r.charge, r.current);
  };
  EXPECT_NEAR(residual(0.02) / residual(0.01), 4.0, 0.2);
}

TEST(Pictures, UniformPotentialAgrees) {
  const auto cfg = lattice();
  const FockBasis basis(cfg);
  const FockVector s = two_electron_state(basis, 2, 1);
  const auto pot = sampled(cfg, presets::uniform_pulse(0.4, 0.2, 1.0));
  const auto run = schrodinger_evolve_numeric(basis, s, pot, 100, 10);
  const auto S = schrodinger_expectation(basis, run);
  const auto H = heisenberg_expectation(cfg, one_body_density(basis, s), S.times);
  EXPECT_LT((S.current - H.current).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((S.charge - H.charge).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EnergyTheorem, VacuumBalancesExactly) {
  const auto cfg = lattice(3);
  const FockBasis basis(cfg);
  const auto pot = sampled(cfg, presets::mode_wave(cfg, 0.2, 0.0, 1, 0.0, 1.0));
  const auto bal = energy_theorem_check(basis, vacuum_standard(basis), pot);
  EXPECT_EQ(bal.relative_error, 0.0);
}

TEST(EnergyTheorem, RequiresVanishingA1) {
  const auto cfg = lattice(2);
  const FockBasis basis(cfg);
  const auto pot = sampled(cfg, presets::uniform_pulse(0.0, 0.2, 1.0));
  EXPECT_THROW(energy_theorem_check(basis, vacuum_standard(basis), pot), PreconditionError);
}

TEST(EnergyTheorem, BandLimitedBalance) {
  const auto cfg = lattice(3);
  const FockBasis basis(cfg);
  const auto pot = sampled(cfg, presets::mode_wave(cfg, 0.1, 0.0, 1, 0.0, 1.0));
  const auto bal = energy_theorem_check(basis, two_electron_state(basis, 2, 1), pot);
  EXPECT_GT(std::abs(bal.lhs), 1e-6);
  EXPECT_LT(bal.relative_error, 1e-3);
}

TEST(Unboundedness, AffineWithPredictedSlope) {
  const auto cfg = lattice(3);
  const double tf = 0.8;
  const auto a = unboundedness_scenario(cfg, 2, 1, 0.0, tf);
  const auto b = unboundedness_scenario(cfg, 2, 1, 5.0, tf);
  const double slope = -1.5 * tf / cfg.domain_length();
  EXPECT_NEAR(a.energy_above_vacuum, 1.5, 1e-12);
  EXPECT_NEAR(b.energy_above_vacuum, 1.5 + 5.0 * slope, 1e-12);
  EXPECT_NEAR(a.threshold, -1.5 / slope, 1e-10);
  EXPECT_NEAR(a.current_amplitude, 1.0 / cfg.domain_length(), 1e-14);
  EXPECT_THROW(unboundedness_scenario(cfg, 2, 1, -1.0, tf), PreconditionError);
}

TEST(Numerics, FitAndQuadrature) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto fit = fit_line(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(trapezoid(y, 0.5), 0.5 * (0.5 + 3 + 5 + 3.5), 1e-14);
  CompensatedSum s;
  for (double v : {1e16, 1.0, -1e16}) s.add(v);
  EXPECT_EQ(s.value(), 1.0);
}
