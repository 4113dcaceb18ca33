#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dirac1d/fockspace.hpp"
#include "dirac1d/numerics.hpp"

namespace dirac1d {

// <vac|[rho(z'), J(z)]|vac> as a function of Delta = z' - z, sampled at the
// grid offsets Delta_k = k L / N for k = -cutoff..cutoff.
struct SchwingerProfile {
  Eigen::VectorXd separations;
  Eigen::VectorXcd values;
  VacuumChoice vacuum;
  int cutoff = 0;

  cplx at_offset(int k) const { return values(k + cutoff); }
};

// Wick contraction over the vacuum's field-mode occupations:
// (2 i q^2 sigma / L^2) sum_{m filled} sum_{k empty} sin((r_k - r_m) kappa Delta).
cplx schwinger_mode_sum(const LatticeConfig& cfg, const VacuumChoice& vac, double delta,
                        Sector sector = Sector::both);
// Explicit double sums over p, q = 1..cutoff for the standard vacuum.
cplx schwinger_standard_value(const LatticeConfig& cfg, double delta, Sector sector = Sector::both);

SchwingerProfile schwinger_standard(const LatticeConfig& cfg, Sector sector = Sector::both);
// Throws ConfigError for r_cut > cutoff; r_cut = cutoff gives the standard profile.
SchwingerProfile schwinger_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec,
                                       Sector sector = Sector::both);

// Brute-force <vac|rho Q J - J rho|vac> with Fock matrices.
cplx oracle_commutator(const FockBasis& basis, const FockVector& vac, double z_prime, double z,
                       Sector rho_sector = Sector::both, Sector current_sector = Sector::both);
SchwingerProfile oracle_profile(const FockBasis& basis, const VacuumChoice& vac, Sector rho_sector = Sector::both,
                                Sector current_sector = Sector::both);

enum class DerivativeMethod {
  mode_sum,       // d/dDelta of the contraction sum at Delta = 0
  grid_resolved,  // spectral derivative of the profile's grid samples
};

// Imaginary coefficient of d/dz' <vac|[rho(z'), J(z)]|vac> at z' = z.
double coincidence_derivative(const LatticeConfig& cfg, const VacuumChoice& vac,
                              DerivativeMethod method = DerivativeMethod::mode_sum);
double coincidence_derivative(const SchwingerProfile& profile, double domain_length);
// (4 q^2 / L^2) sum_{p,q=1}^{cutoff} (p + q) kappa
double standard_coincidence_sum(const LatticeConfig& cfg);

// Trigonometric interpolation of the grid samples.
cplx interpolate_profile(const SchwingerProfile& profile, double domain_length, double delta);

// Real test functions f(z) = sum_{m=lo}^{hi} (f_m e^{i m kappa z} + c.c.).
struct TestFunctionPair {
  int m_lo = 1;
  int m_hi = 1;
  Eigen::VectorXcd f_modes;
  Eigen::VectorXcd g_modes;
};

void validate_pair(const LatticeConfig& cfg, const TestFunctionPair& pair);
Eigen::VectorXd sample_test_function(const LatticeConfig& cfg, int m_lo, const Eigen::VectorXcd& modes);

// int int f(z') g(z) S(z' - z) dz' dz by grid quadrature.
cplx smeared_schwinger(const LatticeConfig& cfg, const SchwingerProfile& profile, const TestFunctionPair& pair);

struct ScalingRow {
  int cutoff = 0;
  double standard_mode_sum = 0.0;
  double standard_grid = 0.0;
  double regularized_mode_sum = 0.0;  // NaN when cutoff <= R
  double regularized_grid = 0.0;      // NaN when cutoff <= R
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  int r_cut = 1;
  LineFit standard;           // ln |D| against ln cutoff, mode sum
  LineFit standard_grid;      // same, grid-resolved
  LineFit regularized;        // grid-resolved, cutoff > R
  LineFit regularized_mode_sum;
  double regularized_spread = 0.0;  // max - min of the grid-resolved values
};

ScalingStudy schwinger_scaling(double domain_length, double charge, const std::vector<int>& cutoffs, int r_cut);

}  // namespace dirac1d
