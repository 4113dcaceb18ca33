#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dirac1d/background.hpp"
#include "dirac1d/fockspace.hpp"

namespace dirac1d {

struct ExpectationSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd grid;
  Eigen::MatrixXd current;  // time x z
  Eigen::MatrixXd charge;   // time x z
  Eigen::VectorXd energy;   // <H0>
  double max_imaginary = 0.0;
};

enum class EvolutionMethod { numeric_stepper, analytic_factored, heisenberg_free };

struct EvolutionResult {
  EvolutionMethod method = EvolutionMethod::numeric_stepper;
  std::vector<double> times;
  std::vector<FockVector> states;
};

Eigen::VectorXd uniform_times(double horizon, double time_step);
// Uniform grid of an odd number of points on [0, L); 0 selects the lattice grid.
Eigen::VectorXd evaluation_grid(const LatticeConfig& cfg, int points = 0);

// rho(z) or J(z) from a one-body density, per sector.
Eigen::VectorXcd density_profile(const LatticeConfig& cfg, const OneBodyMatrix& D, const Eigen::VectorXd& z,
                                 bool current, Sector sector = Sector::both);

// D(t) under the free Hamiltonian: D_nm e^{-i(eps_n - eps_m) t}.
OneBodyMatrix free_density(const LatticeConfig& cfg, const OneBodyMatrix& D0, double t);

// Current and charge from free mode phases only; no potential enters.
ExpectationSeries heisenberg_expectation(const FockBasis& basis, const FockVector& state0,
                                         const Eigen::VectorXd& times, int grid_points = 0);
ExpectationSeries heisenberg_expectation(const LatticeConfig& cfg, const OneBodyMatrix& D0,
                                         const Eigen::VectorXd& times, int grid_points = 0);

ExpectationSeries schrodinger_expectation(const FockBasis& basis, const EvolutionResult& evo, int grid_points = 0);

// Midpoint-exponential integration of i d/dt |Omega> = H(t)|Omega>, with H(t)
// = Q(h0 + diag(q(A0 - A1), q(A0 + A1))). `steps` must divide the number of
// potential intervals; states are recorded every `record_every` steps.
EvolutionResult schrodinger_evolve_numeric(const FockBasis& basis, const FockVector& state0,
                                           const PotentialField& pot, int steps, int record_every = 1);

// exp(-i G0(t)) exp(-i H0 t)|Omega(0)>, G0 = Q(F(t)), at the listed times
// (which must lie on the potential's time grid).
EvolutionResult schrodinger_evolve_analytic(const FockBasis& basis, const FockVector& state0,
                                            const PotentialField& pot, const PhaseField& ph,
                                            const std::vector<double>& times);

EvolutionResult free_evolution(const FockBasis& basis, const FockVector& state0, const std::vector<double>& times);

double fidelity(const FockVector& a, const FockVector& b);
// Smallest fidelity over matching samples.
double min_fidelity(const EvolutionResult& a, const EvolutionResult& b);
double max_norm_error(const EvolutionResult& evo);

// <H0> per recorded state.
Eigen::VectorXd free_field_energy(const FockBasis& basis, const EvolutionResult& evo);
// <H0> per potential time sample from the phases and the free one-body
// density: xi0(0) - int (dc1/dz n1 - dc2/dz n2) dz.
Eigen::VectorXd free_field_energy(const LatticeConfig& cfg, const OneBodyMatrix& D0, const PhaseField& ph);

struct EnergyBalance {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
};

// lhs = xi0(t_f) - xi0(0), rhs = int dt int dz J E. Requires A1 = 0.
EnergyBalance energy_theorem_check(const FockBasis& basis, const FockVector& state0, const PotentialField& pot);
// Both sides below 1e-15 in magnitude count as an exact balance.
EnergyBalance energy_balance(double lhs, double rhs);
// int_0^{t_f} dt int dz J(z, t) E(z, t) with J the free current of D0.
double work_integral(const LatticeConfig& cfg, const OneBodyMatrix& D0, const PotentialField& pot);

struct Unboundedness {
  double energy_above_vacuum = 0.0;
  double threshold = 0.0;               // f at which the energy crosses zero
  double slope = 0.0;                   // d(energy)/df
  double initial_energy = 0.0;          // (|p| + |q_m|)/2 from the oracle
  double current_amplitude = 0.0;       // A in J = A (1 + cos((p - q_m)(z - t)))
};

Unboundedness unboundedness_scenario(const LatticeConfig& cfg, int p, int q_m, double f, double t_f,
                                     int time_samples = 201);

struct ContinuityResiduals {
  double charge = 0.0;   // max |d rho/dt + dJ/dz|
  double current = 0.0;  // max |dJ/dt + d rho/dz|
};

ContinuityResiduals continuity_residuals(const ExpectationSeries& series, double domain_length);

}  // namespace dirac1d
