#pragma once

#include <Eigen/Dense>
#include <functional>

#include "dirac1d/lattice.hpp"

namespace dirac1d {

// Space-time samples are stored with one row per time sample and one column
// per grid point z_k.
using SpaceTimeGrid = Eigen::MatrixXd;
using ScalarField = std::function<double(double z, double t)>;

struct PotentialField {
  SpaceTimeGrid a0;
  SpaceTimeGrid a1;
  double time_step = 0.0;
  double horizon = 0.0;
  double domain_length = 0.0;

  Eigen::Index time_samples() const { return a0.rows(); }
  double time(Eigen::Index n) const { return static_cast<double>(n) * time_step; }
};

struct GaugeFunction {
  SpaceTimeGrid chi;
  double time_step = 0.0;
  double horizon = 0.0;
  double domain_length = 0.0;
};

struct PhaseField {
  SpaceTimeGrid c1;
  SpaceTimeGrid c2;
  double time_step = 0.0;
  double domain_length = 0.0;

  Eigen::Index time_samples() const { return c1.rows(); }
};

// Number of time steps covering [0, horizon]; throws unless horizon is a
// whole multiple of time_step.
Eigen::Index time_step_count(double time_step, double horizon);

PotentialField sample_potential(const LatticeConfig& cfg, double time_step, double horizon, const ScalarField& a0,
                                const ScalarField& a1);
PotentialField tabulated_potential(const LatticeConfig& cfg, double time_step, const SpaceTimeGrid& a0,
                                   const SpaceTimeGrid& a1);
GaugeFunction sample_gauge(const LatticeConfig& cfg, double time_step, double horizon, const ScalarField& chi);

// Centered differences in the interior, second-order one-sided at both ends.
SpaceTimeGrid time_derivative(const SpaceTimeGrid& f, double time_step);
SpaceTimeGrid space_derivative(const SpaceTimeGrid& f, double domain_length);

// E = -(dA1/dt + dA0/dz)
SpaceTimeGrid electric_field(const PotentialField& pot);

// A1' = A1 - dchi/dz, A0' = A0 + dchi/dt
PotentialField gauge_transform(const PotentialField& pot, const GaugeFunction& g);

// Integrates dc1/dt + dc1/dz = q(A0 - A1) and dc2/dt - dc2/dz = q(A0 + A1)
// from c = 0 along the light-cone rays, trapezoid in time.
PhaseField solve_phases(const LatticeConfig& cfg, const PotentialField& pot);

struct PhaseResiduals {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Max transport-equation residual over interior time samples.
PhaseResiduals phase_residuals(const LatticeConfig& cfg, const PotentialField& pot, const PhaseField& ph);

// Diagonal entries per grid point: column 0 acts on the upper component.
using DiagonalComplexField = Eigen::Matrix<cplx, Eigen::Dynamic, 2>;
using DiagonalRealField = Eigen::Matrix<double, Eigen::Dynamic, 2>;

DiagonalComplexField build_W(const PhaseField& ph, Eigen::Index time_index);
DiagonalRealField build_F(const PhaseField& ph, Eigen::Index time_index);

// Max pointwise discrepancy between W^dag H_D W and
// diag(-dc1/dz - qA1 + qA0, dc2/dz + qA1 + qA0) + H0 on a battery of
// band-limited spinors, evaluated on a refined grid.
double conjugated_hamiltonian_check(const LatticeConfig& cfg, const PotentialField& pot, const PhaseField& ph,
                                    Eigen::Index time_index);

struct PotentialFunctions {
  ScalarField a0;
  ScalarField a1;
};

std::function<double(double)> sin2_envelope(double duration);

namespace presets {

PotentialFunctions zero();
PotentialFunctions uniform_pulse(double a0_amplitude, double a1_amplitude, double duration);
PotentialFunctions mode_wave(const LatticeConfig& cfg, double a0_amplitude, double a1_amplitude, int mode,
                             double phase, double duration);
// Time-gaussian A0 with a periodic gaussian profile truncated to |j| <= bandwidth.
PotentialFunctions gaussian_pulse(const LatticeConfig& cfg, double amplitude, double center_time, double width_time,
                                  double center_z, double width_z, int bandwidth);
// A0 = amplitude/2 cos(m kappa (z - d t)), A1 = -d A0, so the source of c1
// (d = +1) or c2 (d = -1) is a rigid wave and the other vanishes.
PotentialFunctions traveling_wave(const LatticeConfig& cfg, double amplitude, int mode, int direction);

ScalarField uniform_gauge(double amplitude, double duration);
ScalarField mode_gauge(const LatticeConfig& cfg, double amplitude, int mode, double phase, double duration);

}  // namespace presets

}  // namespace dirac1d
