#include "dirac1d/background.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dirac1d/errors.hpp"

namespace dirac1d {

namespace {

void check_finite(const SpaceTimeGrid& f, const char* what) {
  if (!f.allFinite()) throw ConfigError(std::string(what) + " contains non-finite samples");
}

void check_index(Eigen::Index n, Eigen::Index count) {
  if (n < 0 || n >= count)
    throw PreconditionError("time index " + std::to_string(n) + " outside [0, " + std::to_string(count) + ")");
}

}  // namespace

Eigen::Index time_step_count(double time_step, double horizon) {
  if (!(time_step > 0.0) || !std::isfinite(time_step)) throw ConfigError("time_step must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
  const double ratio = horizon / time_step;
  const auto n = static_cast<Eigen::Index>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw ConfigError("horizon must be a whole multiple of time_step");
  return n;
}

PotentialField sample_potential(const LatticeConfig& cfg, double time_step, double horizon, const ScalarField& a0,
                                const ScalarField& a1) {
  const Eigen::Index steps = time_step_count(time_step, horizon);
  const int N = cfg.grid_points();
  PotentialField pot;
  pot.a0.resize(steps + 1, N);
  pot.a1.resize(steps + 1, N);
  pot.time_step = time_step;
  pot.horizon = horizon;
  pot.domain_length = cfg.domain_length();
  for (Eigen::Index n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * time_step;
    for (int k = 0; k < N; ++k) {
      pot.a0(n, k) = a0(cfg.position(k), t);
      pot.a1(n, k) = a1(cfg.position(k), t);
    }
  }
  check_finite(pot.a0, "A0");
  check_finite(pot.a1, "A1");
  return pot;
}

PotentialField tabulated_potential(const LatticeConfig& cfg, double time_step, const SpaceTimeGrid& a0,
                                   const SpaceTimeGrid& a1) {
  if (a0.rows() != a1.rows() || a0.cols() != a1.cols()) throw ShapeError("A0 and A1 tables differ in shape");
  if (a0.cols() != cfg.grid_points())
    throw ShapeError("tabulated potential needs " + std::to_string(cfg.grid_points()) + " columns");
  if (a0.rows() < 2) throw InsufficientDataError("tabulated potential needs at least two time samples");
  if (!(time_step > 0.0)) throw ConfigError("time_step must be positive");
  check_finite(a0, "A0");
  check_finite(a1, "A1");
  return PotentialField{a0, a1, time_step, time_step * static_cast<double>(a0.rows() - 1), cfg.domain_length()};
}

GaugeFunction sample_gauge(const LatticeConfig& cfg, double time_step, double horizon, const ScalarField& chi) {
  PotentialField tmp = sample_potential(cfg, time_step, horizon, chi, [](double, double) { return 0.0; });
  return GaugeFunction{tmp.a0, time_step, horizon, cfg.domain_length()};
}

SpaceTimeGrid time_derivative(const SpaceTimeGrid& f, double time_step) {
  const Eigen::Index T = f.rows();
  if (T < 3) throw InsufficientDataError("time derivative needs at least 3 time samples");
  SpaceTimeGrid d(T, f.cols());
  const double h2 = 2.0 * time_step;
  d.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / h2;
  for (Eigen::Index n = 1; n + 1 < T; ++n) d.row(n) = (f.row(n + 1) - f.row(n - 1)) / h2;
  d.row(T - 1) = (3.0 * f.row(T - 1) - 4.0 * f.row(T - 2) + f.row(T - 3)) / h2;
  return d;
}

SpaceTimeGrid space_derivative(const SpaceTimeGrid& f, double domain_length) {
  SpaceTimeGrid d(f.rows(), f.cols());
  for (Eigen::Index n = 0; n < f.rows(); ++n)
    d.row(n) = spectral::derivative(Eigen::VectorXd(f.row(n).transpose()), domain_length).transpose();
  return d;
}

SpaceTimeGrid electric_field(const PotentialField& pot) {
  if (pot.a0.rows() < 3) throw InsufficientDataError("electric field needs at least 3 time samples");
  return -(time_derivative(pot.a1, pot.time_step) + space_derivative(pot.a0, pot.domain_length));
}

PotentialField gauge_transform(const PotentialField& pot, const GaugeFunction& g) {
  if (g.chi.rows() != pot.a0.rows() || g.chi.cols() != pot.a0.cols())
    throw ShapeError("gauge function grid does not match potential grid");
  if (std::abs(g.time_step - pot.time_step) > 1e-15 * pot.time_step ||
      std::abs(g.domain_length - pot.domain_length) > 1e-15 * pot.domain_length)
    throw ShapeError("gauge function spacing does not match potential");
  PotentialField out = pot;
  out.a1 -= space_derivative(g.chi, g.domain_length);
  out.a0 += time_derivative(g.chi, g.time_step);
  return out;
}

PhaseField solve_phases(const LatticeConfig& cfg, const PotentialField& pot) {
  const int N = cfg.grid_points();
  if (pot.a0.cols() != N) throw ShapeError("potential grid does not match lattice");
  if (pot.time_step > cfg.spacing() * (1.0 + 1e-12))
    throw ConfigError("time_step " + std::to_string(pot.time_step) + " exceeds grid spacing " +
                      std::to_string(cfg.spacing()) + " (characteristic CFL bound)");
  const int h = cfg.cutoff();
  const double q = cfg.charge(), dt = pot.time_step, kappa = cfg.kappa();
  const Eigen::Index T = pot.time_samples();

  // Advancing a mode coefficient along the ray is multiplication by a phase;
  // this is the spectral-interpolation form of the trapezoid-along-rays rule.
  Eigen::VectorXcd shift1(N), shift2(N);
  for (int r = -h; r <= h; ++r) {
    shift1(r + h) = std::polar(1.0, -r * kappa * dt);
    shift2(r + h) = std::polar(1.0, r * kappa * dt);
  }
  auto source = [&](Eigen::Index n, double sign) {
    Eigen::VectorXd s = q * (pot.a0.row(n) + sign * pot.a1.row(n)).transpose();
    return spectral::forward(s.cast<cplx>());
  };

  PhaseField ph{SpaceTimeGrid::Zero(T, N), SpaceTimeGrid::Zero(T, N), dt, cfg.domain_length()};
  Eigen::VectorXcd I1 = Eigen::VectorXcd::Zero(N), I2 = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXcd s1_prev = source(0, -1.0), s2_prev = source(0, +1.0);
  for (Eigen::Index n = 1; n < T; ++n) {
    const Eigen::VectorXcd s1 = source(n, -1.0), s2 = source(n, +1.0);
    I1 = shift1.cwiseProduct(I1 + 0.5 * dt * s1_prev) + 0.5 * dt * s1;
    I2 = shift2.cwiseProduct(I2 + 0.5 * dt * s2_prev) + 0.5 * dt * s2;
    ph.c1.row(n) = spectral::inverse(I1).real().transpose();
    ph.c2.row(n) = spectral::inverse(I2).real().transpose();
    s1_prev = s1;
    s2_prev = s2;
  }
  return ph;
}

PhaseResiduals phase_residuals(const LatticeConfig& cfg, const PotentialField& pot, const PhaseField& ph) {
  if (ph.c1.rows() != pot.a0.rows() || ph.c1.cols() != pot.a0.cols())
    throw ShapeError("phase field grid does not match potential");
  if (ph.time_samples() < 3) throw InsufficientDataError("residuals need at least 3 time samples");
  const double q = cfg.charge(), dt = ph.time_step, L = cfg.domain_length();
  PhaseResiduals res;
  for (Eigen::Index n = 1; n + 1 < ph.time_samples(); ++n) {
    const Eigen::VectorXd dz1 = spectral::derivative(Eigen::VectorXd(ph.c1.row(n).transpose()), L);
    const Eigen::VectorXd dz2 = spectral::derivative(Eigen::VectorXd(ph.c2.row(n).transpose()), L);
    const Eigen::VectorXd dt1 = (ph.c1.row(n + 1) - ph.c1.row(n - 1)).transpose() / (2.0 * dt);
    const Eigen::VectorXd dt2 = (ph.c2.row(n + 1) - ph.c2.row(n - 1)).transpose() / (2.0 * dt);
    const Eigen::VectorXd s1 = q * (pot.a0.row(n) - pot.a1.row(n)).transpose();
    const Eigen::VectorXd s2 = q * (pot.a0.row(n) + pot.a1.row(n)).transpose();
    res.c1 = std::max(res.c1, (dt1 + dz1 - s1).cwiseAbs().maxCoeff());
    res.c2 = std::max(res.c2, (dt2 - dz2 - s2).cwiseAbs().maxCoeff());
  }
  return res;
}

DiagonalComplexField build_W(const PhaseField& ph, Eigen::Index time_index) {
  check_index(time_index, ph.time_samples());
  const Eigen::Index N = ph.c1.cols();
  DiagonalComplexField W(N, 2);
  for (Eigen::Index k = 0; k < N; ++k) {
    W(k, 0) = std::polar(1.0, -ph.c1(time_index, k));
    W(k, 1) = std::polar(1.0, -ph.c2(time_index, k));
  }
  return W;
}

DiagonalRealField build_F(const PhaseField& ph, Eigen::Index time_index) {
  check_index(time_index, ph.time_samples());
  DiagonalRealField F(ph.c1.cols(), 2);
  F.col(0) = ph.c1.row(time_index).transpose();
  F.col(1) = ph.c2.row(time_index).transpose();
  return F;
}

double conjugated_hamiltonian_check(const LatticeConfig& cfg, const PotentialField& pot, const PhaseField& ph,
                                    Eigen::Index time_index) {
  check_index(time_index, ph.time_samples());
  if (pot.a0.rows() != ph.c1.rows() || pot.a0.cols() != cfg.grid_points())
    throw ShapeError("potential and phase grids do not match the lattice");
  const int N = cfg.grid_points();
  const int M = std::max(16 * N + 1, 257);
  const LatticeConfig fine = LatticeConfig::make(cfg.domain_length(), (M - 1) / 2, cfg.charge());
  const double q = cfg.charge(), L = cfg.domain_length();

  auto refine = [&](const SpaceTimeGrid& f) {
    return spectral::resample(Eigen::VectorXd(f.row(time_index).transpose()), M);
  };
  const Eigen::VectorXd a0 = refine(pot.a0), a1 = refine(pot.a1);
  const Eigen::VectorXd c1 = refine(ph.c1), c2 = refine(ph.c2);
  const Eigen::VectorXd dc1 = spectral::derivative(c1, L), dc2 = spectral::derivative(c2, L);

  std::vector<SpinorGrid> battery;
  for (int r = -cfg.cutoff(); r <= cfg.cutoff(); ++r) {
    if (r == 0) continue;
    battery.push_back(basis_function(cfg, mode_momentum(cfg, r), Spin::up));
    battery.push_back(basis_function(cfg, mode_momentum(cfg, r), Spin::down));
  }
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 4; ++i) {
    SpinorGrid mix = SpinorGrid::Zero(N, 2);
    for (const auto& phi : battery) mix += cplx(gauss(rng), gauss(rng)) * phi;
    battery.push_back(mix / std::sqrt(static_cast<double>(battery.size())));
  }

  double worst = 0.0;
  for (const auto& coarse : battery) {
    SpinorGrid psi(M, 2);
    psi.col(0) = spectral::resample(coarse.col(0), M);
    psi.col(1) = spectral::resample(coarse.col(1), M);
    SpinorGrid Wpsi(M, 2);
    for (int k = 0; k < M; ++k) {
      Wpsi(k, 0) = std::polar(1.0, -c1(k)) * psi(k, 0);
      Wpsi(k, 1) = std::polar(1.0, -c2(k)) * psi(k, 1);
    }
    const SpinorGrid H0Wpsi = apply_free_hamiltonian(fine, Wpsi);
    const SpinorGrid H0psi = apply_free_hamiltonian(fine, psi);
    for (int k = 0; k < M; ++k) {
      const cplx lhs1 = std::polar(1.0, c1(k)) * H0Wpsi(k, 0) + (-q * a1(k) + q * a0(k)) * psi(k, 0);
      const cplx lhs2 = std::polar(1.0, c2(k)) * H0Wpsi(k, 1) + (q * a1(k) + q * a0(k)) * psi(k, 1);
      const cplx rhs1 = H0psi(k, 0) + (-dc1(k) - q * a1(k) + q * a0(k)) * psi(k, 0);
      const cplx rhs2 = H0psi(k, 1) + (dc2(k) + q * a1(k) + q * a0(k)) * psi(k, 1);
      worst = std::max({worst, std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)});
    }
  }
  return worst;
}

std::function<double(double)> sin2_envelope(double duration) {
  if (!(duration > 0.0)) throw ConfigError("pulse duration must be positive");
  return [duration](double t) {
    if (t <= 0.0 || t >= duration) return 0.0;
    const double s = std::sin(std::numbers::pi * t / duration);
    return s * s;
  };
}

namespace presets {

PotentialFunctions zero() {
  auto z = [](double, double) { return 0.0; };
  return {z, z};
}

PotentialFunctions uniform_pulse(double a0_amplitude, double a1_amplitude, double duration) {
  auto env = sin2_envelope(duration);
  return {[=](double, double t) { return a0_amplitude * env(t); },
          [=](double, double t) { return a1_amplitude * env(t); }};
}

PotentialFunctions mode_wave(const LatticeConfig& cfg, double a0_amplitude, double a1_amplitude, int mode,
                             double phase, double duration) {
  if (mode < 0 || mode > cfg.cutoff()) throw ConfigError("mode wave index outside [0, cutoff]");
  auto env = sin2_envelope(duration);
  const double k = mode * cfg.kappa();
  return {[=](double z, double t) { return a0_amplitude * env(t) * std::cos(k * z + phase); },
          [=](double z, double t) { return a1_amplitude * env(t) * std::cos(k * z + phase); }};
}

PotentialFunctions gaussian_pulse(const LatticeConfig& cfg, double amplitude, double center_time, double width_time,
                                  double center_z, double width_z, int bandwidth) {
  if (bandwidth < 0 || bandwidth > cfg.cutoff()) throw ConfigError("gaussian bandwidth outside [0, cutoff]");
  if (!(width_time > 0.0) || !(width_z > 0.0)) throw ConfigError("gaussian widths must be positive");
  std::vector<double> w(bandwidth + 1);
  double peak = 0.0;
  for (int j = 0; j <= bandwidth; ++j) {
    const double x = j * cfg.kappa() * width_z;
    w[j] = (j == 0 ? 1.0 : 2.0) * std::exp(-0.5 * x * x);
    peak += w[j];
  }
  const double kappa = cfg.kappa();
  ScalarField a0 = [=](double z, double t) {
    double profile = 0.0;
    for (int j = 0; j <= bandwidth; ++j) profile += w[j] * std::cos(j * kappa * (z - center_z));
    const double u = (t - center_time) / width_time;
    return amplitude * std::exp(-0.5 * u * u) * profile / peak;
  };
  return {a0, [](double, double) { return 0.0; }};
}

PotentialFunctions traveling_wave(const LatticeConfig& cfg, double amplitude, int mode, int direction) {
  if (direction != 1 && direction != -1) throw ConfigError("traveling wave direction must be +1 or -1");
  if (mode < 1 || mode > cfg.cutoff()) throw ConfigError("traveling wave mode outside [1, cutoff]");
  const double k = mode * cfg.kappa();
  const double d = direction;
  return {[=](double z, double t) { return 0.5 * amplitude * std::cos(k * (z - d * t)); },
          [=](double z, double t) { return -d * 0.5 * amplitude * std::cos(k * (z - d * t)); }};
}

ScalarField uniform_gauge(double amplitude, double duration) {
  auto env = sin2_envelope(duration);
  return [=](double, double t) { return amplitude * env(t); };
}

ScalarField mode_gauge(const LatticeConfig& cfg, double amplitude, int mode, double phase, double duration) {
  if (mode < 0 || mode > cfg.cutoff()) throw ConfigError("gauge mode outside [0, cutoff]");
  auto env = sin2_envelope(duration);
  const double k = mode * cfg.kappa();
  return [=](double z, double t) { return amplitude * env(t) * std::cos(k * z + phase); };
}

}  // namespace presets

}  // namespace dirac1d
