#include "dirac1d/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <unsupported/Eigen/FFT>

#include "dirac1d/errors.hpp"

namespace dirac1d {

LatticeConfig LatticeConfig::make(double domain_length, int cutoff, double charge) {
  if (!std::isfinite(domain_length) || domain_length <= 0.0)
    throw ConfigError("domain_length must be positive and finite");
  if (cutoff < 1) throw ConfigError("cutoff must be at least 1");
  if (!std::isfinite(charge)) throw ConfigError("charge must be finite");
  return LatticeConfig(domain_length, cutoff, charge);
}

double LatticeConfig::kappa() const { return 2.0 * std::numbers::pi / length_; }

Eigen::VectorXd LatticeConfig::grid() const {
  Eigen::VectorXd z(grid_points());
  for (int k = 0; k < grid_points(); ++k) z(k) = position(k);
  return z;
}

void validate_mode(const LatticeConfig& cfg, const ModeIndex& mode) {
  const int L = cfg.cutoff();
  const bool ok = mode.s == Spin::up ? (mode.r >= 1 && mode.r <= L) : (mode.r <= -1 && mode.r >= -L);
  if (!ok)
    throw InvalidModeError("mode r=" + std::to_string(mode.r) + " s=" + std::to_string(sign_of(mode.s)) +
                           " outside cutoff " + std::to_string(L));
}

std::vector<FieldMode> field_modes(const LatticeConfig& cfg) {
  std::vector<FieldMode> out;
  out.reserve(4 * cfg.cutoff());
  for (int c = 0; c < 2; ++c)
    for (int r = -cfg.cutoff(); r <= cfg.cutoff(); ++r)
      if (r != 0) out.push_back({c, r});
  return out;
}

ModeIndex ladder_mode_of(const FieldMode& m) {
  if (m.component == 0)
    return m.r > 0 ? ModeIndex{m.r, Spin::up, Species::electron} : ModeIndex{-m.r, Spin::up, Species::positron};
  return m.r < 0 ? ModeIndex{m.r, Spin::down, Species::electron} : ModeIndex{-m.r, Spin::down, Species::positron};
}

bool field_mode_creates(const FieldMode& m) { return ladder_mode_of(m).species == Species::positron; }

double mode_momentum(const LatticeConfig& cfg, int r) {
  if (r == 0 || std::abs(r) > cfg.cutoff())
    throw InvalidModeError("mode index " + std::to_string(r) + " is zero or beyond cutoff");
  return r * cfg.kappa();
}

SpinorGrid basis_function(const LatticeConfig& cfg, double p, Spin s) {
  const double x = p / cfg.kappa();
  const long r = std::lround(x);
  if (!std::isfinite(x) || std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)) || r == 0 ||
      std::abs(r) > cfg.cutoff())
    throw InvalidMomentumError("p=" + std::to_string(p) + " is not a lattice momentum within cutoff");
  const int N = cfg.grid_points();
  const double norm = 1.0 / std::sqrt(cfg.domain_length());
  SpinorGrid phi = SpinorGrid::Zero(N, 2);
  const int col = s == Spin::up ? 0 : 1;
  for (int k = 0; k < N; ++k) {
    // Reduce the phase exactly on the grid: r*k mod N.
    const long m = (r * k) % N;
    phi(k, col) = norm * std::polar(1.0, 2.0 * std::numbers::pi * m / N);
  }
  return phi;
}

SpinorGrid apply_free_hamiltonian(const LatticeConfig& cfg, const SpinorGrid& psi) {
  if (psi.rows() != cfg.grid_points()) throw ShapeError("spinor grid size does not match lattice");
  const cplx I(0.0, 1.0);
  SpinorGrid out(psi.rows(), 2);
  out.col(0) = -I * spectral::derivative(psi.col(0), cfg.domain_length());
  out.col(1) = I * spectral::derivative(psi.col(1), cfg.domain_length());
  return out;
}

namespace spectral {

namespace {

int half_width(Eigen::Index M) {
  if (M < 1 || M % 2 == 0) throw ShapeError("spectral transforms need an odd, positive sample count");
  return static_cast<int>((M - 1) / 2);
}

Eigen::FFT<double>& fft() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

Eigen::VectorXcd forward(const Eigen::Ref<const Eigen::VectorXcd>& samples) {
  const Eigen::Index M = samples.size();
  const int h = half_width(M);
  if (M == 1) return samples;
  Eigen::VectorXcd in = samples, raw(M);
  fft().fwd(raw, in);
  Eigen::VectorXcd c(M);
  for (int r = -h; r <= h; ++r) c(r + h) = raw((r + M) % M) / static_cast<double>(M);
  return c;
}

Eigen::VectorXcd inverse(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) {
  const Eigen::Index M = coeffs.size();
  const int h = half_width(M);
  if (M == 1) return coeffs;
  Eigen::VectorXcd raw(M), out(M);
  for (int r = -h; r <= h; ++r) raw((r + M) % M) = coeffs(r + h) * static_cast<double>(M);
  fft().inv(out, raw);
  return out;
}

Eigen::VectorXcd derivative(const Eigen::Ref<const Eigen::VectorXcd>& samples, double length) {
  Eigen::VectorXcd c = forward(samples);
  const int h = half_width(samples.size());
  const double kappa = 2.0 * std::numbers::pi / length;
  for (int r = -h; r <= h; ++r) c(r + h) *= cplx(0.0, r * kappa);
  return inverse(c);
}

Eigen::VectorXd derivative(const Eigen::Ref<const Eigen::VectorXd>& samples, double length) {
  return derivative(Eigen::VectorXcd(samples.cast<cplx>()), length).real();
}

Eigen::VectorXcd resample(const Eigen::Ref<const Eigen::VectorXcd>& samples, int size) {
  const int h = half_width(samples.size());
  const int H = half_width(size);
  const Eigen::VectorXcd c = forward(samples);
  Eigen::VectorXcd C = Eigen::VectorXcd::Zero(size);
  for (int r = -std::min(h, H); r <= std::min(h, H); ++r) C(r + H) = c(r + h);
  return inverse(C);
}

Eigen::VectorXd resample(const Eigen::Ref<const Eigen::VectorXd>& samples, int size) {
  return resample(Eigen::VectorXcd(samples.cast<cplx>()), size).real();
}

cplx evaluate(const Eigen::Ref<const Eigen::VectorXcd>& coeffs, double length, double z) {
  const int h = half_width(coeffs.size());
  const double kappa = 2.0 * std::numbers::pi / length;
  CompensatedComplexSum s;
  for (int r = -h; r <= h; ++r) s.add(coeffs(r + h) * std::polar(1.0, r * kappa * z));
  return s.value();
}

}  // namespace spectral

Eigen::VectorXcd spectral_transform(const LatticeConfig& cfg, const Eigen::Ref<const Eigen::VectorXcd>& samples) {
  if (samples.size() != cfg.grid_points())
    throw ShapeError("expected " + std::to_string(cfg.grid_points()) + " samples, got " +
                     std::to_string(samples.size()));
  return spectral::forward(samples);
}

Eigen::VectorXcd inverse_spectral_transform(const LatticeConfig& cfg,
                                            const Eigen::Ref<const Eigen::VectorXcd>& coeffs) {
  if (coeffs.size() != cfg.grid_points())
    throw ShapeError("expected " + std::to_string(cfg.grid_points()) + " coefficients, got " +
                     std::to_string(coeffs.size()));
  return spectral::inverse(coeffs);
}

cplx grid_inner_product(const LatticeConfig& cfg, const SpinorGrid& a, const SpinorGrid& b) {
  if (a.rows() != cfg.grid_points() || b.rows() != cfg.grid_points())
    throw ShapeError("spinor grid size does not match lattice");
  return cfg.spacing() * (a.array().conjugate() * b.array()).sum();
}

}  // namespace dirac1d
