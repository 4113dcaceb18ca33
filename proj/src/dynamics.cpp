#include "dirac1d/dynamics.hpp"

#include <cmath>
#include <array>
#include <limits>
#include <string>

#include "dirac1d/errors.hpp"

namespace dirac1d {

Eigen::VectorXd uniform_times(double horizon, double time_step) {
  const Eigen::Index n = time_step_count(time_step, horizon);
  Eigen::VectorXd t(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) t(i) = static_cast<double>(i) * time_step;
  return t;
}

Eigen::VectorXd evaluation_grid(const LatticeConfig& cfg, int points) {
  if (points == 0) return cfg.grid();
  if (points < 1 || points % 2 == 0) throw ConfigError("evaluation grid size must be odd and positive");
  Eigen::VectorXd z(points);
  for (int k = 0; k < points; ++k) z(k) = k * cfg.domain_length() / points;
  return z;
}

Eigen::VectorXcd density_profile(const LatticeConfig& cfg, const OneBodyMatrix& D, const Eigen::VectorXd& z,
                                 bool current, Sector sector) {
  const auto modes = field_modes(cfg);
  const int n = static_cast<int>(modes.size()), h = 2 * cfg.cutoff();
  if (D.rows() != n || D.cols() != n) throw ShapeError("one-body density does not match the lattice");
  // Collect D_nm by shift j = r_n - r_m, weighted per component.
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(2 * h + 1);
  const double pre = cfg.charge() / cfg.domain_length();
  for (int a = 0; a < n; ++a) {
    const int c = modes[a].component;
    if ((sector == Sector::up && c != 0) || (sector == Sector::down && c != 1)) continue;
    const double w = current ? pre * modes[a].sigma() : pre;
    for (int b = 0; b < n; ++b)
      if (modes[b].component == c) coeff(modes[b].r - modes[a].r + h) += w * D(b, a);
  }
  Eigen::VectorXcd out(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    CompensatedComplexSum s;
    for (int j = -h; j <= h; ++j)
      if (coeff(j + h) != cplx(0.0)) s.add(coeff(j + h) * std::polar(1.0, j * cfg.kappa() * z(k)));
    out(k) = s.value();
  }
  return out;
}

OneBodyMatrix free_density(const LatticeConfig& cfg, const OneBodyMatrix& D0, double t) {
  const Eigen::VectorXd eps = free_kernel(cfg).diagonal().real();
  OneBodyMatrix D(D0.rows(), D0.cols());
  for (Eigen::Index a = 0; a < D0.rows(); ++a)
    for (Eigen::Index b = 0; b < D0.cols(); ++b) D(a, b) = D0(a, b) * std::polar(1.0, -(eps(a) - eps(b)) * t);
  return D;
}

namespace {

void store_profiles(ExpectationSeries& s, Eigen::Index row, const LatticeConfig& cfg, const OneBodyMatrix& D) {
  const Eigen::VectorXcd J = density_profile(cfg, D, s.grid, true);
  const Eigen::VectorXcd rho = density_profile(cfg, D, s.grid, false);
  s.current.row(row) = J.real().transpose();
  s.charge.row(row) = rho.real().transpose();
  s.max_imaginary = std::max({s.max_imaginary, J.imag().cwiseAbs().maxCoeff(), rho.imag().cwiseAbs().maxCoeff()});
}

ExpectationSeries empty_series(const LatticeConfig& cfg, const Eigen::VectorXd& times, int grid_points) {
  ExpectationSeries s;
  s.times = times;
  s.grid = evaluation_grid(cfg, grid_points);
  s.current.resize(times.size(), s.grid.size());
  s.charge.resize(times.size(), s.grid.size());
  s.energy.resize(times.size());
  return s;
}

}  // namespace

ExpectationSeries heisenberg_expectation(const LatticeConfig& cfg, const OneBodyMatrix& D0,
                                         const Eigen::VectorXd& times, int grid_points) {
  ExpectationSeries s = empty_series(cfg, times, grid_points);
  const double xi0 = one_body_expectation(free_kernel(cfg), D0).real();
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    store_profiles(s, i, cfg, free_density(cfg, D0, times(i)));
    s.energy(i) = xi0;
  }
  return s;
}

ExpectationSeries heisenberg_expectation(const FockBasis& basis, const FockVector& state0,
                                         const Eigen::VectorXd& times, int grid_points) {
  return heisenberg_expectation(basis.lattice(), one_body_density(basis, state0), times, grid_points);
}

ExpectationSeries schrodinger_expectation(const FockBasis& basis, const EvolutionResult& evo, int grid_points) {
  const Eigen::VectorXd times = Eigen::Map<const Eigen::VectorXd>(evo.times.data(), evo.times.size());
  ExpectationSeries s = empty_series(basis.lattice(), times, grid_points);
  const Eigen::VectorXd E0 = free_energies(basis);
  for (std::size_t i = 0; i < evo.states.size(); ++i) {
    store_profiles(s, i, basis.lattice(), one_body_density(basis, evo.states[i]));
    s.energy(i) = evo.states[i].cwiseAbs2().dot(E0);
  }
  return s;
}

namespace {

// Matrix-free H(t) = H0 + sum_{alpha, j} Vhat_alpha(j) R_{alpha, j}, where
// R_{alpha, j} = sum_{r_m - r_n = j} a_m^dag a_n within component alpha.
class DrivenHamiltonian {
 public:
  DrivenHamiltonian(const FockBasis& basis, const PotentialField& pot) : basis_(basis) {
    const LatticeConfig& cfg = basis.lattice();
    const int h = cfg.cutoff(), n = basis.field_count();
    E0_ = free_energies(basis);
    number_[0] = Eigen::VectorXd::Zero(basis.dimension());
    number_[1] = Eigen::VectorXd::Zero(basis.dimension());
    for (Eigen::Index s = 0; s < basis.dimension(); ++s)
      for (int m = 0; m < n; ++m) {
        const bool bit = (s >> basis.field_bit(m)) & 1;
        if (basis.field_creates(m) ? !bit : bit) number_[basis.field_modes()[m].component](s) += 1.0;
      }

    Eigen::MatrixXd peak = Eigen::MatrixXd::Zero(2, 2 * h + 1);
    double scale = 0.0;
    for (Eigen::Index t = 0; t < pot.time_samples(); ++t) {
      const auto c = coefficients(pot.a0.row(t).transpose(), pot.a1.row(t).transpose());
      for (int a = 0; a < 2; ++a) {
        peak.row(a) = peak.row(a).cwiseMax(c[a].cwiseAbs().transpose());
        scale = std::max(scale, c[a].cwiseAbs().maxCoeff());
      }
    }
    const auto modes = basis.field_modes();
    for (int a = 0; a < 2; ++a)
      for (int j = -h; j <= h; ++j) {
        if (j == 0 || peak(a, j + h) <= 1e-14 * scale) continue;
        OneBodyMatrix K = OneBodyMatrix::Zero(n, n);
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k)
            if (modes[m].component == a && modes[k].component == a && modes[m].r - modes[k].r == j) K(m, k) = 1.0;
        shifts_.push_back({a, j, quadratic_operator(basis, K).matrix});
      }
  }

  void set(const Eigen::VectorXd& a0, const Eigen::VectorXd& a1) {
    const int h = basis_.lattice().cutoff();
    coeff_ = coefficients(a0, a1);
    diag_ = E0_ + coeff_[0](h).real() * number_[0] + coeff_[1](h).real() * number_[1];
    const Eigen::VectorXd qa0 = basis_.lattice().charge() * a0, qa1 = basis_.lattice().charge() * a1;
    const OneBodyMatrix h1 = free_kernel(basis_.lattice()) + diagonal_kernel(basis_.lattice(), qa0 - qa1, qa0 + qa1);
    norm_ = quadratic_norm(h1);
  }

  void apply(const FockVector& x, FockVector& y) const {
    const int h = basis_.lattice().cutoff();
    y = diag_.cwiseProduct(x);
    for (const auto& s : shifts_) y.noalias() += coeff_[s.component](s.shift + h) * (s.matrix * x);
  }

  double norm() const { return norm_; }

 private:
  struct Shift {
    int component;
    int shift;
    FockMatrix matrix;
  };

  std::array<Eigen::VectorXcd, 2> coefficients(const Eigen::VectorXd& a0, const Eigen::VectorXd& a1) const {
    const LatticeConfig& cfg = basis_.lattice();
    const double q = cfg.charge();
    return {spectral_transform(cfg, (q * (a0 - a1)).cast<cplx>()),
            spectral_transform(cfg, (q * (a0 + a1)).cast<cplx>())};
  }

  const FockBasis& basis_;
  Eigen::VectorXd E0_;
  Eigen::VectorXd number_[2];
  std::vector<Shift> shifts_;
  std::array<Eigen::VectorXcd, 2> coeff_;
  Eigen::VectorXd diag_;
  double norm_ = 0.0;
};

void check_state(const FockBasis& basis, const FockVector& v) {
  if (v.size() != basis.dimension()) throw ShapeError("state dimension does not match basis");
  if (std::abs(v.norm() - 1.0) > 1e-9) throw PreconditionError("initial state is not normalized");
}

}  // namespace

EvolutionResult schrodinger_evolve_numeric(const FockBasis& basis, const FockVector& state0,
                                           const PotentialField& pot, int steps, int record_every) {
  check_state(basis, state0);
  if (pot.a0.cols() != basis.lattice().grid_points()) throw ShapeError("potential grid does not match lattice");
  const Eigen::Index intervals = pot.time_samples() - 1;
  if (steps < 1 || intervals % steps != 0)
    throw ConfigError("steps (" + std::to_string(steps) + ") must divide the " + std::to_string(intervals) +
                      " potential intervals");
  if (record_every < 1) throw ConfigError("record_every must be positive");
  const Eigen::Index stride = intervals / steps;
  const double dt = pot.time_step * static_cast<double>(stride);

  DrivenHamiltonian H(basis, pot);
  EvolutionResult out{EvolutionMethod::numeric_stepper, {0.0}, {state0}};
  FockVector v = state0;
  for (int s = 0; s < steps; ++s) {
    const Eigen::Index n0 = s * stride;
    Eigen::VectorXd a0, a1;
    if (stride % 2 == 0) {
      a0 = pot.a0.row(n0 + stride / 2).transpose();
      a1 = pot.a1.row(n0 + stride / 2).transpose();
    } else {
      const Eigen::Index lo = n0 + stride / 2, hi = lo + 1;
      a0 = 0.5 * (pot.a0.row(lo) + pot.a0.row(hi)).transpose();
      a1 = 0.5 * (pot.a1.row(lo) + pot.a1.row(hi)).transpose();
    }
    H.set(a0, a1);
    v = expm_multiply([&H](const FockVector& x, FockVector& y) { H.apply(x, y); }, H.norm(), v, dt);
    if ((s + 1) % record_every == 0 || s + 1 == steps) {
      out.times.push_back(pot.time(n0 + stride));
      out.states.push_back(v);
    }
  }
  return out;
}

namespace {

Eigen::Index time_index_of(const PotentialField& pot, double t) {
  const double x = t / pot.time_step;
  const auto n = static_cast<Eigen::Index>(std::llround(x));
  if (n < 0 || n >= pot.time_samples() || std::abs(x - static_cast<double>(n)) > 1e-9 * std::max(1.0, x))
    throw PreconditionError("time " + std::to_string(t) + " is not on the potential's time grid");
  return n;
}

FockVector free_propagate(const Eigen::VectorXd& E0, const FockVector& v, double t) {
  FockVector w(v.size());
  for (Eigen::Index s = 0; s < v.size(); ++s) w(s) = std::polar(1.0, -E0(s) * t) * v(s);
  return w;
}

}  // namespace

EvolutionResult schrodinger_evolve_analytic(const FockBasis& basis, const FockVector& state0,
                                            const PotentialField& pot, const PhaseField& ph,
                                            const std::vector<double>& times) {
  check_state(basis, state0);
  if (ph.time_samples() != pot.time_samples()) throw ShapeError("phase field does not match potential");
  const Eigen::VectorXd E0 = free_energies(basis);
  EvolutionResult out{EvolutionMethod::analytic_factored, {}, {}};
  for (double t : times) {
    const Eigen::Index n = time_index_of(pot, t);
    const DiagonalRealField F = build_F(ph, n);
    const OneBodyMatrix K = diagonal_kernel(basis.lattice(), F.col(0), F.col(1));
    const FockOperator G = quadratic_operator(basis, K, true);
    out.times.push_back(pot.time(n));
    out.states.push_back(expm_multiply(G.matrix, free_propagate(E0, state0, pot.time(n)), 1.0, quadratic_norm(K)));
  }
  return out;
}

EvolutionResult free_evolution(const FockBasis& basis, const FockVector& state0, const std::vector<double>& times) {
  check_state(basis, state0);
  const Eigen::VectorXd E0 = free_energies(basis);
  EvolutionResult out{EvolutionMethod::heisenberg_free, times, {}};
  for (double t : times) out.states.push_back(free_propagate(E0, state0, t));
  return out;
}

double fidelity(const FockVector& a, const FockVector& b) { return std::abs(a.dot(b)); }

double min_fidelity(const EvolutionResult& a, const EvolutionResult& b) {
  if (a.states.size() != b.states.size()) throw ShapeError("evolution results have different sample counts");
  double worst = 1.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-9) throw ShapeError("evolution results sampled at different times");
    worst = std::min(worst, fidelity(a.states[i], b.states[i]));
  }
  return worst;
}

double max_norm_error(const EvolutionResult& evo) {
  double worst = 0.0;
  for (const auto& v : evo.states) worst = std::max(worst, std::abs(v.norm() - 1.0));
  return worst;
}

Eigen::VectorXd free_field_energy(const FockBasis& basis, const EvolutionResult& evo) {
  const Eigen::VectorXd E0 = free_energies(basis);
  Eigen::VectorXd out(evo.states.size());
  for (std::size_t i = 0; i < evo.states.size(); ++i) out(i) = evo.states[i].cwiseAbs2().dot(E0);
  return out;
}

Eigen::VectorXd free_field_energy(const LatticeConfig& cfg, const OneBodyMatrix& D0, const PhaseField& ph) {
  if (ph.c1.cols() != cfg.grid_points()) throw ShapeError("phase field grid does not match lattice");
  const double xi0 = one_body_expectation(free_kernel(cfg), D0).real();
  Eigen::VectorXd out(ph.time_samples());
  for (Eigen::Index n = 0; n < ph.time_samples(); ++n) {
    const Eigen::VectorXd dc1 = spectral::derivative(Eigen::VectorXd(ph.c1.row(n).transpose()), cfg.domain_length());
    const Eigen::VectorXd dc2 = spectral::derivative(Eigen::VectorXd(ph.c2.row(n).transpose()), cfg.domain_length());
    const OneBodyMatrix K = diagonal_kernel(cfg, -dc1, dc2);
    out(n) = xi0 + one_body_expectation(K, free_density(cfg, D0, ph.time_step * static_cast<double>(n))).real();
  }
  return out;
}

EnergyBalance energy_balance(double lhs, double rhs) {
  constexpr double kNegligible = 1e-15;
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  if (denom < kNegligible) return {lhs, rhs, 0.0};
  return {lhs, rhs, std::abs(lhs - rhs) / denom};
}

double work_integral(const LatticeConfig& cfg, const OneBodyMatrix& D0, const PotentialField& pot) {
  const SpaceTimeGrid E = electric_field(pot);
  const double q = cfg.charge();
  std::vector<double> power(E.rows());
  for (Eigen::Index n = 0; n < E.rows(); ++n) {
    const Eigen::VectorXd e = q * E.row(n).transpose();
    const OneBodyMatrix K = diagonal_kernel(cfg, e, -e);
    power[n] = one_body_expectation(K, free_density(cfg, D0, pot.time(n))).real();
  }
  return trapezoid(power, pot.time_step);
}

EnergyBalance energy_theorem_check(const FockBasis& basis, const FockVector& state0, const PotentialField& pot) {
  if (pot.a1.cwiseAbs().maxCoeff() > 1e-14) throw PreconditionError("energy theorem requires A1 = 0");
  const LatticeConfig& cfg = basis.lattice();
  const OneBodyMatrix D0 = one_body_density(basis, state0);
  const PhaseField ph = solve_phases(cfg, pot);
  const Eigen::VectorXd xi = free_field_energy(cfg, D0, ph);
  return energy_balance(xi(xi.size() - 1) - xi(0), work_integral(cfg, D0, pot));
}

Unboundedness unboundedness_scenario(const LatticeConfig& cfg, int p, int q_m, double f, double t_f,
                                     int time_samples) {
  if (!(f >= 0.0)) throw PreconditionError("drive strength f must be non-negative");
  if (!(t_f > 0.0)) throw PreconditionError("t_f must be positive");
  if (time_samples < 2) throw InsufficientDataError("need at least two time samples");
  const FockBasis basis(cfg);
  const FockVector omega = two_electron_state(basis, p, q_m);
  const OneBodyMatrix D0 = one_body_density(basis, omega);
  const double dt = t_f / (time_samples - 1);
  Eigen::VectorXd times(time_samples);
  for (int i = 0; i < time_samples; ++i) times(i) = i * dt;
  const ExpectationSeries s = heisenberg_expectation(cfg, D0, times);

  std::vector<double> j2(time_samples);
  for (int i = 0; i < time_samples; ++i) j2[i] = cfg.spacing() * s.current.row(i).squaredNorm();

  Unboundedness u;
  u.initial_energy = one_body_expectation(free_kernel(cfg), D0).real() - vacuum_energy_standard(cfg);
  u.slope = -trapezoid(j2, dt);
  u.energy_above_vacuum = u.initial_energy + f * u.slope;
  u.threshold = u.initial_energy / -u.slope;
  u.current_amplitude = s.current.row(0).mean();
  return u;
}

ContinuityResiduals continuity_residuals(const ExpectationSeries& series, double domain_length) {
  const Eigen::Index T = series.times.size();
  if (T < 3) throw InsufficientDataError("continuity residuals need at least 3 time samples");
  const double dt = series.times(1) - series.times(0);
  for (Eigen::Index i = 1; i < T; ++i)
    if (std::abs(series.times(i) - series.times(i - 1) - dt) > 1e-9 * dt)
      throw PreconditionError("continuity residuals need uniform time samples");
  ContinuityResiduals r;
  for (Eigen::Index n = 1; n + 1 < T; ++n) {
    const Eigen::VectorXd dJdt = (series.current.row(n + 1) - series.current.row(n - 1)).transpose() / (2.0 * dt);
    const Eigen::VectorXd drdt = (series.charge.row(n + 1) - series.charge.row(n - 1)).transpose() / (2.0 * dt);
    const Eigen::VectorXd dJdz = spectral::derivative(Eigen::VectorXd(series.current.row(n).transpose()), domain_length);
    const Eigen::VectorXd drdz = spectral::derivative(Eigen::VectorXd(series.charge.row(n).transpose()), domain_length);
    r.charge = std::max(r.charge, (drdt + dJdz).cwiseAbs().maxCoeff());
    r.current = std::max(r.current, (dJdt + drdz).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace dirac1d
