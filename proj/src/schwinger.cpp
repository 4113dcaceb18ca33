#include "dirac1d/schwinger.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirac1d/errors.hpp"

namespace dirac1d {

namespace {

bool in_sector(int component, Sector s) {
  return s == Sector::both || (s == Sector::up && component == 0) || (s == Sector::down && component == 1);
}

SchwingerProfile make_profile(const LatticeConfig& cfg, const VacuumChoice& vac, auto&& value) {
  const int h = cfg.cutoff();
  SchwingerProfile p;
  p.separations.resize(2 * h + 1);
  p.values.resize(2 * h + 1);
  p.vacuum = vac;
  p.cutoff = h;
  for (int k = -h; k <= h; ++k) {
    p.separations(k + h) = k * cfg.spacing();
    p.values(k + h) = value(k * cfg.spacing());
  }
  return p;
}

}  // namespace

cplx schwinger_mode_sum(const LatticeConfig& cfg, const VacuumChoice& vac, double delta, Sector sector) {
  const auto modes = field_modes(cfg);
  const auto occ = vacuum_field_occupations(cfg, vac);
  const double pre = 2.0 * cfg.charge() * cfg.charge() / (cfg.domain_length() * cfg.domain_length());
  CompensatedSum s;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (!occ[m] || !in_sector(modes[m].component, sector)) continue;
    for (std::size_t k = 0; k < modes.size(); ++k)
      if (!occ[k] && modes[k].component == modes[m].component)
        s.add(modes[m].sigma() * std::sin((modes[k].r - modes[m].r) * cfg.kappa() * delta));
  }
  return {0.0, pre * s.value()};
}

cplx schwinger_standard_value(const LatticeConfig& cfg, double delta, Sector sector) {
  const int h = cfg.cutoff();
  const double pre = 2.0 * cfg.charge() * cfg.charge() / (cfg.domain_length() * cfg.domain_length());
  CompensatedSum up, down;
  for (int p = 1; p <= h; ++p)
    for (int q = 1; q <= h; ++q) {
      up.add(std::sin((p + q) * cfg.kappa() * delta));
      down.add(-std::sin((-p - q) * cfg.kappa() * delta));
    }
  double v = 0.0;
  if (sector != Sector::down) v += up.value();
  if (sector != Sector::up) v += down.value();
  return {0.0, pre * v};
}

SchwingerProfile schwinger_standard(const LatticeConfig& cfg, Sector sector) {
  return make_profile(cfg, VacuumChoice::standard(),
                      [&](double d) { return schwinger_standard_value(cfg, d, sector); });
}

SchwingerProfile schwinger_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec, Sector sector) {
  validate_regularized(cfg, spec);
  const auto vac = VacuumChoice::regularized(spec.r_cut);
  return make_profile(cfg, vac, [&](double d) { return schwinger_mode_sum(cfg, vac, d, sector); });
}

cplx oracle_commutator(const FockBasis& basis, const FockVector& vac, double z_prime, double z, Sector rho_sector,
                       Sector current_sector) {
  const LatticeConfig& cfg = basis.lattice();
  const FockOperator rho = quadratic_operator(basis, charge_kernel(cfg, z_prime, rho_sector), true);
  const FockOperator J = quadratic_operator(basis, current_kernel(cfg, z, current_sector), true);
  const FockVector rv = rho.matrix * vac, jv = J.matrix * vac;
  return rv.dot(jv) - jv.dot(rv);
}

SchwingerProfile oracle_profile(const FockBasis& basis, const VacuumChoice& vac, Sector rho_sector,
                                Sector current_sector) {
  const LatticeConfig& cfg = basis.lattice();
  const FockVector state = vac.kind == VacuumKind::standard ? vacuum_standard(basis)
                                                             : vacuum_regularized(basis, {vac.r_cut});
  return make_profile(cfg, vac, [&](double d) {
    return oracle_commutator(basis, state, d, 0.0, rho_sector, current_sector);
  });
}

double standard_coincidence_sum(const LatticeConfig& cfg) {
  const int h = cfg.cutoff();
  CompensatedSum s;
  for (int p = 1; p <= h; ++p)
    for (int q = 1; q <= h; ++q) s.add((p + q) * cfg.kappa());
  return 4.0 * cfg.charge() * cfg.charge() / (cfg.domain_length() * cfg.domain_length()) * s.value();
}

double coincidence_derivative(const SchwingerProfile& profile, double domain_length) {
  const int h = profile.cutoff, N = 2 * h + 1;
  // Reorder offsets -h..h into periodic sample order 0..N-1.
  Eigen::VectorXcd samples(N);
  for (int k = 0; k < N; ++k) samples(k) = profile.at_offset(k <= h ? k : k - N);
  return spectral::derivative(samples, domain_length)(0).imag();
}

double coincidence_derivative(const LatticeConfig& cfg, const VacuumChoice& vac, DerivativeMethod method) {
  if (method == DerivativeMethod::grid_resolved) {
    const SchwingerProfile p = vac.kind == VacuumKind::standard ? schwinger_standard(cfg)
                                                                : schwinger_regularized(cfg, {vac.r_cut});
    return coincidence_derivative(p, cfg.domain_length());
  }
  if (vac.kind == VacuumKind::standard) return standard_coincidence_sum(cfg);
  const auto modes = field_modes(cfg);
  const auto occ = vacuum_field_occupations(cfg, vac);
  CompensatedSum s;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (!occ[m]) continue;
    for (std::size_t k = 0; k < modes.size(); ++k)
      if (!occ[k] && modes[k].component == modes[m].component)
        s.add(modes[m].sigma() * (modes[k].r - modes[m].r) * cfg.kappa());
  }
  return 2.0 * cfg.charge() * cfg.charge() / (cfg.domain_length() * cfg.domain_length()) * s.value();
}

cplx interpolate_profile(const SchwingerProfile& profile, double domain_length, double delta) {
  const int h = profile.cutoff, N = 2 * h + 1;
  Eigen::VectorXcd samples(N);
  for (int k = 0; k < N; ++k) samples(k) = profile.at_offset(k <= h ? k : k - N);
  return spectral::evaluate(spectral::forward(samples), domain_length, delta);
}

void validate_pair(const LatticeConfig& cfg, const TestFunctionPair& pair) {
  if (pair.m_lo < 1 || pair.m_hi < pair.m_lo || pair.m_hi > cfg.cutoff())
    throw ConfigError("test-function support [" + std::to_string(pair.m_lo) + ", " + std::to_string(pair.m_hi) +
                      "] must satisfy 1 <= lo <= hi <= cutoff=" + std::to_string(cfg.cutoff()));
  const Eigen::Index width = pair.m_hi - pair.m_lo + 1;
  if (pair.f_modes.size() != width || pair.g_modes.size() != width)
    throw ConfigError("test-function coefficient count does not match the support window");
}

Eigen::VectorXd sample_test_function(const LatticeConfig& cfg, int m_lo, const Eigen::VectorXcd& modes) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(cfg.grid_points());
  for (int k = 0; k < cfg.grid_points(); ++k)
    for (Eigen::Index i = 0; i < modes.size(); ++i)
      f(k) += 2.0 * (modes(i) * std::polar(1.0, (m_lo + i) * cfg.kappa() * cfg.position(k))).real();
  return f;
}

cplx smeared_schwinger(const LatticeConfig& cfg, const SchwingerProfile& profile, const TestFunctionPair& pair) {
  validate_pair(cfg, pair);
  if (profile.cutoff != cfg.cutoff()) throw ShapeError("profile cutoff does not match lattice");
  const int N = cfg.grid_points(), h = cfg.cutoff();
  const Eigen::VectorXd f = sample_test_function(cfg, pair.m_lo, pair.f_modes);
  const Eigen::VectorXd g = sample_test_function(cfg, pair.m_lo, pair.g_modes);
  CompensatedComplexSum s;
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      int d = ((k - j) % N + N) % N;
      if (d > h) d -= N;
      s.add(f(k) * g(j) * profile.at_offset(d));
    }
  return cfg.spacing() * cfg.spacing() * s.value();
}

ScalingStudy schwinger_scaling(double domain_length, double charge, const std::vector<int>& cutoffs, int r_cut) {
  if (cutoffs.size() < 2) throw InsufficientDataError("scaling study needs at least two cutoffs");
  if (r_cut < 1) throw ConfigError("r_cut must be at least 1");
  ScalingStudy study;
  study.r_cut = r_cut;
  std::vector<double> x, ys, ysg, xr, yr, yrm;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int L : cutoffs) {
    const LatticeConfig cfg = LatticeConfig::make(domain_length, L, charge);
    ScalingRow row{L, coincidence_derivative(cfg, VacuumChoice::standard()),
                   coincidence_derivative(cfg, VacuumChoice::standard(), DerivativeMethod::grid_resolved), nan, nan};
    x.push_back(std::log(static_cast<double>(L)));
    ys.push_back(std::log(std::abs(row.standard_mode_sum)));
    ysg.push_back(std::log(std::abs(row.standard_grid)));
    if (L > r_cut) {
      const auto vac = VacuumChoice::regularized(r_cut);
      row.regularized_mode_sum = coincidence_derivative(cfg, vac);
      row.regularized_grid = coincidence_derivative(cfg, vac, DerivativeMethod::grid_resolved);
      xr.push_back(std::log(static_cast<double>(L)));
      yr.push_back(std::log(std::abs(row.regularized_grid)));
      yrm.push_back(std::log(std::abs(row.regularized_mode_sum)));
    }
    study.rows.push_back(row);
  }
  study.standard = fit_line(x, ys);
  study.standard_grid = fit_line(x, ysg);
  if (xr.size() >= 2) {
    study.regularized = fit_line(xr, yr);
    study.regularized_mode_sum = fit_line(xr, yrm);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : study.rows)
      if (r.cutoff > r_cut) {
        lo = std::min(lo, r.regularized_grid);
        hi = std::max(hi, r.regularized_grid);
      }
    study.regularized_spread = hi - lo;
  }
  return study;
}

}  // namespace dirac1d
