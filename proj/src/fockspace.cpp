#include "dirac1d/fockspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <Eigen/Eigenvalues>
#include <numbers>

#include "dirac1d/errors.hpp"

namespace dirac1d {

std::string VacuumChoice::label() const {
  return kind == VacuumKind::standard ? "standard" : "regularized(R=" + std::to_string(r_cut) + ")";
}

void validate_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec) {
  if (spec.r_cut < 1 || spec.r_cut > cfg.cutoff())
    throw ConfigError("r_cut=" + std::to_string(spec.r_cut) + " must lie in [1, cutoff=" +
                      std::to_string(cfg.cutoff()) + "]");
}

std::vector<int> vacuum_field_occupations(const LatticeConfig& cfg, const VacuumChoice& vac) {
  if (vac.kind == VacuumKind::regularized) validate_regularized(cfg, {vac.r_cut});
  const int R = vac.kind == VacuumKind::standard ? cfg.cutoff() : vac.r_cut;
  std::vector<int> occ;
  for (const auto& m : field_modes(cfg)) {
    // Negative-energy modes belong to the positron sector; they are filled
    // unless the positron mode is itself occupied (|p| > R in |0_R>).
    const bool negative = m.sigma() * m.r < 0;
    occ.push_back(negative && std::abs(m.r) <= R ? 1 : 0);
  }
  return occ;
}

double vacuum_energy_standard(const LatticeConfig& cfg) {
  const int L = cfg.cutoff();
  return -2.0 * cfg.kappa() * (L * (L + 1) / 2);
}

double vacuum_energy_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec) {
  validate_regularized(cfg, spec);
  const int R = spec.r_cut;
  return -2.0 * cfg.kappa() * (R * (R + 1) / 2);
}

FockBasis::FockBasis(const LatticeConfig& cfg) : cfg_(cfg) {
  if (cfg.cutoff() > kMaxFockCutoff)
    throw ResourceError("Fock space at cutoff " + std::to_string(cfg.cutoff()) + " exceeds the ceiling cutoff " +
                        std::to_string(kMaxFockCutoff) + " (dimension 2^" + std::to_string(4 * cfg.cutoff()) + ")");
  const int L = cfg.cutoff();
  for (Spin s : {Spin::up, Spin::down})
    for (Species sp : {Species::electron, Species::positron})
      for (int a = 1; a <= L; ++a) modes_.push_back({sign_of(s) * a, s, sp});
  field_ = dirac1d::field_modes(cfg);
  for (const auto& m : field_) {
    field_bit_.push_back(position(ladder_mode_of(m)));
    field_creates_.push_back(field_mode_creates(m));
  }
}

int FockBasis::position(const ModeIndex& mode) const {
  validate_mode(cfg_, mode);
  const int L = cfg_.cutoff();
  const int block = (mode.s == Spin::up ? 0 : 2) + (mode.species == Species::electron ? 0 : 1);
  return block * L + std::abs(mode.r) - 1;
}

double FockBasis::field_energy(int m) const { return field_[m].sigma() * field_[m].r * cfg_.kappa(); }

bool FockBasis::apply_ladder(int bit, bool create, std::uint32_t& state, int& sign) {
  const std::uint32_t mask = std::uint32_t{1} << bit;
  const bool occupied = state & mask;
  if (occupied == create) return false;
  if (std::popcount(state & (mask - 1)) & 1) sign = -sign;
  state ^= mask;
  return true;
}

namespace {

FockMatrix from_triplets(Eigen::Index dim, std::vector<Eigen::Triplet<cplx>>& t) {
  FockMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

FockOperator single_ladder(const FockBasis& basis, int bit, bool create) {
  const Eigen::Index dim = basis.dimension();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(dim / 2);
  for (Eigen::Index s = 0; s < dim; ++s) {
    auto state = static_cast<std::uint32_t>(s);
    int sign = 1;
    if (FockBasis::apply_ladder(bit, create, state, sign)) t.emplace_back(state, s, static_cast<double>(sign));
  }
  return {from_triplets(dim, t), false};
}

}  // namespace

FockOperator ladder_matrix(const FockBasis& basis, const ModeIndex& mode, LadderKind kind) {
  return single_ladder(basis, basis.position(mode), kind == LadderKind::create);
}

FockOperator field_ladder_matrix(const FockBasis& basis, int field_index, bool dagger) {
  if (field_index < 0 || field_index >= basis.field_count())
    throw InvalidModeError("field mode index " + std::to_string(field_index) + " out of range");
  return single_ladder(basis, basis.field_bit(field_index), basis.field_creates(field_index) != dagger);
}

FieldOperatorPair field_operator_at(const FockBasis& basis, double z) {
  const Eigen::Index dim = basis.dimension();
  const LatticeConfig& cfg = basis.lattice();
  const double norm = 1.0 / std::sqrt(cfg.domain_length());
  FockMatrix parts[2] = {FockMatrix(dim, dim), FockMatrix(dim, dim)};
  for (int m = 0; m < basis.field_count(); ++m) {
    const auto& fm = basis.field_modes()[m];
    const cplx phi = norm * std::polar(1.0, fm.r * cfg.kappa() * z);
    parts[fm.component] += phi * field_ladder_matrix(basis, m, false).matrix;
  }
  return {{parts[0], false}, {parts[1], false}};
}

std::vector<FieldOperatorPair> field_operator_samples(const FockBasis& basis) {
  std::vector<FieldOperatorPair> out;
  for (int k = 0; k < basis.lattice().grid_points(); ++k)
    out.push_back(field_operator_at(basis, basis.lattice().position(k)));
  return out;
}

OneBodyMatrix free_kernel(const LatticeConfig& cfg) {
  const auto modes = field_modes(cfg);
  OneBodyMatrix K = OneBodyMatrix::Zero(modes.size(), modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) K(m, m) = modes[m].sigma() * modes[m].r * cfg.kappa();
  return K;
}

OneBodyMatrix kernel_from_function(const LatticeConfig& cfg, const std::function<Eigen::Matrix2cd(double)>& K) {
  const auto modes = field_modes(cfg);
  const int n = static_cast<int>(modes.size());
  const int M = 4 * cfg.cutoff() + 1;
  std::vector<Eigen::Matrix2cd> samples(M);
  for (int j = 0; j < M; ++j) samples[j] = K(j * cfg.domain_length() / M);
  OneBodyMatrix out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CompensatedComplexSum s;
      const int dr = modes[b].r - modes[a].r;
      for (int j = 0; j < M; ++j)
        s.add(samples[j](modes[a].component, modes[b].component) *
              std::polar(1.0, 2.0 * std::numbers::pi * ((dr * j) % M) / M));
      out(a, b) = s.value() / static_cast<double>(M);
    }
  return out;
}

OneBodyMatrix diagonal_kernel(const LatticeConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& upper,
                              const Eigen::Ref<const Eigen::VectorXd>& lower) {
  const Eigen::VectorXcd cu = spectral_transform(cfg, upper.cast<cplx>());
  const Eigen::VectorXcd cl = spectral_transform(cfg, lower.cast<cplx>());
  const auto modes = field_modes(cfg);
  const int n = static_cast<int>(modes.size()), h = cfg.cutoff();
  OneBodyMatrix K = OneBodyMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (modes[a].component != modes[b].component) continue;
      const int j = modes[a].r - modes[b].r;
      if (std::abs(j) > h) continue;
      K(a, b) = (modes[a].component == 0 ? cu : cl)(j + h);
    }
  return K;
}

namespace {

OneBodyMatrix point_kernel(const LatticeConfig& cfg, double z, Sector sector, bool current) {
  const auto modes = field_modes(cfg);
  const int n = static_cast<int>(modes.size());
  const double pre = cfg.charge() / cfg.domain_length();
  OneBodyMatrix K = OneBodyMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int c = modes[a].component;
    if ((sector == Sector::up && c != 0) || (sector == Sector::down && c != 1)) continue;
    const double w = current ? pre * modes[a].sigma() : pre;
    for (int b = 0; b < n; ++b)
      if (modes[b].component == c) K(a, b) = w * std::polar(1.0, (modes[b].r - modes[a].r) * cfg.kappa() * z);
  }
  return K;
}

}  // namespace

OneBodyMatrix charge_kernel(const LatticeConfig& cfg, double z, Sector sector) {
  return point_kernel(cfg, z, sector, false);
}

OneBodyMatrix current_kernel(const LatticeConfig& cfg, double z, Sector sector) {
  return point_kernel(cfg, z, sector, true);
}

FockOperator quadratic_operator(const FockBasis& basis, const OneBodyMatrix& K, bool hermitian) {
  const int n = basis.field_count();
  if (K.rows() != n || K.cols() != n) throw ShapeError("kernel size does not match the field-mode count");
  if (hermitian) {
    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    if ((K - K.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw PreconditionError("hermitian operator requested from a non-hermitian kernel");
  }
  const Eigen::Index dim = basis.dimension();
  std::vector<Eigen::Triplet<cplx>> t;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const cplx w = K(m, k);
      if (w == cplx(0.0)) continue;
      for (Eigen::Index s = 0; s < dim; ++s) {
        auto state = static_cast<std::uint32_t>(s);
        int sign = 1;
        if (basis.apply_field(k, false, state, sign) && basis.apply_field(m, true, state, sign))
          t.emplace_back(state, s, w * static_cast<double>(sign));
      }
    }
  return {from_triplets(dim, t), hermitian};
}

FockOperator free_hamiltonian(const FockBasis& basis) {
  return quadratic_operator(basis, free_kernel(basis.lattice()), true);
}

Eigen::VectorXd free_energies(const FockBasis& basis) {
  const Eigen::Index dim = basis.dimension();
  Eigen::VectorXd E(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int m = 0; m < basis.field_count(); ++m) {
      const bool bit = (s >> basis.field_bit(m)) & 1;
      const bool filled = basis.field_creates(m) ? !bit : bit;
      if (filled) e += basis.field_energy(m);
    }
    E(s) = e;
  }
  return E;
}

OneBodyMatrix one_body_density(const FockBasis& basis, const FockVector& state) {
  if (state.size() != basis.dimension()) throw ShapeError("state dimension does not match basis");
  const int n = basis.field_count();
  OneBodyMatrix D = OneBodyMatrix::Zero(n, n);
  for (Eigen::Index s = 0; s < state.size(); ++s) {
    const cplx v = state(s);
    if (v == cplx(0.0)) continue;
    for (int k = 0; k < n; ++k) {
      auto s1 = static_cast<std::uint32_t>(s);
      int sign1 = 1;
      if (!basis.apply_field(k, false, s1, sign1)) continue;
      for (int m = 0; m < n; ++m) {
        auto s2 = s1;
        int sign = sign1;
        if (basis.apply_field(m, true, s2, sign)) D(k, m) += std::conj(state(s2)) * v * static_cast<double>(sign);
      }
    }
  }
  return D;
}

cplx one_body_expectation(const OneBodyMatrix& K, const OneBodyMatrix& D) {
  return (K.transpose().array() * D.array()).sum();
}

FockVector basis_state(const FockBasis& basis, std::uint32_t bits) {
  if (bits >= static_cast<std::uint64_t>(basis.dimension())) throw InvalidModeError("basis index out of range");
  FockVector v = FockVector::Zero(basis.dimension());
  v(bits) = 1.0;
  return v;
}

FockVector vacuum_standard(const FockBasis& basis) { return basis_state(basis, 0); }

FockVector vacuum_regularized(const FockBasis& basis, const RegularizedVacuumSpec& spec) {
  validate_regularized(basis.lattice(), spec);
  std::uint32_t bits = 0;
  for (int j = 0; j < basis.mode_count(); ++j) {
    const auto& mode = basis.modes()[j];
    if (mode.species == Species::positron && std::abs(mode.r) > spec.r_cut) bits |= std::uint32_t{1} << j;
  }
  return basis_state(basis, bits);
}

FockVector occupation_state(const FockBasis& basis, const std::vector<ModeIndex>& created) {
  std::uint32_t state = 0;
  int sign = 1;
  for (auto it = created.rbegin(); it != created.rend(); ++it)
    if (!FockBasis::apply_ladder(basis.position(*it), true, state, sign))
      throw DegenerateStateError("mode r=" + std::to_string(it->r) + " created twice; the state vanishes");
  FockVector v = basis_state(basis, state);
  v *= static_cast<double>(sign);
  return v;
}

FockVector two_electron_state(const FockBasis& basis, int p, int q_m) {
  const ModeIndex a{p, Spin::up, Species::electron}, b{q_m, Spin::up, Species::electron};
  validate_mode(basis.lattice(), a);
  validate_mode(basis.lattice(), b);
  if (p == q_m) throw DegenerateStateError("two_electron_state needs distinct modes p != q_m");
  return (occupation_state(basis, {a}) + occupation_state(basis, {b})) / std::sqrt(2.0);
}

cplx expectation(const FockOperator& op, const FockVector& v) { return v.dot(op.matrix * v); }

FockVector expm_multiply(const LinearOperator& H, double norm_bound, const FockVector& v, double tau) {
  const double theta = std::abs(tau) * norm_bound;
  const int substeps = std::max(1, static_cast<int>(std::ceil(theta)));
  const double h = tau / substeps;
  FockVector w = v, term(v.size()), tmp(v.size());
  for (int s = 0; s < substeps; ++s) {
    FockVector acc = w;
    term = w;
    for (int k = 1; k <= 60; ++k) {
      H(term, tmp);
      term = tmp * cplx(0.0, -h / k);
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    w = acc;
  }
  return w;
}

FockVector expm_multiply(const FockMatrix& H, const FockVector& v, double tau, double norm_bound) {
  return expm_multiply([&H](const FockVector& x, FockVector& y) { y.noalias() = H * x; }, norm_bound, v, tau);
}

double quadratic_norm(const OneBodyMatrix& h) {
  Eigen::SelfAdjointEigenSolver<OneBodyMatrix> es(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lam = es.eigenvalues();
  double pos = 0.0, neg = 0.0;
  for (double l : lam) (l > 0 ? pos : neg) += std::abs(l);
  return std::max(pos, neg);
}

}  // namespace dirac1d
