#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dirac1d/lattice.hpp"

namespace dirac1d {

// Fock spaces beyond this cutoff (dimension 2^16) are refused.
constexpr int kMaxFockCutoff = 4;

struct RegularizedVacuumSpec {
  int r_cut = 1;
};

enum class VacuumKind { standard, regularized };

struct VacuumChoice {
  VacuumKind kind = VacuumKind::standard;
  int r_cut = 0;

  static VacuumChoice standard() { return {}; }
  static VacuumChoice regularized(int r) { return {VacuumKind::regularized, r}; }
  std::string label() const;
};

void validate_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec);

// <a_m^dag a_m> (0 or 1) for each entry of field_modes(cfg).
std::vector<int> vacuum_field_occupations(const LatticeConfig& cfg, const VacuumChoice& vac);

// -2 sum_{p<=cutoff} p kappa and -2 sum_{p<=R} p kappa.
double vacuum_energy_standard(const LatticeConfig& cfg);
double vacuum_energy_regularized(const LatticeConfig& cfg, const RegularizedVacuumSpec& spec);

// Occupation-number basis. Bit j of a basis index is the occupation of
// modes()[j]. Order: spin-up electrons r = 1..cutoff, spin-up positrons
// p = 1..cutoff, spin-down electrons r = -1..-cutoff, spin-down positrons
// p = -1..-cutoff. Jordan-Wigner sign = (-1)^(occupied bits below j).
class FockBasis {
 public:
  explicit FockBasis(const LatticeConfig& cfg);

  const LatticeConfig& lattice() const { return cfg_; }
  int mode_count() const { return static_cast<int>(modes_.size()); }
  Eigen::Index dimension() const { return Eigen::Index{1} << mode_count(); }
  const std::vector<ModeIndex>& modes() const { return modes_; }
  int position(const ModeIndex& mode) const;

  const std::vector<FieldMode>& field_modes() const { return field_; }
  int field_count() const { return static_cast<int>(field_.size()); }
  int field_bit(int m) const { return field_bit_[m]; }
  bool field_creates(int m) const { return field_creates_[m]; }
  double field_energy(int m) const;

  // Applies a single ladder operator to basis state `state`; returns false
  // when the result vanishes, otherwise updates state and sign.
  static bool apply_ladder(int bit, bool create, std::uint32_t& state, int& sign);
  // Field operator a_m (dagger = false) or a_m^dag.
  bool apply_field(int m, bool dagger, std::uint32_t& state, int& sign) const {
    return apply_ladder(field_bit_[m], field_creates_[m] != dagger, state, sign);
  }

 private:
  LatticeConfig cfg_;
  std::vector<ModeIndex> modes_;
  std::vector<FieldMode> field_;
  std::vector<int> field_bit_;
  std::vector<bool> field_creates_;
};

using FockMatrix = Eigen::SparseMatrix<cplx>;
using FockVector = Eigen::VectorXcd;

struct FockOperator {
  FockMatrix matrix;
  bool hermitian = false;
};

enum class LadderKind { create, destroy };

FockOperator ladder_matrix(const FockBasis& basis, const ModeIndex& mode, LadderKind kind);
FockOperator field_ladder_matrix(const FockBasis& basis, int field_index, bool dagger);

struct FieldOperatorPair {
  FockOperator upper;
  FockOperator lower;
};

// psi_0(z) = sum_m phi_m(z) a_m, one pair per grid point.
FieldOperatorPair field_operator_at(const FockBasis& basis, double z);
std::vector<FieldOperatorPair> field_operator_samples(const FockBasis& basis);

// Kernels in the field-mode basis: K(m, n) = int phi_m^* K phi_n dz.
using OneBodyMatrix = Eigen::MatrixXcd;

enum class Sector { both, up, down };

OneBodyMatrix free_kernel(const LatticeConfig& cfg);
// Quadrature on 4*cutoff+1 points: exact when K has Fourier support <= 2*cutoff.
OneBodyMatrix kernel_from_function(const LatticeConfig& cfg, const std::function<Eigen::Matrix2cd(double)>& K);
// diag(upper(z), lower(z)) from samples on the lattice grid.
OneBodyMatrix diagonal_kernel(const LatticeConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& upper,
                              const Eigen::Ref<const Eigen::VectorXd>& lower);
// q psi^dag(z) psi(z) restricted to a sector; with sigma3 weights for the current.
OneBodyMatrix charge_kernel(const LatticeConfig& cfg, double z, Sector sector = Sector::both);
OneBodyMatrix current_kernel(const LatticeConfig& cfg, double z, Sector sector = Sector::both);

// Q(K) = sum_mn K(m, n) a_m^dag a_n. Throws PreconditionError if hermitian
// output is requested for a non-hermitian kernel.
FockOperator quadratic_operator(const FockBasis& basis, const OneBodyMatrix& K, bool hermitian = false);

FockOperator free_hamiltonian(const FockBasis& basis);
// Diagonal of the free Hamiltonian in the occupation basis.
Eigen::VectorXd free_energies(const FockBasis& basis);

// D(n, m) = <a_m^dag a_n>, so <Q(K)> = trace(K D).
OneBodyMatrix one_body_density(const FockBasis& basis, const FockVector& state);
cplx one_body_expectation(const OneBodyMatrix& K, const OneBodyMatrix& D);

FockVector basis_state(const FockBasis& basis, std::uint32_t bits);
FockVector vacuum_standard(const FockBasis& basis);
FockVector vacuum_regularized(const FockBasis& basis, const RegularizedVacuumSpec& spec);
// (b^dag_p + b^dag_q)/sqrt(2) |0>, spin-up electron mode labels p != q.
FockVector two_electron_state(const FockBasis& basis, int p, int q_m);
// Applies the listed creation operators to |0>, last one first.
FockVector occupation_state(const FockBasis& basis, const std::vector<ModeIndex>& created);

cplx expectation(const FockOperator& op, const FockVector& v);

// y = H x for a hermitian operator.
using LinearOperator = std::function<void(const FockVector& x, FockVector& y)>;

// exp(-i tau H) v by substepped Taylor series; norm_bound >= ||H||.
FockVector expm_multiply(const LinearOperator& H, double norm_bound, const FockVector& v, double tau);
FockVector expm_multiply(const FockMatrix& H, const FockVector& v, double tau, double norm_bound);

// Exact spectral norm of Q(h) for hermitian h on the full Fock space.
double quadratic_norm(const OneBodyMatrix& h);

}  // namespace dirac1d
