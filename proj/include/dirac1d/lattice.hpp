#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dirac1d/numerics.hpp"

namespace dirac1d {

enum class Spin { up = +1, down = -1 };
enum class Species { electron, positron };

inline int sign_of(Spin s) { return static_cast<int>(s); }

// Periodic domain [0, L) with plane waves r = -cutoff..cutoff sampled on N = 2*cutoff+1 points.
class LatticeConfig {
 public:
  static LatticeConfig make(double domain_length, int cutoff, double charge = 1.0);

  double domain_length() const { return length_; }
  int cutoff() const { return cutoff_; }
  int grid_points() const { return 2 * cutoff_ + 1; }
  double charge() const { return charge_; }

  double kappa() const;
  double spacing() const { return length_ / grid_points(); }
  double position(int k) const { return k * spacing(); }
  Eigen::VectorXd grid() const;

  LatticeConfig with_cutoff(int cutoff) const { return make(length_, cutoff, charge_); }

 private:
  LatticeConfig(double L, int cutoff, double q) : length_(L), cutoff_(cutoff), charge_(q) {}
  double length_;
  int cutoff_;
  double charge_;
};

// Electron and positron labels. Positrons carry the momentum of the electron
// mode they pair with; the field expansion places them at momentum -p.
struct ModeIndex {
  int r = 1;
  Spin s = Spin::up;
  Species species = Species::electron;

  bool operator==(const ModeIndex&) const = default;
};

void validate_mode(const LatticeConfig& cfg, const ModeIndex& mode);

// One-body plane-wave mode of the two-component field: component 0 is the
// upper (sigma_3 = +1) entry. Energy is sigma * r * kappa.
struct FieldMode {
  int component = 0;
  int r = 1;

  int sigma() const { return component == 0 ? 1 : -1; }
};

// Upper r = -L..-1,1..L followed by lower in the same order.
std::vector<FieldMode> field_modes(const LatticeConfig& cfg);

// The ladder mode a field mode maps to, and whether the field operator
// destroys (false) or creates (true) that ladder mode.
ModeIndex ladder_mode_of(const FieldMode& m);
bool field_mode_creates(const FieldMode& m);

double mode_momentum(const LatticeConfig& cfg, int r);

// N x 2 samples of the spinor field over the grid.
using SpinorGrid = Eigen::Matrix<cplx, Eigen::Dynamic, 2>;

SpinorGrid basis_function(const LatticeConfig& cfg, double p, Spin s);

// Spectral -i sigma_3 d/dz.
SpinorGrid apply_free_hamiltonian(const LatticeConfig& cfg, const SpinorGrid& psi);

// Coefficients c_r for r = -h..h (h = (M-1)/2) stored at index r + h, with
// s_k = sum_r c_r exp(2 pi i r k / M). Sample counts must be odd.
namespace spectral {

Eigen::VectorXcd forward(const Eigen::Ref<const Eigen::VectorXcd>& samples);
Eigen::VectorXcd inverse(const Eigen::Ref<const Eigen::VectorXcd>& coeffs);

Eigen::VectorXcd derivative(const Eigen::Ref<const Eigen::VectorXcd>& samples, double length);
Eigen::VectorXd derivative(const Eigen::Ref<const Eigen::VectorXd>& samples, double length);

// Trigonometric interpolation onto a uniform grid of another odd size.
Eigen::VectorXcd resample(const Eigen::Ref<const Eigen::VectorXcd>& samples, int size);
Eigen::VectorXd resample(const Eigen::Ref<const Eigen::VectorXd>& samples, int size);

cplx evaluate(const Eigen::Ref<const Eigen::VectorXcd>& coeffs, double length, double z);

}  // namespace spectral

// Forward transform that insists on the configured sample count.
Eigen::VectorXcd spectral_transform(const LatticeConfig& cfg, const Eigen::Ref<const Eigen::VectorXcd>& samples);
Eigen::VectorXcd inverse_spectral_transform(const LatticeConfig& cfg,
                                            const Eigen::Ref<const Eigen::VectorXcd>& coeffs);

// Grid quadrature of conj(a) * b summed over both components.
cplx grid_inner_product(const LatticeConfig& cfg, const SpinorGrid& a, const SpinorGrid& b);

}  // namespace dirac1d
