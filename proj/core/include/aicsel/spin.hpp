#pragma once

// Spin-j linear algebra in the |j,m> basis, ordered m = j, j-1, ..., -j.
// Row/column index a corresponds to m = j - a.

#include <complex>
#include <compare>
#include <vector>

#include <Eigen/Dense>

namespace aicsel {

using Complex = std::complex<double>;
using BlockMatrix = Eigen::MatrixXcd;

/// Spin label stored as twice the spin value so half-integers are exact.
class SpinLabel {
 public:
  constexpr SpinLabel() = default;
  explicit SpinLabel(int twoJ);

  constexpr int twoJ() const { return twoJ_; }
  constexpr int dim() const { return twoJ_ + 1; }
  constexpr double j() const { return 0.5 * twoJ_; }

  /// Magnetic quantum number of basis index a.
  constexpr double m_of(int a) const { return j() - a; }

  friend constexpr auto operator<=>(SpinLabel, SpinLabel) = default;

 private:
  int twoJ_ = 0;
};

/// Spins present in an N-qubit Schur-Weyl decomposition, largest first:
/// twoJ = N, N-2, ..., N mod 2.
std::vector<SpinLabel> spins_for(int nQubits);

struct AngularMomentum {
  BlockMatrix jx;
  BlockMatrix jy;
  BlockMatrix jz;
};

AngularMomentum ladder_operators(SpinLabel spin);

/// Raising operator J+ in the |j,m> basis.
BlockMatrix raising_operator(SpinLabel spin);

/// Unitary U = exp(-i phi Jz) exp(-i theta Jy). Its columns are the
/// eigenvectors of n.J for n = (sin t cos p, sin t sin p, cos t), in the same
/// m ordering as the computational basis.
struct RotationMatrix {
  SpinLabel spin;
  double theta = 0.0;
  double phi = 0.0;
  BlockMatrix entries;
};

RotationMatrix rotation_to_axis(SpinLabel spin, double theta, double phi);

/// Cached eigendecomposition of Jy for one spin, so repeated rotations of the
/// same block only cost two small matrix products.
class WignerRotator {
 public:
  explicit WignerRotator(SpinLabel spin);

  SpinLabel spin() const { return spin_; }

  /// Wigner small-d matrix exp(-i theta Jy); real up to rounding.
  BlockMatrix small_d(double theta) const;
  BlockMatrix rotation(double theta, double phi) const;

 private:
  SpinLabel spin_;
  BlockMatrix eigenvectors_;
  Eigen::VectorXd eigenvalues_;
};

}  // namespace aicsel
