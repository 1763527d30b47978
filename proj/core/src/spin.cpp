#include "aicsel/spin.hpp"

#include <cmath>
#include <string>

#include "aicsel/errors.hpp"

namespace aicsel {

SpinLabel::SpinLabel(int twoJ) : twoJ_(twoJ) {
  if (twoJ < 0) {
    throw InvalidArgument("SpinLabel: twoJ must be non-negative, got " + std::to_string(twoJ));
  }
}

std::vector<SpinLabel> spins_for(int nQubits) {
  if (nQubits < 1) {
    throw InvalidArgument("spins_for: need at least one qubit");
  }
  std::vector<SpinLabel> out;
  for (int twoJ = nQubits; twoJ >= 0; twoJ -= 2) {
    out.emplace_back(twoJ);
  }
  return out;
}

BlockMatrix raising_operator(SpinLabel spin) {
  const int d = spin.dim();
  const double j = spin.j();
  BlockMatrix jp = BlockMatrix::Zero(d, d);
  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row above |m>.
  for (int a = 1; a < d; ++a) {
    const double m = spin.m_of(a);
    jp(a - 1, a) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return jp;
}

AngularMomentum ladder_operators(SpinLabel spin) {
  const int d = spin.dim();
  const BlockMatrix jp = raising_operator(spin);
  const BlockMatrix jm = jp.adjoint();
  AngularMomentum out;
  out.jx = 0.5 * (jp + jm);
  out.jy = Complex(0.0, -0.5) * (jp - jm);
  out.jz = BlockMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    out.jz(a, a) = spin.m_of(a);
  }
  return out;
}

WignerRotator::WignerRotator(SpinLabel spin) : spin_(spin) {
  const BlockMatrix jy = ladder_operators(spin).jy;
  Eigen::SelfAdjointEigenSolver<BlockMatrix> solver(jy);
  if (solver.info() != Eigen::Success) {
    throw InternalError("WignerRotator: eigendecomposition of Jy failed");
  }
  eigenvectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
}

BlockMatrix WignerRotator::small_d(double theta) const {
  const int d = spin_.dim();
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < d; ++i) {
    phases(i) = std::polar(1.0, -theta * eigenvalues_(i));
  }
  BlockMatrix out = eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
  // exp(-i theta Jy) is real for the standard phase convention.
  out = out.real().cast<Complex>();
  return out;
}

BlockMatrix WignerRotator::rotation(double theta, double phi) const {
  const int d = spin_.dim();
  BlockMatrix u = small_d(theta);
  for (int a = 0; a < d; ++a) {
    u.row(a) *= std::polar(1.0, -phi * spin_.m_of(a));
  }
  return u;
}

RotationMatrix rotation_to_axis(SpinLabel spin, double theta, double phi) {
  const WignerRotator rot(spin);
  return RotationMatrix{spin, theta, phi, rot.rotation(theta, phi)};
}

}  // namespace aicsel
