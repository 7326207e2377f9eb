#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cxyz/xyz.hpp"

namespace cxyz::dicke {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Symmetric (maximal-J) manifold of N two-level atoms: states |J = N/2, m>
// with m = -N/2 ... +N/2 stored in ascending m order, dimension N + 1.
struct DickeBasis {
  explicit DickeBasis(int n_atoms);

  int n_atoms;
  int dimension() const { return n_atoms + 1; }
  double j() const { return 0.5 * n_atoms; }
  // m value of basis index i (i = 0 is m = -N/2).
  double m_of(int index) const { return -j() + index; }
};

struct CollectiveOps {
  DickeBasis basis;
  Matrix jx, jy, jz, jplus, jminus;
};

// Ladder matrix elements <m+1|J+|m> = sqrt(J(J+1) - m(m+1)); Jx, Jy, Jz follow.
CollectiveOps build_collective_ops(const DickeBasis& basis);

// H = chi_x Jx^2 + chi_y Jy^2 + chi_z Jz^2 (+ linear_z * Jz when nonzero).
Matrix build_xyz_hamiltonian(const XYZCouplings& xyz, const DickeBasis& basis,
                             double linear_z = 0.0);

// Pure state (amplitude vector) or density matrix in the Dicke manifold.
struct DickeState {
  enum class Kind { Pure, Mixed };

  DickeBasis basis;
  Kind kind;
  Vector psi;  // valid when kind == Pure
  Matrix rho;  // valid when kind == Mixed

  static DickeState pure(const DickeBasis& basis, Vector psi);
  static DickeState mixed(const DickeBasis& basis, Matrix rho);
  // |psi><psi| promotion; identity on mixed states.
  DickeState to_mixed() const;
};

// Spin-coherent state pointing along (theta, phi):
// <Jz> = J cos(theta), <Jx> = J sin(theta) cos(phi), <Jy> = J sin(theta) sin(phi).
DickeState coherent_state(const DickeBasis& basis, double theta, double phi);

// psi(t) = exp(-i H t) psi0 via dense Hermitian eigendecomposition.
// Rejects mixed input (use evolve_lindblad).
DickeState evolve_unitary(const Matrix& h, const DickeState& psi0, double t);

// Cached eigendecomposition for repeated propagation under the same H.
class UnitaryPropagator {
 public:
  explicit UnitaryPropagator(const Matrix& h);
  Vector apply(const Vector& psi0, double t) const;

 private:
  Eigen::VectorXd evals_;
  Matrix evecs_;
};

struct Jump {
  double rate;  // >= 0; the jump operator enters as sqrt(rate) * op
  Matrix op;
};

// Master equation d rho/dt = -i[H, rho] + sum_k rate_k D[op_k] rho,
// integrated with classic RK4 plus step-halving error control. Steps never
// exceed dt_max. Trace is preserved to integration accuracy; positivity is
// monitored at the end point (warning on violation beyond tolerance).
DickeState evolve_lindblad(const Matrix& h, const std::vector<Jump>& jumps,
                           const DickeState& rho0, double t, double dt_max);

struct SpinMoments {
  Eigen::Vector3d mean;        // (<Jx>, <Jy>, <Jz>)
  Eigen::Matrix3d covariance;  // symmetrized: 1/2<{Ji,Jj}> - <Ji><Jj>
};

SpinMoments spin_moments(const DickeState& state);

struct SqueezingResult {
  double xi2_kitagawa;  // 4 min Var_perp / N
  double xi2_wineland;  // N min Var_perp / |<J>|^2
};

// Minimizes the transverse variance over directions perpendicular to <J>.
// Requires |<J>| > 0 (the reference direction is undefined otherwise).
SqueezingResult squeezing_parameter(const DickeState& state);

}  // namespace cxyz::dicke
