#include "cxyz/dicke.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace cxyz::dicke {

namespace {

constexpr Complex kI{0.0, 1.0};

double norm_inf(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

DickeBasis::DickeBasis(int n) : n_atoms(n) {
  if (n < 1) throw std::invalid_argument("DickeBasis: need at least one atom");
}

CollectiveOps build_collective_ops(const DickeBasis& basis) {
  const int dim = basis.dimension();
  const double j = basis.j();

  Matrix jp = Matrix::Zero(dim, dim);
  Matrix jz = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = basis.m_of(i);
    jz(i, i) = m;
    if (i + 1 < dim) jp(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  Matrix jm = jp.adjoint();
  Matrix jx = 0.5 * (jp + jm);
  Matrix jy = (jp - jm) / (2.0 * kI);
  return CollectiveOps{basis, std::move(jx), std::move(jy), std::move(jz),
                       std::move(jp), std::move(jm)};
}

Matrix build_xyz_hamiltonian(const XYZCouplings& xyz, const DickeBasis& basis,
                             double linear_z) {
  const auto ops = build_collective_ops(basis);
  Matrix h = xyz.chi_x * (ops.jx * ops.jx) + xyz.chi_y * (ops.jy * ops.jy) +
             xyz.chi_z * (ops.jz * ops.jz);
  if (linear_z != 0.0) h += linear_z * ops.jz;
  return h;
}

DickeState DickeState::pure(const DickeBasis& basis, Vector psi) {
  if (psi.size() != basis.dimension())
    throw std::invalid_argument("DickeState: amplitude vector has wrong dimension");
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw std::invalid_argument("DickeState: pure state must be normalized");
  return DickeState{basis, Kind::Pure, std::move(psi), Matrix()};
}

DickeState DickeState::mixed(const DickeBasis& basis, Matrix rho) {
  if (rho.rows() != basis.dimension() || rho.cols() != basis.dimension())
    throw std::invalid_argument("DickeState: density matrix has wrong dimension");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 ||
      std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("DickeState: density matrix must have unit trace");
  if (norm_inf(rho - rho.adjoint()) > 1e-10)
    throw std::invalid_argument("DickeState: density matrix must be Hermitian");
  return DickeState{basis, Kind::Mixed, Vector(), std::move(rho)};
}

DickeState DickeState::to_mixed() const {
  if (kind == Kind::Mixed) return *this;
  Matrix rho = psi * psi.adjoint();
  return DickeState{basis, Kind::Mixed, Vector(), std::move(rho)};
}

DickeState coherent_state(const DickeBasis& basis, double theta, double phi) {
  const int dim = basis.dimension();
  const double j = basis.j();
  const int n = basis.n_atoms;
  // log of cos/sin powers guards against underflow at large N
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Vector psi(dim);
  for (int i = 0; i < dim; ++i) {
    const double m = basis.m_of(i);
    const double jp = j + m;  // = i
    const double jm = j - m;
    const double log_binom =
        std::lgamma(n + 1.0) - std::lgamma(jp + 1.0) - std::lgamma(jm + 1.0);
    double amp = 0.0;
    if (c > 0.0 && s > 0.0) {
      amp = std::exp(0.5 * log_binom + jp * std::log(c) + jm * std::log(s));
    } else if (s == 0.0) {
      amp = (i == dim - 1) ? 1.0 : 0.0;
    } else {
      amp = (i == 0) ? 1.0 : 0.0;
    }
    psi(i) = amp * std::exp(-kI * (m * phi));
  }
  psi.normalize();
  return DickeState::pure(basis, std::move(psi));
}

UnitaryPropagator::UnitaryPropagator(const Matrix& h) {
  if (norm_inf(h - h.adjoint()) > 1e-10 * std::max(1.0, norm_inf(h)))
    throw std::invalid_argument("UnitaryPropagator: Hamiltonian must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("UnitaryPropagator: eigendecomposition failed");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
}

Vector UnitaryPropagator::apply(const Vector& psi0, double t) const {
  Vector coeffs = evecs_.adjoint() * psi0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(-kI * (evals_(k) * t));
  return evecs_ * coeffs;
}

DickeState evolve_unitary(const Matrix& h, const DickeState& psi0, double t) {
  if (psi0.kind != DickeState::Kind::Pure)
    throw std::invalid_argument(
        "evolve_unitary: mixed-state input rejected, use evolve_lindblad");
  UnitaryPropagator prop(h);
  return DickeState::pure(psi0.basis, prop.apply(psi0.psi, t));
}

namespace {

struct LindbladRhs {
  const Matrix& h;
  // pre-scaled jump operators L_k = sqrt(rate_k) op_k and cached L_k^dag L_k
  std::vector<Matrix> l, ldl;

  LindbladRhs(const Matrix& h_in, const std::vector<Jump>& jumps) : h(h_in) {
    for (const auto& jump : jumps) {
      if (jump.rate < 0.0)
        throw std::invalid_argument("evolve_lindblad: negative jump rate");
      if (jump.rate == 0.0) continue;
      Matrix lk = std::sqrt(jump.rate) * jump.op;
      ldl.push_back(lk.adjoint() * lk);
      l.push_back(std::move(lk));
    }
  }

  Matrix operator()(const Matrix& rho) const {
    Matrix out = -kI * (h * rho - rho * h);
    for (size_t k = 0; k < l.size(); ++k) {
      out += l[k] * rho * l[k].adjoint();
      out -= 0.5 * (ldl[k] * rho + rho * ldl[k]);
    }
    return out;
  }
};

Matrix rk4_step(const LindbladRhs& f, const Matrix& rho, double h) {
  Matrix k1 = f(rho);
  Matrix k2 = f(rho + 0.5 * h * k1);
  Matrix k3 = f(rho + 0.5 * h * k2);
  Matrix k4 = f(rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

DickeState evolve_lindblad(const Matrix& h, const std::vector<Jump>& jumps,
                           const DickeState& rho0, double t, double dt_max) {
  if (t < 0.0) throw std::invalid_argument("evolve_lindblad: negative duration");
  if (dt_max <= 0.0) throw std::invalid_argument("evolve_lindblad: dt_max must be > 0");

  LindbladRhs rhs(h, jumps);
  Matrix rho = rho0.to_mixed().rho;
  if (t == 0.0) return DickeState{rho0.basis, DickeState::Kind::Mixed, Vector(), rho};

  constexpr double kTol = 1e-11;  // local error per step, relative to ||rho||=1
  double time = 0.0;
  double step = std::min(dt_max, t);
  int accepted = 0;

  while (time < t) {
    step = std::min(step, t - time);
    Matrix full = rk4_step(rhs, rho, step);
    Matrix half = rk4_step(rhs, rk4_step(rhs, rho, 0.5 * step), 0.5 * step);
    const double err = norm_inf(half - full) / 15.0;
    if (err <= kTol || step <= 1e-15 * t) {
      rho = std::move(half);
      time += step;
      ++accepted;
      if (err < 0.1 * kTol) step = std::min(2.0 * step, dt_max);
      if (accepted > 2000000)
        throw std::runtime_error("evolve_lindblad: step budget exhausted");
    } else {
      step *= 0.5;
    }
  }

  // hermitize against roundoff drift, then monitor positivity
  rho = 0.5 * (rho + rho.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
  const double min_eval = solver.eigenvalues().minCoeff();
  if (min_eval < -1e-8) {
    std::cerr << "evolve_lindblad: positivity violation, min eigenvalue "
              << min_eval << "\n";
  }
  return DickeState{rho0.basis, DickeState::Kind::Mixed, Vector(), std::move(rho)};
}

namespace {

double expect(const Matrix& op, const DickeState& state) {
  if (state.kind == DickeState::Kind::Pure)
    return std::real(Complex(state.psi.adjoint() * op * state.psi));
  return std::real((op * state.rho).trace());
}

}  // namespace

SpinMoments spin_moments(const DickeState& state) {
  const auto ops = build_collective_ops(state.basis);
  const Matrix* j[3] = {&ops.jx, &ops.jy, &ops.jz};

  SpinMoments out;
  for (int a = 0; a < 3; ++a) out.mean(a) = expect(*j[a], state);
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const Matrix sym = 0.5 * ((*j[a]) * (*j[b]) + (*j[b]) * (*j[a]));
      const double cov = expect(sym, state) - out.mean(a) * out.mean(b);
      out.covariance(a, b) = cov;
      out.covariance(b, a) = cov;
    }
  }
  return out;
}

SqueezingResult squeezing_parameter(const DickeState& state) {
  const auto m = spin_moments(state);
  const double n = state.basis.n_atoms;
  const double len = m.mean.norm();
  if (len < 1e-9 * 0.5 * n)
    throw std::invalid_argument(
        "squeezing_parameter: mean spin is zero, reference direction undefined");

  // orthonormal pair spanning the plane perpendicular to <J>
  const Eigen::Vector3d nhat = m.mean / len;
  Eigen::Vector3d seed = std::abs(nhat.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                  : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = nhat.cross(seed).normalized();
  const Eigen::Vector3d e2 = nhat.cross(e1);

  const double c11 = e1.dot(m.covariance * e1);
  const double c22 = e2.dot(m.covariance * e2);
  const double c12 = e1.dot(m.covariance * e2);
  const double disc = std::sqrt(0.25 * (c11 - c22) * (c11 - c22) + c12 * c12);
  const double var_min = 0.5 * (c11 + c22) - disc;

  SqueezingResult out;
  out.xi2_kitagawa = 4.0 * var_min / n;
  out.xi2_wineland = n * var_min / (len * len);
  return out;
}

}  // namespace cxyz::dicke
