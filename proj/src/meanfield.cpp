#include "cxyz/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cxyz::meanfield {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

BlochState::BlochState(const Vector3d& dir, double j)
    : direction(dir), magnitude(j) {
  if (j <= 0.0) throw std::invalid_argument("BlochState: magnitude must be > 0");
  const double n = direction.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw std::invalid_argument("BlochState: direction must be a unit vector");
  direction /= n;
}

BlochState BlochState::from_angles(double theta, double phi, double j) {
  return BlochState(Vector3d(std::sin(theta) * std::cos(phi),
                             std::sin(theta) * std::sin(phi), std::cos(theta)),
                    j);
}

double BlochState::theta() const {
  return std::acos(std::clamp(direction.z(), -1.0, 1.0));
}

double BlochState::phi() const {
  return std::atan2(direction.y(), direction.x());
}

double EOMSpec::chi_scale() const {
  const double dxy = std::abs(xyz.chi_x - xyz.chi_y);
  const double dyz = std::abs(xyz.chi_y - xyz.chi_z);
  const double dxz = std::abs(xyz.chi_x - xyz.chi_z);
  return std::max({dxy, dyz, dxz});
}

namespace {

// Superradiant XYZ torque; the chi_z gauge enters only through differences so
// adding c*(1,1,1) to the couplings leaves the flow untouched.
Vector3d resonant_torque(const EOMSpec& spec, const Vector3d& j) {
  const double dyz = spec.xyz.chi_y - spec.xyz.chi_z;
  const double dxz = spec.xyz.chi_x - spec.xyz.chi_z;
  const double dxy = spec.xyz.chi_x - spec.xyz.chi_y;
  const double g = spec.gamma_sr;
  Vector3d t(2.0 * dyz * j.y() * j.z() - g * j.x() * j.z(),
             -2.0 * dxz * j.x() * j.z() - g * j.y() * j.z(),
             2.0 * dxy * j.x() * j.y() + g * (j.x() * j.x() + j.y() * j.y()));
  if (spec.drive) t += spec.drive->rate * spec.drive->axis.cross(j);
  return t;
}

// Quadratic-form matrix of the instantaneous Hamiltonian in the rotating
// frame: exchange part chi_e (Jx^2 + Jy^2) plus the pair part chi_P along a
// twisting axis at equatorial angle -(delta t + phi_int)/2.
Eigen::Matrix3d rotating_quadratic_form(const EOMSpec& spec, double t) {
  const double chi_e = spec.chi_exchange();
  const double chi_pair = spec.chi_pair();
  const double psi = spec.time_dependent->delta * t + spec.time_dependent->phi_int;
  const double a = -0.5 * psi;
  const Vector3d u(std::cos(a), std::sin(a), 0.0);
  const Vector3d v(-std::sin(a), std::cos(a), 0.0);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = m(1, 1) = chi_e;
  m += chi_pair * (u * u.transpose() - v * v.transpose());
  return m;
}

Vector3d time_dependent_torque(const EOMSpec& spec, double t, const Vector3d& j) {
  const Eigen::Matrix3d a = rotating_quadratic_form(spec, t);
  Vector3d out = (2.0 * (a * j)).cross(j);
  const double g = spec.gamma_sr;
  if (g != 0.0) {
    out += Vector3d(-g * j.x() * j.z(), -g * j.y() * j.z(),
                    g * (j.x() * j.x() + j.y() * j.y()));
  }
  if (spec.drive) out += spec.drive->rate * spec.drive->axis.cross(j);
  return out;
}

}  // namespace

Vector3d torque(const EOMSpec& spec, const Vector3d& j) {
  if (!spec.resonant())
    throw std::invalid_argument(
        "torque: time-dependent spec; use integrate_time_dependent");
  return resonant_torque(spec, j);
}

Eigen::Matrix3d torque_jacobian(const EOMSpec& spec, const Vector3d& j) {
  if (!spec.resonant())
    throw std::invalid_argument("torque_jacobian: resonant specs only");
  const double dyz = spec.xyz.chi_y - spec.xyz.chi_z;
  const double dxz = spec.xyz.chi_x - spec.xyz.chi_z;
  const double dxy = spec.xyz.chi_x - spec.xyz.chi_y;
  const double g = spec.gamma_sr;

  Eigen::Matrix3d m;
  m << -g * j.z(), 2.0 * dyz * j.z(), 2.0 * dyz * j.y() - g * j.x(),
      -2.0 * dxz * j.z(), -g * j.z(), -2.0 * dxz * j.x() - g * j.y(),
      2.0 * dxy * j.y() + 2.0 * g * j.x(), 2.0 * dxy * j.x() + 2.0 * g * j.y(), 0.0;
  if (spec.drive) {
    const Vector3d& a = spec.drive->axis;
    Eigen::Matrix3d cross;
    cross << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
    m += spec.drive->rate * cross;
  }
  return m;
}

double energy(const EOMSpec& spec, const Vector3d& j) {
  double e = spec.xyz.chi_x * j.x() * j.x() + spec.xyz.chi_y * j.y() * j.y() +
             spec.xyz.chi_z * j.z() * j.z();
  if (spec.drive) e += spec.drive->rate * spec.drive->axis.dot(j);
  return e;
}

namespace {

// Dormand-Prince 5(4) pair
struct Rk45Tableau {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th), applied to k1..k6 and the FSAL stage k7
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <typename Rhs>
std::vector<TrajectoryPoint> integrate_adaptive(const Rhs& rhs,
                                                const Vector3d& y0,
                                                double duration, double tol,
                                                int n_samples, double rate_scale) {
  if (tol < 1e-13 || tol > 1e-6)
    throw std::invalid_argument("integrate: tol must lie in [1e-13, 1e-6]");
  if (duration < 0.0)
    throw std::invalid_argument("integrate: negative duration");

  std::vector<TrajectoryPoint> out;
  out.push_back({0.0, y0});
  if (duration == 0.0) return out;

  double next_sample = duration;
  int sample_index = 1;
  if (n_samples > 0) next_sample = duration / n_samples;

  using T = Rk45Tableau;
  Vector3d y = y0;
  double t = 0.0;
  Vector3d k1 = rhs(t, y);
  double h = rate_scale > 0.0 ? 0.01 / rate_scale : duration;
  h = std::min(h, duration);

  const double h_min = 1e-14 * duration;
  long steps = 0;
  while (t < duration) {
    bool clipped = false;
    double target = std::min(duration, next_sample);
    if (t + h >= target - 1e-15 * duration) {
      h = target - t;
      clipped = true;
    }

    const Vector3d k2 = rhs(t + T::c2 * h, y + h * (T::a21 * k1));
    const Vector3d k3 = rhs(t + T::c3 * h, y + h * (T::a31 * k1 + T::a32 * k2));
    const Vector3d k4 =
        rhs(t + T::c4 * h, y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const Vector3d k5 =
        rhs(t + T::c5 * h,
            y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const Vector3d k6 =
        rhs(t + h, y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                            T::a64 * k4 + T::a65 * k5));
    const Vector3d y5 = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 +
                                 T::b5 * k5 + T::b6 * k6);
    const Vector3d k7 = rhs(t + h, y5);
    const Vector3d err_vec = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 +
                                  T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double scale =
          tol + tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      const double r = err_vec(i) / scale;
      err += r * r;
    }
    err = std::sqrt(err / 3.0);

    if (err <= 1.0) {
      t = clipped ? target : t + h;  // land on sample times exactly
      y = y5;
      k1 = k7;  // FSAL
      if (n_samples == 0) {
        out.push_back({t, y});
      } else if (clipped && t >= next_sample - 1e-15 * duration) {
        out.push_back({t, y});
        ++sample_index;
        next_sample = duration * sample_index / n_samples;
      }
    }

    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * factor, duration);
    if (h < h_min)
      throw IntegrationError("integrate: step size underflow", t, y);
    if (++steps > 50000000)
      throw IntegrationError("integrate: step budget exhausted", t, y);
  }

  if (n_samples == 0 && out.back().t < duration) out.push_back({duration, y});
  return out;
}

}  // namespace

std::vector<TrajectoryPoint> integrate(const EOMSpec& spec, const BlochState& j0,
                                       double duration, double tol,
                                       int n_samples) {
  if (!spec.resonant())
    throw std::invalid_argument(
        "integrate: time-dependent spec; use integrate_time_dependent");
  auto rhs = [&spec](double, const Vector3d& j) {
    return resonant_torque(spec, j);
  };
  const double rate =
      (2.0 * spec.chi_scale() + std::abs(spec.gamma_sr)) * 2.0 * j0.magnitude +
      (spec.drive ? std::abs(spec.drive->rate) : 0.0);
  return integrate_adaptive(rhs, j0.vector(), duration, tol, n_samples, rate);
}

std::vector<TrajectoryPoint> integrate_time_dependent(const EOMSpec& spec,
                                                      const BlochState& j0,
                                                      double duration, double tol,
                                                      int n_samples) {
  if (spec.resonant())
    throw std::invalid_argument(
        "integrate_time_dependent: spec carries no time-dependent terms");
  auto rhs = [&spec](double t, const Vector3d& j) {
    return time_dependent_torque(spec, t, j);
  };
  const double rate =
      (2.0 * spec.chi_scale() + std::abs(spec.gamma_sr)) * 2.0 * j0.magnitude +
      std::abs(spec.time_dependent->delta) +
      (spec.drive ? std::abs(spec.drive->rate) : 0.0);
  return integrate_adaptive(rhs, j0.vector(), duration, tol, n_samples, rate);
}

namespace {

std::array<std::complex<double>, 2> eig2(const Eigen::Matrix2d& m) {
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const std::complex<double> disc =
      std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

void tangent_basis(const Vector3d& n, Vector3d& e1, Vector3d& e2) {
  const Vector3d seed =
      std::abs(n.z()) < 0.9 ? Vector3d::UnitZ() : Vector3d::UnitX();
  e1 = n.cross(seed).normalized();
  e2 = n.cross(e1);
}

Eigen::Matrix2d tangent_jacobian(const EOMSpec& spec, const Vector3d& point) {
  const Eigen::Matrix3d m = torque_jacobian(spec, point);
  Vector3d e1, e2;
  tangent_basis(point.normalized(), e1, e2);
  Eigen::Matrix2d m2;
  m2 << e1.dot(m * e1), e1.dot(m * e2), e2.dot(m * e1), e2.dot(m * e2);
  return m2;
}

double torque_norm_scale(const EOMSpec& spec, double j) {
  return (2.0 * spec.chi_scale() + std::abs(spec.gamma_sr)) * j * j +
         (spec.drive ? std::abs(spec.drive->rate) * j : 0.0);
}

Stability classify(const std::array<std::complex<double>, 2>& eig, double scale) {
  const double tol = 1e-9 * std::max(scale, 1e-300);
  const double re0 = eig[0].real(), im0 = eig[0].imag();
  const double re1 = eig[1].real(), im1 = eig[1].imag();
  const bool zero = std::abs(eig[0]) < tol && std::abs(eig[1]) < tol;
  if (zero) return Stability::Degenerate;
  const bool real_pair = std::abs(im0) < tol && std::abs(im1) < tol;
  if (real_pair && re0 * re1 < 0.0) return Stability::Saddle;
  const bool imag_pair = std::abs(re0) < tol && std::abs(re1) < tol;
  if (imag_pair) return Stability::StableCenter;
  if (std::max(re0, re1) > tol) return Stability::UnstableFocus;
  if (std::max(re0, re1) < -tol) return Stability::StableFocus;
  return Stability::Degenerate;
}

FixedPointReport make_report(const EOMSpec& spec, const Vector3d& dir,
                             double spin_j, const std::string& note = "") {
  BlochState loc(dir, spin_j);
  const auto eig = eig2(tangent_jacobian(spec, loc.vector()));
  const double scale = 2.0 * spec.chi_scale() * spin_j +
                       (spec.drive ? std::abs(spec.drive->rate) : 0.0) +
                       std::abs(spec.gamma_sr) * spin_j;
  FixedPointReport report{loc, classify(eig, scale), eig, note};
  return report;
}

bool nearly_equal(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(scale, 1e-300);
}

std::vector<FixedPointReport> fixed_points_xyz(const EOMSpec& spec,
                                               double spin_j) {
  const double cx = spec.xyz.chi_x, cy = spec.xyz.chi_y, cz = spec.xyz.chi_z;
  const double scale = std::max({std::abs(cx), std::abs(cy), std::abs(cz)});
  const bool deg_xy = nearly_equal(cx, cy, scale);
  const bool deg_yz = nearly_equal(cy, cz, scale);
  const bool deg_xz = nearly_equal(cx, cz, scale);

  std::vector<FixedPointReport> out;
  if (deg_xy && deg_yz) {
    for (const Vector3d& d :
         {Vector3d::UnitX().eval(), (-Vector3d::UnitX()).eval(),
          Vector3d::UnitY().eval(), (-Vector3d::UnitY()).eval(),
          Vector3d::UnitZ().eval(), (-Vector3d::UnitZ()).eval()}) {
      auto r = make_report(spec, d, spin_j,
                           "isotropic couplings: every point is fixed");
      r.classification = Stability::Degenerate;
      out.push_back(std::move(r));
    }
    return out;
  }

  auto circle_note = [&](int axis) -> std::string {
    // axis lies on a great circle of fixed points when the two couplings of
    // the orthogonal plane through it are degenerate
    if (axis != 2 && deg_xy) return "on great circle of fixed points (Jz = 0)";
    if (axis != 0 && deg_yz) return "on great circle of fixed points (Jx = 0)";
    if (axis != 1 && deg_xz) return "on great circle of fixed points (Jy = 0)";
    return "";
  };

  const Vector3d axes[3] = {Vector3d::UnitX(), Vector3d::UnitY(),
                            Vector3d::UnitZ()};
  for (int a = 0; a < 3; ++a) {
    for (double s : {1.0, -1.0}) {
      out.push_back(make_report(spec, s * axes[a], spin_j, circle_note(a)));
    }
  }
  return out;
}

bool is_lmg_like(const EOMSpec& spec) {
  if (!spec.drive || spec.gamma_sr != 0.0) return false;
  const double scale =
      std::max({std::abs(spec.xyz.chi_x), std::abs(spec.xyz.chi_y),
                std::abs(spec.xyz.chi_z)});
  const bool chi_z_only = nearly_equal(spec.xyz.chi_x, spec.xyz.chi_y, scale);
  const Vector3d a = spec.drive->axis;
  return chi_z_only && std::abs(std::abs(a.y()) - 1.0) < 1e-12;
}

std::vector<FixedPointReport> fixed_points_lmg(const EOMSpec& spec,
                                               double spin_j) {
  // gauge-reduced twisting strength of chi Jz^2 with transverse drive delta Jy
  const double chi = spec.xyz.chi_z - spec.xyz.chi_x;
  const double delta = spec.drive->rate * spec.drive->axis.y();
  std::vector<FixedPointReport> out;
  out.push_back(make_report(spec, Vector3d::UnitY(), spin_j));
  out.push_back(make_report(spec, -Vector3d::UnitY(), spin_j));

  const double jy = delta / (2.0 * chi);  // = J * delta / (chi N)
  if (chi != 0.0 && std::abs(jy) < spin_j) {
    const double jz = std::sqrt(spin_j * spin_j - jy * jy);
    for (double s : {1.0, -1.0}) {
      const Vector3d dir = Vector3d(0.0, jy, s * jz) / spin_j;
      out.push_back(make_report(spec, dir, spin_j,
                                "off-axis point at Jy/J = delta/(chi N)"));
    }
  }
  return out;
}

std::vector<FixedPointReport> fixed_points_numeric(const EOMSpec& spec,
                                                   double spin_j) {
  std::vector<Vector3d> seeds = {Vector3d::UnitX(),  -Vector3d::UnitX(),
                                 Vector3d::UnitY(),  -Vector3d::UnitY(),
                                 Vector3d::UnitZ(),  -Vector3d::UnitZ()};
  if (spec.drive && std::abs(spec.xyz.chi_z - spec.xyz.chi_x) > 0.0) {
    const double jy =
        spec.drive->rate * spec.drive->axis.y() /
        (2.0 * (spec.xyz.chi_z - spec.xyz.chi_x));
    if (std::abs(jy) < spin_j) {
      const double jz = std::sqrt(spin_j * spin_j - jy * jy);
      seeds.push_back(Vector3d(0.0, jy, jz) / spin_j);
      seeds.push_back(Vector3d(0.0, jy, -jz) / spin_j);
    }
  }

  const double t_scale = torque_norm_scale(spec, spin_j);
  std::vector<FixedPointReport> out;
  for (const Vector3d& seed : seeds) {
    Vector3d n = seed.normalized();
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const Vector3d p = spin_j * n;
      const Vector3d t = resonant_torque(spec, p);
      if (t.norm() <= 1e-12 * t_scale) {
        converged = true;
        break;
      }
      Vector3d e1, e2;
      tangent_basis(n, e1, e2);
      const Eigen::Matrix2d m2 = tangent_jacobian(spec, p);
      const Eigen::Vector2d t2(e1.dot(t), e2.dot(t));
      if (std::abs(m2.determinant()) < 1e-30 * t_scale * t_scale) break;
      const Eigen::Vector2d step = m2.partialPivLu().solve(-t2);
      n = (n + (step(0) * e1 + step(1) * e2) / spin_j).normalized();
    }
    if (!converged) continue;
    const bool duplicate =
        std::any_of(out.begin(), out.end(), [&](const FixedPointReport& r) {
          return (r.location.direction - n).norm() < 1e-6;
        });
    if (!duplicate) out.push_back(make_report(spec, n, spin_j, "numerically refined"));
  }
  return out;
}

}  // namespace

std::vector<FixedPointReport> fixed_points(const EOMSpec& spec, double spin_j) {
  if (!spec.resonant())
    throw std::invalid_argument("fixed_points: resonant specs only");
  if (spec.gamma_sr == 0.0 && !spec.drive) return fixed_points_xyz(spec, spin_j);
  if (is_lmg_like(spec)) return fixed_points_lmg(spec, spin_j);
  return fixed_points_numeric(spec, spin_j);
}

std::array<std::complex<double>, 2> jacobian_eigenvalues(
    const EOMSpec& spec, const BlochState& point) {
  const Vector3d p = point.vector();
  const double t_norm = resonant_torque(spec, p).norm();
  const double scale = torque_norm_scale(spec, point.magnitude);
  if (t_norm > 1e-6 * std::max(scale, 1e-300))
    throw std::invalid_argument(
        "jacobian_eigenvalues: not a fixed point, ||T|| = " +
        std::to_string(t_norm));
  return eig2(tangent_jacobian(spec, p));
}

namespace {

std::vector<std::pair<double, double>> grid_nodes(const FlowGrid& grid) {
  std::vector<std::pair<double, double>> nodes;
  const int res = grid.resolution;
  switch (grid.projection) {
    case Projection::SaddleWindow: {
      for (int i = 0; i < res; ++i) {
        for (int k = 0; k < res; ++k) {
          const double ft = res > 1 ? -1.0 + 2.0 * i / (res - 1) : 0.0;
          const double fp = res > 1 ? -1.0 + 2.0 * k / (res - 1) : 0.0;
          nodes.emplace_back(grid.center_theta + grid.halfwidth * ft,
                             grid.center_phi + grid.halfwidth * fp);
        }
      }
      break;
    }
    case Projection::Equirect: {
      const int nphi = 2 * res;
      for (int i = 0; i < res; ++i) {
        const double theta = kPi * (i + 0.5) / res;
        for (int k = 0; k < nphi; ++k) {
          const double phi = -kPi + 2.0 * kPi * (k + 0.5) / nphi;
          nodes.emplace_back(theta, phi);
        }
      }
      break;
    }
    case Projection::PolarSouth:
    case Projection::PolarNorth: {
      // square grid on the unit disk, radial coordinate linear in polar angle
      const bool south = grid.projection == Projection::PolarSouth;
      for (int i = -res; i <= res; ++i) {
        for (int k = -res; k <= res; ++k) {
          const double x = static_cast<double>(k) / res;
          const double y = static_cast<double>(i) / res;
          const double rho = std::hypot(x, y);
          if (rho > 1.0 + 1e-12) continue;
          const double theta =
              south ? kPi - 0.5 * kPi * rho : 0.5 * kPi * rho;
          nodes.emplace_back(theta, std::atan2(y, x));
        }
      }
      break;
    }
  }
  return nodes;
}

FlowSample finish_sample(double theta_i, double phi_i, const Vector3d& ji,
                         const Vector3d& jf, double dt) {
  FlowSample s;
  s.theta_i = theta_i;
  s.phi_i = phi_i;
  s.j_initial = ji;
  s.j_final = jf;
  s.torque = (jf - ji) / dt;
  const Vector3d nf = jf.normalized();
  s.dtheta = std::acos(std::clamp(nf.z(), -1.0, 1.0)) - theta_i;
  s.dphi = wrap_angle(std::atan2(nf.y(), nf.x()) - phi_i);
  s.dt = dt;
  return s;
}

}  // namespace

std::vector<FlowSample> flow_map(const EOMSpec& spec, const FlowGrid& grid,
                                 double dt, int n_atoms, double tol) {
  const double j = 0.5 * n_atoms;
  const double chi_n_dt = spec.chi_scale() * n_atoms * dt;
  if (chi_n_dt >= 0.5)
    throw std::invalid_argument("flow_map: chi N dt must stay below 0.5");
  if (chi_n_dt > 0.1)
    std::cerr << "flow_map: chi N dt = " << chi_n_dt
              << " exceeds the short-time regime (0.1)\n";

  std::vector<FlowSample> out;
  for (const auto& [theta, phi] : grid_nodes(grid)) {
    const BlochState j0 = BlochState::from_angles(theta, phi, j);
    const auto traj = spec.resonant()
                          ? integrate(spec, j0, dt, tol, 1)
                          : integrate_time_dependent(spec, j0, dt, tol, 1);
    out.push_back(finish_sample(theta, phi, j0.vector(), traj.back().j, dt));
  }
  return out;
}

std::vector<FlowSample> superradiance_subtract(
    const std::vector<FlowSample>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("superradiance_subtract: need at least 2 samples");
  double mean_dz = 0.0;
  for (const auto& s : samples) mean_dz += s.j_final.z() - s.j_initial.z();
  mean_dz /= static_cast<double>(samples.size());

  std::vector<FlowSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    Vector3d jf = s.j_final;
    jf.z() -= mean_dz;
    out.push_back(finish_sample(s.theta_i, s.phi_i, s.j_initial, jf, s.dt));
  }
  return out;
}

HPCoefficients hp_linearize(const EOMSpec& spec, const BlochState& point) {
  if (!spec.resonant())
    throw std::invalid_argument("hp_linearize: resonant specs only");
  const double sy = point.direction.y();
  if (std::abs(std::abs(sy) - 1.0) > 1e-9)
    throw std::invalid_argument("hp_linearize: expansion point must be +/-y");

  const auto eig = jacobian_eigenvalues(spec, point);
  const double scale = 2.0 * spec.chi_scale() * point.magnitude;
  const double tol = 1e-9 * std::max(scale, 1e-300);
  const bool saddle = std::abs(eig[0].imag()) < tol &&
                      std::abs(eig[1].imag()) < tol &&
                      eig[0].real() * eig[1].real() < 0.0;
  if (!saddle)
    throw std::invalid_argument("hp_linearize: point is not a saddle");

  const double j = point.magnitude;
  const double s = sy > 0.0 ? 1.0 : -1.0;
  HPCoefficients out;
  out.c_dd = 0.5 * j * (spec.xyz.chi_z - spec.xyz.chi_x);
  out.c_aa = out.c_dd;
  out.c_da = j * (spec.xyz.chi_x + spec.xyz.chi_z - 2.0 * spec.xyz.chi_y);
  if (spec.drive) out.c_da -= s * spec.drive->rate * spec.drive->axis.y();
  return out;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::StableCenter: return "stable-center";
    case Stability::Saddle: return "saddle";
    case Stability::Degenerate: return "degenerate";
    case Stability::StableFocus: return "stable-focus";
    case Stability::UnstableFocus: return "unstable-focus";
  }
  return "unknown";
}

}  // namespace cxyz::meanfield
