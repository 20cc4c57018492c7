#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "h2e/errors.hpp"

// Two-qubit spin correlations and the CHSH inequality.
//
// Qubit 1 belongs to the first party (settings a, d), qubit 2 to the second
// (settings b, c). Basis order is |q1 q2> with 0 = spin up, so index = 2 q1 + q2.

namespace h2e::bell {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;

class UnitVector3 {
 public:
  UnitVector3() = default;
  /// Throws DomainError unless |(x, y, z)| = 1 within 1e-12.
  UnitVector3(double x, double y, double z) : v_(x, y, z) {
    if (!v_.allFinite() || std::abs(v_.norm() - 1.0) > 1e-12)
      throw DomainError("measurement direction is not a unit vector");
  }
  static UnitVector3 normalized(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero vector");
    const Eigen::Vector3d u = v / n;
    return {u.x(), u.y(), u.z()};
  }
  static UnitVector3 spherical(double theta, double phi) {
    return normalized({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta)});
  }

  const Eigen::Vector3d& vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }

 private:
  Eigen::Vector3d v_{0.0, 0.0, 1.0};
};

inline const std::array<Eigen::Matrix2cd, 3>& pauli() {
  static const std::array<Eigen::Matrix2cd, 3> s = [] {
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, cplx(0, -1), cplx(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

/// sigma . v
inline Eigen::Matrix2cd spin_observable(const UnitVector3& v) {
  const auto& s = pauli();
  return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

class TwoQubitState {
 public:
  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  explicit TwoQubitState(const Eigen::Matrix4cd& rho) : rho_(rho) {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw DomainError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - cplx(1.0)) > 1e-12)
      throw DomainError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw DomainError("density matrix is not positive semidefinite");
  }

  static TwoQubitState pure(const Eigen::Vector4cd& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw DomainError("zero state vector");
    const Eigen::Vector4cd u = psi / n;
    Eigen::Matrix4cd rho = u * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return TwoQubitState(rho);
  }

  const Eigen::Matrix4cd& rho() const noexcept { return rho_; }

 private:
  Eigen::Matrix4cd rho_;
};

inline Spinor spin_up() { return Spinor(1.0, 0.0); }
inline Spinor spin_down() { return Spinor(0.0, 1.0); }

inline Eigen::Vector4cd product_vector(const Spinor& q1, const Spinor& q2) {
  Eigen::Vector4cd v;
  v << q1(0) * q2(0), q1(0) * q2(1), q1(1) * q2(0), q1(1) * q2(1);
  return v;
}

/// (|01> - |10>) / sqrt(2)
inline TwoQubitState singlet() {
  Eigen::Vector4cd v(0.0, 1.0, -1.0, 0.0);
  return TwoQubitState::pure(v / std::numbers::sqrt2);
}

/// |up down>, the spin content of a closed-shell determinant.
inline TwoQubitState product_updown() {
  return TwoQubitState::pure(product_vector(spin_up(), spin_down()));
}

inline TwoQubitState maximally_mixed() {
  return TwoQubitState(Eigen::Matrix4cd::Identity() * 0.25);
}

/// Large-R limit of the H2 ground state,
///   1/2 (g(1)g(2) + u(1)u(2)) (alpha(1)beta(2) - beta(1)alpha(2)),
/// split into a spatial factor and a spin factor. The spatial factor is
/// given as its coefficient matrix over the orthonormal pair (g, u).
struct DissociationState {
  Eigen::Matrix2d spatial;
  TwoQubitState spin;
};

inline DissociationState dissociation_state() {
  Eigen::Matrix2d spatial = Eigen::Matrix2d::Identity() / std::numbers::sqrt2;
  const Eigen::Vector4cd spin =
      (product_vector(spin_up(), spin_down()) - product_vector(spin_down(), spin_up())) /
      std::numbers::sqrt2;
  return {spatial, TwoQubitState::pure(spin)};
}

inline TwoQubitState dissociation_spin_state() { return dissociation_state().spin; }

inline void require_normalized(const Spinor& s) {
  if (std::abs(s.norm() - 1.0) > 1e-12) throw DomainError("spinor is not normalized");
}

/// <s| sigma.v |s>
inline double spin_expectation(const Spinor& s, const UnitVector3& v) {
  require_normalized(s);
  return (s.adjoint() * spin_observable(v) * s)(0).real();
}

/// Single-determinant mean value: <alpha|sigma.a|alpha> <beta|sigma.b|beta>.
inline double mean_product(const Spinor& alpha, const Spinor& beta, const UnitVector3& a,
                           const UnitVector3& b) {
  return spin_expectation(alpha, a) * spin_expectation(beta, b);
}

/// Symmetrized two-determinant mean value:
///   1/2 [<alpha|sigma.a|alpha><beta|sigma.b|beta> + <alpha|sigma.b|alpha><beta|sigma.a|beta>].
inline double mean_symmetrized(const Spinor& alpha, const Spinor& beta, const UnitVector3& a,
                               const UnitVector3& b) {
  return 0.5 * (spin_expectation(alpha, a) * spin_expectation(beta, b) +
                spin_expectation(alpha, b) * spin_expectation(beta, a));
}

/// E(u, w) = Tr[rho (sigma.u) x (sigma.w)], u on qubit 1.
inline double correlator(const TwoQubitState& state, const UnitVector3& u, const UnitVector3& w) {
  return (state.rho() * kron(spin_observable(u), spin_observable(w))).trace().real();
}

struct MeasurementSettings {
  UnitVector3 a, d;  // first party
  UnitVector3 b, c;  // second party
};

/// E(a,b) + E(d,b) + E(d,c) - E(a,c) for any correlation function E(first, second).
template <class Correlation>
double chsh_combination(Correlation&& E, const MeasurementSettings& s) {
  return E(s.a, s.b) + E(s.d, s.b) + E(s.d, s.c) - E(s.a, s.c);
}

inline double chsh_value(const TwoQubitState& state, const MeasurementSettings& s) {
  return chsh_combination(
      [&](const UnitVector3& u, const UnitVector3& w) { return correlator(state, u, w); }, s);
}

/// |E(a,b) - E(a,c)| + |E(d,b) + E(d,c)|
inline double chsh_value_abs(const TwoQubitState& state, const MeasurementSettings& s) {
  return std::abs(correlator(state, s.a, s.b) - correlator(state, s.a, s.c)) +
         std::abs(correlator(state, s.d, s.b) + correlator(state, s.d, s.c));
}

/// The textbook optimal settings for the singlet: a = z, d = x,
/// b = -(z + x)/sqrt2, c = (z - x)/sqrt2.
inline MeasurementSettings textbook_settings() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {UnitVector3(0, 0, 1), UnitVector3(1, 0, 0), UnitVector3(-r, 0, -r),
          UnitVector3(-r, 0, r)};
}

/// T_ij = Tr[rho sigma_i x sigma_j].
inline Eigen::Matrix3d correlation_tensor(const TwoQubitState& state) {
  Eigen::Matrix3d t;
  const auto& s = pauli();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (state.rho() * kron(s[i], s[j])).trace().real();
  return t;
}

/// Maximum CHSH value over all settings: 2 sqrt(m1 + m2), m1 >= m2 the two
/// largest eigenvalues of T^T T.
inline double chsh_max_closed_form(const TwoQubitState& state) {
  const Eigen::Matrix3d t = correlation_tensor(state);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t, Eigen::EigenvaluesOnly);
  const auto& m = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, m(2) + m(1)));
}

inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

struct CHSHReport {
  double value = 0.0;
  MeasurementSettings settings;
  bool violated = false;
};

inline CHSHReport make_chsh_report(const TwoQubitState& state, const MeasurementSettings& s) {
  CHSHReport r{chsh_value(state, s), s, false};
  if (std::abs(r.value) > kTsirelsonBound + 1e-9)
    throw ConsistencyError("CHSH value exceeds the Tsirelson bound");
  r.violated = r.value > 2.0 + 1e-9;
  return r;
}

namespace detail {

struct AliceAngles {
  std::array<double, 4> v{};  // theta_a, phi_a, theta_d, phi_d
};

/// For fixed first-party settings the CHSH sum is linear in b and in c, so
/// the second party's best unit vectors are the normalized coefficients.
inline MeasurementSettings complete_settings(const Eigen::Matrix3d& t, const AliceAngles& ang) {
  const auto a = UnitVector3::spherical(ang.v[0], ang.v[1]);
  const auto d = UnitVector3::spherical(ang.v[2], ang.v[3]);
  const Eigen::Vector3d vb = t.transpose() * (a.vec() + d.vec());
  const Eigen::Vector3d vc = t.transpose() * (d.vec() - a.vec());
  const auto pick = [](const Eigen::Vector3d& v) {
    return v.norm() > 1e-300 ? UnitVector3::normalized(v) : UnitVector3(0, 0, 1);
  };
  return {a, d, pick(vb), pick(vc)};
}

inline double tensor_chsh(const Eigen::Matrix3d& t, const MeasurementSettings& s) {
  return chsh_combination(
      [&t](const UnitVector3& u, const UnitVector3& w) { return u.vec().dot(t * w.vec()); }, s);
}

inline std::vector<std::pair<double, double>> sphere_mesh(double step) {
  std::vector<std::pair<double, double>> out;
  const int nt = std::max(1, static_cast<int>(std::lround(std::numbers::pi / step)));
  const int np = std::max(1, static_cast<int>(std::lround(2.0 * std::numbers::pi / step)));
  for (int i = 0; i <= nt; ++i) {
    const double theta = std::numbers::pi * i / nt;
    const bool pole = i == 0 || i == nt;
    for (int j = 0; j < (pole ? 1 : np); ++j) out.emplace_back(theta, 2.0 * std::numbers::pi * j / np);
  }
  return out;
}

}  // namespace detail

/// Numerical CHSH maximum: a coarse mesh over the first party's two
/// directions (second party optimal for each), then coordinate descent on
/// the four spherical angles with the step halved down to
/// `resolution_deg`. The returned value is recomputed from the density
/// matrix at the reported settings.
inline CHSHReport chsh_max_grid(const TwoQubitState& state, double resolution_deg = 1.0,
                                double coarse_mesh_deg = 12.0, int sweeps_per_level = 50,
                                int n_starts = 8) {
  if (!(resolution_deg > 0.0) || !(coarse_mesh_deg > 0.0))
    throw DomainError("angular resolution must be positive");
  constexpr double deg = std::numbers::pi / 180.0;
  const Eigen::Matrix3d t = correlation_tensor(state);
  const auto mesh = detail::sphere_mesh(coarse_mesh_deg * deg);

  std::vector<std::pair<double, detail::AliceAngles>> starts;
  for (const auto& [ta, pa] : mesh)
    for (const auto& [td, pd] : mesh) {
      detail::AliceAngles ang{{ta, pa, td, pd}};
      starts.emplace_back(detail::tensor_chsh(t, detail::complete_settings(t, ang)), ang);
    }
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(n_starts), starts.size());
  std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(keep), starts.end(),
                    [](const auto& x, const auto& y) { return x.first > y.first; });

  double best_value = -1e300;
  detail::AliceAngles best;
  for (std::size_t s = 0; s < keep; ++s) {
    auto [value, ang] = starts[s];
    for (double step = coarse_mesh_deg * deg;; step *= 0.5) {
      for (int sweep = 0; sweep < sweeps_per_level; ++sweep) {
        bool improved = false;
        for (std::size_t k = 0; k < 4; ++k)
          for (double dir : {1.0, -1.0}) {
            auto trial = ang;
            trial.v[k] += dir * step;
            const double v = detail::tensor_chsh(t, detail::complete_settings(t, trial));
            if (v > value + 1e-15) {
              value = v;
              ang = trial;
              improved = true;
            }
          }
        if (!improved) break;
      }
      if (step <= resolution_deg * deg) break;
    }
    if (value > best_value) {
      best_value = value;
      best = ang;
    }
  }
  return make_chsh_report(state, detail::complete_settings(t, best));
}

}  // namespace h2e::bell
