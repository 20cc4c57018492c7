#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "h2e/errors.hpp"
#include "h2e/integrals.hpp"
#include "h2e/molecule.hpp"

namespace h2e {

struct SCFSettings {
  int max_iterations = 200;
  double energy_tolerance = 1e-10;   // |dE|, Hartree
  double density_tolerance = 1e-8;   // RMS of the density change
  double level_shift = 0.0;          // added to virtual orbital energies, Hartree
  double damping = 0.5;              // weight of the previous density once damping is on
  int oscillation_window = 5;        // consecutive sign flips of dE that switch damping on

  void validate() const {
    if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
    if (!(energy_tolerance > 0.0) || !(density_tolerance > 0.0))
      throw DomainError("SCF tolerances must be positive");
    if (!(level_shift >= 0.0)) throw DomainError("level shift must be >= 0");
    if (!(damping >= 0.0 && damping < 1.0)) throw DomainError("damping must be in [0, 1)");
  }
};

struct SCFIteration {
  int iteration = 0;
  double energy = 0.0;
  double delta_energy = 0.0;
  double rms_density_change = 0.0;
  bool damped = false;
};

struct SCFResult {
  Eigen::MatrixXd mo_coefficients;   // columns are MOs
  Eigen::VectorXd orbital_energies;  // occupied first, then by (shifted) energy
  double energy = 0.0;               // total, including nuclear repulsion
  int iterations = 0;
  bool converged = false;
  int n_occupied = 0;
  Eigen::MatrixXd density;  // AO basis, D = 2 C_occ C_occ^T
  Eigen::MatrixXd fock;     // built from `density`
  std::vector<SCFIteration> trace;
};

/// X = S^{-1/2}, so that X^T S X = 1.
inline Eigen::MatrixXd symmetric_orthogonalizer(const Eigen::MatrixXd& S,
                                                double threshold = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw LinearDependenceError("overlap diagonalization failed");
  const auto& lambda = es.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < threshold) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "overlap matrix is near singular (smallest eigenvalue %.3e)",
                  lambda.minCoeff());
    throw LinearDependenceError(buf);
  }
  return es.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

/// F = Hcore + sum_{ls} D_ls [ (mn|sl) - 1/2 (ml|sn) ].
inline Eigen::MatrixXd build_fock(const Eigen::MatrixXd& hcore, const Eigen::MatrixXd& D,
                                  const EriTensor& eri) {
  const Eigen::Index n = hcore.rows();
  Eigen::MatrixXd F = hcore;
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index v = 0; v <= m; ++v) {
      double g = 0.0;
      for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index s = 0; s < n; ++s) {
          const auto um = static_cast<std::size_t>(m), uv = static_cast<std::size_t>(v),
                     ul = static_cast<std::size_t>(l), us = static_cast<std::size_t>(s);
          g += D(l, s) * (eri(um, uv, us, ul) - 0.5 * eri(um, ul, us, uv));
        }
      F(m, v) += g;
      if (v != m) F(v, m) = F(m, v);
    }
  return F;
}

inline Eigen::MatrixXd density_from_coeffs(const Eigen::MatrixXd& C, int n_occupied_pairs) {
  if (n_occupied_pairs < 0 || n_occupied_pairs > C.cols())
    throw DomainError("occupied orbital count " + std::to_string(n_occupied_pairs) +
                      " exceeds " + std::to_string(C.cols()) + " orbitals");
  const auto occ = C.leftCols(n_occupied_pairs);
  return 2.0 * occ * occ.transpose();
}

namespace detail {

inline double scf_energy(const Eigen::MatrixXd& D, const Eigen::MatrixXd& hcore,
                         const Eigen::MatrixXd& F, double enuc) {
  return 0.5 * D.cwiseProduct(hcore + F).sum() + enuc;
}

struct OrbitalSolution {
  Eigen::MatrixXd C;
  Eigen::VectorXd eps;
};

/// Roothaan step: diagonalize F in the orthogonal basis. A level shift
/// raises the virtual space by `shift` without changing the fixed point.
inline OrbitalSolution diagonalize_fock(const Eigen::MatrixXd& F, const Eigen::MatrixXd& X,
                                        const Eigen::MatrixXd& S, const Eigen::MatrixXd& D,
                                        double shift) {
  Eigen::MatrixXd Fs = F;
  if (shift > 0.0) Fs += shift * (S - 0.5 * S * D * S);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * Fs * X);
  OrbitalSolution out{X * es.eigenvectors(), Eigen::VectorXd()};
  out.eps = (out.C.transpose() * F * out.C).diagonal();
  return out;
}

}  // namespace detail

/// Restricted closed-shell Hartree-Fock with a core-Hamiltonian guess.
/// Non-convergence is reported through `converged`, not thrown.
inline SCFResult run_rhf(const IntegralSet& ints, const Molecule& mol,
                         const SCFSettings& settings = {}) {
  settings.validate();
  const int nel = mol.n_electrons();
  if (nel % 2 != 0)
    throw UnsupportedError("restricted HF needs an even electron count, got " +
                           std::to_string(nel));
  const int nocc = nel / 2;
  if (nocc > static_cast<int>(ints.size()))
    throw ConfigurationError("more occupied orbitals than basis functions");

  const double enuc = nuclear_repulsion(mol);
  const Eigen::MatrixXd& S = ints.overlap;
  const Eigen::MatrixXd H = ints.core_hamiltonian();
  const Eigen::MatrixXd X = symmetric_orthogonalizer(S);

  SCFResult res;
  res.n_occupied = nocc;
  auto orbitals = detail::diagonalize_fock(H, X, S, Eigen::MatrixXd::Zero(H.rows(), H.cols()), 0.0);
  Eigen::MatrixXd D = density_from_coeffs(orbitals.C, nocc);

  double e_old = std::numeric_limits<double>::quiet_NaN();
  double de_prev = 0.0;
  int flips = 0;
  bool damping = false;

  for (int it = 1; it <= settings.max_iterations; ++it) {
    const Eigen::MatrixXd F = build_fock(H, D, ints.eri);
    const double e = detail::scf_energy(D, H, F, enuc);
    orbitals = detail::diagonalize_fock(F, X, S, D, settings.level_shift);
    const Eigen::MatrixXd d_new = density_from_coeffs(orbitals.C, nocc);

    const double de = std::isnan(e_old) ? e : e - e_old;
    const double rms = D.size() ? std::sqrt((d_new - D).squaredNorm() / D.size()) : 0.0;
    res.trace.push_back({it, e, de, rms, damping});
    res.iterations = it;

    if (it > 1 && std::abs(de) < settings.energy_tolerance &&
        rms < settings.density_tolerance) {
      res.converged = true;
      D = d_new;
      break;
    }

    if (it > 2 && de * de_prev < 0.0) {
      if (++flips >= settings.oscillation_window - 1) damping = true;
    } else {
      flips = 0;
    }
    de_prev = de;
    e_old = e;
    D = damping ? Eigen::MatrixXd((1.0 - settings.damping) * d_new + settings.damping * D)
                : d_new;
  }

  res.density = D;
  res.fock = build_fock(H, D, ints.eri);
  res.energy = detail::scf_energy(D, H, res.fock, enuc);
  res.mo_coefficients = orbitals.C;
  res.orbital_energies = orbitals.eps;
  return res;
}

/// Iteration log: iteration, E, dE, RMS dD.
inline void write_scf_trace(std::ostream& out, const SCFResult& res) {
  char buf[160];
  for (const auto& t : res.trace) {
    std::snprintf(buf, sizeof buf, "%4d %22.15f %12.4e %12.4e%s\n", t.iteration, t.energy,
                  t.delta_energy, t.rms_density_change, t.damped ? " damped" : "");
    out << buf;
  }
}

}  // namespace h2e
