#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "h2e/errors.hpp"
#include "h2e/fci.hpp"
#include "h2e/scf.hpp"

namespace h2e {

/// Spin-summed one-particle density matrix in the MO basis.
struct OPDM {
  Eigen::MatrixXd gamma;
};

/// Natural-orbital occupations n_k in [0, 2], descending.
struct NaturalOccupations {
  Eigen::VectorXd n;
};

/// gamma_pq = sum_sigma <Psi| a^dagger_{p sigma} a_{q sigma} |Psi>.
inline OPDM one_particle_density(const CIResult& ci) {
  const auto& basis = ci.basis;
  const int k = basis.orbitals();
  const auto& c = ci.coefficients;
  OPDM out{Eigen::MatrixXd::Zero(k, k)};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double ci_i = c(static_cast<Eigen::Index>(i));
    if (ci_i == 0.0) continue;
    const std::uint64_t occ = basis.spin_orbitals(basis[i]);
    for (int q : detail::set_bits(occ)) {
      const int spin = q / k;
      for (int porb = 0; porb < k; ++porb) {
        const int p = spin * k + porb;
        if (p != q && ((occ >> p) & 1)) continue;
        const std::uint64_t target = (occ & ~(std::uint64_t{1} << q)) | (std::uint64_t{1} << p);
        const Determinant d{target & ((std::uint64_t{1} << k) - 1), target >> k};
        const std::size_t j = basis.index_of(d);
        if (j == basis.size()) continue;
        out.gamma(porb, q % k) +=
            detail::excitation_phase(occ, q, p) * c(static_cast<Eigen::Index>(j)) * ci_i;
      }
    }
  }
  return out;
}

inline NaturalOccupations natural_occupations(const OPDM& opdm, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(opdm.gamma, Eigen::EigenvaluesOnly);
  Eigen::VectorXd n = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    if (n(i) < -tol || n(i) > 2.0 + tol)
      throw ConsistencyError("natural occupation " + std::to_string(n(i)) +
                             " outside [0, 2]");
    n(i) = std::clamp(n(i), 0.0, 2.0);
  }
  return {n};
}

/// S = -sum_k (n_k/2) log2(n_k/2), bits; 0 log 0 = 0.
inline double von_neumann_entropy(const NaturalOccupations& occ) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < occ.n.size(); ++i) {
    const double x = 0.5 * occ.n(i);
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

/// E_corr = E_HF - E_FCI (non-negative for a variational pair).
inline double correlation_energy(double e_hf, double e_fci, double tol = 1e-9) {
  const double d = e_hf - e_fci;
  if (d < -tol)
    throw VariationalViolation("E_FCI exceeds E_HF by " + std::to_string(-d) + " Hartree");
  return d;
}

/// Orbital energies and Coulomb/exchange integrals of the two lowest MOs.
struct MinimalBasisInputs {
  double eps1 = 0.0, eps2 = 0.0;
  double j11 = 0.0, j22 = 0.0, j12 = 0.0;
  double k12 = 0.0;
};

inline MinimalBasisInputs minimal_basis_inputs(const SCFResult& scf, const MOIntegrals& mo) {
  if (mo.size() < 2) throw DomainError("closed-form correlation needs two orbitals");
  return {scf.orbital_energies(0), scf.orbital_energies(1), mo.eri(0, 0, 0, 0),
          mo.eri(1, 1, 1, 1),      mo.eri(0, 0, 1, 1),      mo.eri(0, 1, 0, 1)};
}

/// Two-configuration result: the doubly excited determinant sits 2*delta
/// above the reference and couples to it through K12.
struct MinimalBasisCorrelation {
  double delta = 0.0;
  double e_corr = 0.0;  // delta - sqrt(delta^2 + K12^2), non-positive
};

inline MinimalBasisCorrelation minimal_basis_corr(const MinimalBasisInputs& in) {
  const double delta =
      0.5 * (2.0 * (in.eps2 - in.eps1) + in.j11 + in.j22 - 4.0 * in.j12 + 2.0 * in.k12);
  return {delta, delta - std::sqrt(delta * delta + in.k12 * in.k12)};
}

/// Scales the entropy curve so it meets the correlation energy at the
/// reference point (default: the last, largest-R point).
inline std::vector<double> rescale_entropy(std::span<const double> entropy,
                                           std::span<const double> e_corr,
                                           std::optional<std::size_t> reference = std::nullopt) {
  if (entropy.size() != e_corr.size()) throw DomainError("curve columns differ in length");
  if (entropy.empty()) return {};
  const std::size_t ref = reference.value_or(entropy.size() - 1);
  if (ref >= entropy.size()) throw DomainError("rescaling reference out of range");
  if (!(entropy[ref] > 0.0)) throw DomainError("cannot rescale: entropy at reference is zero");
  const double factor = e_corr[ref] / entropy[ref];
  std::vector<double> out(entropy.size());
  for (std::size_t i = 0; i < entropy.size(); ++i) out[i] = entropy[i] * factor;
  out[ref] = e_corr[ref];
  return out;
}

struct CorrelationReport {
  double e_hf = 0.0;
  double e_fci = 0.0;
  double e_corr = 0.0;
  double entropy = 0.0;  // bits
  std::optional<double> rescaled_entropy;
  NaturalOccupations occupations;
  double k12 = 0.0;
  std::optional<MinimalBasisCorrelation> closed_form;  // set when K = 2
};

inline CorrelationReport make_report(const CIResult& ci) {
  CorrelationReport r;
  r.e_hf = ci.mo_reference.energy;
  r.e_fci = ci.energy;
  r.e_corr = correlation_energy(r.e_hf, r.e_fci);
  r.occupations = natural_occupations(one_particle_density(ci));
  r.entropy = von_neumann_entropy(r.occupations);
  if (ci.mo_integrals.size() >= 2) {
    const auto in = minimal_basis_inputs(ci.mo_reference, ci.mo_integrals);
    r.k12 = in.k12;
    if (ci.mo_integrals.size() == 2) r.closed_form = minimal_basis_corr(in);
  }
  return r;
}

}  // namespace h2e
