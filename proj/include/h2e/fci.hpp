#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "h2e/errors.hpp"
#include "h2e/integrals.hpp"
#include "h2e/scf.hpp"

namespace h2e {

/// Integrals over molecular orbitals.
struct MOIntegrals {
  Eigen::MatrixXd h;  // C^T Hcore C
  EriTensor eri;      // (pq|rs), chemists' notation
  std::size_t size() const { return static_cast<std::size_t>(h.rows()); }
};

inline MOIntegrals mo_transform(const IntegralSet& ints, const Eigen::MatrixXd& C) {
  const std::size_t n = ints.size();
  if (static_cast<std::size_t>(C.rows()) != n)
    throw DomainError("MO coefficient matrix has " + std::to_string(C.rows()) +
                      " rows, basis has " + std::to_string(n));
  const std::size_t m = static_cast<std::size_t>(C.cols());
  MOIntegrals mo{C.transpose() * ints.core_hamiltonian() * C, EriTensor(m)};

  // Four quarter transformations on a dense work array.
  std::vector<double> a(n * n * n * n), b;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) a[((i * n + j) * n + k) * n + l] = ints.eri(i, j, k, l);

  // Each pass contracts the leading index and rotates it to the back, so after
  // four passes the layout is (p q r s) again.
  std::size_t dims[4] = {n, n, n, n};
  for (int pass = 0; pass < 4; ++pass) {
    const std::size_t d0 = dims[0], rest = dims[1] * dims[2] * dims[3];
    b.assign(rest * m, 0.0);
    for (std::size_t r = 0; r < rest; ++r)
      for (std::size_t p = 0; p < m; ++p) {
        double s = 0.0;
        for (std::size_t mu = 0; mu < d0; ++mu)
          s += C(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(p)) * a[mu * rest + r];
        b[r * m + p] = s;
      }
    a.swap(b);
    dims[0] = dims[1];
    dims[1] = dims[2];
    dims[2] = dims[3];
    dims[3] = m;
  }
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= (r == p ? q : r); ++s)
          mo.eri.set(p, q, r, s, a[((p * m + q) * m + r) * m + s]);
  return mo;
}

/// Occupation strings over K spatial orbitals; bit k set = orbital k occupied.
struct Determinant {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;
  friend bool operator==(const Determinant&, const Determinant&) = default;
};

class CIBasis {
 public:
  CIBasis(int k, int n_alpha, int n_beta);

  int orbitals() const noexcept { return k_; }
  int n_alpha() const noexcept { return n_alpha_; }
  int n_beta() const noexcept { return n_beta_; }
  std::size_t size() const noexcept { return determinants_.size(); }
  const std::vector<Determinant>& determinants() const noexcept { return determinants_; }
  const Determinant& operator[](std::size_t i) const { return determinants_[i]; }

  /// Position of a determinant, or size() if it is outside the space.
  std::size_t index_of(const Determinant& d) const {
    const auto a = alpha_rank_.find(d.alpha);
    const auto b = beta_rank_.find(d.beta);
    if (a == alpha_rank_.end() || b == beta_rank_.end()) return size();
    return a->second * beta_strings_.size() + b->second;
  }

  /// Spin-orbital bit string: alpha orbitals occupy bits 0..K-1, beta K..2K-1.
  std::uint64_t spin_orbitals(const Determinant& d) const { return d.alpha | (d.beta << k_); }

 private:
  int k_, n_alpha_, n_beta_;
  std::vector<std::uint64_t> alpha_strings_, beta_strings_;
  std::unordered_map<std::uint64_t, std::size_t> alpha_rank_, beta_rank_;
  std::vector<Determinant> determinants_;
};

namespace detail {

/// All K-bit strings with n set bits, ordered lexicographically by their
/// sorted lists of occupied orbitals.
inline std::vector<std::uint64_t> occupation_strings(int k, int n) {
  std::vector<std::uint64_t> out;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << i;
    out.push_back(mask);
    int pos = n - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - n + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < n; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return out;
}

/// Sign of a^dagger_p a_h acting on `occ` (h occupied, p empty or p == h).
inline double excitation_phase(std::uint64_t occ, int h, int p) {
  if (h == p) return 1.0;
  const int lo = std::min(h, p), hi = std::max(h, p);
  const std::uint64_t between = ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{1} << (lo + 1)) - 1);
  return (std::popcount(occ & between) % 2) ? -1.0 : 1.0;
}

inline std::vector<int> set_bits(std::uint64_t m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

}  // namespace detail

inline CIBasis::CIBasis(int k, int n_alpha, int n_beta) : k_(k), n_alpha_(n_alpha), n_beta_(n_beta) {
  if (k < 1 || k > 32) throw DomainError("orbital count must be in [1, 32]");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > k || n_beta > k)
    throw DomainError("electron count per spin exceeds orbital count " + std::to_string(k));
  alpha_strings_ = detail::occupation_strings(k, n_alpha);
  beta_strings_ = detail::occupation_strings(k, n_beta);
  for (std::size_t i = 0; i < alpha_strings_.size(); ++i) alpha_rank_[alpha_strings_[i]] = i;
  for (std::size_t i = 0; i < beta_strings_.size(); ++i) beta_rank_[beta_strings_[i]] = i;
  for (auto a : alpha_strings_)
    for (auto b : beta_strings_) determinants_.push_back({a, b});
}

inline CIBasis enumerate_determinants(int k, int n_alpha, int n_beta) {
  return CIBasis(k, n_alpha, n_beta);
}

namespace detail {

/// Antisymmetrized <pq||rs> over spin orbitals (index = spin * K + spatial).
inline double antisym(const MOIntegrals& mo, int k, int p, int q, int r, int s) {
  const auto sp = [k](int x) { return x / k; };
  const auto orb = [k](int x) { return static_cast<std::size_t>(x % k); };
  double v = 0.0;
  if (sp(p) == sp(r) && sp(q) == sp(s)) v += mo.eri(orb(p), orb(r), orb(q), orb(s));
  if (sp(p) == sp(s) && sp(q) == sp(r)) v -= mo.eri(orb(p), orb(s), orb(q), orb(r));
  return v;
}

inline double one_body(const MOIntegrals& mo, int k, int p, int q) {
  if (p / k != q / k) return 0.0;
  return mo.h(p % k, q % k);
}

}  // namespace detail

/// Slater-Condon matrix element <I|H|J> (electronic part only).
inline double hamiltonian_element(const CIBasis& basis, const MOIntegrals& mo,
                                  const Determinant& bra, const Determinant& ket) {
  const int k = basis.orbitals();
  const std::uint64_t I = basis.spin_orbitals(ket), J = basis.spin_orbitals(bra);
  const std::uint64_t holes = I & ~J, parts = J & ~I;
  const int degree = std::popcount(holes);
  if (degree > 2) return 0.0;

  if (degree == 0) {
    const auto occ = detail::set_bits(I);
    double e = 0.0;
    for (std::size_t a = 0; a < occ.size(); ++a) {
      e += detail::one_body(mo, k, occ[a], occ[a]);
      for (std::size_t b = 0; b < a; ++b) e += detail::antisym(mo, k, occ[a], occ[b], occ[a], occ[b]);
    }
    return e;
  }
  if (degree == 1) {
    const int h = std::countr_zero(holes), p = std::countr_zero(parts);
    double e = detail::one_body(mo, k, p, h);
    for (int j : detail::set_bits(I & ~holes)) e += detail::antisym(mo, k, p, j, h, j);
    return detail::excitation_phase(I, h, p) * e;
  }
  const auto hs = detail::set_bits(holes), ps = detail::set_bits(parts);
  const double ph1 = detail::excitation_phase(I, hs[0], ps[0]);
  const std::uint64_t mid = (I & ~(std::uint64_t{1} << hs[0])) | (std::uint64_t{1} << ps[0]);
  const double ph2 = detail::excitation_phase(mid, hs[1], ps[1]);
  return ph1 * ph2 * detail::antisym(mo, k, ps[0], ps[1], hs[0], hs[1]);
}

inline Eigen::MatrixXd build_hamiltonian(const CIBasis& basis, const MOIntegrals& mo) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      H(i, j) = H(j, i) = hamiltonian_element(basis, mo, basis[static_cast<std::size_t>(i)],
                                              basis[static_cast<std::size_t>(j)]);
  return H;
}

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;
};

/// Lowest eigenpair of a symmetric matrix. Within a degenerate lowest level
/// the returned vector is the normalized projection of basis vector 0 (the
/// reference determinant) onto that level; its largest-magnitude entry is
/// made positive.
inline GroundState solve_ground(const Eigen::MatrixXd& H, double degeneracy_tol = 1e-10) {
  if (H.rows() == 0 || H.rows() != H.cols()) throw DomainError("expected a non-empty square matrix");
  if (!H.allFinite()) throw DomainError("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  GroundState g{es.eigenvalues()(0), es.eigenvectors().col(0)};

  const double tol = degeneracy_tol * std::max(1.0, std::abs(g.energy));
  Eigen::Index level = 1;
  while (level < H.rows() && es.eigenvalues()(level) - g.energy <= tol) ++level;
  if (level > 1) {
    const auto block = es.eigenvectors().leftCols(level);
    Eigen::VectorXd v = block * block.row(0).transpose();
    if (v.norm() > 1e-8) g.vector = v.normalized();
  }
  Eigen::Index imax = 0;
  g.vector.cwiseAbs().maxCoeff(&imax);
  if (g.vector(imax) < 0) g.vector = -g.vector;
  return g;
}

struct CIResult {
  double energy = 0.0;  // total, including nuclear repulsion
  Eigen::VectorXd coefficients;
  CIBasis basis{1, 0, 0};
  SCFResult mo_reference;
  MOIntegrals mo_integrals;
};

inline CIResult run_fci(const IntegralSet& ints, const SCFResult& scf, const Molecule& mol) {
  if (!scf.converged) throw DomainError("FCI needs a converged SCF reference");
  const int nel = mol.n_electrons();
  const int k = static_cast<int>(scf.mo_coefficients.cols());
  CIResult res;
  res.mo_integrals = mo_transform(ints, scf.mo_coefficients);
  res.basis = enumerate_determinants(k, nel - nel / 2, nel / 2);
  const auto g = solve_ground(build_hamiltonian(res.basis, res.mo_integrals));
  res.energy = g.energy + nuclear_repulsion(mol);
  res.coefficients = g.vector;
  res.mo_reference = scf;
  return res;
}

/// `index alpha_bits beta_bits coefficient`, bits listed from orbital 0.
inline void write_ci_vector(std::ostream& out, const CIResult& ci) {
  const int k = ci.basis.orbitals();
  const auto bits = [k](std::uint64_t m) {
    std::string s;
    for (int i = 0; i < k; ++i) s.push_back((m >> i) & 1 ? '1' : '0');
    return s;
  };
  char buf[64];
  for (std::size_t i = 0; i < ci.basis.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", ci.coefficients(static_cast<Eigen::Index>(i)));
    out << i << "  " << bits(ci.basis[i].alpha) << "  " << bits(ci.basis[i].beta) << "  " << buf
        << '\n';
  }
}

}  // namespace h2e
