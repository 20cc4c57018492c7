#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <tuple>
#include <vector>

#include "h2e/basis.hpp"
#include "h2e/boys.hpp"
#include "h2e/molecule.hpp"

// McMurchie-Davidson integrals over contracted Cartesian Gaussians.
//
// Every public integral first puts its arguments in a canonical order, so the
// permutational symmetries hold bit for bit: overlap(f, g) == overlap(g, f),
// eri(f, g, h, k) == eri(h, k, f, g) == eri(g, f, k, h) and so on.

namespace h2e {

namespace detail {

/// Hermite expansion coefficient E^{ij}_t of the 1-D Gaussian product
/// x_A^i x_B^j exp(-a x_A^2 - b x_B^2), with qx = A_x - B_x.
inline double hermite_e(int i, int j, int t, double qx, double a, double b) {
  const double p = a + b;
  const double mu = a * b / p;
  if (t < 0 || t > i + j || i < 0 || j < 0) return 0.0;
  if (i == 0 && j == 0 && t == 0) return std::exp(-mu * qx * qx);
  if (j == 0) {
    return hermite_e(i - 1, j, t - 1, qx, a, b) / (2.0 * p) -
           mu * qx / a * hermite_e(i - 1, j, t, qx, a, b) +
           (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b);
  }
  return hermite_e(i, j - 1, t - 1, qx, a, b) / (2.0 * p) +
         mu * qx / b * hermite_e(i, j - 1, t, qx, a, b) +
         (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b);
}

/// Hermite Coulomb integrals R^0_{tuv} for t+u+v <= lmax, stored densely.
class HermiteCoulomb {
 public:
  HermiteCoulomb(int lmax, double alpha, const Eigen::Vector3d& pc)
      : lmax_(lmax), dim_(lmax + 1), pc_(pc), fn_(static_cast<std::size_t>(lmax) + 1) {
    boys_array(alpha * pc.squaredNorm(), fn_);
    double scale = 1.0;
    for (auto& f : fn_) {
      f *= scale;
      scale *= -2.0 * alpha;
    }
    const std::size_t d = static_cast<std::size_t>(dim_);
    table_.assign(d * d * d * d, 0.0);
    for (int n = lmax_; n >= 0; --n) {
      for (int t = 0; t <= lmax_ - n; ++t)
        for (int u = 0; u <= lmax_ - n - t; ++u)
          for (int v = 0; v <= lmax_ - n - t - u; ++v) at(t, u, v, n) = compute(t, u, v, n);
    }
  }

  double operator()(int t, int u, int v) const { return at(t, u, v, 0); }

 private:
  double& at(int t, int u, int v, int n) {
    return table_[((static_cast<std::size_t>(n) * dim_ + t) * dim_ + u) * dim_ + v];
  }
  double at(int t, int u, int v, int n) const {
    return table_[((static_cast<std::size_t>(n) * dim_ + t) * dim_ + u) * dim_ + v];
  }
  double get(int t, int u, int v, int n) const {
    return (t < 0 || u < 0 || v < 0) ? 0.0 : at(t, u, v, n);
  }
  double compute(int t, int u, int v, int n) const {
    if (t == 0 && u == 0 && v == 0) return fn_[n];
    if (t > 0) return (t - 1) * get(t - 2, u, v, n + 1) + pc_.x() * get(t - 1, u, v, n + 1);
    if (u > 0) return (u - 1) * get(t, u - 2, v, n + 1) + pc_.y() * get(t, u - 1, v, n + 1);
    return (v - 1) * get(t, u, v - 2, n + 1) + pc_.z() * get(t, u, v - 1, n + 1);
  }

  int lmax_;
  int dim_;
  Eigen::Vector3d pc_;
  std::vector<double> fn_;
  std::vector<double> table_;
};

/// Primitive (unnormalized) overlap.
inline double primitive_overlap(double a, const std::array<int, 3>& la,
                                const Eigen::Vector3d& A, double b,
                                const std::array<int, 3>& lb, const Eigen::Vector3d& B) {
  double s = std::pow(std::numbers::pi / (a + b), 1.5);
  for (int d = 0; d < 3; ++d) s *= hermite_e(la[d], lb[d], 0, A[d] - B[d], a, b);
  return s;
}

inline double primitive_kinetic(double a, const std::array<int, 3>& la,
                                const Eigen::Vector3d& A, double b,
                                const std::array<int, 3>& lb, const Eigen::Vector3d& B) {
  const int lsum = lb[0] + lb[1] + lb[2];
  double t = b * (2 * lsum + 3) * primitive_overlap(a, la, A, b, lb, B);
  for (int d = 0; d < 3; ++d) {
    auto up = lb;
    up[d] += 2;
    t -= 2.0 * b * b * primitive_overlap(a, la, A, b, up, B);
    if (lb[d] >= 2) {
      auto down = lb;
      down[d] -= 2;
      t -= 0.5 * lb[d] * (lb[d] - 1) * primitive_overlap(a, la, A, b, down, B);
    }
  }
  return t;
}

/// <a| 1/|r-C| |b> for unnormalized primitives.
inline double primitive_potential(double a, const std::array<int, 3>& la,
                                  const Eigen::Vector3d& A, double b,
                                  const std::array<int, 3>& lb, const Eigen::Vector3d& B,
                                  const Eigen::Vector3d& C) {
  const double p = a + b;
  const Eigen::Vector3d P = (a * A + b * B) / p;
  const HermiteCoulomb R(la[0] + la[1] + la[2] + lb[0] + lb[1] + lb[2], p, P - C);
  double v = 0.0;
  for (int t = 0; t <= la[0] + lb[0]; ++t) {
    const double ex = hermite_e(la[0], lb[0], t, A.x() - B.x(), a, b);
    for (int u = 0; u <= la[1] + lb[1]; ++u) {
      const double ey = hermite_e(la[1], lb[1], u, A.y() - B.y(), a, b);
      for (int w = 0; w <= la[2] + lb[2]; ++w) {
        const double ez = hermite_e(la[2], lb[2], w, A.z() - B.z(), a, b);
        v += ex * ey * ez * R(t, u, w);
      }
    }
  }
  return 2.0 * std::numbers::pi / p * v;
}

/// Hermite expansion of one primitive charge distribution.
struct HermitePair {
  double p = 0.0;
  Eigen::Vector3d P = Eigen::Vector3d::Zero();
  std::array<int, 3> tmax{0, 0, 0};
  std::array<std::vector<double>, 3> e;

  HermitePair(double a, const std::array<int, 3>& la, const Eigen::Vector3d& A, double b,
              const std::array<int, 3>& lb, const Eigen::Vector3d& B)
      : p(a + b), P((a * A + b * B) / (a + b)) {
    for (int d = 0; d < 3; ++d) {
      tmax[d] = la[d] + lb[d];
      for (int t = 0; t <= tmax[d]; ++t) e[d].push_back(hermite_e(la[d], lb[d], t, A[d] - B[d], a, b));
    }
  }
  int order() const { return tmax[0] + tmax[1] + tmax[2]; }
};

inline double primitive_eri(const HermitePair& ab, const HermitePair& cd) {
  const double p = ab.p, q = cd.p;
  const double alpha = p * q / (p + q);
  const HermiteCoulomb R(ab.order() + cd.order(), alpha, ab.P - cd.P);
  double sum = 0.0;
  for (int t = 0; t <= ab.tmax[0]; ++t)
    for (int u = 0; u <= ab.tmax[1]; ++u)
      for (int v = 0; v <= ab.tmax[2]; ++v) {
        const double eab = ab.e[0][t] * ab.e[1][u] * ab.e[2][v];
        if (eab == 0.0) continue;
        double inner = 0.0;
        for (int tau = 0; tau <= cd.tmax[0]; ++tau)
          for (int nu = 0; nu <= cd.tmax[1]; ++nu)
            for (int phi = 0; phi <= cd.tmax[2]; ++phi) {
              const double sign = ((tau + nu + phi) % 2) ? -1.0 : 1.0;
              inner += sign * cd.e[0][tau] * cd.e[1][nu] * cd.e[2][phi] *
                       R(t + tau, u + nu, v + phi);
            }
        sum += eab * inner;
      }
  return 2.0 * std::pow(std::numbers::pi, 2.5) / (p * q * std::sqrt(p + q)) * sum;
}

inline auto function_key(const BasisFunction& f) {
  return std::tie(f.center[0], f.center[1], f.center[2], f.powers, f.exponents,
                  f.coefficients);
}

inline bool function_less(const BasisFunction& f, const BasisFunction& g) {
  return function_key(f) < function_key(g);
}

/// Canonical ordered pair (first <= second).
inline std::pair<const BasisFunction*, const BasisFunction*> ordered(const BasisFunction& f,
                                                                     const BasisFunction& g) {
  return function_less(g, f) ? std::pair{&g, &f} : std::pair{&f, &g};
}

template <class PrimitiveFn>
double contract_pair(const BasisFunction& f, const BasisFunction& g, PrimitiveFn&& prim) {
  const auto [x, y] = ordered(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < x->exponents.size(); ++i)
    for (std::size_t j = 0; j < y->exponents.size(); ++j)
      s += x->coefficients[i] * y->coefficients[j] *
           prim(x->exponents[i], x->powers, x->center, y->exponents[j], y->powers, y->center);
  return s;
}

}  // namespace detail

inline double overlap(const BasisFunction& f, const BasisFunction& g) {
  return detail::contract_pair(f, g, detail::primitive_overlap);
}

inline double kinetic(const BasisFunction& f, const BasisFunction& g) {
  return detail::contract_pair(f, g, detail::primitive_kinetic);
}

/// -sum_A Z_A <f| 1/|r - R_A| |g>.
inline double nuclear_attraction(const BasisFunction& f, const BasisFunction& g,
                                 const Molecule& mol) {
  double v = 0.0;
  for (const auto& atom : mol.atoms()) {
    if (atom.nuclear_charge == 0) continue;
    const auto& C = atom.position;
    v -= atom.nuclear_charge *
         detail::contract_pair(f, g, [&C](double a, const auto& la, const auto& A, double b,
                                          const auto& lb, const auto& B) {
           return detail::primitive_potential(a, la, A, b, lb, B, C);
         });
  }
  return v;
}

/// (fg|hk) in chemists' notation.
inline double eri(const BasisFunction& f, const BasisFunction& g, const BasisFunction& h,
                  const BasisFunction& k) {
  auto bra = detail::ordered(f, g);
  auto ket = detail::ordered(h, k);
  const auto less_pair = [](const auto& x, const auto& y) {
    if (detail::function_less(*x.first, *y.first)) return true;
    if (detail::function_less(*y.first, *x.first)) return false;
    return detail::function_less(*x.second, *y.second);
  };
  if (less_pair(ket, bra)) std::swap(bra, ket);

  const auto& [a, b] = bra;
  const auto& [c, d] = ket;
  std::vector<detail::HermitePair> kets;
  std::vector<double> ket_coef;
  for (std::size_t k1 = 0; k1 < c->exponents.size(); ++k1)
    for (std::size_t k2 = 0; k2 < d->exponents.size(); ++k2) {
      kets.emplace_back(c->exponents[k1], c->powers, c->center, d->exponents[k2], d->powers,
                        d->center);
      ket_coef.push_back(c->coefficients[k1] * d->coefficients[k2]);
    }

  double sum = 0.0;
  for (std::size_t i = 0; i < a->exponents.size(); ++i)
    for (std::size_t j = 0; j < b->exponents.size(); ++j) {
      const detail::HermitePair ab(a->exponents[i], a->powers, a->center, b->exponents[j],
                                   b->powers, b->center);
      const double cab = a->coefficients[i] * b->coefficients[j];
      for (std::size_t m = 0; m < kets.size(); ++m)
        sum += cab * ket_coef[m] * detail::primitive_eri(ab, kets[m]);
    }
  return sum;
}

/// Two-electron integrals with 8-fold permutational symmetry, one stored
/// value per equivalence class.
class EriTensor {
 public:
  EriTensor() = default;
  explicit EriTensor(std::size_t n)
      : n_(n), data_(pair_index(n, 0) * (pair_index(n, 0) + 1) / 2, 0.0) {}

  std::size_t dimension() const noexcept { return n_; }
  std::size_t unique_count() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[index(i, j, k, l)];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
    data_[index(i, j, k, l)] = v;
  }

  static std::size_t pair_index(std::size_t i, std::size_t j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }
  static std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return pair_index(pair_index(i, j), pair_index(k, l));
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct IntegralSet {
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd nuclear;
  EriTensor eri;

  Eigen::MatrixXd core_hamiltonian() const { return kinetic + nuclear; }
  std::size_t size() const { return static_cast<std::size_t>(overlap.rows()); }
};

inline IntegralSet compute_all(const AOBasis& basis, const Molecule& mol) {
  const std::size_t n = basis.size();
  const auto ni = static_cast<Eigen::Index>(n);
  IntegralSet ints{Eigen::MatrixXd::Zero(ni, ni), Eigen::MatrixXd::Zero(ni, ni),
                   Eigen::MatrixXd::Zero(ni, ni), EriTensor(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      ints.overlap(ii, jj) = ints.overlap(jj, ii) = overlap(basis[i], basis[j]);
      ints.kinetic(ii, jj) = ints.kinetic(jj, ii) = kinetic(basis[i], basis[j]);
      ints.nuclear(ii, jj) = ints.nuclear(jj, ii) = nuclear_attraction(basis[i], basis[j], mol);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= (k == i ? j : k); ++l)
          ints.eri.set(i, j, k, l, eri(basis[i], basis[j], basis[k], basis[l]));
  return ints;
}

/// Text dump, one record per unique integral: `LABEL i j [k l] value`.
inline void write_integrals(std::ostream& out, const IntegralSet& ints) {
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  const std::size_t n = ints.size();
  const struct {
    const char* label;
    const Eigen::MatrixXd* m;
  } mats[] = {{"S", &ints.overlap}, {"T", &ints.kinetic}, {"V", &ints.nuclear}};
  for (const auto& [label, m] : mats)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        out << label << ' ' << i << ' ' << j << ' '
            << num((*m)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k <= i; ++k)
        for (std::size_t l = 0; l <= (k == i ? j : k); ++l)
          out << "ERI " << i << ' ' << j << ' ' << k << ' ' << l << ' ' << num(ints.eri(i, j, k, l))
              << '\n';
}

}  // namespace h2e
