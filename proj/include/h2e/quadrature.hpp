#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "h2e/basis.hpp"
#include "h2e/molecule.hpp"

// Grid-based reference values for the analytic integrals. Nothing here uses
// Hermite expansions or the Boys function: basis functions are evaluated
// pointwise on Gauss-Hermite grids, and Coulomb operators go through
//   1/r = (2/sqrt(pi)) \int_0^inf exp(-s^2 r^2) ds
// with the outer s integral done by adaptive Gauss-Kronrod.
//
// Accuracy is ~1e-10 for typical cases; the documented contract is 1e-6
// for one-electron integrals and 1e-5 for ERIs.

namespace h2e {

enum class OracleKind { overlap, kinetic, nuclear };

namespace quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-x^2) via Golub-Welsch.
inline Rule gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.weights.push_back(std::sqrt(std::numbers::pi) * v * v);
  }
  return r;
}

inline const Rule& default_rule() {
  static const Rule rule = gauss_hermite(24);
  return rule;
}

/// 1-D Cartesian factor (x-A)^l exp(-a (x-A)^2).
inline double factor(double x, double center, int l, double a) {
  const double d = x - center;
  return std::pow(d, l) * std::exp(-a * d * d);
}

/// Second derivative of the 1-D factor.
inline double factor_dd(double x, double center, int l, double a) {
  const double d = x - center;
  double poly = -2.0 * a * (2 * l + 1) * std::pow(d, l) + 4.0 * a * a * std::pow(d, l + 2);
  if (l >= 2) poly += l * (l - 1) * std::pow(d, l - 2);
  return poly * std::exp(-a * d * d);
}

inline double primitive_value(const Eigen::Vector3d& r, double a, const std::array<int, 3>& l,
                              const Eigen::Vector3d& A) {
  return factor(r.x(), A.x(), l[0], a) * factor(r.y(), A.y(), l[1], a) *
         factor(r.z(), A.z(), l[2], a);
}

inline double primitive_laplacian(const Eigen::Vector3d& r, double a,
                                  const std::array<int, 3>& l, const Eigen::Vector3d& A) {
  const double fx = factor(r.x(), A.x(), l[0], a), fy = factor(r.y(), A.y(), l[1], a),
               fz = factor(r.z(), A.z(), l[2], a);
  return factor_dd(r.x(), A.x(), l[0], a) * fy * fz + fx * factor_dd(r.y(), A.y(), l[1], a) * fz +
         fx * fy * factor_dd(r.z(), A.z(), l[2], a);
}

/// 3-D tensor-product Gauss-Hermite over one primitive pair. The grid is
/// centred and scaled on the product of the two Gaussians; the integrand
/// itself is evaluated pointwise.
template <class Integrand>
double product_grid(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B,
                    Integrand&& integrand) {
  const auto& rule = default_rule();
  const double p = a + b;
  const Eigen::Vector3d P = (a * A + b * B) / p;
  const double h = 1.0 / std::sqrt(p);
  const std::size_t n = rule.nodes.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double yx = rule.nodes[i], yy = rule.nodes[j], yz = rule.nodes[k];
        const Eigen::Vector3d r = P + h * Eigen::Vector3d(yx, yy, yz);
        const double w = rule.weights[i] * rule.weights[j] * rule.weights[k] *
                         std::exp(yx * yx + yy * yy + yz * yz);
        sum += w * integrand(r);
      }
  return sum * h * h * h;
}

/// \int_0^inf g(s) ds, adaptive. Integrands that vanish by symmetry are
/// pure round-off, so a relative tolerance is never met on them; those stop
/// at the first Kronrod estimate.
template <class F>
double semi_infinite(F&& g) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double err = 0.0, l1 = 0.0;
  const double rough = GK::integrate(g, 0.0, inf, 0, 0.0, &err, &l1);
  if (l1 < 1e-13) return rough;
  return GK::integrate(g, 0.0, inf, 15, 1e-12, &err);
}

/// \int F(x) dx of a 1-D integrand known to be polynomial x Gaussian with
/// total exponent `expo` around `center`.
template <class F>
double line_grid(double expo, double center, F&& integrand) {
  const auto& rule = default_rule();
  const double h = 1.0 / std::sqrt(expo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.nodes[i];
    sum += rule.weights[i] * std::exp(y * y) * integrand(center + h * y);
  }
  return sum * h;
}

/// 2-D grid for integrands whose Gaussian part is exp(-(z-z0)^T M (z-z0)).
template <class F>
double plane_grid(const Eigen::Matrix2d& M, const Eigen::Vector2d& z0, F&& integrand) {
  const auto& rule = default_rule();
  const Eigen::Matrix2d L = M.llt().matrixL();
  const Eigen::Matrix2d Linv_t = L.inverse().transpose();
  const double jac = 1.0 / (L(0, 0) * L(1, 1));
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const Eigen::Vector2d y(rule.nodes[i], rule.nodes[j]);
      const Eigen::Vector2d z = z0 + Linv_t * y;
      sum += rule.weights[i] * rule.weights[j] * std::exp(y.squaredNorm()) * integrand(z);
    }
  return sum * jac;
}

}  // namespace quadrature

inline double quadrature_overlap(const BasisFunction& f, const BasisFunction& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.exponents.size(); ++i)
    for (std::size_t j = 0; j < g.exponents.size(); ++j) {
      const double a = f.exponents[i], b = g.exponents[j];
      s += f.coefficients[i] * g.coefficients[j] *
           quadrature::product_grid(a, f.center, b, g.center, [&](const Eigen::Vector3d& r) {
             return quadrature::primitive_value(r, a, f.powers, f.center) *
                    quadrature::primitive_value(r, b, g.powers, g.center);
           });
    }
  return s;
}

/// -1/2 <f|laplacian|g> with the Laplacian applied pointwise.
inline double quadrature_kinetic(const BasisFunction& f, const BasisFunction& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.exponents.size(); ++i)
    for (std::size_t j = 0; j < g.exponents.size(); ++j) {
      const double a = f.exponents[i], b = g.exponents[j];
      s += f.coefficients[i] * g.coefficients[j] *
           quadrature::product_grid(a, f.center, b, g.center, [&](const Eigen::Vector3d& r) {
             return -0.5 * quadrature::primitive_value(r, a, f.powers, f.center) *
                    quadrature::primitive_laplacian(r, b, g.powers, g.center);
           });
    }
  return s;
}

inline double quadrature_nuclear(const BasisFunction& f, const BasisFunction& g,
                                 const Molecule& mol) {
  double total = 0.0;
  for (const auto& atom : mol.atoms()) {
    if (atom.nuclear_charge == 0) continue;
    const Eigen::Vector3d C = atom.position;
    const auto integrand = [&](double s) {
      const double s2 = s * s;
      double v = 0.0;
      for (std::size_t i = 0; i < f.exponents.size(); ++i)
        for (std::size_t j = 0; j < g.exponents.size(); ++j) {
          const double a = f.exponents[i], b = g.exponents[j];
          const double expo = a + b + s2;
          double prod = f.coefficients[i] * g.coefficients[j];
          for (int d = 0; d < 3; ++d) {
            const double center = (a * f.center[d] + b * g.center[d] + s2 * C[d]) / expo;
            prod *= quadrature::line_grid(expo, center, [&](double x) {
              const double dc = x - C[d];
              return quadrature::factor(x, f.center[d], f.powers[d], a) *
                     quadrature::factor(x, g.center[d], g.powers[d], b) * std::exp(-s2 * dc * dc);
            });
          }
          v += prod;
        }
      return v;
    };
    total -= atom.nuclear_charge * 2.0 / std::sqrt(std::numbers::pi) *
             quadrature::semi_infinite(integrand);
  }
  return total;
}

inline double quadrature_oracle(const BasisFunction& f, const BasisFunction& g, OracleKind kind,
                                const Molecule& mol) {
  switch (kind) {
    case OracleKind::overlap: return quadrature_overlap(f, g);
    case OracleKind::kinetic: return quadrature_kinetic(f, g);
    case OracleKind::nuclear: return quadrature_nuclear(f, g, mol);
  }
  return 0.0;
}

/// (fg|hk) by the Gaussian transform of 1/r12: for each s the 6-D integral
/// splits into three 2-D integrals over (x1, x2), each done on a rotated
/// Gauss-Hermite grid.
inline double quadrature_oracle_eri(const BasisFunction& f, const BasisFunction& g,
                                    const BasisFunction& h, const BasisFunction& k) {
  const auto integrand = [&](double s) {
    const double s2 = s * s;
    double v = 0.0;
    for (std::size_t i = 0; i < f.exponents.size(); ++i)
      for (std::size_t j = 0; j < g.exponents.size(); ++j)
        for (std::size_t m = 0; m < h.exponents.size(); ++m)
          for (std::size_t n = 0; n < k.exponents.size(); ++n) {
            const double a = f.exponents[i], b = g.exponents[j];
            const double c = h.exponents[m], d = k.exponents[n];
            const double p = a + b, q = c + d;
            Eigen::Matrix2d M;
            M << p + s2, -s2, -s2, q + s2;
            double prod = f.coefficients[i] * g.coefficients[j] * h.coefficients[m] *
                          k.coefficients[n];
            for (int dim = 0; dim < 3; ++dim) {
              const Eigen::Vector2d lin((a * f.center[dim] + b * g.center[dim]),
                                        (c * h.center[dim] + d * k.center[dim]));
              const Eigen::Vector2d z0 = M.ldlt().solve(lin);
              prod *= quadrature::plane_grid(M, z0, [&](const Eigen::Vector2d& z) {
                const double x1 = z(0), x2 = z(1), dx = x1 - x2;
                return quadrature::factor(x1, f.center[dim], f.powers[dim], a) *
                       quadrature::factor(x1, g.center[dim], g.powers[dim], b) *
                       quadrature::factor(x2, h.center[dim], h.powers[dim], c) *
                       quadrature::factor(x2, k.center[dim], k.powers[dim], d) *
                       std::exp(-s2 * dx * dx);
              });
            }
            v += prod;
          }
    return v;
  };
  return 2.0 / std::sqrt(std::numbers::pi) * quadrature::semi_infinite(integrand);
}

}  // namespace h2e
