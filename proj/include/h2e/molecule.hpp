#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "h2e/errors.hpp"

namespace h2e {

inline constexpr double kBohrPerAngstrom = 1.8897261254578281;

struct Atom {
  std::string element;
  int nuclear_charge = 1;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // Bohr
};

class Molecule {
 public:
  Molecule(std::vector<Atom> atoms, int n_electrons)
      : atoms_(std::move(atoms)), n_electrons_(n_electrons) {
    if (atoms_.empty()) throw DomainError("molecule needs at least one atom");
    if (n_electrons_ < 0) throw DomainError("negative electron count");
    for (const auto& a : atoms_) {
      // Z = 0 is accepted so that ghost centres can carry basis functions.
      if (a.nuclear_charge < 0)
        throw DomainError("negative nuclear charge on " + a.element);
      if (!a.position.allFinite())
        throw DomainError("non-finite coordinate on " + a.element);
    }
  }

  /// Neutral molecule: electron count equals the total nuclear charge.
  static Molecule neutral(std::vector<Atom> atoms) {
    int z = 0;
    for (const auto& a : atoms) z += a.nuclear_charge;
    return Molecule(std::move(atoms), z);
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  int n_electrons() const noexcept { return n_electrons_; }

 private:
  std::vector<Atom> atoms_;
  int n_electrons_;
};

/// Homonuclear diatomic on the z axis, centred at the origin so that the
/// two nuclei are exact mirror images (keeps integrals bitwise symmetric).
inline Molecule make_diatomic(const std::string& element, int z,
                              double separation_bohr) {
  if (!(separation_bohr > 0.0) || !std::isfinite(separation_bohr))
    throw DomainError("internuclear distance must be positive and finite");
  const double h = 0.5 * separation_bohr;
  return Molecule::neutral({{element, z, {0.0, 0.0, -h}},
                            {element, z, {0.0, 0.0, h}}});
}

inline Molecule make_h2(double separation_bohr) {
  return make_diatomic("H", 1, separation_bohr);
}

inline Molecule make_atom(const std::string& element, int z) {
  return Molecule::neutral({{element, z, Eigen::Vector3d::Zero()}});
}

inline double nuclear_repulsion(const Molecule& mol) {
  const auto& atoms = mol.atoms();
  double e = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const double r = (atoms[a].position - atoms[b].position).norm();
      if (r == 0.0)
        throw DomainError("coincident nuclei " + std::to_string(b) + " and " +
                          std::to_string(a));
      e += static_cast<double>(atoms[a].nuclear_charge) *
           atoms[b].nuclear_charge / r;
    }
  }
  return e;
}

}  // namespace h2e
