#include <catch_amalgamated.hpp>

#include <random>

#include "h2e/h2e.hpp"
#include "oracles.hpp"

using namespace h2e;
using Catch::Matchers::WithinAbs;

namespace {

struct Case {
  Molecule mol;
  IntegralSet ints;
  SCFResult scf;
};

Case converged(const Molecule& mol, const std::string& basis) {
  auto ints = compute_all(build_ao_basis(mol, load_basis(basis)), mol);
  SCFSettings settings;
  auto scf = run_rhf(ints, mol, settings);
  if (!scf.converged) {
    settings.level_shift = 1.0;
    scf = run_rhf(ints, mol, settings);
  }
  REQUIRE(scf.converged);
  return {mol, std::move(ints), std::move(scf)};
}

}  // namespace

TEST_CASE("MO transform", "[fci]") {
  const auto c = converged(make_h2(1.4), "6-31gss");
  const auto n = static_cast<Eigen::Index>(c.ints.size());

  const auto ident = mo_transform(c.ints, Eigen::MatrixXd::Identity(n, n));
  CHECK(ident.h == c.ints.core_hamiltonian());
  for (std::size_t i = 0; i < 10; i += 3)
    for (std::size_t j = 0; j < 10; j += 2)
      for (std::size_t k = 0; k < 10; ++k) CHECK(ident.eri(i, j, k, 9 - k) == c.ints.eri(i, j, k, 9 - k));

  // Sum of MO core energies equals the trace of Hcore in the Loewdin basis.
  const Eigen::MatrixXd X = symmetric_orthogonalizer(c.ints.overlap);
  const auto mo = mo_transform(c.ints, c.scf.mo_coefficients);
  CHECK_THAT(mo.h.trace(), WithinAbs((X.transpose() * c.ints.core_hamiltonian() * X).trace(), 1e-10));

  CHECK_THROWS_AS(mo_transform(c.ints, Eigen::MatrixXd::Identity(3, 3)), DomainError);
}

TEST_CASE("determinant enumeration", "[fci]") {
  CHECK(enumerate_determinants(2, 1, 1).size() == 4);
  CHECK(enumerate_determinants(10, 1, 1).size() == 100);
  CHECK(enumerate_determinants(1, 1, 1).size() == 1);
  CHECK(enumerate_determinants(4, 2, 2).size() == 36);

  const auto b = enumerate_determinants(3, 1, 1);
  CHECK(b[0] == Determinant{0b001, 0b001});
  CHECK(b[1] == Determinant{0b001, 0b010});
  CHECK(b[3] == Determinant{0b010, 0b001});
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b[i]) == i);
  CHECK(b.index_of(Determinant{0b011, 0b001}) == b.size());
  CHECK_THROWS_AS(enumerate_determinants(2, 3, 0), DomainError);
}

TEST_CASE("Hamiltonian elements match brute-force second quantization", "[fci][oracle]") {
  SECTION("STO-3G") {
    const auto c = converged(make_h2(1.4), "sto-3g");
    const auto mo = mo_transform(c.ints, c.scf.mo_coefficients);
    const auto basis = enumerate_determinants(2, 1, 1);
    const auto H = build_hamiltonian(basis, mo);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        CHECK_THAT(H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                   WithinAbs(oracle::hamiltonian_element(mo, basis.spin_orbitals(basis[i]),
                                                         basis.spin_orbitals(basis[j])),
                             1e-12));
  }
  SECTION("four orbitals, two alpha, one beta") {
    // Random symmetric integrals exercise every phase case.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    MOIntegrals mo{Eigen::MatrixXd::Zero(4, 4), EriTensor(4)};
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q <= p; ++q) mo.h(p, q) = mo.h(q, p) = u(rng);
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = 0; q <= p; ++q)
        for (std::size_t r = 0; r < 4; ++r)
          for (std::size_t s = 0; s <= r; ++s) mo.eri.set(p, q, r, s, u(rng));
    const auto basis = enumerate_determinants(4, 2, 1);
    const auto H = build_hamiltonian(basis, mo);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        CHECK_THAT(H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                   WithinAbs(oracle::hamiltonian_element(mo, basis.spin_orbitals(basis[i]),
                                                         basis.spin_orbitals(basis[j])),
                             1e-12));
  }
}

TEST_CASE("Slater-Condon structure", "[fci]") {
  const auto c = converged(make_h2(1.4), "6-31gss");
  const auto mo = mo_transform(c.ints, c.scf.mo_coefficients);
  const auto two = enumerate_determinants(10, 1, 1);
  const double e0 = hamiltonian_element(two, mo, two[0], two[0]);
  CHECK_THAT(e0 + nuclear_repulsion(c.mol), WithinAbs(c.scf.energy, 1e-10));

  // Four electrons so that triple and quadruple excitations exist.
  const auto basis = enumerate_determinants(10, 2, 2);
  for (std::size_t i = 0; i < basis.size(); i += 7)
    for (std::size_t j = 0; j < basis.size(); j += 5) {
      const auto a = basis.spin_orbitals(basis[i]), b = basis.spin_orbitals(basis[j]);
      if (std::popcount(a ^ b) > 4) CHECK(hamiltonian_element(basis, mo, basis[i], basis[j]) == 0.0);
    }
}

TEST_CASE("minimal-basis coupling of sigma_g^2 and sigma_u^2 is K12", "[fci]") {
  for (double R : {1.4, 3.0, 20.0}) {
    const auto c = converged(make_h2(R), "sto-3g");
    const auto mo = mo_transform(c.ints, c.scf.mo_coefficients);
    const auto basis = enumerate_determinants(2, 1, 1);
    const double coupling = hamiltonian_element(basis, mo, Determinant{1, 1}, Determinant{2, 2});
    CHECK_THAT(coupling, WithinAbs(mo.eri(0, 1, 0, 1), 1e-12));
  }
}

TEST_CASE("ground-state solver", "[fci]") {
  Eigen::MatrixXd D = Eigen::Vector3d(0.5, -1.25, 2.0).asDiagonal();
  const auto g = solve_ground(D);
  CHECK(g.energy == -1.25);
  CHECK(g.vector == Eigen::Vector3d(0, 1, 0));

  const double a = -1.3, b = 0.4, k = 0.17;
  Eigen::Matrix2d M;
  M << a, k, k, b;
  CHECK_THAT(solve_ground(M).energy, WithinAbs((a + b) / 2 - std::sqrt((a - b) * (a - b) / 4 + k * k), 1e-14));

  // Degenerate lowest level: the projection of the first basis vector.
  Eigen::Matrix3d deg = Eigen::Matrix3d::Zero();
  deg(2, 2) = 1.0;
  const auto gd = solve_ground(deg);
  CHECK(gd.energy == 0.0);
  CHECK_THAT(gd.vector(0), WithinAbs(1.0, 1e-14));

  CHECK_THROWS_AS(solve_ground(Eigen::MatrixXd(0, 0)), DomainError);
}

TEST_CASE("6-31G** FCI eigenvalue agrees with inverse iteration", "[fci][oracle]") {
  const auto c = converged(make_h2(1.4), "6-31gss");
  const auto mo = mo_transform(c.ints, c.scf.mo_coefficients);
  const auto H = build_hamiltonian(enumerate_determinants(10, 1, 1), mo);
  REQUIRE(H.rows() == 100);
  CHECK_THAT(solve_ground(H).energy, WithinAbs(oracle::lowest_eigenvalue(H), 1e-9));
}

TEST_CASE("FCI energies", "[fci]") {
  SECTION("He/STO-3G has a single determinant") {
    const auto c = converged(make_atom("He", 2), "sto-3g");
    const auto ci = run_fci(c.ints, c.scf, c.mol);
    CHECK(ci.basis.size() == 1);
    CHECK(ci.energy == c.scf.energy);
  }
  SECTION("H2/STO-3G matches the two-configuration closed form") {
    for (double R : {0.7, 1.4, 2.5, 6.0, 20.0}) {
      const auto c = converged(make_h2(R), "sto-3g");
      const auto ci = run_fci(c.ints, c.scf, c.mol);
      const auto cf = minimal_basis_corr(minimal_basis_inputs(c.scf, ci.mo_integrals));
      INFO("R = " << R);
      CHECK_THAT(ci.energy - c.scf.energy, WithinAbs(cf.e_corr, 1e-9));
    }
  }
  SECTION("known equilibrium values") {
    const auto a = converged(make_h2(1.4), "sto-3g");
    CHECK_THAT(run_fci(a.ints, a.scf, a.mol).energy, WithinAbs(-1.137276, 2e-6));
    const auto b = converged(make_h2(1.4), "6-31gss");
    CHECK_THAT(run_fci(b.ints, b.scf, b.mol).energy, WithinAbs(-1.165153, 2e-6));
  }
  SECTION("dissociated STO-3G H2 weights both configurations equally") {
    const auto c = converged(make_h2(20.0), "sto-3g");
    const auto ci = run_fci(c.ints, c.scf, c.mol);
    const auto g2 = ci.basis.index_of({1, 1}), u2 = ci.basis.index_of({2, 2});
    CHECK_THAT(std::abs(ci.coefficients(static_cast<Eigen::Index>(g2))),
               WithinAbs(std::abs(ci.coefficients(static_cast<Eigen::Index>(u2))), 1e-3));
  }
  SECTION("unconverged reference is rejected") {
    auto c = converged(make_h2(1.4), "sto-3g");
    c.scf.converged = false;
    CHECK_THROWS_AS(run_fci(c.ints, c.scf, c.mol), DomainError);
  }
}

TEST_CASE("rotating virtual orbitals leaves the FCI energy unchanged", "[fci][property]") {
  const auto c = converged(make_h2(1.4), "6-31gss");
  const double e0 = run_fci(c.ints, c.scf, c.mol).energy;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    SCFResult rotated = c.scf;
    const Eigen::MatrixXd U = oracle::random_orthogonal(9, rng);
    rotated.mo_coefficients.rightCols(9) = c.scf.mo_coefficients.rightCols(9) * U;
    CHECK_THAT(run_fci(c.ints, rotated, c.mol).energy, WithinAbs(e0, 1e-10));
  }
}

TEST_CASE("CI vector dump", "[fci]") {
  const auto c = converged(make_h2(1.4), "sto-3g");
  const auto ci = run_fci(c.ints, c.scf, c.mol);
  std::ostringstream out;
  write_ci_vector(out, ci);
  CHECK(out.str().rfind("0  10  10  ", 0) == 0);
}
