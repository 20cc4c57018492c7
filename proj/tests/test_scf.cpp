#include <catch_amalgamated.hpp>

#include <numbers>

#include "h2e/h2e.hpp"
#include "oracles.hpp"

using namespace h2e;
using Catch::Matchers::WithinAbs;

namespace {

struct Setup {
  Molecule mol;
  IntegralSet ints;
};

Setup setup(const Molecule& mol, const std::string& basis) {
  return {mol, compute_all(build_ao_basis(mol, load_basis(basis)), mol)};
}

}  // namespace

TEST_CASE("symmetric orthogonalizer", "[scf]") {
  CHECK(symmetric_orthogonalizer(Eigen::MatrixXd::Identity(3, 3)).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-15));

  Eigen::Matrix2d S;
  S << 1.0, 0.4, 0.4, 1.0;
  const Eigen::MatrixXd X = symmetric_orthogonalizer(S);
  CHECK((X.transpose() * S * X - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  // Eigenpairs {1 +- s} with vectors (1, +-1)/sqrt 2.
  const double p = 1.0 / std::sqrt(1.4), m = 1.0 / std::sqrt(0.6);
  CHECK_THAT(X(0, 0), WithinAbs(0.5 * (p + m), 1e-14));
  CHECK_THAT(X(0, 1), WithinAbs(0.5 * (p - m), 1e-14));

  Eigen::Matrix2d near;
  near << 1.0, 1.0 - 1e-12, 1.0 - 1e-12, 1.0;
  CHECK_THROWS_AS(symmetric_orthogonalizer(near), LinearDependenceError);
}

TEST_CASE("Fock matrix construction", "[scf]") {
  const auto s = setup(make_h2(1.4), "6-31gss");
  const Eigen::MatrixXd H = s.ints.core_hamiltonian();
  CHECK(build_fock(H, Eigen::MatrixXd::Zero(10, 10), s.ints.eri) == H);

  Eigen::MatrixXd D = Eigen::MatrixXd::Random(10, 10);
  D = (D + D.transpose()).eval();
  const Eigen::MatrixXd F = build_fock(H, D, s.ints.eri);
  CHECK(F == F.transpose());
}

TEST_CASE("density from MO coefficients", "[scf]") {
  const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(3, 3);
  CHECK(density_from_coeffs(C, 0) == Eigen::MatrixXd::Zero(3, 3));
  const Eigen::MatrixXd D = density_from_coeffs(C, 1);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 2.0;
  CHECK(D == expected);
  CHECK_THROWS_AS(density_from_coeffs(C, 4), DomainError);
}

TEST_CASE("H2/STO-3G RHF at 1.4 Bohr", "[scf]") {
  const auto s = setup(make_h2(1.4), "sto-3g");
  const auto r = run_rhf(s.ints, s.mol);
  REQUIRE(r.converged);

  // Oracle: minimize over the rotation angle of the occupied orbital.
  const double e_min = oracle::golden_minimum(
      [&](double t) { return oracle::h2_rotation_energy(s.ints, s.mol, t); }, 0.0, std::numbers::pi);
  CHECK_THAT(r.energy, WithinAbs(e_min, 1e-10));
  CHECK_THAT(r.energy, WithinAbs(-1.1167143, 1e-6));

  // sigma_g below sigma_u; gerade orbital has equal-sign coefficients.
  CHECK(r.orbital_energies(0) < r.orbital_energies(1));
  CHECK(r.mo_coefficients(0, 0) * r.mo_coefficients(1, 0) > 0.0);
  CHECK(r.mo_coefficients(0, 1) * r.mo_coefficients(1, 1) < 0.0);

  CHECK_THAT((r.density * s.ints.overlap).trace(), WithinAbs(2.0, 1e-10));
  const Eigen::MatrixXd comm = r.fock * r.density * s.ints.overlap - s.ints.overlap * r.density * r.fock;
  CHECK(comm.cwiseAbs().maxCoeff() <= 1e-8);

  // MOs are orthonormal in the overlap metric.
  const Eigen::MatrixXd ctsc = r.mo_coefficients.transpose() * s.ints.overlap * r.mo_coefficients;
  CHECK((ctsc - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("He/STO-3G RHF is the one-function closed form", "[scf]") {
  const auto s = setup(make_atom("He", 2), "sto-3g");
  const auto r = run_rhf(s.ints, s.mol);
  REQUIRE(r.converged);
  const double h11 = s.ints.core_hamiltonian()(0, 0);
  CHECK_THAT(r.energy, WithinAbs(2.0 * h11 + s.ints.eri(0, 0, 0, 0), 1e-12));
  CHECK_THAT(r.energy, WithinAbs(-2.807784, 1e-6));
  CHECK(r.iterations <= 2);
}

TEST_CASE("H2/6-31G** RHF converges with a commuting Fock and density", "[scf]") {
  for (double R : {0.5, 1.4, 4.0}) {
    const auto s = setup(make_h2(R), "6-31gss");
    const auto r = run_rhf(s.ints, s.mol);
    INFO("R = " << R);
    REQUIRE(r.converged);
    const Eigen::MatrixXd comm = r.fock * r.density * s.ints.overlap - s.ints.overlap * r.density * r.fock;
    CHECK(comm.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_THAT((r.density * s.ints.overlap).trace(), WithinAbs(2.0, 1e-10));
  }
}

TEST_CASE("level shift leaves the converged energy unchanged", "[scf]") {
  const auto s = setup(make_h2(1.4), "6-31gss");
  SCFSettings shifted;
  shifted.level_shift = 0.7;
  const auto a = run_rhf(s.ints, s.mol);
  const auto b = run_rhf(s.ints, s.mol, shifted);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK_THAT(b.energy, WithinAbs(a.energy, 1e-10));
}

TEST_CASE("stretched H2 without stabilization is reported as unconverged", "[scf]") {
  // sigma_u drops below sigma_g in the Fock spectrum, so the plain
  // iteration flips the occupation every step.
  const auto s = setup(make_h2(20.0), "sto-3g");
  const auto plain = run_rhf(s.ints, s.mol);
  CHECK_FALSE(plain.converged);
  CHECK(plain.iterations == SCFSettings{}.max_iterations);

  SCFSettings shifted;
  shifted.level_shift = 1.0;
  const auto r = run_rhf(s.ints, s.mol, shifted);
  REQUIRE(r.converged);
  CHECK(r.mo_coefficients(0, 0) * r.mo_coefficients(1, 0) > 0.0);
}

TEST_CASE("SCF preconditions", "[scf]") {
  const auto s = setup(make_atom("H", 1), "sto-3g");
  CHECK_THROWS_AS(run_rhf(s.ints, s.mol), UnsupportedError);
  SCFSettings bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = {};
  bad.damping = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("SCF trace records one line per iteration", "[scf]") {
  const auto s = setup(make_h2(1.4), "sto-3g");
  const auto r = run_rhf(s.ints, s.mol);
  std::ostringstream out;
  write_scf_trace(out, r);
  const auto text = out.str();
  CHECK(static_cast<int>(std::count(text.begin(), text.end(), '\n')) == r.iterations);
}
