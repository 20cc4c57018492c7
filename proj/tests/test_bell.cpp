#include <catch_amalgamated.hpp>

#include <random>

#include "h2e/bell.hpp"
#include "oracles.hpp"

using namespace h2e::bell;
using Catch::Matchers::WithinAbs;

namespace {

Spinor random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Spinor s(cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)));
  return s.normalized();
}

MeasurementSettings random_settings(std::mt19937_64& rng) {
  return {oracle::random_direction(rng), oracle::random_direction(rng), oracle::random_direction(rng),
          oracle::random_direction(rng)};
}

const UnitVector3 kX(1, 0, 0), kY(0, 1, 0), kZ(0, 0, 1);

}  // namespace

TEST_CASE("spin observables", "[bell]") {
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  CHECK(spin_observable(kZ) == z);
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  CHECK(spin_observable(kX) == x);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(spin_observable(oracle::random_direction(rng)));
    CHECK_THAT(es.eigenvalues()(0), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(es.eigenvalues()(1), WithinAbs(1.0, 1e-14));
  }
  CHECK_THROWS_AS(UnitVector3(1, 1, 0), h2e::DomainError);
  CHECK_THROWS_AS(UnitVector3::normalized(Eigen::Vector3d::Zero()), h2e::DomainError);
}

TEST_CASE("singlet state", "[bell]") {
  const auto s = singlet();
  CHECK_THAT((s.rho() * s.rho()).trace().real(), WithinAbs(1.0, 1e-15));

  // T_ij by a direct trace over the Pauli basis.
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (s.rho() * kron(pauli()[i], pauli()[j])).trace().real();
  CHECK((t + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((correlation_tensor(s) + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // Partial traces are I/2.
  Eigen::Matrix2cd r1 = Eigen::Matrix2cd::Zero(), r2 = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        r1(i, j) += s.rho()(2 * i + k, 2 * j + k);
        r2(i, j) += s.rho()(2 * k + i, 2 * k + j);
      }
  CHECK((r1 - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((r2 - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  CHECK((dissociation_spin_state().rho() - s.rho()).cwiseAbs().maxCoeff() < 1e-15);
  const auto d = dissociation_state();
  CHECK_THAT(d.spatial.squaredNorm(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("state validation", "[bell]") {
  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Identity() * 0.5;
  CHECK_THROWS_AS(TwoQubitState(bad), h2e::DomainError);
  Eigen::Matrix4cd neg = Eigen::Matrix4cd::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(TwoQubitState(neg), h2e::DomainError);
  CHECK_THROWS_AS(TwoQubitState::pure(Eigen::Vector4cd::Zero()), h2e::DomainError);
}

TEST_CASE("single-determinant mean values", "[bell]") {
  CHECK(mean_product(spin_up(), spin_down(), kZ, kZ) == -1.0);
  CHECK(mean_product(spin_up(), spin_down(), kX, kZ) == 0.0);
  CHECK(mean_product(spin_up(), spin_down(), kY, kX) == 0.0);

  CHECK(mean_symmetrized(spin_up(), spin_down(), kZ, kX) == 0.0);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto al = random_spinor(rng), be = random_spinor(rng);
    const auto a = oracle::random_direction(rng), b = oracle::random_direction(rng);
    CHECK_THAT(mean_symmetrized(al, be, a, a), WithinAbs(mean_product(al, be, a, a), 1e-15));
    CHECK(mean_symmetrized(al, be, a, b) == mean_symmetrized(al, be, b, a));
    // Matches the correlator of the product state.
    const auto prod = TwoQubitState::pure(product_vector(al, be));
    CHECK_THAT(correlator(prod, a, b), WithinAbs(mean_product(al, be, a, b), 1e-14));
  }
  CHECK_THROWS_AS(spin_expectation(Spinor(1.0, 1.0), kZ), h2e::DomainError);
}

TEST_CASE("factorized correlations never violate CHSH", "[bell][property]") {
  std::mt19937_64 rng(8);
  double worst = -10.0;
  for (int i = 0; i < 10000; ++i) {
    const auto al = random_spinor(rng), be = random_spinor(rng);
    const auto s = random_settings(rng);
    const auto E = [&](const UnitVector3& u, const UnitVector3& w) { return mean_product(al, be, u, w); };
    worst = std::max(worst, std::abs(chsh_combination(E, s)));
  }
  CHECK(worst <= 2.0 + 1e-12);
}

TEST_CASE("CHSH value at fixed settings", "[bell]") {
  CHECK_THAT(chsh_value(singlet(), textbook_settings()), WithinAbs(kTsirelsonBound, 1e-12));
  CHECK_THAT(chsh_value_abs(singlet(), textbook_settings()), WithinAbs(kTsirelsonBound, 1e-12));
  const auto r = make_chsh_report(singlet(), textbook_settings());
  CHECK(r.violated);

  std::mt19937_64 rng(9);
  const auto prod = product_updown();
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_settings(rng);
    CHECK(std::abs(chsh_value(prod, s)) <= 2.0 + 1e-12);
    const auto a = s.a;
    const MeasurementSettings same{a, a, a, a};
    CHECK_THAT(chsh_value(prod, same), WithinAbs(2.0 * correlator(prod, a, a), 1e-14));
    CHECK(std::abs(chsh_value(singlet(), same)) <= 2.0 + 1e-12);
  }
}

TEST_CASE("closed-form CHSH maximum", "[bell]") {
  CHECK_THAT(chsh_max_closed_form(singlet()), WithinAbs(kTsirelsonBound, 1e-14));
  CHECK_THAT(chsh_max_closed_form(product_updown()), WithinAbs(2.0, 1e-14));
  CHECK_THAT(chsh_max_closed_form(maximally_mixed()), WithinAbs(0.0, 1e-14));
}

TEST_CASE("grid CHSH maximum", "[bell]") {
  const auto s = chsh_max_grid(singlet(), 1.0);
  CHECK(s.value >= 2.8284);
  CHECK(s.value <= kTsirelsonBound + 1e-12);
  CHECK(s.violated);
  CHECK_THAT(s.value, WithinAbs(chsh_value(singlet(), s.settings), 1e-15));

  const auto p = chsh_max_grid(product_updown(), 1.0);
  CHECK(p.value <= 2.0 + 1e-9);
  CHECK_FALSE(p.violated);
  CHECK(chsh_max_grid(maximally_mixed(), 1.0).value <= 1e-9);

  CHECK_THROWS_AS(chsh_max_grid(singlet(), 0.0), h2e::DomainError);
}

TEST_CASE("grid maximum agrees with the closed form on random states", "[bell][property]") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const auto st = oracle::random_state(rng);
    const double cf = chsh_max_closed_form(st);
    const double g = chsh_max_grid(st, 0.5).value;
    INFO("state " << i);
    CHECK(g <= cf + 1e-9);
    CHECK_THAT(g, WithinAbs(cf, 1e-3));
  }
}
