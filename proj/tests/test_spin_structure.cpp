#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fuzzydirac/spin_structure.hpp"

using namespace fuzzy;

namespace {

double mdiff(const Matrix2& a, const Matrix2& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::Matrix3d random_spd(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  Eigen::Matrix3d A;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) A(r, c) = gauss(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(A);
  Eigen::Matrix3d Q = qr.householderQ();
  Eigen::Vector3d ev(u(rng), u(rng), u(rng));
  return Q * ev.asDiagonal() * Q.transpose();
}

Matrix2 random_su2(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  cd a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
  double n = std::sqrt(std::norm(a) + std::norm(b));
  a /= n;
  b /= n;
  Matrix2 U;
  U << a, b, -std::conj(b), std::conj(a);
  return U;
}

}  // namespace

TEST_CASE("Clifford matrices from the metric") {
  SUBCASE("round metric gives the Pauli matrices") {
    auto C = clifford_from_metric(round_metric());
    for (int i = 0; i < 3; ++i) CHECK(mdiff(C[i], pauli(i + 1)) < 1e-13);
  }
  SUBCASE("diag(-1,1,1) uses the principal square root") {
    auto C = clifford_from_metric(diag_metric(-1, 1, 1));
    CHECK(mdiff(C[0], -I * pauli(1)) < 1e-13);
    CHECK(mdiff(C[1], pauli(2)) < 1e-13);
    CHECK(mdiff(C[2], pauli(3)) < 1e-13);
  }
  SUBCASE("diag(4,1,1) rescales the first axis") {
    QuantumMetric m = diag_metric(4, 1, 1);
    auto C = clifford_from_metric(m);
    CHECK(mdiff(C[0], 0.5 * pauli(1)) < 1e-13);
    Matrix2 anti = C[0] * C[0] + C[0] * C[0];
    CHECK(mdiff(anti, 2.0 * m.g_inv(0, 0) * Matrix2::Identity()) < 1e-13);
  }
  SUBCASE("anticommutators represent the inverse metric") {
    std::mt19937 rng(51);
    for (int s = 0; s < 20; ++s) {
      QuantumMetric m = make_metric(random_spd(rng));
      auto C = clifford_from_metric(m);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(mdiff(C[i] * C[j] + C[j] * C[i],
                      2.0 * m.g_inv(i, j) * Matrix2::Identity()) < 1e-12);
    }
  }
}

TEST_CASE("spinor connection from the metric") {
  SUBCASE("round metric, d = 0") {
    auto S = spinor_connection_from_metric(round_metric());
    for (int i = 0; i < 3; ++i)
      CHECK(mdiff(S[i], (I / 4.0) * pauli(i + 1)) < 1e-13);
  }
  SUBCASE("diag(-1,1,1), d = 0") {
    auto S = spinor_connection_from_metric(diag_metric(-1, 1, 1));
    CHECK(mdiff(S[0], (3.0 * I / 4.0) * pauli(1)) < 1e-13);
    CHECK(mdiff(S[1], -0.25 * pauli(2)) < 1e-13);
    CHECK(mdiff(S[2], -0.25 * pauli(3)) < 1e-13);
  }
  SUBCASE("solves the connection-compatibility equation for any metric") {
    std::mt19937 rng(53);
    for (int s = 0; s < 20; ++s) {
      QuantumMetric m = make_metric(random_spd(rng));
      auto C = clifford_from_metric(m);
      auto S = spinor_connection_from_metric(m);
      ChristoffelSymbols G = qlc(m);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Matrix2 lhs = C[i] * S[j] - S[j] * C[i];
          for (int k = 0; k < 3; ++k) lhs += 0.5 * G.raised[i][j][k] * C[k];
          CHECK(lhs.cwiseAbs().maxCoeff() < 1e-12);
        }
    }
  }
}

TEST_CASE("real structure solutions and signs") {
  SUBCASE("round metric") {
    RealStructure rs = solve_real_structure(clifford_from_metric(round_metric()));
    Matrix2 expect;
    expect << 0, 1, -1, 0;
    CHECK(mdiff(rs.J_mat, expect) < 1e-12);
    CHECK(rs.eps == -1);
    CHECK(rs.eps_prime == -1);
    CHECK(mdiff(rs.J_mat.conjugate() * rs.J_mat,
                double(rs.eps) * Matrix2::Identity()) < 1e-12);
  }
  SUBCASE("diag(-1,1,1)") {
    RealStructure rs =
        solve_real_structure(clifford_from_metric(diag_metric(-1, 1, 1)));
    CHECK(mdiff(rs.J_mat, pauli(3)) < 1e-12);
    CHECK(rs.eps == +1);
    CHECK(rs.eps_prime == +1);
  }
  SUBCASE("phase covariance of the residuals") {
    QuantumMetric m = round_metric();
    SpinData sd = make_spin_data(m);
    for (int k = 0; k < 8; ++k) {
      SpinData rot = sd;
      rot.J_mat = std::exp(I * (2.0 * M_PI * k / 8.0)) * sd.J_mat;
      AxiomReport r = verify_axioms(m, rot);
      CHECK(r.jj < 1e-12);
      CHECK(r.sj < 1e-12);
      CHECK(r.cj < 1e-12);
    }
  }
}

TEST_CASE("grading obstruction") {
  CHECK(solve_gamma(clifford_from_metric(round_metric())) == 0);
  CHECK(solve_gamma(clifford_from_metric(diag_metric(-1, 1, 1))) == 0);
  // a single Clifford generator leaves a two-dimensional anticommutant
  CHECK(solve_gamma(std::vector<Matrix2>{pauli(3)}) == 2);
}

TEST_CASE("connection moduli space") {
  QuantumMetric m = round_metric();
  auto C = clifford_from_metric(m);
  ConnectionModuli moduli = solve_connection_moduli(C, qlc(m));
  CHECK(moduli.kernel.size() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(mdiff(moduli.particular[i], (I / 4.0) * pauli(i + 1)) < 1e-10);
  // kernel directions are scalar shifts of the connection components
  for (const auto& dS : moduli.kernel)
    for (int j = 0; j < 3; ++j) {
      Matrix2 traceless = dS[j] - 0.5 * dS[j].trace() * Matrix2::Identity();
      CHECK(traceless.cwiseAbs().maxCoeff() < 1e-10);
    }

  std::mt19937 rng(61);
  for (int s = 0; s < 10; ++s) {
    QuantumMetric g = make_metric(random_spd(rng));
    ConnectionModuli mod = solve_connection_moduli(clifford_from_metric(g),
                                                   qlc(g));
    CHECK(mod.kernel.size() == 3);
  }
}

TEST_CASE("KO dimension table") {
  CHECK(ko_dimension(-1, +1) == 3);
  CHECK(ko_dimension(+1, +1) == 7);
  CHECK(ko_dimension(-1, -1) == 5);
  CHECK(ko_dimension(+1, -1) == 1);
}

TEST_CASE("axiom report on anchor and random metrics") {
  SUBCASE("round") {
    QuantumMetric m = round_metric();
    AxiomReport r = verify_axioms(m, make_spin_data(m));
    CHECK(r.max_residual() < 1e-10);
    CHECK(r.eps == -1);
    CHECK(r.eps_prime_iD == +1);
    CHECK(r.ko_dim == 3);
    CHECK(r.grading_dim == 0);
  }
  SUBCASE("diag(-1,1,1)") {
    QuantumMetric m = diag_metric(-1, 1, 1);
    AxiomReport r = verify_axioms(m, make_spin_data(m));
    CHECK(r.max_residual() < 1e-10);
    CHECK(r.eps == +1);
    CHECK(r.eps_prime == +1);
    CHECK(r.grading_dim == 0);
  }
  SUBCASE("random positive-definite metrics") {
    std::mt19937 rng(71);
    for (int s = 0; s < 20; ++s) {
      QuantumMetric m = make_metric(random_spd(rng));
      AxiomReport r = verify_axioms(m, make_spin_data(m));
      CHECK(r.max_residual() < 1e-10);
      CHECK(r.grading_dim == 0);
    }
  }
}

TEST_CASE("conjugation by unimodular matrices preserves the axioms") {
  QuantumMetric m = round_metric();
  SpinData sd = make_spin_data(m);

  SUBCASE("identity is a no-op") {
    SpinData same = conjugate_spin_data(sd, Matrix2::Identity());
    for (int i = 0; i < 3; ++i) {
      CHECK(mdiff(same.C[i], sd.C[i]) < 1e-14);
      CHECK(mdiff(same.S[i], sd.S[i]) < 1e-14);
    }
    CHECK(mdiff(same.J_mat, sd.J_mat) < 1e-14);
  }
  SUBCASE("random SU(2)") {
    std::mt19937 rng(81);
    for (int s = 0; s < 10; ++s) {
      AxiomReport r = verify_axioms(m, conjugate_spin_data(sd, random_su2(rng)));
      CHECK(r.max_residual() < 1e-10);
    }
  }
  SUBCASE("non-unimodular conjugation is rejected") {
    CHECK_THROWS_AS(conjugate_spin_data(sd, 2.0 * Matrix2::Identity()),
                    std::invalid_argument);
  }
  SUBCASE("non-unitary SL(2,C) keeps the algebraic residuals") {
    Matrix2 U;
    U << 1.3, 0.2, 0.0, 1.0 / 1.3;
    AxiomReport r = verify_axioms(m, conjugate_spin_data(sd, U));
    CHECK(r.max_residual() < 1e-10);
  }
}
