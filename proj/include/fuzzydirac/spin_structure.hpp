#pragma once

// Constant-coefficient spectral-triple data on the rank-2 central spinor
// basis: Clifford matrices C^i with {C^i,C^j} = 2 g^ij, the compatible spinor
// connection S_i, the real structure J with signs (eps, eps'), the grading
// obstruction and the KO dimension.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "fuzzydirac/geometry.hpp"

namespace fuzzy {

using Matrix2 = Eigen::Matrix2cd;

inline Matrix2 pauli(int i) {
  Matrix2 s;
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index must be 1, 2 or 3");
  }
  return s;
}

struct SpinData {
  std::array<Matrix2, 3> C;
  std::array<Matrix2, 3> S;
  Matrix2 J_mat;
  int eps = 0;
  int eps_prime = 0;      // sign for D; flips for iD
  cd q{1.0, 0.0};         // phase of J
  std::array<cd, 3> d{};  // connection moduli coefficients
  std::optional<Matrix2> gamma;  // absent: odd triple
};

/// Residuals of the algebraic spectral-triple equations, plus derived data.
struct AxiomReport {
  double clifford = 0.0;       // {C^i,C^j} - 2 g^ij
  double connection = 0.0;     // [C^i,S_j] + (1/2) Gamma^i_jk C^k
  double jj = 0.0;             // conj(J) J - eps
  double sj = 0.0;             // conj(S_i) J - J S_i
  double cj = 0.0;             // conj(C^i) J - eps' J C^i
  double torsion = 0.0;
  double metric_compat = 0.0;
  int eps = 0, eps_prime = 0;
  int eps_prime_iD = 0;
  int ko_dim = -1;
  int grading_dim = 0;  // solution-space dimension of {C^i,gamma} = 0

  double max_residual() const {
    return std::max({clifford, connection, jj, sj, cj, torsion,
                     metric_compat});
  }
};

/// Principal square root, so sqrt(-1) = +i.
inline cd principal_sqrt(double x) {
  return x >= 0.0 ? cd(std::sqrt(x), 0.0) : cd(0.0, std::sqrt(-x));
}

/// C^i = O_ij sigma^j lambda_j^{-1/2}; round metric gives the Pauli matrices.
inline std::array<Matrix2, 3> clifford_from_metric(const QuantumMetric& m) {
  std::array<Matrix2, 3> C;
  for (int i = 0; i < 3; ++i) {
    C[i].setZero();
    for (int j = 0; j < 3; ++j)
      C[i] += m.eigen_frame(i, j) / principal_sqrt(m.eigenvalues[j]) *
              pauli(j + 1);
  }
  return C;
}

/// S_i = O_ij ((i sigma^j / 4) mu_j + d_j) sqrt(lambda_j),
/// mu_j = (-2 lambda_j + sum_m lambda_m) / sqrt(lambda_1 lambda_2 lambda_3).
inline std::array<Matrix2, 3> spinor_connection_from_metric(
    const QuantumMetric& m, const std::array<cd, 3>& d = {}) {
  cd sqrt_det = principal_sqrt(m.eigenvalues.prod());
  std::array<Matrix2, 3> S;
  const double sum = m.eigenvalues.sum();
  for (int i = 0; i < 3; ++i) {
    S[i].setZero();
    for (int j = 0; j < 3; ++j) {
      cd mu = (-2.0 * m.eigenvalues[j] + sum) / sqrt_det;
      S[i] += m.eigen_frame(i, j) * principal_sqrt(m.eigenvalues[j]) *
              ((I / 4.0) * mu * pauli(j + 1) +
               d[j] * Matrix2::Identity());
    }
  }
  return S;
}

namespace detail {

inline Eigen::Vector4cd vec2(const Matrix2& M) {
  Eigen::Vector4cd v;
  v << M(0, 0), M(0, 1), M(1, 0), M(1, 1);
  return v;
}

inline Matrix2 unvec2(const Eigen::Vector4cd& v) {
  Matrix2 M;
  M << v[0], v[1], v[2], v[3];
  return M;
}

// Matrix of X -> A X B on vec2 coordinates.
inline Eigen::Matrix4cd left_right(const Matrix2& A, const Matrix2& B) {
  Eigen::Matrix4cd M;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) M(2 * p + q, 2 * r + s) = A(p, r) * B(s, q);
  return M;
}

inline std::vector<Matrix2> kernel_basis(const Eigen::MatrixXcd& M,
                                         double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * (1.0 + (sv.size() ? sv[0] : 0.0));
  std::vector<Matrix2> basis;
  for (int k = 0; k < M.cols(); ++k)
    if (k >= sv.size() || sv[k] < cut)
      basis.push_back(unvec2(svd.matrixV().col(k)));
  return basis;
}

}  // namespace detail

struct RealStructure {
  Matrix2 J_mat;
  int eps;
  int eps_prime;
};

/// Solve conj(C^i) J = eps' J C^i for each sign; the solution space is one
/// complex phase for exactly one sign choice. The returned J is normalized to
/// Frobenius norm sqrt(2) with its first nonzero entry real positive (q = 1).
inline RealStructure solve_real_structure(const std::array<Matrix2, 3>& C,
                                          double tol = 1e-10) {
  for (int sign : {-1, +1}) {
    Eigen::MatrixXcd M(12, 4);
    for (int i = 0; i < 3; ++i)
      M.block<4, 4>(4 * i, 0) =
          detail::left_right(C[i].conjugate(), Matrix2::Identity()) -
          double(sign) * detail::left_right(Matrix2::Identity(), C[i]);
    auto ker = detail::kernel_basis(M, tol);
    if (ker.empty()) continue;
    if (ker.size() > 1)
      throw std::runtime_error("real structure solution space too large");
    Matrix2 J = ker.front() * std::sqrt(2.0) / ker.front().norm();
    // fix the free phase: first nonzero entry (row-major) real positive
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        if (std::abs(J(p, q)) > tol) {
          J *= std::abs(J(p, q)) / J(p, q);
          p = q = 2;
        }
    Matrix2 JJ = J.conjugate() * J;
    double as_plus = (JJ - Matrix2::Identity()).norm();
    double as_minus = (JJ + Matrix2::Identity()).norm();
    if (std::min(as_plus, as_minus) > tol * 10.0)
      throw std::runtime_error("conj(J) J is not proportional to identity");
    return {J, as_plus < as_minus ? +1 : -1, sign};
  }
  throw std::runtime_error("no real structure solves (CJ) for either sign");
}

/// Dimension of the solution space of {C^i, gamma} = 0 over the given axes.
/// Zero means the triple is odd (no grading exists).
inline int solve_gamma(const std::vector<Matrix2>& C, double tol = 1e-10) {
  Eigen::MatrixXcd M(4 * C.size(), 4);
  for (size_t i = 0; i < C.size(); ++i)
    M.block<4, 4>(4 * static_cast<int>(i), 0) =
        detail::left_right(C[i], Matrix2::Identity()) +
        detail::left_right(Matrix2::Identity(), C[i]);
  return static_cast<int>(detail::kernel_basis(M, tol).size());
}

inline int solve_gamma(const std::array<Matrix2, 3>& C, double tol = 1e-10) {
  return solve_gamma(std::vector<Matrix2>(C.begin(), C.end()), tol);
}

struct ConnectionModuli {
  std::array<Matrix2, 3> particular;
  // kernel basis: each entry is a triple (dS_1, dS_2, dS_3)
  std::vector<std::array<Matrix2, 3>> kernel;
};

/// Most general solution of [C^i, S_j] = -(1/2) Gamma^i_jk C^k as an affine
/// space: particular solution (least squares) plus kernel basis.
inline ConnectionModuli solve_connection_moduli(
    const std::array<Matrix2, 3>& C, const ChristoffelSymbols& G,
    double tol = 1e-10) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(36, 12);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(36);
  int row = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // block row: C^i S_j - S_j C^i + (1/2) Gamma^i_jk C^k = 0
      M.block<4, 4>(row, 4 * j) =
          detail::left_right(C[i], Matrix2::Identity()) -
          detail::left_right(Matrix2::Identity(), C[i]);
      Matrix2 target = Matrix2::Zero();
      for (int k = 0; k < 3; ++k) target -= 0.5 * G.raised[i][j][k] * C[k];
      rhs.segment<4>(row) = detail::vec2(target);
      row += 4;
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXcd sol = svd.solve(rhs);
  if ((M * sol - rhs).norm() > tol * (1.0 + rhs.norm()) * 100.0)
    throw std::runtime_error("connection equation has no solution");

  ConnectionModuli out;
  for (int j = 0; j < 3; ++j)
    out.particular[j] = detail::unvec2(sol.segment<4>(4 * j));

  Eigen::JacobiSVD<Eigen::MatrixXcd> full(M, Eigen::ComputeFullV);
  const auto& sv = full.singularValues();
  const double cut = tol * (1.0 + sv[0]);
  for (int k = 0; k < 12; ++k)
    if (k >= sv.size() || sv[k] < cut) {
      std::array<Matrix2, 3> dS;
      for (int j = 0; j < 3; ++j)
        dS[j] = detail::unvec2(full.matrixV().col(k).segment<4>(4 * j));
      out.kernel.push_back(dS);
    }
  return out;
}

/// KO dimension of an odd real spectral triple from the sign pair. The eps'
/// supplied must already be the iD-adjusted one.
inline int ko_dimension(int eps, int eps_prime_for_iD) {
  if (eps == +1 && eps_prime_for_iD == -1) return 1;
  if (eps == -1 && eps_prime_for_iD == +1) return 3;
  if (eps == -1 && eps_prime_for_iD == -1) return 5;
  if (eps == +1 && eps_prime_for_iD == +1) return 7;
  throw std::invalid_argument("sign pair not in the odd KO table");
}

inline SpinData make_spin_data(const QuantumMetric& m,
                               const std::array<cd, 3>& d = {},
                               double tol = 1e-10) {
  SpinData sd;
  sd.C = clifford_from_metric(m);
  sd.S = spinor_connection_from_metric(m, d);
  RealStructure rs = solve_real_structure(sd.C, tol);
  sd.J_mat = rs.J_mat;
  sd.eps = rs.eps;
  sd.eps_prime = rs.eps_prime;
  sd.d = d;
  if (solve_gamma(sd.C, tol) > 0) sd.gamma = Matrix2::Zero();  // not expected
  return sd;
}

/// Conjugation by U in SL(2,C): C -> U C U^-1, S -> U S U^-1,
/// J -> conj(U) J U^-1. Preserves every algebraic residual.
inline SpinData conjugate_spin_data(const SpinData& in, const Matrix2& U,
                                    double tol = 1e-10) {
  if (std::abs(U.determinant() - cd{1.0, 0.0}) > tol * 100.0)
    throw std::invalid_argument("conjugation matrix must have determinant 1");
  SpinData out = in;
  Matrix2 Uinv = U.inverse();
  for (int i = 0; i < 3; ++i) {
    out.C[i] = U * in.C[i] * Uinv;
    out.S[i] = U * in.S[i] * Uinv;
  }
  out.J_mat = U.conjugate() * in.J_mat * Uinv;
  return out;
}

inline AxiomReport verify_axioms(const QuantumMetric& m, const SpinData& sd) {
  AxiomReport r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix2 anti = sd.C[i] * sd.C[j] + sd.C[j] * sd.C[i] -
                     2.0 * m.g_inv(i, j) * Matrix2::Identity();
      r.clifford = std::max(r.clifford, anti.cwiseAbs().maxCoeff());
    }
  ChristoffelSymbols G = qlc(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix2 lhs = sd.C[i] * sd.S[j] - sd.S[j] * sd.C[i];
      for (int k = 0; k < 3; ++k) lhs += 0.5 * G.raised[i][j][k] * sd.C[k];
      r.connection = std::max(r.connection, lhs.cwiseAbs().maxCoeff());
    }
  r.jj = (sd.J_mat.conjugate() * sd.J_mat -
          double(sd.eps) * Matrix2::Identity())
             .cwiseAbs()
             .maxCoeff();
  for (int i = 0; i < 3; ++i) {
    r.sj = std::max(r.sj, (sd.S[i].conjugate() * sd.J_mat -
                           sd.J_mat * sd.S[i])
                              .cwiseAbs()
                              .maxCoeff());
    r.cj = std::max(
        r.cj, (sd.C[i].conjugate() * sd.J_mat -
               double(sd.eps_prime) * sd.J_mat * sd.C[i])
                  .cwiseAbs()
                  .maxCoeff());
  }
  r.torsion = check_torsion_free(G);
  r.metric_compat = check_metric_compat(m, G);
  r.eps = sd.eps;
  r.eps_prime = sd.eps_prime;
  r.eps_prime_iD = -sd.eps_prime;
  r.grading_dim = solve_gamma(sd.C);
  if (r.grading_dim == 0) r.ko_dim = ko_dimension(r.eps, r.eps_prime_iD);
  return r;
}

}  // namespace fuzzy
