#pragma once

// The lambda_p = 1/n reduction to M_n(C): spin matrices, the reduction
// homomorphism x_i -> (2/n) J_i, the reduced Dirac operator on M_n (x) C^2
// and coherent states.

#include <Eigen/Dense>
#include <vector>

#include "fuzzydirac/dirac.hpp"

namespace fuzzy {

struct ReducedRep {
  int n = 0;
  std::array<Eigen::MatrixXcd, 3> J;  // [J_i,J_j] = i eps_ijk J_k, spin (n-1)/2
};

inline ReducedRep spin_matrices(int n) {
  if (n < 2) throw std::invalid_argument("spin matrices need n >= 2");
  const double j = (n - 1) / 2.0;
  Eigen::MatrixXcd J3 = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd Jp = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double mval = j - k;
    J3(k, k) = mval;
    if (k > 0)  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
      Jp(k - 1, k) = std::sqrt(j * (j + 1) - mval * (mval + 1));
  }
  Eigen::MatrixXcd Jm = Jp.adjoint();
  ReducedRep rep;
  rep.n = n;
  rep.J = {(Jp + Jm) / 2.0, (Jp - Jm) / (2.0 * I), J3};
  return rep;
}

/// Substitute x_i -> (2/n) J_i monomial-by-monomial in canonical order.
/// Requires lambda_p = 1/n.
inline Eigen::MatrixXcd reduce(const AlgebraElement& a, int n) {
  if (std::abs(a.params().lambda_p - 1.0 / n) > 1e-12)
    throw std::invalid_argument("reduction requires lambda_p = 1/n");
  ReducedRep rep = spin_matrices(n);
  std::array<Eigen::MatrixXcd, 3> x;
  for (int i = 0; i < 3; ++i) x[i] = (2.0 / n) * rep.J[i];
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [m, w] : a.terms()) {
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 0; k < m.a; ++k) term = term * x[0];
    for (int k = 0; k < m.b; ++k) term = term * x[1];
    for (int k = 0; k < m.c; ++k) term = term * x[2];
    out += w * term;
  }
  return out;
}

namespace detail {

// Row-major vec of an n x n matrix entry (p,q) at index p*n + q.
inline Eigen::MatrixXcd left_mult_op(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) op(p * n + q, r * n + q) = a(p, r);
  return op;
}

inline Eigen::MatrixXcd right_mult_op(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s) op(p * n + q, p * n + s) = a(s, q);
  return op;
}

}  // namespace detail

/// iD on M_n (x) C^2 as a 2n^2 x 2n^2 matrix, with partial_i = -i [J_i, .].
/// Index layout: alpha * n^2 + (row-major matrix index).
inline Eigen::MatrixXcd reduced_dirac(int n, const QuantumMetric& m,
                                      const std::array<cd, 3>& d = {}) {
  SpinData sd = make_spin_data(m, d);
  ReducedRep rep = spin_matrices(n);
  const int nn = n * n;
  Matrix2 K = dirac_constant(sd);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2 * nn, 2 * nn);
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta) {
      Eigen::MatrixXcd blockab = Eigen::MatrixXcd::Zero(nn, nn);
      for (int i = 0; i < 3; ++i) {
        Eigen::MatrixXcd ad = -I * (detail::left_mult_op(rep.J[i]) -
                                    detail::right_mult_op(rep.J[i]));
        blockab += sd.C[i](beta, alpha) * ad;
      }
      blockab += K(beta, alpha) * Eigen::MatrixXcd::Identity(nn, nn);
      D.block(alpha * nn, beta * nn, nn, nn) = blockab;
    }
  return I * D;
}

inline std::vector<double> reduced_spectrum(int n, const QuantumMetric& m) {
  Eigen::MatrixXcd iD = reduced_dirac(n, m);
  if ((iD - iD.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("reduced iD is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(iD, false);
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + 2 * n * n);
}

/// Minimum-variance spin-1/2 state at azimuthal angle theta and rotation
/// angle phi. The stored 2-vector is in the (|down>, |up>)-style component
/// order used by the coherent-state formula; density() converts to the
/// descending-J3 basis of spin_matrices.
struct CoherentState {
  double theta = 0.0, phi = 0.0;
  Eigen::Vector2cd vector;

  Eigen::Matrix2cd density() const {
    Eigen::Vector2cd w;
    w << vector[1], vector[0];
    return w * w.adjoint();
  }

  Eigen::Vector3d bloch() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
  }
};

inline CoherentState coherent_state(double theta, double phi) {
  if (theta < 0.0 || theta > M_PI + 1e-12)
    throw std::invalid_argument("theta must lie in [0, pi]");
  CoherentState s;
  s.theta = theta;
  s.phi = phi;
  s.vector << std::exp(I * phi) * std::sqrt((1.0 - std::cos(theta)) / 2.0),
      std::sqrt((1.0 + std::cos(theta)) / 2.0);
  return s;
}

}  // namespace fuzzy
