#pragma once

// Connes spectral distance on the reduced fuzzy sphere:
//   d(w, w') = sup { |w(a) - w'(a)| : ||[iD, a]|| <= 1 },
// with the supremum restricted to hermitian traceless a. For n = 2 the
// analytic value between coherent states is sin(Theta/2).

#include <Eigen/Dense>
#include <limits>
#include <random>
#include <vector>

#include "fuzzydirac/reduced.hpp"

namespace fuzzy {

/// State on M_n(C): unit-trace positive density matrix, paired by
/// w(a) = Tr(rho a) (matches <theta,phi| a |theta,phi> for pure states).
struct State {
  Eigen::MatrixXcd rho;

  static State from_density(const Eigen::MatrixXcd& rho, double tol = 1e-10) {
    if (rho.rows() != rho.cols())
      throw std::invalid_argument("density matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol * 100.0)
      throw std::invalid_argument("density matrix must be hermitian");
    if (std::abs(rho.trace() - cd{1.0, 0.0}) > tol * 100.0)
      throw std::invalid_argument("density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, false);
    if (es.eigenvalues().minCoeff() < -tol * 100.0)
      throw std::invalid_argument("density matrix must be positive");
    return {rho};
  }

  static State coherent(double theta, double phi) {
    return {coherent_state(theta, phi).density()};
  }

  cd evaluate(const Eigen::MatrixXcd& a) const { return (rho * a).trace(); }
};

/// Operator acting on M_n (x) C^2 by left multiplication with a on the
/// matrix factor, in the index layout of reduced_dirac.
inline Eigen::MatrixXcd module_action(const Eigen::MatrixXcd& a) {
  const int nn = static_cast<int>(a.rows() * a.rows());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(2 * nn, 2 * nn);
  Eigen::MatrixXcd la = detail::left_mult_op(a);
  op.block(0, 0, nn, nn) = la;
  op.block(nn, nn, nn, nn) = la;
  return op;
}

/// Lipschitz seminorm: operator norm of [iD, a (x) id].
inline double lipschitz_seminorm(const Eigen::MatrixXcd& a,
                                 const Eigen::MatrixXcd& iD) {
  Eigen::MatrixXcd comm = iD * module_action(a) - module_action(a) * iD;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(comm);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

inline double lipschitz_seminorm(const Eigen::MatrixXcd& a,
                                 const QuantumMetric& m, int n) {
  return lipschitz_seminorm(a, reduced_dirac(n, m));
}

/// Spectral distance between n = 2 coherent states: sin(Theta/2) where Theta
/// is the angle between the Bloch vectors.
inline double distance_n2_analytic(double theta, double phi, double theta2,
                                   double phi2) {
  Eigen::Vector3d n1 = coherent_state(theta, phi).bloch();
  Eigen::Vector3d n2 = coherent_state(theta2, phi2).bloch();
  return (n1 - n2).norm() / 2.0;
}

struct DistanceResult {
  double value = 0.0;        // best certified lower bound
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Eigen::MatrixXcd certificate;  // optimizing element, seminorm <= 1 + tol
  bool converged = true;
};

namespace detail {

// Real basis of traceless hermitian n x n matrices (generalized Gell-Mann).
inline std::vector<Eigen::MatrixXcd> hermitian_traceless_basis(int n) {
  std::vector<Eigen::MatrixXcd> basis;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(n, n);
      re(p, q) = re(q, p) = 1.0;
      basis.push_back(re);
      Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(n, n);
      im(p, q) = -I;
      im(q, p) = I;
      basis.push_back(im);
    }
  for (int p = 0; p + 1 < n; ++p) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k <= p; ++k) diag(k, k) = 1.0;
    diag(p + 1, p + 1) = -double(p + 1);
    basis.push_back(diag * std::sqrt(2.0 / ((p + 1.0) * (p + 2.0))));
  }
  return basis;
}

inline Eigen::MatrixXcd from_coords(
    const std::vector<Eigen::MatrixXcd>& basis, const Eigen::VectorXd& x) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(basis[0].rows(),
                                              basis[0].cols());
  for (size_t k = 0; k < basis.size(); ++k) a += x[k] * basis[k];
  return a;
}

}  // namespace detail

/// Numerical spectral distance. The problem
///   maximize Tr((rho - rho') a)  subject to  ||[iD, a (x) id]|| <= 1
/// over traceless hermitian a is convex (a linear objective over the
/// preimage of the operator-norm ball), and is solved with ADMM on the
/// splitting Y = [iD, a (x) id]. The returned value is the certified lower
/// bound from the rescaled feasible point; the upper bound comes from a
/// feasible dual point (nuclear-norm certificate), so value and bounds
/// bracket the true distance.
inline DistanceResult distance_numeric(const State& wa, const State& wb,
                                       const QuantumMetric& m, int n,
                                       double tol = 1e-10) {
  if (!m.euclidean())
    throw std::invalid_argument("distance requires Euclidean signature");
  Eigen::MatrixXcd iD = reduced_dirac(n, m);
  Eigen::MatrixXcd delta = wa.rho - wb.rho;
  delta = 0.5 * (delta + delta.adjoint());
  delta -= (delta.trace() / double(n)) * Eigen::MatrixXcd::Identity(n, n);

  auto basis = detail::hermitian_traceless_basis(n);
  const int dim = static_cast<int>(basis.size());
  Eigen::VectorXd c(dim);  // objective gradient in basis coordinates
  for (int k = 0; k < dim; ++k) c[k] = (delta * basis[k]).trace().real();

  DistanceResult best;
  best.certificate = Eigen::MatrixXcd::Zero(n, n);
  if (c.norm() < tol) {
    best.upper_bound = 0.0;
    return best;
  }

  // commutator map in basis coordinates
  std::vector<Eigen::MatrixXcd> comms(dim);
  for (int k = 0; k < dim; ++k) {
    Eigen::MatrixXcd op = module_action(basis[k]);
    comms[k] = iD * op - op * iD;
  }
  const int H = static_cast<int>(comms[0].rows());
  auto apply_T = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(H, H);
    for (int k = 0; k < dim; ++k) out += x[k] * comms[k];
    return out;
  };
  auto apply_Tadj = [&](const Eigen::MatrixXcd& Z) {
    Eigen::VectorXd out(dim);
    for (int k = 0; k < dim; ++k)
      out[k] = (comms[k].adjoint() * Z).trace().real();
    return out;
  };
  // Gram matrix of the commutator map; positive-definite because the
  // seminorm is a norm on traceless hermitian elements.
  Eigen::MatrixXd G(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int l = k; l < dim; ++l)
      G(k, l) = G(l, k) = (comms[k].adjoint() * comms[l]).trace().real();
  Eigen::LDLT<Eigen::MatrixXd> Gfac(G);

  // ADMM: minimize -c.x + indicator(||Y|| <= 1) subject to T(x) = Y.
  double rho = 1.0;
  Eigen::VectorXd x = c / std::max(lipschitz_seminorm(
                                       detail::from_coords(basis, c), iD),
                                   tol);
  Eigen::MatrixXcd Y = apply_T(x);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(H, H);

  auto certified_bounds = [&](double& lower, double& upper,
                              Eigen::VectorXd& x_feas) {
    Eigen::MatrixXcd Tx = apply_T(x);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Tx);
    double smax = svd.singularValues().size()
                      ? svd.singularValues()[0] : 0.0;
    x_feas = smax > tol ? Eigen::VectorXd(x / smax) : x;
    lower = c.dot(x_feas);
    // Dual candidate rho*U, corrected onto the affine constraint
    // T^adj(Z) = c so that ||Z||_nuclear is a valid upper bound.
    Eigen::MatrixXcd Z = rho * U;
    Eigen::VectorXd alpha = Gfac.solve(c - apply_Tadj(Z));
    Z += apply_T(alpha);
    Eigen::JacobiSVD<Eigen::MatrixXcd> dsvd(Z);
    upper = dsvd.singularValues().sum();
  };

  const int max_iters = 200000;
  const double gap_tol = std::max(1e-10, tol);
  double lower = 0.0, upper = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x_feas = x;
  best.converged = false;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd h = apply_Tadj(Y - U);
    x = Gfac.solve(h + c / rho);
    Eigen::MatrixXcd Tx = apply_T(x);
    Eigen::MatrixXcd Yprev = Y;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        Tx + U, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    Y = svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
    U += Tx - Y;
    if (it % 25 == 24) {
      double r_primal = (Tx - Y).norm();
      double r_dual = rho * (Y - Yprev).norm();
      if (r_primal > 10.0 * r_dual) {
        rho *= 2.0;
        U *= 0.5;
      } else if (r_dual > 10.0 * r_primal) {
        rho *= 0.5;
        U *= 2.0;
      }
      certified_bounds(lower, upper, x_feas);
      if (upper - lower < gap_tol * (1.0 + std::abs(lower))) {
        best.converged = true;
        break;
      }
    }
  }
  if (!best.converged) certified_bounds(lower, upper, x_feas);

  best.value = lower;
  best.lower_bound = lower;
  best.upper_bound = upper;
  best.certificate = detail::from_coords(basis, x_feas);
  if (n == 2) {
    // Bloch-vector formula, valid for mixed states as well
    Eigen::Vector3d na, nb;
    for (int i = 0; i < 3; ++i) {
      na[i] = (wa.rho * pauli(i + 1)).trace().real();
      nb[i] = (wb.rho * pauli(i + 1)).trace().real();
    }
    best.upper_bound = std::min(best.upper_bound, (na - nb).norm() / 2.0);
  }
  best.upper_bound = std::max(best.upper_bound, best.lower_bound);
  return best;
}

}  // namespace fuzzy
