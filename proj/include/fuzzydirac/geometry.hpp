#pragma once

// Constant-coefficient quantum metrics g = g_ij s^i (x) s^j and the quantum
// Levi-Civita connection Gamma_ijk = 2 eps_ikm g_mj + Tr(g) eps_ijk.

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "fuzzydirac/calculus.hpp"

namespace fuzzy {

struct QuantumMetric {
  Eigen::Matrix3d g;
  Eigen::Matrix3d g_inv;
  Eigen::Matrix3d eigen_frame;  // O in SO(3) with g = O diag(lambda) O^T
  Eigen::Vector3d eigenvalues;
  int positive = 0, negative = 0;

  bool euclidean() const { return negative == 0; }
  double trace() const { return g.trace(); }
  double det() const { return g.determinant(); }
};

/// Deterministic special-orthogonal eigendecomposition: eigenvalues ordered
/// by descending magnitude (stable over the solver's ascending-value output,
/// so an already-diagonal metric keeps its axis order), column signs fixed by
/// making the largest-magnitude entry positive, determinant fixed on the last
/// column.
inline void eigendecompose(const Eigen::Matrix3d& g, Eigen::Matrix3d& O,
                           Eigen::Vector3d& lambda, double tol = 1e-10) {
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + g.norm()))
    throw std::invalid_argument("metric must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  Eigen::Vector3d ev = es.eigenvalues();
  Eigen::Matrix3d V = es.eigenvectors();
  if (ev.cwiseAbs().minCoeff() < tol * (1.0 + ev.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("metric must be invertible");

  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(ev[a]) > std::abs(ev[b]) + tol;
  });

  for (int k = 0; k < 3; ++k) {
    lambda[k] = ev[order[k]];
    O.col(k) = V.col(order[k]);
    int imax = 0;
    O.col(k).cwiseAbs().maxCoeff(&imax);
    if (O(imax, k) < 0.0) O.col(k) = -O.col(k);
  }
  if (O.determinant() < 0.0) O.col(2) = -O.col(2);
}

inline QuantumMetric make_metric(const Eigen::Matrix3d& g,
                                 double tol = 1e-10) {
  QuantumMetric m;
  m.g = 0.5 * (g + g.transpose());
  eigendecompose(g, m.eigen_frame, m.eigenvalues, tol);
  m.g_inv = m.g.inverse();
  for (int k = 0; k < 3; ++k)
    (m.eigenvalues[k] > 0 ? m.positive : m.negative) += 1;
  return m;
}

inline QuantumMetric round_metric() {
  return make_metric(Eigen::Matrix3d::Identity());
}

inline QuantumMetric diag_metric(double a, double b, double c) {
  Eigen::Vector3d d(a, b, c);
  return make_metric(d.asDiagonal());
}

/// The unique constant-coefficient QLC: nabla s^i = -(1/2) Gamma^i_jk s^j(x)s^k.
struct ChristoffelSymbols {
  // [i][j][k] layout, 0-based
  std::array<std::array<std::array<double, 3>, 3>, 3> raised{};
  std::array<std::array<std::array<double, 3>, 3>, 3> lowered{};
};

inline ChristoffelSymbols qlc(const QuantumMetric& m) {
  ChristoffelSymbols G;
  const double tr = m.trace();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        double v = tr * levi_civita(i, j, k);
        for (int mm = 1; mm <= 3; ++mm)
          v += 2.0 * levi_civita(i, k, mm) * m.g(mm - 1, j - 1);
        G.lowered[i - 1][j - 1][k - 1] = v;
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = 0.0;
        for (int mm = 0; mm < 3; ++mm)
          v += m.g_inv(i, mm) * G.lowered[mm][j][k];
        G.raised[i][j][k] = v;
      }
  return G;
}

/// Torsion residual max_i || wedge(nabla s^i) - d s^i ||, computed through the
/// exterior algebra of `calculus` on constant coefficients.
inline double check_torsion_free(const ChristoffelSymbols& G) {
  Parameters p(1.0 / 2, 1);  // coefficients are constants; any algebra works
  double res = 0.0;
  for (int i = 0; i < 3; ++i) {
    // wedge-nabla s^i = -(1/2) Gamma^i_jk s^j ^ s^k
    TwoForm wn(p);
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int mm = 1; mm <= 3; ++mm) {
          int eps = levi_civita(j, k, mm);
          if (eps != 0)
            wn.coeff[mm - 1] += scalar(
                p, -0.5 * G.raised[i][j - 1][k - 1] * double(eps));
        }
    OneForm si(p);
    si.coeff[i] = unit(p);
    TwoForm ds = d_oneform(si);
    for (int mm = 0; mm < 3; ++mm)
      res = std::max(res,
                     (wn.coeff[mm] - ds.coeff[mm]).max_abs_coefficient());
  }
  return res;
}

/// Metric-compatibility residual: expanding nabla(g_ij s^i (x) s^j) with the
/// tensor-product connection and flip braiding, the coefficient of
/// s^k (x) s^a (x) s^b is -(1/2)(Gamma_bka + Gamma_akb); return its max norm.
inline double check_metric_compat(const QuantumMetric& m,
                                  const ChristoffelSymbols& G) {
  (void)m;
  double res = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        res = std::max(res, std::abs(0.5 * (G.lowered[b][k][a] +
                                            G.lowered[a][k][b])));
  return res;
}

}  // namespace fuzzy
