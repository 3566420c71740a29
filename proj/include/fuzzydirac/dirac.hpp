#pragma once

// The geometric Dirac operator D = clifford-contraction of the spinor
// connection, its per-l block matrices, the spectrum, the spinor Laplacian
// and the Lichnerowicz identity. Spinor components are co-spinors (row
// vectors): (D psi)_alpha = partial_i psi_beta C^{i beta}_alpha + psi_beta
// K^beta_alpha with K = S_i C^i.

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "fuzzydirac/hilbert.hpp"
#include "fuzzydirac/spin_structure.hpp"

namespace fuzzy {

/// Constant term of D on the basis: K = S_i C^i. With d = 0 this equals
/// (i/4) Tr(g)/sqrt(det g) times the identity.
inline Matrix2 dirac_constant(const SpinData& sd) {
  Matrix2 K = Matrix2::Zero();
  for (int i = 0; i < 3; ++i) K += sd.S[i] * sd.C[i];
  return K;
}

/// Apply D (not iD) to a spinor field.
inline SpinorField apply_dirac(const SpinData& sd, const SpinorField& psi) {
  const Parameters& p = psi.params();
  Matrix2 K = dirac_constant(sd);
  SpinorField out(p);
  for (int alpha = 0; alpha < 2; ++alpha) {
    AlgebraElement acc(p);
    for (int beta = 0; beta < 2; ++beta) {
      for (int i = 0; i < 3; ++i)
        acc += sd.C[i](beta, alpha) * partial(i + 1, psi.comp[beta]);
      acc += K(beta, alpha) * psi.comp[beta];
    }
    out.comp[alpha] = acc;
  }
  return out;
}

inline SpinorField apply_dirac(const QuantumMetric& m, const SpinorField& psi,
                               const std::array<cd, 3>& d = {}) {
  return apply_dirac(make_spin_data(m, d, psi.params().tol), psi);
}

/// J on spinors: (J psi)_beta = star(psi_alpha) J^alpha_beta.
inline SpinorField apply_real_structure(const SpinData& sd,
                                        const SpinorField& psi) {
  SpinorField out(psi.params());
  for (int beta = 0; beta < 2; ++beta) {
    AlgebraElement acc(psi.params());
    for (int alpha = 0; alpha < 2; ++alpha)
      acc += sd.J_mat(alpha, beta) * star(psi.comp[alpha]);
    out.comp[beta] = acc;
  }
  return out;
}

struct DiracBlock {
  int l = 0;
  Eigen::MatrixXcd matrix;  // iD on S_l, size 2(2l+1)
  double hermiticity_residual = 0.0;
  // True when the basis is orthonormal under the integral pairing. The
  // pairing degenerates on A_l for lambda_p >= 1/l; the block is then
  // computed in a coefficient-orthonormal basis instead, which leaves the
  // eigenvalues unchanged but makes the matrix only similar to hermitian.
  bool orthonormal = true;
  std::vector<SpinorField> basis;
};

/// Orthonormal spinor basis of S_l = A_l + A_l: (b_k, 0) then (0, b_k).
inline std::vector<SpinorField> spinor_basis(int l, const Parameters& p) {
  auto b = orthonormal_basis(l, p);
  std::vector<SpinorField> out;
  for (int slot = 0; slot < 2; ++slot)
    for (const auto& e : b) {
      SpinorField s(e.params());
      s.comp[slot] = e;
      out.push_back(std::move(s));
    }
  return out;
}

inline DiracBlock dirac_block(const SpinData& sd, int l,
                              const Parameters& p) {
  DiracBlock blk;
  blk.l = l;
  try {
    blk.basis = spinor_basis(l, p);
  } catch (const std::runtime_error&) {
    blk.orthonormal = false;  // integral Gram degenerate at this lambda_p
  }
  if (blk.orthonormal) {
    const int n = static_cast<int>(blk.basis.size());
    blk.matrix.resize(n, n);
    for (int col = 0; col < n; ++col) {
      SpinorField iD = I * apply_dirac(sd, blk.basis[col]);
      for (int row = 0; row < n; ++row)
        blk.matrix(row, col) = inner_product(blk.basis[row], iD);
    }
    blk.hermiticity_residual =
        (blk.matrix - blk.matrix.adjoint()).cwiseAbs().maxCoeff();
    return blk;
  }

  // Coefficient-orthonormal fallback: QR-orthonormalize the coefficient
  // vectors of the harmonic basis and read off iD by projection. iD maps
  // S_l to itself, so the projected matrix represents it exactly.
  const auto& ctx = harmonic_context(p.with_truncation(std::max(l, 1)));
  auto raw = harmonic_basis(l, p);
  const int m = static_cast<int>(raw.size());
  const int N = static_cast<int>(ctx.basis().size());
  Eigen::MatrixXcd V(N, m);
  for (int k = 0; k < m; ++k) V.col(k) = ctx.to_vector(raw[k]);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(V);
  Eigen::MatrixXcd Q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(N, m);
  for (int slot = 0; slot < 2; ++slot)
    for (int k = 0; k < m; ++k) {
      SpinorField s(ctx.params());
      s.comp[slot] = ctx.from_vector(Q.col(k));
      blk.basis.push_back(std::move(s));
    }
  const int n = 2 * m;
  Eigen::MatrixXcd images(2 * N, n);
  for (int col = 0; col < n; ++col) {
    SpinorField iD = I * apply_dirac(sd, blk.basis[col]);
    images.col(col).head(N) = ctx.to_vector(iD.comp[0]);
    images.col(col).tail(N) = ctx.to_vector(iD.comp[1]);
  }
  Eigen::MatrixXcd Qs = Eigen::MatrixXcd::Zero(2 * N, n);
  for (int k = 0; k < m; ++k) {
    Qs.col(k).head(N) = Q.col(k);
    Qs.col(m + k).tail(N) = Q.col(k);
  }
  blk.matrix = Qs.adjoint() * images;
  return blk;
}

inline DiracBlock dirac_block(const QuantumMetric& m, int l,
                              const Parameters& p) {
  return dirac_block(make_spin_data(m, {}, p.tol), l, p);
}

struct EigenvalueCluster {
  double value = 0.0;
  int multiplicity = 0;
};

/// Merge eigenvalues within 100 tol into multiplicity clusters.
inline std::vector<EigenvalueCluster> cluster_eigenvalues(
    std::vector<double> ev, double tol) {
  std::sort(ev.begin(), ev.end());
  std::vector<EigenvalueCluster> out;
  for (double v : ev) {
    if (!out.empty() && std::abs(v - out.back().value) < 100.0 * tol) {
      // running mean keeps the cluster center stable
      auto& c = out.back();
      c.value = (c.value * c.multiplicity + v) / (c.multiplicity + 1);
      c.multiplicity += 1;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

struct SpectralReport {
  std::vector<std::vector<EigenvalueCluster>> per_l;  // index l
  std::vector<double> sorted_spectrum;                // all blocks merged
  double hermiticity_residual = 0.0;
  double lambda_p = 0.0;
  int truncation_L = 0;
};

inline SpectralReport spectrum(const SpinData& sd, int L,
                               const Parameters& p) {
  SpectralReport rep;
  rep.lambda_p = p.lambda_p;
  rep.truncation_L = L;
  for (int l = 0; l <= L; ++l) {
    DiracBlock blk = dirac_block(sd, l, p);
    std::vector<double> ev;
    if (blk.orthonormal) {
      rep.hermiticity_residual =
          std::max(rep.hermiticity_residual, blk.hermiticity_residual);
      if (blk.hermiticity_residual > 100.0 * p.tol)
        throw std::runtime_error("non-hermitian Dirac block");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk.matrix, false);
      ev.assign(es.eigenvalues().data(),
                es.eigenvalues().data() + es.eigenvalues().size());
    } else {
      // Degenerate-pairing basis: the matrix is only similar to hermitian,
      // so diagonalize generally and gate on the imaginary parts.
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(blk.matrix, false);
      for (int k = 0; k < es.eigenvalues().size(); ++k) {
        if (std::abs(es.eigenvalues()[k].imag()) > 100.0 * p.tol)
          throw std::runtime_error("complex eigenvalue in Dirac block");
        ev.push_back(es.eigenvalues()[k].real());
      }
    }
    rep.sorted_spectrum.insert(rep.sorted_spectrum.end(), ev.begin(),
                               ev.end());
    rep.per_l.push_back(cluster_eigenvalues(std::move(ev), p.tol));
  }
  std::sort(rep.sorted_spectrum.begin(), rep.sorted_spectrum.end());
  return rep;
}

inline SpectralReport spectrum(const QuantumMetric& m, int L,
                               const Parameters& p) {
  if (!m.euclidean())
    throw std::invalid_argument(
        "spectrum is only defined for Euclidean signature");
  return spectrum(make_spin_data(m, {}, p.tol), L, p);
}

/// Spinor Laplacian from the tensor-product connection:
/// with F_i = d_i psi + psi S_i,
/// Delta psi = g^{ij} (d_j F_i + F_i S_j) - (1/2) Gamma^i_jk g^{jk} F_i.
inline SpinorField spinor_laplacian(const QuantumMetric& m,
                                    const SpinData& sd,
                                    const SpinorField& psi) {
  const Parameters& p = psi.params();
  ChristoffelSymbols G = qlc(m);
  std::array<SpinorField, 3> F{SpinorField(p), SpinorField(p),
                               SpinorField(p)};
  for (int i = 0; i < 3; ++i)
    for (int alpha = 0; alpha < 2; ++alpha) {
      AlgebraElement acc = partial(i + 1, psi.comp[alpha]);
      for (int beta = 0; beta < 2; ++beta)
        acc += sd.S[i](beta, alpha) * psi.comp[beta];
      F[i].comp[alpha] = acc;
    }
  SpinorField out(p);
  for (int i = 0; i < 3; ++i) {
    double gamma_trace = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        gamma_trace += G.raised[i][j][k] * m.g_inv(j, k);
    for (int alpha = 0; alpha < 2; ++alpha) {
      AlgebraElement acc(p);
      for (int j = 0; j < 3; ++j) {
        acc += m.g_inv(j, i) * partial(j + 1, F[i].comp[alpha]);
        for (int beta = 0; beta < 2; ++beta)
          acc += m.g_inv(j, i) * sd.S[j](beta, alpha) * F[i].comp[beta];
      }
      acc += (-0.5 * gamma_trace) * F[i].comp[alpha];
      out.comp[alpha] += acc;
    }
  }
  return out;
}

/// Clifford-contracted curvature of the spinor connection, a constant matrix:
/// -(1/2) eps_ijk S_i C^k C^j - S_i S_j C^j C^i + g^{ij} S_i S_j.
inline Matrix2 curvature_action(const QuantumMetric& m, const SpinData& sd) {
  Matrix2 M = Matrix2::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        int eps = levi_civita(i + 1, j + 1, k + 1);
        if (eps != 0) M += -0.5 * double(eps) * sd.S[i] * sd.C[k] * sd.C[j];
      }
      M += -sd.S[i] * sd.S[j] * sd.C[j] * sd.C[i] +
           m.g_inv(i, j) * sd.S[i] * sd.S[j];
    }
  return M;
}

inline Matrix2 curvature_action(const QuantumMetric& m) {
  return curvature_action(m, make_spin_data(m));
}

/// Max residual of D^2 - Delta_S - curvature over an orthonormal basis of
/// the blocks l = 0..L (coefficient sup norm).
inline double lichnerowicz_residual(const QuantumMetric& m, int L,
                                    const Parameters& p,
                                    const std::array<cd, 3>& d = {}) {
  SpinData sd = make_spin_data(m, d, p.tol);
  Matrix2 R = curvature_action(m, sd);
  double res = 0.0;
  for (int l = 0; l <= L; ++l)
    for (const auto& e : spinor_basis(l, p)) {
      SpinorField lhs = apply_dirac(sd, apply_dirac(sd, e));
      SpinorField rhs = spinor_laplacian(m, sd, e);
      for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
          rhs.comp[alpha] += R(beta, alpha) * e.comp[beta];
      res = std::max(res, (lhs - rhs).max_abs_coefficient());
    }
  return res;
}

struct AdjointnessReport {
  double dirac_symmetry = 0.0;  // <iD psi, phi> - <psi, iD phi>
  double j_isometry = 0.0;      // <J psi, J phi> - <phi, psi>
};

inline SpinorField random_spinor_in_block(int l, const Parameters& p,
                                          std::mt19937& rng) {
  auto basis = spinor_basis(l, p);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpinorField out(basis.front().params());
  for (const auto& e : basis) out += cd(u(rng), u(rng)) * e;
  return out;
}

inline AdjointnessReport adjointness_check(const QuantumMetric& m, int L,
                                           const Parameters& p,
                                           const std::array<cd, 3>& d = {},
                                           int samples = 5,
                                           unsigned seed = 777) {
  SpinData sd = make_spin_data(m, d, p.tol);
  std::mt19937 rng(seed);
  AdjointnessReport rep;
  for (int l = 0; l <= L; ++l)
    for (int s = 0; s < samples; ++s) {
      SpinorField psi = random_spinor_in_block(l, p, rng);
      SpinorField phi = random_spinor_in_block(l, p, rng);
      SpinorField iDpsi = I * apply_dirac(sd, psi);
      SpinorField iDphi = I * apply_dirac(sd, phi);
      rep.dirac_symmetry =
          std::max(rep.dirac_symmetry,
                   std::abs(inner_product(iDpsi, phi) -
                            inner_product(psi, iDphi)));
      rep.j_isometry = std::max(
          rep.j_isometry,
          std::abs(inner_product(apply_real_structure(sd, psi),
                                 apply_real_structure(sd, phi)) -
                   inner_product(phi, psi)));
    }
  return rep;
}

}  // namespace fuzzy
