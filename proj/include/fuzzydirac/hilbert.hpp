#pragma once

// The integral (projection to the l = 0 harmonic component), the spinor
// inner product and the per-l Gram machinery used to orthonormalize the
// spinor blocks.

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "fuzzydirac/harmonic.hpp"

namespace fuzzy {

/// integral(a): coefficient of 1 in the l = 0 harmonic component of a.
/// Computed in a context wide enough for the element's actual degree.
inline cd integral(const AlgebraElement& a) {
  if (a.is_zero()) return {0.0, 0.0};
  const int L = std::max(a.degree(), a.params().truncation_L);
  const auto& ctx = harmonic_context(a.params().with_truncation(L));
  return ctx.l0_coefficient(a.with_truncation(L));
}

/// integral(star(a) b), with the product taken at a lifted truncation so the
/// inner product is defined for any pair within the nominal cap.
inline cd pairing(const AlgebraElement& a, const AlgebraElement& b) {
  const int L = a.degree() + b.degree();
  AlgebraElement prod = detail::multiply_unchecked(
      star(a).with_truncation(L), b.with_truncation(L));
  return integral(prod);
}

struct SpinorField {
  std::array<AlgebraElement, 2> comp;

  explicit SpinorField(const Parameters& p)
      : comp{AlgebraElement(p), AlgebraElement(p)} {}
  SpinorField(AlgebraElement c1, AlgebraElement c2)
      : comp{std::move(c1), std::move(c2)} {
    if (!comp[0].params().same_algebra(comp[1].params()))
      throw ParameterMismatch("spinor components have different Parameters");
  }

  const Parameters& params() const { return comp[0].params(); }

  int degree() const { return std::max(comp[0].degree(), comp[1].degree()); }

  double max_abs_coefficient() const {
    return std::max(comp[0].max_abs_coefficient(),
                    comp[1].max_abs_coefficient());
  }

  SpinorField& operator+=(const SpinorField& o) {
    comp[0] += o.comp[0];
    comp[1] += o.comp[1];
    return *this;
  }
  SpinorField& operator-=(const SpinorField& o) {
    comp[0] -= o.comp[0];
    comp[1] -= o.comp[1];
    return *this;
  }
  SpinorField& operator*=(cd z) {
    comp[0] *= z;
    comp[1] *= z;
    return *this;
  }
  friend SpinorField operator+(SpinorField a, const SpinorField& b) {
    return a += b;
  }
  friend SpinorField operator-(SpinorField a, const SpinorField& b) {
    return a -= b;
  }
  friend SpinorField operator*(cd z, SpinorField a) { return a *= z; }
};

/// <psi, phi> = integral(star(psi_1) phi_1 + star(psi_2) phi_2).
inline cd inner_product(const SpinorField& psi, const SpinorField& phi) {
  if (psi.params().lambda_p != phi.params().lambda_p)
    throw ParameterMismatch("spinors live at different lambda_p");
  return pairing(psi.comp[0], phi.comp[0]) +
         pairing(psi.comp[1], phi.comp[1]);
}

inline double spinor_norm(const SpinorField& psi) {
  return std::sqrt(std::max(0.0, inner_product(psi, psi).real()));
}

/// Basis of the harmonic component A_l: projections of the canonical
/// monomials in canonical order, keeping the first 2l+1 independent ones.
/// Independence is decided on coefficient vectors, not with the integral
/// pairing: the pairing degenerates for lambda_p >= 1/l while the component
/// dimension stays 2l+1 for every lambda_p in (0,1).
inline std::vector<AlgebraElement> harmonic_basis(int l,
                                                  const Parameters& p) {
  const auto& ctx = harmonic_context(p.with_truncation(std::max(l, 1)));
  const int dim = static_cast<int>(ctx.basis().size());
  std::vector<AlgebraElement> basis;
  Eigen::MatrixXcd kept(dim, 0);  // orthonormal coefficient columns
  for (const auto& mono : ctx.basis()) {
    if (static_cast<int>(basis.size()) == 2 * l + 1) break;
    AlgebraElement cand = ctx.component(ctx.element_of(mono), l);
    Eigen::VectorXcd v = ctx.to_vector(cand);
    const double full = v.norm();
    if (full < 1e-12) continue;
    Eigen::VectorXcd r = v - kept * (kept.adjoint() * v);
    r -= kept * (kept.adjoint() * r);  // second pass for stability
    if (r.norm() > 1e-8 * full) {
      basis.push_back(cand);
      kept.conservativeResize(Eigen::NoChange, kept.cols() + 1);
      kept.col(kept.cols() - 1) = r / r.norm();
    }
  }
  if (static_cast<int>(basis.size()) != 2 * l + 1)
    throw std::runtime_error("harmonic component has unexpected dimension");
  return basis;
}

/// Orthonormal basis of A_l under the integral inner product, via Cholesky
/// factorization of the Gram matrix of harmonic_basis. Deterministic.
inline std::vector<AlgebraElement> orthonormal_basis(int l,
                                                     const Parameters& p) {
  auto raw = harmonic_basis(l, p);
  const int n = static_cast<int>(raw.size());
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = pairing(raw[i], raw[j]);
  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Gram matrix is not positive-definite");
  // b_new = b_raw L^{-dagger}: G = L L^dagger gives an orthonormal family
  Eigen::MatrixXcd Linv_h =
      llt.matrixL().toDenseMatrix().inverse().adjoint();
  std::vector<AlgebraElement> out;
  for (int j = 0; j < n; ++j) {
    AlgebraElement e(raw[0].params());
    for (int k = 0; k < n; ++k) e += Linv_h(k, j) * raw[k];
    out.push_back(e);
  }
  return out;
}

/// Full Gram matrix of the canonical monomial basis at truncation L.
inline Eigen::MatrixXcd monomial_gram(const Parameters& p) {
  auto basis = canonical_basis(p.truncation_L);
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermMap ti, tj;
      ti.emplace(basis[i], cd{1.0, 0.0});
      tj.emplace(basis[j], cd{1.0, 0.0});
      G(i, j) = pairing(AlgebraElement(p, std::move(ti)),
                        AlgebraElement(p, std::move(tj)));
    }
  return G;
}

inline AlgebraElement random_element(const Parameters& p, int max_degree,
                                     std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TermMap t;
  for (const auto& m : canonical_basis(std::min(max_degree,
                                                p.truncation_L)))
    t.emplace(m, cd(u(rng), u(rng)));
  return AlgebraElement(p, std::move(t));
}

struct IntegralLawReport {
  double partial_law = 0.0;   // integral(partial_i a) = 0
  double trace_law = 0.0;     // integral(ab) = integral(ba)
  double star_law = 0.0;      // integral(star a) = conj(integral a)
  double min_gram_eigenvalue = 0.0;

  bool pass(double tol) const {
    return partial_law < tol && trace_law < tol && star_law < tol &&
           min_gram_eigenvalue > 0.0;
  }
};

inline IntegralLawReport verify_integral_laws(const Parameters& p,
                                              int samples = 50,
                                              unsigned seed = 12345) {
  std::mt19937 rng(seed);
  IntegralLawReport r;
  const int half = p.truncation_L / 2;
  for (int s = 0; s < samples; ++s) {
    AlgebraElement a = random_element(p, half, rng);
    AlgebraElement b = random_element(p, half, rng);
    for (int i = 1; i <= 3; ++i)
      r.partial_law = std::max(r.partial_law,
                               std::abs(integral(partial(i, a))));
    r.trace_law = std::max(
        r.trace_law, std::abs(integral(multiply(a, b)) -
                              integral(multiply(b, a))));
    r.star_law = std::max(
        r.star_law, std::abs(integral(star(a)) - std::conj(integral(a))));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(monomial_gram(p));
  r.min_gram_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

}  // namespace fuzzy
