#pragma once

// Harmonic (orbital angular momentum) decomposition of the truncated algebra.
// The operator sum_i partial_i partial_i has eigenvalues -l(l+1) with
// multiplicities 2l+1 on the (L+1)^2-dimensional canonical basis; the
// decomposition is computed through its Lagrange spectral projectors.

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fuzzydirac/calculus.hpp"

namespace fuzzy {

struct HarmonicDecomposition {
  std::vector<AlgebraElement> components;  // indexed by l = 0 .. L
};

class HarmonicContext {
 public:
  explicit HarmonicContext(const Parameters& p)
      : params_(p), basis_(canonical_basis(p.truncation_L)) {
    const int N = static_cast<int>(basis_.size());
    for (int k = 0; k < N; ++k) index_[basis_[k]] = k;

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 0; k < N; ++k) {
      AlgebraElement e = element_of(basis_[k]);
      AlgebraElement lap(params_);
      for (int i = 1; i <= 3; ++i) lap += partial(i, partial(i, e));
      P.col(k) = to_vector(lap);
    }

    validate_spectrum(P);

    const int L = params_.truncation_L;
    projectors_.reserve(L + 1);
    for (int l = 0; l <= L; ++l) {
      Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(N, N);
      for (int m = 0; m <= L; ++m) {
        if (m == l) continue;
        double mu_l = -double(l) * (l + 1), mu_m = -double(m) * (m + 1);
        proj = proj * (P - mu_m * Eigen::MatrixXcd::Identity(N, N)) /
               (mu_l - mu_m);
      }
      projectors_.push_back(std::move(proj));
    }
  }

  const Parameters& params() const { return params_; }
  const std::vector<Monomial>& basis() const { return basis_; }

  Eigen::VectorXcd to_vector(const AlgebraElement& a) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis_.size());
    for (const auto& [m, w] : a.terms()) {
      auto it = index_.find(m);
      if (it == index_.end())
        throw TruncationError("element exceeds the context truncation");
      v[it->second] = w;
    }
    return v;
  }

  AlgebraElement from_vector(const Eigen::VectorXcd& v) const {
    TermMap t;
    for (int k = 0; k < v.size(); ++k)
      if (v[k] != cd{0.0, 0.0}) t.emplace(basis_[k], v[k]);
    return AlgebraElement(params_, std::move(t));
  }

  AlgebraElement element_of(const Monomial& m) const {
    TermMap t;
    t.emplace(m, cd{1.0, 0.0});
    return AlgebraElement(params_, std::move(t));
  }

  HarmonicDecomposition project(const AlgebraElement& a) const {
    Eigen::VectorXcd v = to_vector(a);
    HarmonicDecomposition d;
    for (const auto& proj : projectors_)
      d.components.push_back(from_vector(proj * v));
    return d;
  }

  AlgebraElement component(const AlgebraElement& a, int l) const {
    return from_vector(projectors_.at(l) * to_vector(a));
  }

  /// Coefficient of the unit monomial in the l = 0 component: the integral.
  cd l0_coefficient(const AlgebraElement& a) const {
    Eigen::VectorXcd v = projectors_.at(0) * to_vector(a);
    return v[index_.at(Monomial{0, 0, 0})];
  }

 private:
  void validate_spectrum(const Eigen::MatrixXcd& P) const {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(P, false);
    const double scale =
        params_.tol * (1.0 + P.cwiseAbs().maxCoeff() * P.rows());
    for (int k = 0; k < P.rows(); ++k) {
      cd ev = es.eigenvalues()[k];
      bool matched = false;
      for (int l = 0; l <= params_.truncation_L && !matched; ++l)
        matched = std::abs(ev - cd(-double(l) * (l + 1), 0.0)) < scale;
      if (!matched)
        throw std::runtime_error(
            "eigenvalue clustering failure in harmonic decomposition");
    }
  }

  Parameters params_;
  std::vector<Monomial> basis_;
  std::map<Monomial, int> index_;
  std::vector<Eigen::MatrixXcd> projectors_;
};

/// Shared, lazily built context registry keyed by (lambda_p, L).
inline const HarmonicContext& harmonic_context(const Parameters& p) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::unique_ptr<HarmonicContext>>
      reg;
  std::lock_guard lk(mu);
  auto key = std::make_pair(p.lambda_p, p.truncation_L);
  auto it = reg.find(key);
  if (it == reg.end())
    it = reg.emplace(key, std::make_unique<HarmonicContext>(p)).first;
  return *it->second;
}

inline HarmonicDecomposition harmonic_project(const AlgebraElement& a) {
  return harmonic_context(a.params()).project(a);
}

}  // namespace fuzzy
