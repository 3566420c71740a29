#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fuzzy {

using cd = std::complex<double>;

inline constexpr cd I{0.0, 1.0};

/// Totally antisymmetric tensor, 1-based axis indices.
inline constexpr int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // even permutations of (1,2,3)
  if ((i == 1 && j == 2 && k == 3) || (i == 2 && j == 3 && k == 1) ||
      (i == 3 && j == 1 && k == 2))
    return 1;
  return -1;
}

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Deformation parameter, degree cap and numerical tolerance shared by all
/// values of one algebra instance.
struct Parameters {
  double lambda_p = 0.0;
  int truncation_L = 0;
  double tol = 1e-10;

  Parameters() = default;
  Parameters(double lp, int L, double t = 1e-10)
      : lambda_p(lp), truncation_L(L), tol(t) {
    if (lambda_p == 0.0)
      throw std::invalid_argument("lambda_p must be nonzero");
    if (truncation_L < 0)
      throw std::invalid_argument("truncation_L must be non-negative");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  }

  bool same_algebra(const Parameters& o) const {
    return lambda_p == o.lambda_p && truncation_L == o.truncation_L;
  }

  Parameters with_truncation(int L) const {
    Parameters p(*this);
    p.truncation_L = L;
    return p;
  }
};

}  // namespace fuzzy
