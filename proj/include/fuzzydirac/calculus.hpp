#pragma once

// The 3D differential calculus on the fuzzy sphere: partial derivatives
// partial_i = [x_i, .]/(2 i lambda_p), the exterior derivative and the
// Grassmann exterior algebra on the central basis s^i.

#include <array>
#include <cassert>

#include "fuzzydirac/algebra.hpp"

namespace fuzzy {

/// partial_i a = [x_i, a] / (2 i lambda_p). A derivation; commutes with star
/// and never raises the canonical degree.
inline AlgebraElement partial(int i, const AlgebraElement& a) {
  if (i < 1 || i > 3)
    throw std::invalid_argument("axis index must be 1, 2 or 3");
  const Parameters& p = a.params();
  TermMap xi;
  xi.emplace(Monomial{i == 1, i == 2, i == 3}, cd{1.0, 0.0});
  AlgebraElement x(p, std::move(xi));
  AlgebraElement comm = detail::multiply_unchecked(x, a) -
                        detail::multiply_unchecked(a, x);
  AlgebraElement r = comm * (1.0 / (2.0 * I * p.lambda_p));
  assert(r.degree() <= std::max(a.degree(), 0));
  return r;
}

/// One-form omega = omega_i s^i on the central basis (left and right
/// coefficients coincide since the s^i are central).
struct OneForm {
  std::array<AlgebraElement, 3> coeff;

  explicit OneForm(const Parameters& p)
      : coeff{AlgebraElement(p), AlgebraElement(p), AlgebraElement(p)} {}
  OneForm(AlgebraElement c1, AlgebraElement c2, AlgebraElement c3)
      : coeff{std::move(c1), std::move(c2), std::move(c3)} {}

  const Parameters& params() const { return coeff[0].params(); }

  double max_abs_coefficient() const {
    double s = 0.0;
    for (const auto& c : coeff) s = std::max(s, c.max_abs_coefficient());
    return s;
  }
};

/// Two-form on the basis {s^j ^ s^k : j < k}, indexed by the complementary
/// axis: slot m holds the coefficient of s^{m+1} ^ s^{m+2} (cyclic).
struct TwoForm {
  std::array<AlgebraElement, 3> coeff;

  explicit TwoForm(const Parameters& p)
      : coeff{AlgebraElement(p), AlgebraElement(p), AlgebraElement(p)} {}

  const Parameters& params() const { return coeff[0].params(); }

  double max_abs_coefficient() const {
    double s = 0.0;
    for (const auto& c : coeff) s = std::max(s, c.max_abs_coefficient());
    return s;
  }
};

/// d a = (partial_i a) s^i.
inline OneForm d_function(const AlgebraElement& a) {
  return OneForm(partial(1, a), partial(2, a), partial(3, a));
}

/// Grassmann product of two one-forms; coefficients commute past the s^i.
inline TwoForm wedge(const OneForm& w, const OneForm& e) {
  TwoForm out(w.params());
  for (int m = 1; m <= 3; ++m) {
    AlgebraElement acc(w.params());
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        int eps = levi_civita(i, j, m);
        if (eps != 0)
          acc += double(eps) * multiply(w.coeff[i - 1], e.coeff[j - 1]);
      }
    out.coeff[m - 1] = acc;
  }
  return out;
}

/// d omega, using Leibniz on the coefficients and the Maurer-Cartan relation
/// d s^i = -(1/2) eps_ijk s^j ^ s^k.
inline TwoForm d_oneform(const OneForm& w) {
  TwoForm out(w.params());
  for (int m = 1; m <= 3; ++m) {
    AlgebraElement acc = (-1.0) * w.coeff[m - 1];
    for (int j = 1; j <= 3; ++j)
      for (int i = 1; i <= 3; ++i) {
        int eps = levi_civita(j, i, m);
        if (eps != 0) acc += double(eps) * partial(j, w.coeff[i - 1]);
      }
    out.coeff[m - 1] = acc;
  }
  return out;
}

/// d of a two-form; the top form s^1 ^ s^2 ^ s^3 has a single coefficient.
/// d(s^j ^ s^k) = 0 on this calculus, so only the Leibniz term survives.
inline AlgebraElement d_twoform(const TwoForm& h) {
  AlgebraElement acc(h.params());
  for (int m = 1; m <= 3; ++m) acc += partial(m, h.coeff[m - 1]);
  return acc;
}

}  // namespace fuzzy
