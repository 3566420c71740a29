#pragma once

// Arithmetic in the fuzzy sphere algebra: generators x1,x2,x3 with
//   [x_i, x_j] = 2 i lambda_p eps_ijk x_k,   sum_i x_i^2 = 1 - lambda_p^2.
// Elements are stored on the canonical monomial basis x1^a x2^b x3^c with
// c <= 1; x3^2 is always eliminated through the sphere relation.

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

#include "fuzzydirac/common.hpp"

namespace fuzzy {

struct Monomial {
  int a = 0, b = 0, c = 0;  // exponents of x1, x2, x3; canonical when c <= 1

  int degree() const { return a + b + c; }
  auto operator<=>(const Monomial&) const = default;
};

using TermMap = std::map<Monomial, cd>;

namespace detail {

inline void add_term(TermMap& t, const Monomial& m, cd z) {
  auto it = t.find(m);
  if (it == t.end())
    t.emplace(m, z);
  else
    it->second += z;
}

inline void add_scaled(TermMap& out, const TermMap& in, cd z) {
  for (const auto& [m, w] : in) add_term(out, m, z * w);
}

// Right multiplication of a canonical monomial by a generator, as a canonical
// term map. Recursions strictly decrease (degree, c, b) lexicographically.
inline TermMap times_generator(const Monomial& m, int i, double lambda) {
  const cd two_il = 2.0 * I * lambda;
  TermMap out;
  switch (i) {
    case 1:
      if (m.c == 1) {
        // x3 x1 = x1 x3 + 2 i lambda x2
        TermMap head = times_generator({m.a, m.b, 0}, 1, lambda);
        for (const auto& [h, w] : head)
          add_scaled(out, times_generator(h, 3, lambda), w);
        add_term(out, {m.a, m.b + 1, 0}, two_il);
      } else if (m.b == 0) {
        add_term(out, {m.a + 1, 0, 0}, 1.0);
      } else {
        // x2 x1 = x1 x2 - 2 i lambda x3
        TermMap head = times_generator({m.a, m.b - 1, 0}, 1, lambda);
        for (const auto& [h, w] : head)
          add_scaled(out, times_generator(h, 2, lambda), w);
        add_term(out, {m.a, m.b - 1, 1}, -two_il);
      }
      break;
    case 2:
      if (m.c == 1) {
        // x3 x2 = x2 x3 - 2 i lambda x1
        add_term(out, {m.a, m.b + 1, 1}, 1.0);
        add_scaled(out, times_generator({m.a, m.b, 0}, 1, lambda), -two_il);
      } else {
        add_term(out, {m.a, m.b + 1, 0}, 1.0);
      }
      break;
    case 3:
      if (m.c == 0) {
        add_term(out, {m.a, m.b, 1}, 1.0);
      } else {
        // x3^2 = (1 - lambda^2) - x1^2 - x2^2
        add_term(out, {m.a, m.b, 0}, 1.0 - lambda * lambda);
        for (int g : {1, 2}) {
          TermMap once = times_generator({m.a, m.b, 0}, g, lambda);
          for (const auto& [h, w] : once)
            add_scaled(out, times_generator(h, g, lambda), -w);
        }
      }
      break;
    default:
      throw std::invalid_argument("generator index must be 1, 2 or 3");
  }
  return out;
}

inline TermMap element_times_generator(const TermMap& e, int i, double lambda) {
  TermMap out;
  for (const auto& [m, w] : e)
    add_scaled(out, times_generator(m, i, lambda), w);
  return out;
}

// Canonical form of the product of two canonical monomials.
inline TermMap monomial_product(const Monomial& m1, const Monomial& m2,
                                double lambda) {
  TermMap acc;
  acc.emplace(m1, cd{1.0, 0.0});
  for (int k = 0; k < m2.a; ++k) acc = element_times_generator(acc, 1, lambda);
  for (int k = 0; k < m2.b; ++k) acc = element_times_generator(acc, 2, lambda);
  for (int k = 0; k < m2.c; ++k) acc = element_times_generator(acc, 3, lambda);
  return acc;
}

// Per-lambda memoised table of monomial products. Built lazily, safe for
// concurrent readers.
class ProductTable {
 public:
  explicit ProductTable(double lambda) : lambda_(lambda) {}

  const TermMap& product(const Monomial& m1, const Monomial& m2) const {
    const auto key = std::make_pair(m1, m2);
    {
      std::lock_guard lk(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return *it->second;
    }
    auto value =
        std::make_unique<TermMap>(monomial_product(m1, m2, lambda_));
    std::lock_guard lk(mu_);
    auto [it, _] = cache_.try_emplace(key, std::move(value));
    return *it->second;
  }

 private:
  double lambda_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Monomial, Monomial>, std::unique_ptr<TermMap>>
      cache_;
};

inline const ProductTable& product_table(double lambda) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<ProductTable>> tables;
  std::lock_guard lk(mu);
  auto it = tables.find(lambda);
  if (it == tables.end())
    it = tables.emplace(lambda, std::make_unique<ProductTable>(lambda)).first;
  return *it->second;
}

}  // namespace detail

class AlgebraElement {
 public:
  explicit AlgebraElement(const Parameters& p) : params_(p) {}
  AlgebraElement(const Parameters& p, TermMap terms)
      : params_(p), terms_(std::move(terms)) {
    normalize();
  }

  const Parameters& params() const { return params_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [m, w] : terms_) d = std::max(d, m.degree());
    return d;
  }

  cd coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cd{0.0, 0.0} : it->second;
  }

  void set_coefficient(const Monomial& m, cd z) {
    if (m.c > 1) throw std::invalid_argument("monomial is not canonical");
    if (z == cd{0.0, 0.0})
      terms_.erase(m);
    else
      terms_[m] = z;
  }

  double max_abs_coefficient() const {
    double s = 0.0;
    for (const auto& [m, w] : terms_) s = std::max(s, std::abs(w));
    return s;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    check_same(o);
    detail::add_scaled(terms_, o.terms_, 1.0);
    normalize();
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    check_same(o);
    detail::add_scaled(terms_, o.terms_, -1.0);
    normalize();
    return *this;
  }
  AlgebraElement& operator*=(cd z) {
    for (auto& [m, w] : terms_) w *= z;
    normalize();
    return *this;
  }

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator*(cd z, AlgebraElement a) { return a *= z; }
  friend AlgebraElement operator*(AlgebraElement a, cd z) { return a *= z; }

  /// Lift to a larger truncation cap. Never changes the stored terms.
  AlgebraElement with_truncation(int L) const {
    if (L < degree())
      throw TruncationError("cannot lower truncation below element degree");
    AlgebraElement r(params_.with_truncation(L));
    r.terms_ = terms_;
    return r;
  }

 private:
  void normalize() {
    const double floor = 1e-15 * (1.0 + max_abs_coefficient());
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) < floor)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  void check_same(const AlgebraElement& o) const {
    if (!params_.same_algebra(o.params_))
      throw ParameterMismatch("algebra elements have different Parameters");
  }

  Parameters params_;
  TermMap terms_;
};

inline AlgebraElement zero(const Parameters& p) { return AlgebraElement(p); }

inline AlgebraElement unit(const Parameters& p) {
  TermMap t;
  t.emplace(Monomial{0, 0, 0}, cd{1.0, 0.0});
  return AlgebraElement(p, std::move(t));
}

inline AlgebraElement scalar(const Parameters& p, cd z) {
  TermMap t;
  if (z != cd{0.0, 0.0}) t.emplace(Monomial{0, 0, 0}, z);
  return AlgebraElement(p, std::move(t));
}

inline AlgebraElement generator(int i, const Parameters& p) {
  if (i < 1 || i > 3)
    throw std::invalid_argument("generator index must be 1, 2 or 3");
  if (p.truncation_L < 1)
    throw TruncationError("generators need truncation_L >= 1");
  TermMap t;
  t.emplace(Monomial{i == 1, i == 2, i == 3}, cd{1.0, 0.0});
  return AlgebraElement(p, std::move(t));
}

namespace detail {

/// Product without the truncation cap check; exact on canonical terms.
inline AlgebraElement multiply_unchecked(const AlgebraElement& a,
                                         const AlgebraElement& b) {
  if (a.params().lambda_p != b.params().lambda_p)
    throw ParameterMismatch("product of elements at different lambda_p");
  const auto& table = product_table(a.params().lambda_p);
  TermMap out;
  for (const auto& [ma, wa] : a.terms())
    for (const auto& [mb, wb] : b.terms())
      add_scaled(out, table.product(ma, mb), wa * wb);
  return AlgebraElement(a.params(), std::move(out));
}

}  // namespace detail

inline AlgebraElement multiply(const AlgebraElement& a,
                               const AlgebraElement& b) {
  if (!a.params().same_algebra(b.params()))
    throw ParameterMismatch("product of elements with different Parameters");
  AlgebraElement r = detail::multiply_unchecked(a, b);
  if (r.degree() > a.params().truncation_L) {
    std::ostringstream os;
    os << "product degree " << r.degree() << " exceeds truncation_L "
       << a.params().truncation_L;
    throw TruncationError(os.str());
  }
  return r;
}

inline AlgebraElement operator*(const AlgebraElement& a,
                                const AlgebraElement& b) {
  return multiply(a, b);
}

/// Antilinear involution: conjugate coefficients, reverse each word,
/// re-canonicalize. Fixes the generators.
inline AlgebraElement star(const AlgebraElement& a) {
  const double lambda = a.params().lambda_p;
  TermMap out;
  for (const auto& [m, w] : a.terms()) {
    // reversed word x3^c x2^b x1^a, re-canonicalized
    TermMap acc;
    acc.emplace(Monomial{0, 0, 0}, cd{1.0, 0.0});
    for (int k = 0; k < m.c; ++k)
      acc = detail::element_times_generator(acc, 3, lambda);
    for (int k = 0; k < m.b; ++k)
      acc = detail::element_times_generator(acc, 2, lambda);
    for (int k = 0; k < m.a; ++k)
      acc = detail::element_times_generator(acc, 1, lambda);
    detail::add_scaled(out, acc, std::conj(w));
  }
  return AlgebraElement(a.params(), std::move(out));
}

/// Canonical monomial basis of the truncated algebra, (L+1)^2 entries,
/// ordered by degree, then x3-exponent, then descending x1-exponent.
inline std::vector<Monomial> canonical_basis(int L) {
  std::vector<Monomial> basis;
  for (int d = 0; d <= L; ++d)
    for (int c = 0; c <= std::min(1, d); ++c)
      for (int a = d - c; a >= 0; --a) basis.push_back({a, d - c - a, c});
  return basis;
}

}  // namespace fuzzy
