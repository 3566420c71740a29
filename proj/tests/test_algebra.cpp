#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fuzzydirac/harmonic.hpp"
#include "fuzzydirac/hilbert.hpp"
#include "fuzzydirac/reduced.hpp"

using namespace fuzzy;

namespace {

double diff(const AlgebraElement& a, const AlgebraElement& b) {
  return (a - b).max_abs_coefficient();
}

}  // namespace

TEST_CASE("generators are canonical basis monomials") {
  Parameters p(0.25, 2);
  AlgebraElement x3 = generator(3, p);
  CHECK(x3.terms().size() == 1);
  CHECK(x3.coefficient({0, 0, 1}) == cd{1.0, 0.0});
  CHECK_THROWS_AS(generator(4, p), std::invalid_argument);
  CHECK_THROWS_AS(generator(0, p), std::invalid_argument);
}

TEST_CASE("sphere relation: sum of squared generators is a scalar") {
  for (double lp : {0.25, 0.5, 1.0 / 3}) {
    Parameters p(lp, 2);
    AlgebraElement sum(p);
    for (int i = 1; i <= 3; ++i)
      sum += generator(i, p) * generator(i, p);
    CHECK(diff(sum, scalar(p, 1.0 - lp * lp)) < 1e-14);
    if (lp == 0.5) CHECK(std::abs(sum.coefficient({0, 0, 0}) - 0.75) < 1e-14);
  }
}

TEST_CASE("commutation relations in canonical form") {
  Parameters p(0.3, 2);
  AlgebraElement x1 = generator(1, p), x2 = generator(2, p),
                 x3 = generator(3, p);

  SUBCASE("x2 x1 = x1 x2 - 2 i lambda x3") {
    AlgebraElement expect = x1 * x2 - (2.0 * I * p.lambda_p) * x3;
    CHECK(diff(x2 * x1, expect) < 1e-14);
  }
  SUBCASE("x3 x3 eliminates through the sphere relation") {
    AlgebraElement expect =
        scalar(p, 1.0 - p.lambda_p * p.lambda_p) - x1 * x1 - x2 * x2;
    CHECK(diff(x3 * x3, expect) < 1e-14);
  }
  SUBCASE("commutators close on the generators") {
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        AlgebraElement lhs =
            generator(i, p) * generator(j, p) - generator(j, p) * generator(i, p);
        AlgebraElement rhs(p);
        for (int k = 1; k <= 3; ++k)
          rhs += (2.0 * I * p.lambda_p * double(levi_civita(i, j, k))) *
                 generator(k, p);
        CHECK(diff(lhs, rhs) < 1e-14);
      }
  }
}

TEST_CASE("multiplication errors") {
  Parameters p(0.25, 1);
  AlgebraElement x1 = generator(1, p);
  CHECK_THROWS_AS(multiply(x1, x1), TruncationError);
  Parameters q(0.5, 1);
  CHECK_THROWS_AS(multiply(x1, generator(1, q)), ParameterMismatch);
}

TEST_CASE("associativity in both association orders") {
  Parameters p(0.25, 3);
  AlgebraElement x1 = generator(1, p), x2 = generator(2, p),
                 x3 = generator(3, p);
  CHECK(diff((x1 * x2) * x3, x1 * (x2 * x3)) < 1e-14);

  std::mt19937 rng(99);
  for (int s = 0; s < 20; ++s) {
    AlgebraElement a = random_element(p, 1, rng);
    AlgebraElement b = random_element(p, 1, rng);
    AlgebraElement c = random_element(p, 1, rng);
    CHECK(diff((a * b) * c, a * (b * c)) < 1e-12);
  }
}

TEST_CASE("star is an antilinear anti-homomorphism fixing generators") {
  Parameters p(0.3, 3);
  AlgebraElement x1 = generator(1, p), x2 = generator(2, p),
                 x3 = generator(3, p);
  CHECK(diff(star(x1), x1) < 1e-14);
  CHECK(diff(star(scalar(p, I)), scalar(p, -I)) < 1e-14);
  CHECK(diff(star(x1 * x2), x1 * x2 - (2.0 * I * p.lambda_p) * x3) < 1e-14);

  std::mt19937 rng(7);
  for (int s = 0; s < 10; ++s) {
    AlgebraElement a = random_element(p, 1, rng);
    AlgebraElement b = random_element(p, 1, rng);
    CHECK(diff(star(a * b), star(b) * star(a)) < 1e-12);
    CHECK(diff(star(star(a)), a) < 1e-13);
  }
}

TEST_CASE("star agrees with the adjoint in the matrix representation") {
  const int n = 3;
  Parameters p(1.0 / n, 2);
  std::mt19937 rng(21);
  for (int s = 0; s < 10; ++s) {
    AlgebraElement a = random_element(p, 2, rng);
    Eigen::MatrixXcd lhs = reduce(star(a), n);
    Eigen::MatrixXcd rhs = reduce(a, n).adjoint();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("canonical basis has (L+1)^2 monomials") {
  for (int L = 0; L <= 5; ++L)
    CHECK(static_cast<int>(canonical_basis(L).size()) == (L + 1) * (L + 1));
}

TEST_CASE("Casimir is central and acts as 1 - lambda^2") {
  Parameters p(0.4, 4);
  AlgebraElement cas(p);
  for (int i = 1; i <= 3; ++i) cas += generator(i, p) * generator(i, p);
  std::mt19937 rng(5);
  for (int s = 0; s < 10; ++s) {
    AlgebraElement a = random_element(p, 2, rng);
    AlgebraElement scaled = (1.0 - p.lambda_p * p.lambda_p) * a;
    CHECK(diff(cas * a, scaled) < 1e-12);
    CHECK(diff(a * cas, scaled) < 1e-12);
  }
}

TEST_CASE("harmonic projection splits by orbital angular momentum") {
  Parameters p(0.3, 2);

  SUBCASE("constants are pure l = 0") {
    auto d = harmonic_project(unit(p));
    CHECK(diff(d.components[0], unit(p)) < 1e-12);
    for (int l = 1; l <= 2; ++l) CHECK(d.components[l].is_zero());
  }
  SUBCASE("generators are pure l = 1") {
    for (int i = 1; i <= 3; ++i) {
      auto d = harmonic_project(generator(i, p));
      CHECK(diff(d.components[1], generator(i, p)) < 1e-12);
      CHECK(d.components[0].max_abs_coefficient() < 1e-12);
      CHECK(d.components[2].max_abs_coefficient() < 1e-12);
    }
  }
  SUBCASE("x1^2 splits into l = 0 and l = 2 only") {
    AlgebraElement x1sq = generator(1, p) * generator(1, p);
    auto d = harmonic_project(x1sq);
    CHECK(std::abs(d.components[0].coefficient({0, 0, 0}) -
                   (1.0 - p.lambda_p * p.lambda_p) / 3.0) < 1e-12);
    CHECK(d.components[1].max_abs_coefficient() < 1e-12);
    AlgebraElement back = d.components[0] + d.components[1] + d.components[2];
    CHECK(diff(back, x1sq) < 1e-12);
  }
  SUBCASE("components are eigenvectors of the orbital Laplacian") {
    std::mt19937 rng(3);
    AlgebraElement a = random_element(p, 2, rng);
    auto d = harmonic_project(a);
    AlgebraElement sum(p);
    for (int l = 0; l <= 2; ++l) {
      AlgebraElement lap(p);
      for (int i = 1; i <= 3; ++i)
        lap += partial(i, partial(i, d.components[l]));
      lap += double(l * (l + 1)) * d.components[l];
      CHECK(lap.max_abs_coefficient() < 1e-10);
      sum += d.components[l];
    }
    CHECK(diff(sum, a) < 1e-10);
  }
}

TEST_CASE("harmonic components have dimension 2l+1") {
  Parameters p(0.35, 3);
  for (int l = 0; l <= 3; ++l)
    CHECK(static_cast<int>(harmonic_basis(l, p).size()) == 2 * l + 1);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Parameters(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Parameters(0.5, -1), std::invalid_argument);
  CHECK_THROWS_AS(Parameters(0.5, 2, 0.0), std::invalid_argument);
}
