#include <cmath>
#include <random>

#include "doctest.h"

#include "anisost/errors.hpp"
#include "anisost/polynomial.hpp"
#include "anisost/quadrature.hpp"
#include "anisost/serialization.hpp"

using namespace anisost;

namespace {

AnisoPolynomial random_poly(int r1, int r2, int d, std::mt19937_64& rng) {
  AnisoPolynomial P(r1, r2, d);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& c : P.coeffs) c = U(rng);
  return P;
}

AffineMap random_map(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  AffineMap phi;
  phi.d = d;
  for (;;) {
    phi.a = U(rng);
    if (std::abs(phi.a) > 0.1) break;
  }
  phi.b = U(rng);
  for (;;) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) phi.M[i][j] = U(rng);
    if (std::abs(phi.det() / phi.a) > 0.05) break;
  }
  for (int i = 0; i < d; ++i) phi.v[i] = U(rng);
  return phi;
}

}  // namespace

TEST_CASE("basis dimension counts") {
  CHECK(AnisoPolynomial::basis_dimension(1, 1, 3) == 1);
  CHECK(AnisoPolynomial::basis_dimension(2, 2, 2) == 6);
  CHECK(AnisoPolynomial::basis_dimension(3, 4, 1) == 12);
  CHECK(AnisoPolynomial::basis_dimension(2, 3, 3) == 20);
}

TEST_CASE("evaluation of simple polynomials") {
  AnisoPolynomial one(1, 1, 2);
  one.coeffs[0] = 1.0;
  CHECK(one.evaluate(0.3, {0.7, 0.1, 0}) == 1.0);

  // P(t, x) = t * x1 inside the (2,2) space in d = 2
  AnisoPolynomial P(2, 2, 2);
  const int pos = P.alphas().find({1, 0, 0});
  REQUIRE(pos >= 0);
  P.at(1, pos) = 1.0;
  CHECK(P.evaluate(2.0, {3.0, 0.0, 0}) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("the two evaluation routes agree") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 3;
    AnisoPolynomial P = random_poly(2 + trial % 2, 2 + trial % 3, d, rng);
    for (int k = 0; k < 20; ++k) {
      const double t = U(rng);
      const Vec x{U(rng), d > 1 ? U(rng) : 0.0, d > 2 ? U(rng) : 0.0};
      const double a = P.evaluate(t, x);
      const double b = P.evaluate_naive(t, x);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("evaluation is linear in coefficients") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  AnisoPolynomial P = random_poly(3, 3, 2, rng);
  AnisoPolynomial Q = random_poly(3, 3, 2, rng);
  const double a = U(rng), b = U(rng);
  AnisoPolynomial R(3, 3, 2);
  for (std::size_t i = 0; i < R.coeffs.size(); ++i)
    R.coeffs[i] = a * P.coeffs[i] + b * Q.coeffs[i];
  for (int k = 0; k < 25; ++k) {
    const double t = U(rng);
    const Vec x{U(rng), U(rng), 0};
    const double lhs = R.evaluate(t, x);
    const double rhs = a * P.evaluate(t, x) + b * Q.evaluate(t, x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("pullback composes pointwise") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);

  // identity map keeps coefficients
  AnisoPolynomial P = random_poly(2, 3, 2, rng);
  AffineMap id;
  id.d = 2;
  AnisoPolynomial Q = pullback(P, id);
  for (std::size_t i = 0; i < P.coeffs.size(); ++i)
    CHECK(Q.coeffs[i] == doctest::Approx(P.coeffs[i]).epsilon(1e-14));

  // P(t, x) = t with phi1(t) = 2t + 1 becomes 2t + 1
  AnisoPolynomial lin(2, 1, 1);
  lin.at(1, 0) = 1.0;
  AffineMap phi;
  phi.d = 1;
  phi.a = 2.0;
  phi.b = 1.0;
  AnisoPolynomial L = pullback(lin, phi);
  CHECK(L.at(0, 0) == doctest::Approx(1.0));
  CHECK(L.at(1, 0) == doctest::Approx(2.0));

  // random maps against the pointwise oracle
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    AnisoPolynomial R = random_poly(1 + trial % 3, 1 + (trial / 2) % 3, d, rng);
    AffineMap psi = random_map(d, rng);
    AnisoPolynomial S = pullback(R, psi);
    for (int k = 0; k < 100; ++k) {
      const double t = U(rng);
      const Vec x{U(rng), d > 1 ? U(rng) : 0.0, d > 2 ? U(rng) : 0.0};
      const double direct = R.evaluate(psi.map_time(t), psi.map_space(x));
      const double composed = S.evaluate(t, x);
      CHECK(std::abs(direct - composed) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("pullback rejects singular maps") {
  AnisoPolynomial P(2, 2, 2);
  AffineMap phi;
  phi.d = 2;
  phi.a = 0.0;
  CHECK_THROWS_AS(pullback(P, phi), SingularMap);
  phi.a = 1.0;
  phi.M[0][0] = phi.M[0][1] = phi.M[1][0] = phi.M[1][1] = 0.0;
  CHECK_THROWS_AS(pullback(P, phi), SingularMap);
}

TEST_CASE("pullback of basis monomials stays inside the index set") {
  // expansion never needs an index outside {i < r1, |alpha| < r2}; a degree
  // overflow would throw from the expansion kernel
  std::mt19937_64 rng(23);
  for (int d = 1; d <= 3; ++d) {
    const int r1 = 3, r2 = 3;
    const int nb = AnisoPolynomial::basis_dimension(r1, r2, d);
    AffineMap phi = random_map(d, rng);
    for (int b = 0; b < nb; ++b) {
      AnisoPolynomial mono(r1, r2, d);
      mono.coeffs[b] = 1.0;
      CHECK_NOTHROW(pullback(mono, phi));
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  AnisoPolynomial P(2, 2, 2);
  AffineMap phi;
  phi.d = 3;
  CHECK_THROWS_AS(pullback(P, phi), DimensionMismatch);
}

TEST_CASE("coefficient arrays round trip through json") {
  std::mt19937_64 rng(77);
  AnisoPolynomial P = random_poly(3, 2, 2, rng);
  const AnisoPolynomial Q = polynomial_from_json(polynomial_to_json(P));
  CHECK(Q.r1 == P.r1);
  CHECK(Q.r2 == P.r2);
  CHECK(Q.d == P.d);
  REQUIRE(Q.coeffs.size() == P.coeffs.size());
  for (std::size_t i = 0; i < P.coeffs.size(); ++i) CHECK(Q.coeffs[i] == P.coeffs[i]);
}
