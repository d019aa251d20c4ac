#pragma once

#include <array>
#include <vector>

#include "anisost/geometry.hpp"

namespace anisost {

// Multi-indices alpha with |alpha| < max_total in d variables, ordered by
// total degree and then lexicographically (first coordinate most
// significant). This ordering fixes the coefficient layout everywhere,
// including serialized coefficient arrays.
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(int d, int max_total);

  int size() const { return static_cast<int>(idx_.size()); }
  const std::array<int, 3>& operator[](int i) const { return idx_[i]; }
  // Position of alpha, or -1 when |alpha| >= max_total.
  int find(const std::array<int, 3>& alpha) const;
  int dim() const { return d_; }
  int max_total() const { return max_total_; }

 private:
  int d_ = 0;
  int max_total_ = 0;
  std::vector<std::array<int, 3>> idx_;
};

// Affine change of variables (t, x) -> (a t + b, M x + v) acting on the time
// axis and the space axes separately.
struct AffineMap {
  int d = 1;
  double a = 1.0;
  double b = 0.0;
  double M[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  Vec v{0, 0, 0};

  double map_time(double t) const { return a * t + b; }
  Vec map_space(const Vec& x) const;
  double det() const;        // a * det(M) restricted to the active dimension
  AffineMap inverse() const; // throws SingularMap
};

// Polynomials sum_{i < r1} sum_{|alpha| < r2} c_{i,alpha} t^i x^alpha.
// Coefficients are laid out as coeffs[i * n_space + find(alpha)].
struct AnisoPolynomial {
  int r1 = 1;
  int r2 = 1;
  int d = 1;
  std::vector<double> coeffs;

  AnisoPolynomial() = default;
  AnisoPolynomial(int r1_, int r2_, int d_);

  static int spatial_dimension(int r2, int d);
  static int basis_dimension(int r1, int r2, int d);

  const MultiIndexSet& alphas() const;
  double& at(int i, int alpha_pos);
  double at(int i, int alpha_pos) const;

  // Horner in t over spatial monomial sums.
  double evaluate(double t, const Vec& x) const;
  // Plain double sum; second evaluation route used for cross-checks.
  double evaluate_naive(double t, const Vec& x) const;
};

// Q with Q(t, x) = P(phi(t, x)); the space is closed under this composition.
AnisoPolynomial pullback(const AnisoPolynomial& P, const AffineMap& phi);

}  // namespace anisost
