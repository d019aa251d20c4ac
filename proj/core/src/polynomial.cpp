#include "anisost/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "anisost/errors.hpp"

namespace anisost {

namespace {

void enumerate(int d, int max_total, std::vector<std::array<int, 3>>& out) {
  for (int total = 0; total < max_total; ++total) {
    std::array<int, 3> a{0, 0, 0};
    // descending lexicographic enumeration of compositions of `total`
    if (d == 1) {
      a[0] = total;
      out.push_back(a);
    } else if (d == 2) {
      for (int i = total; i >= 0; --i) out.push_back({i, total - i, 0});
    } else {
      for (int i = total; i >= 0; --i)
        for (int j = total - i; j >= 0; --j) out.push_back({i, j, total - i - j});
    }
  }
}

const MultiIndexSet& cached_set(int d, int max_total) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, MultiIndexSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, max_total);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, MultiIndexSet(d, max_total)).first;
  return it->second;
}

}  // namespace

MultiIndexSet::MultiIndexSet(int d, int max_total) : d_(d), max_total_(max_total) {
  if (d < 1 || d > 3) throw DimensionMismatch("MultiIndexSet: d must be 1, 2 or 3");
  enumerate(d, max_total, idx_);
}

int MultiIndexSet::find(const std::array<int, 3>& alpha) const {
  for (int i = 0; i < size(); ++i)
    if (idx_[i] == alpha) return i;
  return -1;
}

Vec AffineMap::map_space(const Vec& x) const {
  Vec y{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    double s = v[i];
    for (int j = 0; j < d; ++j) s += M[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

double AffineMap::det() const {
  double dm;
  switch (d) {
    case 1:
      dm = M[0][0];
      break;
    case 2:
      dm = M[0][0] * M[1][1] - M[0][1] * M[1][0];
      break;
    default:
      dm = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
           M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  }
  return a * dm;
}

AffineMap AffineMap::inverse() const {
  if (std::abs(a) < 1e-300) throw SingularMap("AffineMap::inverse: zero time scale");
  AffineMap inv;
  inv.d = d;
  inv.a = 1.0 / a;
  inv.b = -b / a;
  double dm = det() / a;
  if (std::abs(dm) < 1e-300) throw SingularMap("AffineMap::inverse: singular space part");
  if (d == 1) {
    inv.M[0][0] = 1.0 / M[0][0];
  } else if (d == 2) {
    const double idm = 1.0 / dm;
    inv.M[0][0] = M[1][1] * idm;
    inv.M[0][1] = -M[0][1] * idm;
    inv.M[1][0] = -M[1][0] * idm;
    inv.M[1][1] = M[0][0] * idm;
  } else {
    const double idm = 1.0 / dm;
    inv.M[0][0] = (M[1][1] * M[2][2] - M[1][2] * M[2][1]) * idm;
    inv.M[0][1] = (M[0][2] * M[2][1] - M[0][1] * M[2][2]) * idm;
    inv.M[0][2] = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) * idm;
    inv.M[1][0] = (M[1][2] * M[2][0] - M[1][0] * M[2][2]) * idm;
    inv.M[1][1] = (M[0][0] * M[2][2] - M[0][2] * M[2][0]) * idm;
    inv.M[1][2] = (M[0][2] * M[1][0] - M[0][0] * M[1][2]) * idm;
    inv.M[2][0] = (M[1][0] * M[2][1] - M[1][1] * M[2][0]) * idm;
    inv.M[2][1] = (M[0][1] * M[2][0] - M[0][0] * M[2][1]) * idm;
    inv.M[2][2] = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) * idm;
  }
  Vec mv = inv.map_space(v);
  inv.v = {-mv[0], -mv[1], -mv[2]};
  for (int i = d; i < 3; ++i) inv.v[i] = 0.0;
  return inv;
}

AnisoPolynomial::AnisoPolynomial(int r1_, int r2_, int d_) : r1(r1_), r2(r2_), d(d_) {
  if (r1 < 1 || r2 < 1) throw ConfigError("AnisoPolynomial: orders must be >= 1");
  coeffs.assign(basis_dimension(r1, r2, d), 0.0);
}

int AnisoPolynomial::spatial_dimension(int r2, int d) {
  // #{alpha in N_0^d : |alpha| < r2} = C(r2 - 1 + d, d)
  long long num = 1, den = 1;
  for (int i = 1; i <= d; ++i) {
    num *= r2 - 1 + i;
    den *= i;
  }
  return static_cast<int>(num / den);
}

int AnisoPolynomial::basis_dimension(int r1, int r2, int d) {
  return r1 * spatial_dimension(r2, d);
}

const MultiIndexSet& AnisoPolynomial::alphas() const { return cached_set(d, r2); }

double& AnisoPolynomial::at(int i, int alpha_pos) {
  return coeffs[static_cast<std::size_t>(i) * spatial_dimension(r2, d) + alpha_pos];
}

double AnisoPolynomial::at(int i, int alpha_pos) const {
  return coeffs[static_cast<std::size_t>(i) * spatial_dimension(r2, d) + alpha_pos];
}

double AnisoPolynomial::evaluate(double t, const Vec& x) const {
  const MultiIndexSet& as = alphas();
  const int ns = as.size();
  // spatial monomial values once, then Horner in t
  thread_local std::vector<double> mono;
  mono.resize(ns);
  for (int k = 0; k < ns; ++k) {
    const auto& al = as[k];
    double m = 1.0;
    for (int j = 0; j < d; ++j)
      for (int e = 0; e < al[j]; ++e) m *= x[j];
    mono[k] = m;
  }
  double value = 0.0;
  for (int i = r1 - 1; i >= 0; --i) {
    double layer = 0.0;
    for (int k = 0; k < ns; ++k) layer += at(i, k) * mono[k];
    value = value * t + layer;
  }
  return value;
}

double AnisoPolynomial::evaluate_naive(double t, const Vec& x) const {
  const MultiIndexSet& as = alphas();
  double value = 0.0;
  for (int i = 0; i < r1; ++i) {
    double tp = 1.0;
    for (int e = 0; e < i; ++e) tp *= t;
    for (int k = 0; k < as.size(); ++k) {
      const auto& al = as[k];
      double m = tp;
      for (int j = 0; j < d; ++j)
        for (int e = 0; e < al[j]; ++e) m *= x[j];
      value += at(i, k) * m;
    }
  }
  return value;
}

namespace {

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Multiply a spatial polynomial (coefficients over `set`) by the affine
// factor sum_j M[row][j] x_j + v[row]. Total degree grows by one, which by
// construction stays below the capacity of `set`.
void multiply_linear(const MultiIndexSet& set, const std::vector<double>& in, int d,
                     const double Mrow[3], double vrow, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (int k = 0; k < set.size(); ++k) {
    const double c = in[k];
    if (c == 0.0) continue;
    out[k] += c * vrow;
    for (int j = 0; j < d; ++j) {
      if (Mrow[j] == 0.0) continue;
      std::array<int, 3> up = set[k];
      up[j] += 1;
      const int pos = set.find(up);
      if (pos < 0) throw DimensionMismatch("pullback: degree overflow");
      out[pos] += c * Mrow[j];
    }
  }
}

}  // namespace

AnisoPolynomial pullback(const AnisoPolynomial& P, const AffineMap& phi) {
  if (phi.d != P.d) throw DimensionMismatch("pullback: map dimension mismatch");
  if (std::abs(phi.a) < 1e-300) throw SingularMap("pullback: zero time scale");
  if (std::abs(phi.det() / phi.a) < 1e-300) throw SingularMap("pullback: singular space part");

  AnisoPolynomial Q(P.r1, P.r2, P.d);
  const MultiIndexSet& as = P.alphas();
  const int ns = as.size();

  // (a t + b)^i expanded over powers of t, cached per i
  std::vector<std::vector<double>> tpow(P.r1);
  for (int i = 0; i < P.r1; ++i) {
    tpow[i].assign(i + 1, 0.0);
    for (int j = 0; j <= i; ++j)
      tpow[i][j] = static_cast<double>(binom(i, j)) * std::pow(phi.a, j) * std::pow(phi.b, i - j);
  }

  // (M x + v)^alpha for every alpha, built factor by factor
  std::vector<std::vector<double>> xpow(ns);
  std::vector<double> work(ns), next(ns);
  for (int k = 0; k < ns; ++k) {
    std::fill(work.begin(), work.end(), 0.0);
    work[as.find({0, 0, 0})] = 1.0;
    const auto& al = as[k];
    for (int j = 0; j < P.d; ++j)
      for (int e = 0; e < al[j]; ++e) {
        multiply_linear(as, work, P.d, phi.M[j], phi.v[j], next);
        work.swap(next);
      }
    xpow[k] = work;
  }

  for (int i = 0; i < P.r1; ++i)
    for (int k = 0; k < ns; ++k) {
      const double c = P.at(i, k);
      if (c == 0.0) continue;
      for (int j = 0; j <= i; ++j) {
        const double ct = c * tpow[i][j];
        if (ct == 0.0) continue;
        for (int m = 0; m < ns; ++m) Q.at(j, m) += ct * xpow[k][m];
      }
    }
  return Q;
}

}  // namespace anisost
