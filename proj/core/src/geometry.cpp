#include "anisost/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anisost/errors.hpp"

namespace anisost {

std::pair<Interval, Interval> bisect_interval(const Interval& J) {
  const double m = J.midpoint();
  Interval left{J.a, m, J.level + 1};
  Interval right{m, J.b, J.level + 1};
  return {left, right};
}

namespace {

double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Edge matrix columns are v[i+1]-v[0], padded with unit axes so the 3x3
// determinant reduces to the d-dimensional one.
void edge_matrix(const Simplex& S, double m[3][3]) {
  for (int c = 0; c < 3; ++c) {
    if (c < S.dim) {
      const Vec e = vsub(S.v[c + 1], S.v[0]);
      m[0][c] = e[0];
      m[1][c] = e[1];
      m[2][c] = e[2];
    } else {
      m[0][c] = c == 0 ? 1.0 : 0.0;
      m[1][c] = c == 1 ? 1.0 : 0.0;
      m[2][c] = c == 2 ? 1.0 : 0.0;
    }
  }
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// (d-1)-measure of the facet opposite vertex `skip`.
double facet_measure(const Simplex& S, int skip) {
  std::array<Vec, 4> w;
  int n = 0;
  for (int i = 0; i <= S.dim; ++i)
    if (i != skip) w[n++] = S.v[i];
  switch (S.dim) {
    case 1:
      return 1.0;  // points carry counting measure
    case 2:
      return vnorm(vsub(w[1], w[0]));
    case 3: {
      const Vec e1 = vsub(w[1], w[0]);
      const Vec e2 = vsub(w[2], w[0]);
      const Vec cr{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                   e1[0] * e2[1] - e1[1] * e2[0]};
      return 0.5 * vnorm(cr);
    }
    default:
      throw UnsupportedOrder("facet_measure: dim must be 1, 2 or 3");
  }
}

}  // namespace

double Simplex::measure() const {
  double m[3][3];
  edge_matrix(*this, m);
  return std::abs(det3(m)) / factorial(dim);
}

double Simplex::diameter() const {
  double d2 = 0.0;
  for (int i = 0; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j) {
      const Vec e = vsub(v[i], v[j]);
      d2 = std::max(d2, vdot(e, e));
    }
  return std::sqrt(d2);
}

double Simplex::inradius() const {
  double fsum = 0.0;
  for (int i = 0; i <= dim; ++i) fsum += facet_measure(*this, i);
  return dim * measure() / fsum;
}

std::pair<Simplex, Simplex> bisect_simplex(const Simplex& S) {
  if (S.tag < 1 || S.tag > S.dim)
    throw InvalidTag("bisect_simplex: tag " + std::to_string(S.tag) + " not in [1," +
                     std::to_string(S.dim) + "]");
  const int k = S.tag;
  const Vec z = vmid(S.v[0], S.v[k]);
  const int child_tag = k >= 2 ? k - 1 : S.dim;

  Simplex c1 = S;
  c1.v[k] = z;
  c1.tag = child_tag;
  c1.level = S.level + 1;

  Simplex c2 = S;
  for (int i = 0; i < k; ++i) c2.v[i] = S.v[i + 1];
  c2.v[k] = z;
  c2.tag = child_tag;
  c2.level = S.level + 1;

  return {c1, c2};
}

double shape_kappa(const Simplex& S) {
  const double diam = S.diameter();
  const double vol = S.measure();
  if (vol <= 1e-14 * std::pow(diam, S.dim))
    throw Degenerate("shape_kappa: simplex volume vanishes");
  return diam / S.inradius();
}

Cylinder::Cylinder(Interval time, std::vector<Simplex> mesh)
    : time_(time), space_(std::move(mesh)) {
  space_measure_ = 0.0;
  cache_.reserve(space_.size());
  for (const Simplex& S : space_) {
    space_measure_ += S.measure();
    double m[3][3];
    edge_matrix(S, m);
    const double det = det3(m);
    if (std::abs(det) < 1e-300) throw Degenerate("Cylinder: degenerate mesh simplex");
    BaryCache bc;
    bc.origin = S.v[0];
    const double inv_det = 1.0 / det;
    bc.inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_det;
    bc.inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det;
    bc.inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det;
    bc.inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_det;
    bc.inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det;
    bc.inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det;
    bc.inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_det;
    bc.inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det;
    bc.inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det;
    cache_.push_back(bc);
  }
  // diameter of a simplicial polytope is attained at vertices
  double d2 = 0.0;
  for (std::size_t i = 0; i < space_.size(); ++i)
    for (std::size_t j = i; j < space_.size(); ++j)
      for (int a = 0; a <= space_[i].dim; ++a)
        for (int b = 0; b <= space_[j].dim; ++b) {
          const Vec e = vsub(space_[i].v[a], space_[j].v[b]);
          d2 = std::max(d2, vdot(e, e));
        }
  space_diameter_ = std::sqrt(d2);
  space_inradius_ = 0.0;
  for (const Simplex& S : space_)
    space_inradius_ = space_inradius_ == 0.0 ? S.inradius()
                                             : std::min(space_inradius_, S.inradius());
}

bool Cylinder::contains_time(double t, double tol) const { return time_.contains(t, tol); }

bool Cylinder::contains_space(const Vec& x, double tol) const {
  for (std::size_t s = 0; s < space_.size(); ++s) {
    const BaryCache& bc = cache_[s];
    const Vec r = vsub(x, bc.origin);
    double lam_sum = 0.0;
    bool inside = true;
    for (int i = 0; i < space_[s].dim; ++i) {
      const double lam = bc.inv[i][0] * r[0] + bc.inv[i][1] * r[1] + bc.inv[i][2] * r[2];
      if (lam < -tol) {
        inside = false;
        break;
      }
      lam_sum += lam;
    }
    if (inside && lam_sum <= 1.0 + tol) return true;
  }
  return false;
}

Simplex reference_simplex(int d) {
  if (d < 1 || d > 3) throw UnsupportedOrder("reference_simplex: d must be 1, 2 or 3");
  Simplex S;
  S.dim = d;
  S.tag = d;
  S.v[0] = {0, 0, 0};
  for (int i = 1; i <= d; ++i) {
    Vec e{0, 0, 0};
    e[i - 1] = 1.0;
    S.v[i] = e;
  }
  return S;
}

std::vector<Simplex> kuhn_mesh(int d) {
  if (d < 1 || d > 3) throw UnsupportedOrder("kuhn_mesh: d must be 1, 2 or 3");
  std::vector<Simplex> mesh;
  if (d == 1) {
    mesh.push_back(reference_simplex(1));
    return mesh;
  }
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  if (d == 2) {
    perms = {{0, 1, 2}, {1, 0, 2}};
  } else {
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
  }
  for (const auto& p : perms) {
    Simplex S;
    S.dim = d;
    S.tag = d;
    Vec x{0, 0, 0};
    S.v[0] = x;
    for (int i = 0; i < d; ++i) {
      x[p[i]] = 1.0;
      S.v[i + 1] = x;
    }
    mesh.push_back(S);
  }
  return mesh;
}

Cylinder unit_cylinder(int d) { return Cylinder(Interval{0.0, 1.0, 0}, kuhn_mesh(d)); }

double Partition::total_measure() const {
  double m = 0.0;
  for (const Prism& el : elements) m += el.measure();
  return m;
}

double Partition::kappa() const {
  if (elements.empty()) throw EmptyPartition("kappa: empty partition");
  double k = 0.0;
  for (const Prism& el : elements) k = std::max(k, shape_kappa(el.space));
  return k;
}

double element_anisotropy(const Prism& el, double s1, double s2) {
  const double e = s2 / (s1 * el.space.dim);
  const double js = std::pow(el.space.measure(), e);
  const double j = el.time.length();
  return std::max(j / js, js / j);
}

double anisotropy_ratio(const Partition& P) {
  if (P.elements.empty()) throw EmptyPartition("anisotropy_ratio: empty partition");
  if (P.s1 <= 0 || P.s2 <= 0) throw ConfigError("anisotropy_ratio: s1, s2 must be positive");
  double a = 0.0;
  for (const Prism& el : P.elements) a = std::max(a, element_anisotropy(el, P.s1, P.s2));
  return a;
}

Partition make_tensor_partition(const Cylinder& dom, int time_cells, double s1, double s2) {
  if (time_cells < 1) throw ConfigError("make_tensor_partition: time_cells must be >= 1");
  Partition P;
  P.s1 = s1;
  P.s2 = s2;
  P.domain = dom;
  const double a = dom.time().a;
  const double h = dom.time().length() / time_cells;
  for (int i = 0; i < time_cells; ++i) {
    Interval J{a + i * h, i + 1 == time_cells ? dom.time().b : a + (i + 1) * h, 0};
    for (const Simplex& S : dom.space()) {
      Prism el{J, S, 0, P.next_id++};
      P.elements.push_back(el);
    }
  }
  return P;
}

}  // namespace anisost
