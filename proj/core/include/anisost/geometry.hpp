#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace anisost {

// Coordinates are padded to 3 components; entries beyond the active
// dimension are kept at zero so full-width arithmetic is always safe.
using Vec = std::array<double, 3>;

inline Vec vadd(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec vsub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec vscale(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec vmid(const Vec& a, const Vec& b) {
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}
inline double vdot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double vnorm(const Vec& a) { return std::sqrt(vdot(a, a)); }

struct Interval {
  double a = 0.0;
  double b = 1.0;
  int level = 0;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  bool contains(double t, double tol = 0.0) const { return t >= a - tol && t <= b + tol; }
};

std::pair<Interval, Interval> bisect_interval(const Interval& J);

// A d-simplex with a Maubach refinement tag. Valid tags are 1..dim; the
// bisected edge is v[0]-v[tag] and children inherit tag-1 (wrapping to dim).
struct Simplex {
  int dim = 1;
  std::array<Vec, 4> v{};
  int tag = 1;
  int level = 0;

  double measure() const;
  double diameter() const;
  double inradius() const;
};

std::pair<Simplex, Simplex> bisect_simplex(const Simplex& S);

// diam(S) / inradius(S); throws Degenerate for (numerically) flat simplices.
double shape_kappa(const Simplex& S);

struct Prism {
  Interval time;
  Simplex space;
  int level = 0;
  std::uint64_t id = 0;

  double measure() const { return time.length() * space.measure(); }
};

// Space-time cylinder I x D with D given as a simplicial mesh.
class Cylinder {
 public:
  Cylinder() = default;
  Cylinder(Interval time, std::vector<Simplex> mesh);

  const Interval& time() const { return time_; }
  const std::vector<Simplex>& space() const { return space_; }

  double space_measure() const { return space_measure_; }
  double space_diameter() const { return space_diameter_; }
  // Minimal inradius over mesh simplices; stands in for the boundary
  // regularity scale of D when one is needed.
  double space_inradius() const { return space_inradius_; }
  int dim() const { return space_.empty() ? 0 : space_.front().dim; }

  bool contains_time(double t, double tol = 1e-12) const;
  bool contains_space(const Vec& x, double tol = 1e-12) const;

 private:
  struct BaryCache {
    Vec origin{};
    double inv[3][3]{};
  };

  Interval time_;
  std::vector<Simplex> space_;
  std::vector<BaryCache> cache_;
  double space_measure_ = 0.0;
  double space_diameter_ = 0.0;
  double space_inradius_ = 0.0;
};

// Built-in well-labeled roots: unit interval for d=1, Kuhn triangulation of
// the unit square / cube for d=2,3.
Cylinder unit_cylinder(int d);
std::vector<Simplex> kuhn_mesh(int d);
Simplex reference_simplex(int d);

struct Partition {
  double s1 = 1.0;
  double s2 = 1.0;
  Cylinder domain;
  std::vector<Prism> elements;
  std::uint64_t next_id = 0;

  std::size_t size() const { return elements.size(); }
  double total_measure() const;
  double kappa() const;
};

// max over elements of max(|J| / |S|^e, |S|^e / |J|) with e = s2/(s1 d).
double anisotropy_ratio(const Partition& P);
double element_anisotropy(const Prism& el, double s1, double s2);

// Tensor-product root partition: uniform time cells crossed with the mesh.
Partition make_tensor_partition(const Cylinder& dom, int time_cells, double s1, double s2);

}  // namespace anisost
