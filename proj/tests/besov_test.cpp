#include <cmath>
#include <random>

#include "doctest.h"

#include "anisost/adaptive.hpp"
#include "anisost/besov.hpp"
#include "anisost/errors.hpp"
#include "anisost/field.hpp"
#include "anisost/serialization.hpp"

using namespace anisost;

TEST_CASE("seminorm vanishes on the polynomial space") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SamplingConfig cfg;
  for (int d : {1, 2}) {
    Cylinder cyl = unit_cylinder(d);
    for (int r : {1, 2, 3}) {
      AnisoPolynomial P(r, r, d);
      for (double& c : P.coeffs) c = U(rng);
      ScalarField f = polynomial_field(P);
      // s just above r - 1 keeps the dyadic weights from amplifying noise
      const double s = r - 0.9;
      const BesovEstimate est = besov_seminorm(f, cyl, s, s, 2.0, 2.0, 10, cfg);
      CHECK(est.r1 == r);
      CHECK(est.r2 == r);
      CHECK(est.seminorm <= 1e-8);
    }
  }
}

TEST_CASE("smooth wave has finite seminorm with decaying levels") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  const BesovEstimate est = besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 10, cfg);
  CHECK(est.seminorm > 0.0);
  CHECK(std::isfinite(est.seminorm));
  CHECK_FALSE(est.truncation_warning);
  // geometric decay of the per-level totals past the first few levels
  for (std::size_t n = 4; n < est.per_level.size(); ++n) {
    const double cur = est.per_level[n].temporal_term + est.per_level[n].spatial_term;
    const double prev =
        est.per_level[n - 1].temporal_term + est.per_level[n - 1].spatial_term;
    CHECK(cur < prev);
  }
  MESSAGE("smooth wave |f|_B estimate (sup form): ", est.seminorm);
}

TEST_CASE("rough fields trip the truncation warning") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  FieldParams params;
  params.scalars["axis"] = 0;
  ScalarField f = builtin_field("indicator_strip", params, 1);
  // nodes dense enough that shifts at the deepest dyadic level still see the
  // jump set
  NodeBuildParams dense{16, 3, 4, 2};
  const BesovEstimate est =
      besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 6, cfg, ModulusKind::sup, nullptr, dense);
  CHECK(est.truncation_warning);
}

TEST_CASE("temporal cusp level slopes are reported") {
  // fitted decay of the temporal terms, diagnostic only
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  FieldParams params;
  params.scalars["alpha"] = 0.5;
  ScalarField f = builtin_field("temporal_cusp", params, 1);
  const BesovEstimate est = besov_seminorm(f, cyl, 0.75, 0.75, 2.0, 2.0, 10, cfg);
  std::vector<double> x, y;
  for (const BesovLevel& lev : est.per_level)
    if (lev.n >= 2 && lev.temporal_term > 0) {
      x.push_back(1.0 / lev.delta_t);
      y.push_back(lev.temporal_term);
    }
  const SlopeFit fit = fit_loglog_slope(x, y);
  MESSAGE("temporal_cusp(0.5) level slope at s1=0.75: ", fit.slope);
  CHECK(std::isfinite(fit.slope));
}

TEST_CASE("seminorm estimates are monotone in the truncation level") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  double prev = 0.0;
  for (int n_max : {2, 4, 6, 8, 10}) {
    const double v = besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, n_max, cfg).seminorm;
    CHECK(v >= prev - 1e-12 * std::max(1.0, prev));
    prev = v;
  }
}

TEST_CASE("sup and averaged forms stay within a bounded bracket") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  double bracket_lo = 1e300, bracket_hi = 0.0;
  for (const char* name : {"smooth_wave", "temporal_cusp", "spatial_corner"}) {
    ScalarField f = builtin_field(name, FieldParams{}, 1);
    const double sup_v =
        besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 8, cfg, ModulusKind::sup).seminorm;
    const double avg_v =
        besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 8, cfg, ModulusKind::averaged).seminorm;
    REQUIRE(avg_v > 0.0);
    const double ratio = sup_v / avg_v;
    bracket_lo = std::min(bracket_lo, ratio);
    bracket_hi = std::max(bracket_hi, ratio);
  }
  MESSAGE("sup/averaged seminorm bracket: [", bracket_lo, ", ", bracket_hi, "]");
  CHECK(bracket_lo >= 1.0 - 1e-10);
  CHECK(bracket_hi <= 100.0);
}

TEST_CASE("single-element partition sum equals the local seminorm power") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  Partition P = make_tensor_partition(cyl, 1, 1.0, 1.0);
  ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  const double sum = partition_seminorm_sum(f, P, 1.0, 1.0, 2.0, 8, cfg);
  const double local =
      local_besov_seminorm(f, P.elements[0], 1.0, 1.0, 2.0, 2.0, 8, cfg).seminorm;
  CHECK(sum == doctest::Approx(local * local).epsilon(1e-12));
}

TEST_CASE("partition sums stay controlled by the global seminorm") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  const double q = 2.0;
  const double global_q =
      std::pow(besov_seminorm(f, cyl, 1.0, 1.0, q, q, 8, cfg).seminorm, q);

  Partition P = make_tensor_partition(cyl, 2, 1.0, 1.0);  // 2 x 1 root, refined below
  for (int level = 0; level < 3; ++level) {
    const double sum = partition_seminorm_sum(f, P, 1.0, 1.0, q, 8, cfg);
    const double C = sum / global_q;
    MESSAGE("level ", level, ": sum/global^q = ", C);
    CHECK(std::isfinite(C));
    CHECK(C <= 100.0);
    std::vector<Prism> next;
    for (const Prism& el : P.elements)
      for (const Prism& c : atomic_split(el, 1.0, 1.0)) {
        Prism e = c;
        e.id = P.next_id++;
        next.push_back(e);
      }
    P.elements.swap(next);
  }

  // polynomial fields collapse the whole chain to zero
  AnisoPolynomial poly(2, 2, 1);
  poly.coeffs[0] = 0.7;
  poly.coeffs[1] = -0.3;
  ScalarField g = polynomial_field(poly);
  CHECK(partition_seminorm_sum(g, P, 1.0, 1.0, q, 8, cfg) <= 1e-16);
}

TEST_CASE("estimates serialize with their level table") {
  SamplingConfig cfg;
  Cylinder cyl = unit_cylinder(1);
  ScalarField f = builtin_field("smooth_wave", FieldParams{}, 1);
  const BesovEstimate est = besov_seminorm(f, cyl, 1.0, 1.0, 2.0, 2.0, 6, cfg);
  const std::string text = besov_to_json(est);
  CHECK(text.find("per_level") != std::string::npos);
  CHECK(text.find("seminorm") != std::string::npos);
  CHECK(text.find("sigma_standin") != std::string::npos);
}
