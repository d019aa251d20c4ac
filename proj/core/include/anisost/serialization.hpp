#pragma once

#include <string>

#include "anisost/adaptive.hpp"
#include "anisost/besov.hpp"
#include "anisost/geometry.hpp"
#include "anisost/polynomial.hpp"

namespace anisost {

// Elements serialize as {time:[a,b], vertices:[[..]..], levels:{prism,time,space}, tag}.
std::string partition_to_json(const Partition& P);
Partition partition_from_json(const std::string& text);

// Coefficient arrays follow the documented (i, alpha) layout.
std::string polynomial_to_json(const AnisoPolynomial& P);
AnisoPolynomial polynomial_from_json(const std::string& text);

std::string besov_to_json(const BesovEstimate& est);
std::string trace_to_json(const GreedyTrace& trace);

}  // namespace anisost
