#pragma once

#include <vector>

#include "fcone/lattice.hpp"
#include "fcone/rational.hpp"

namespace fcone {

/// Lattice-normalized Euclidean volume of conv(vertices): the standard
/// volume divided by the covolume of `lat`, exact, via a recursive
/// triangulation from the lexicographically smallest vertex. A polytope of
/// dimension lower than the ambient rank has volume 0.
Rat polytope_volume(const std::vector<QVec>& vertices, const Lattice& lat);

/// The triangulation behind polytope_volume, exposed for the additivity
/// property tests: full-dimensional simplices as vertex tuples.
std::vector<std::vector<QVec>> triangulate_polytope(const std::vector<QVec>& vertices);

}  // namespace fcone
