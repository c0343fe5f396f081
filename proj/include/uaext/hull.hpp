#pragma once

// Planar convex hulls of complex values with exact orientation predicates.

#include <vector>

#include "uaext/types.hpp"

namespace uaext::hull {

/// Sign of the orientation determinant of (a, b, c): +1 counter-clockwise,
/// -1 clockwise, 0 collinear. Evaluated exactly with error-free expansions.
int orientation(Complex a, Complex b, Complex c);

/// Counter-clockwise hull vertices (monotone chain). Collinear input yields
/// the two extreme points; a single distinct value yields one point.
std::vector<Complex> convex_hull(std::vector<Complex> points);

/// Euclidean distance from p to the hull of `hull_vertices` (0 when inside).
/// Handles point and segment hulls.
double distance_to_hull(Complex p, const std::vector<Complex>& hull_vertices);

}  // namespace uaext::hull
