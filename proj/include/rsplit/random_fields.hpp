#pragma once

#include <cstdint>
#include <vector>

#include "rsplit/fields.hpp"

namespace rsplit {

// Smooth pseudo-random fields for identity checks: every component is a fixed
// combination of polynomial, trigonometric and exponential terms with
// coefficients drawn from a seeded generator.
FormField random_form_field(Chart chart, Meta meta, std::uint64_t seed);
VecField random_vec_field(Chart chart, Meta meta, std::uint64_t seed);

// Polynomial Christoffel form of total degree ≤ 3 in all coordinates, scaled by amp.
FormField random_christoffel(int ncoords, std::uint64_t seed, double amp = 0.3);

// Sobol points in a box [lo, hi] (component-wise), skipping the first `skip`
// points of the sequence.
std::vector<Point> sobol_points(const Point& lo, const Point& hi, int count, int dims = 4, std::uint64_t skip = 0);

// Uniform pseudo-random points in a box.
std::vector<Point> random_points(const Point& lo, const Point& hi, int count, std::uint64_t seed);

}  // namespace rsplit
