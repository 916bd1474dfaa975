#pragma once

#include "core/torus.hpp"

#include <optional>
#include <vector>

namespace bohr {

// |v_1| + |v_2|^(1/2) + ... + |v_d|^(1/d) with certified bounds. The result is
// a point interval whenever every |v_j| is a perfect j-th power of a rational;
// otherwise the enclosure has width <= d * 2^-prec.
struct HomNorm {
    RatInterval bounds;
    bool exact;
};

HomNorm hom_norm(const std::vector<Rat>& v, unsigned prec = 64);

// Interval-vector variant (endpoints processed with outward rounding).
RatInterval hom_norm(const std::vector<RatInterval>& v, unsigned prec = 64);

// Certified enclosure of q^(1/k) for q >= 0.
RatInterval root_enclosure(const Rat& q, unsigned long k, unsigned prec);

// Exact rational k-th root when one exists.
std::optional<Rat> exact_root(const Rat& q, unsigned long k);

// Best rational approximation p/q of x in [0,1) with q <= max_den and
// |x - p/q| <= tol (continued-fraction convergents/semiconvergents), reduced
// mod 1. Unique when tol < 1/(2*max_den^2).
std::optional<Rat> best_rational(const Rat& x, const Int& max_den, const Rat& tol);

// best_rational applied to the midpoint of a coordinate's enclosure.
// Precondition: the certified interval width must be < tol (unless tol == 0 and
// the coordinate is exact).
std::optional<Rat> rational_reconstruct(const TorusCoord& c, const Int& max_den, const Rat& tol);

} // namespace bohr
