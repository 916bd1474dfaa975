#pragma once

#include "core/polynomial.hpp"
#include "core/rational_points.hpp"
#include "core/semigroup.hpp"
#include "core/torus.hpp"

#include <optional>
#include <vector>

namespace bohr {

// Largest circular arc free of sample points; the covering radius is half of
// it. Exact for rational samples, outward-rounded otherwise.
IntervalValue covering_gap(const std::vector<TorusCoord>& points, unsigned prec = 80);

struct WeylSum {
    unsigned harmonic;
    double magnitude; // diagnostic; <= 1
};

struct DensityReport {
    Int horizon;
    unsigned long sample_count = 0;
    IntervalValue max_gap;
    IntervalValue star_discrepancy;
    std::vector<WeylSum> weyl_sums;
};

// Either a finitely generated semigroup or all of N (Weyl mode).
struct SampleDomain {
    std::optional<SemigroupSpec> spec; // nullopt = naturals 1,2,3,...

    static SampleDomain naturals() { return SampleDomain{}; }
    static SampleDomain semigroup(SemigroupSpec s) { return SampleDomain{std::move(s)}; }
};

// {P(s) mod 1 : s <= N} for each horizon: covering gap, exact-formula star
// discrepancy, and Weyl sum magnitudes for h = 1..weyl_harmonics.
std::vector<DensityReport> density_scan(const RealPolynomial& P, const SampleDomain& domain,
                                        const std::vector<Int>& horizons, unsigned weyl_harmonics,
                                        unsigned workers = 1);

// Sorted sample export for CSV output: (s, midpoint, radius).
struct DensitySample {
    Int s;
    Rat mid;
    Rat radius;
};
std::vector<DensitySample> density_samples(const RealPolynomial& P, const SampleDomain& domain,
                                           const Int& horizon, unsigned workers = 1);

// A real input for the curve lemma: value = exact + coeff * source ± radius.
struct CurveValue {
    Rat exact;
    SourcePtr src;  // may be null
    Rat src_coeff = Rat(1);
    Rat radius = Rat(0);

    // "a/b" | "sqrt:n" | "phi" | "dec:...±..." (value NOT reduced mod 1)
    static CurveValue parse(const std::string& text);
};

struct GridOccupancy {
    unsigned dim = 0;
    unsigned cells_per_side = 0;
    unsigned long occupied = 0;
    unsigned long total = 0;

    double fraction() const { return total ? static_cast<double>(occupied) / static_cast<double>(total) : 0.0; }
};

// Samples t = i*t_max/samples, maps to (t u_1 mod 1, ..., t^d u_d mod 1) and
// reports the fraction of occupied g^d cells. Throws ZERO_COMPONENT when some
// u_j cannot be certified nonzero.
GridOccupancy curve_density_check(const std::vector<CurveValue>& u, const Rat& t_max,
                                  unsigned long samples, unsigned grid);

struct DirectionVector {
    Int s;
    std::vector<Rat> lift;                // nearest-integer representative used
    std::vector<RatInterval> components;  // (x_1/n, x_2/n^2, ..., x_d/n^d)
    RatInterval quasi_norm;               // of the lift; in (0, eps]
    RatInterval unit_check;               // hom_norm of components; contains 1
};

// Normalized directions of small orbit lifts on the quasi-norm unit sphere.
// Requires exponents (1, 2, ..., d). Throws EMPTY when no lift has quasi-norm
// in (0, eps].
std::vector<DirectionVector> direction_set(const OrbitSpec& orbit, const Rat& eps, const Int& horizon,
                                           unsigned long cap = 0, unsigned workers = 1);

struct SegmentCoverage {
    unsigned marked = 0;
    unsigned grid = 0;

    double fraction() const { return grid ? static_cast<double>(marked) / grid : 0.0; }
};

// Fraction of the g cells along {x + t e_axis} containing a sample whose other
// coordinates lie within tol of the anchor (axis is 1-based).
SegmentCoverage line_segment_check(const std::vector<TorusPoint>& points, const TorusPoint& anchor,
                                   unsigned axis, unsigned grid, const Rat& tol, unsigned prec = 80);

} // namespace bohr
