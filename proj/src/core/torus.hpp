#pragma once

#include "core/numeric.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

// Closed interval with exact rational endpoints, lo <= hi.
struct RatInterval {
    Rat lo, hi;

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool is_point() const { return lo == hi; }
};

// Certified bounds on a nonnegative quantity (distances, norms).
struct IntervalValue {
    Rat lo, hi;

    bool is_exact() const { return lo == hi; }
};

enum class Certainty { CertifiedLeq, CertifiedGt, Unknown };

const char* certainty_name(Certainty c);

// Compares certified bounds against a threshold.
Certainty classify(const IntervalValue& v, const Rat& eps);

// Global ceiling on working precision (bits); BOHR_LAB_PRECISION_CAP overrides.
unsigned precision_cap();

// A real number carried modulo 1. enclose(prec) returns an interval that
// contains a representative of the value, with lo in [0,1), width <= 2^(1-prec)
// when refinable, and arcs (mod 1) nested as prec grows.
class RealSource {
  public:
    virtual ~RealSource() = default;
    virtual RatInterval enclose(unsigned prec) const = 0;
    virtual bool refinable() const { return true; }
    // Half-width the interval cannot shrink below (0 for refinable sources).
    virtual Rat intrinsic_radius() const { return Rat(0); }
    // Emission in the coordinate grammar, when the source is a named symbol.
    virtual std::optional<std::string> symbol() const { return std::nullopt; }
};

using SourcePtr = std::shared_ptr<const RealSource>;

// frac(sqrt(n)) for non-square n >= 2; monotone cached dyadic enclosures.
class SqrtSource final : public RealSource {
  public:
    explicit SqrtSource(unsigned long radicand);
    RatInterval enclose(unsigned prec) const override;
    std::optional<std::string> symbol() const override;

  private:
    unsigned long radicand_;
    Int whole_; // floor(sqrt(radicand))
    mutable std::mutex mu_;
    mutable unsigned cached_prec_ = 0;
    mutable Int cached_mant_; // floor(frac(sqrt n) * 2^cached_prec)
};

// frac(golden ratio) = (sqrt5 - 1)/2.
class PhiSource final : public RealSource {
  public:
    PhiSource() = default;
    RatInterval enclose(unsigned prec) const override;
    std::optional<std::string> symbol() const override { return "phi"; }

  private:
    mutable std::mutex mu_;
    mutable unsigned cached_prec_ = 0;
    mutable Int cached_mant_;
};

// Non-refinable decimal literal with a stated radius.
class LiteralSource final : public RealSource {
  public:
    LiteralSource(std::string digits, Rat radius);
    RatInterval enclose(unsigned prec) const override;
    bool refinable() const override { return false; }
    Rat intrinsic_radius() const override { return radius_; }
    std::optional<std::string> symbol() const override;
    const Rat& radius() const { return radius_; }

  private:
    std::string digits_;
    Rat mid_;    // canonicalized into [0,1)
    Rat radius_;
};

// frac( sum_i coeff_i * x_i + constant ) over other sources.
class AffineSource final : public RealSource {
  public:
    struct Term {
        Rat coeff;
        SourcePtr src;
    };
    AffineSource(std::vector<Term> terms, Rat constant);
    RatInterval enclose(unsigned prec) const override;
    bool refinable() const override;
    Rat intrinsic_radius() const override;

  private:
    std::vector<Term> terms_;
    Rat constant_;
};

// One coordinate of a torus point: exact rational or an interval source.
class TorusCoord {
  public:
    TorusCoord() : rational_(Rat(0)) {}
    explicit TorusCoord(Rat value); // canonicalized into [0,1)
    explicit TorusCoord(SourcePtr src);

    bool is_rational() const { return rational_.has_value(); }
    bool is_refinable() const { return rational_ || source_->refinable(); }
    const Rat& rational() const { return *rational_; }
    const SourcePtr& source() const { return source_; }

    // Interval containing a representative, lo in [0,1); exact for rationals.
    RatInterval enclose(unsigned prec) const;
    Rat intrinsic_radius() const;

  private:
    std::optional<Rat> rational_;
    SourcePtr source_;
};

struct TorusPoint {
    std::vector<TorusCoord> coords;

    size_t dim() const { return coords.size(); }
};

// ||c||_T = d(c, Z): certified bounds, exact for rationals.
IntervalValue dist_to_zero(const TorusCoord& c, unsigned prec = 66);

// Distance of an enclosing interval to the nearest integer.
IntervalValue dist_to_zero(const RatInterval& iv);

// n * c on the torus, n >= 0. Rational inputs stay exact; refinable inputs
// yield a derived refinable coordinate (error <= 2^-64 at the default
// enclosure precision). Throws PRECISION_EXHAUSTED when a literal's stated
// radius times n exceeds 1/4.
TorusCoord scalar_mul(const Int& n, const TorusCoord& c);

// 1 - c (mod 1).
TorusCoord negate(const TorusCoord& c);

// c + r (mod 1) for exact rational r.
TorusCoord add_rational(const TorusCoord& c, const Rat& r);

// Coordinate-wise (k_1 c_1, ..., k_d c_d); negative entries via negation.
TorusPoint vec_mul(const std::vector<Int>& k, const TorusPoint& x);

// ||x||_{T^d} with the max-over-coordinates convention.
IntervalValue torus_dist(const TorusPoint& x, unsigned prec = 66);

// --- string grammar ----------------------------------------------------------
// "a/b" | "a" | "sqrt:n" | "phi" | "dec:0.123456789±1e-9"  ("+-" accepted too)
TorusCoord parse_coord(const std::string& text);
std::string format_coord(const TorusCoord& c);

// comma-separated coordinates
TorusPoint parse_point(const std::string& text);
std::string format_point(const TorusPoint& p);

} // namespace bohr
