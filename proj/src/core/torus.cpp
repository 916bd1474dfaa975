#include "core/torus.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace bohr {

const char* certainty_name(Certainty c) {
    switch (c) {
        case Certainty::CertifiedLeq: return "certified_leq";
        case Certainty::CertifiedGt: return "certified_gt";
        case Certainty::Unknown: return "unknown";
    }
    return "unknown";
}

Certainty classify(const IntervalValue& v, const Rat& eps) {
    if (v.hi <= eps) return Certainty::CertifiedLeq;
    if (v.lo > eps) return Certainty::CertifiedGt;
    return Certainty::Unknown;
}

unsigned precision_cap() {
    static std::atomic<unsigned> cap = [] {
        if (const char* env = std::getenv("BOHR_LAB_PRECISION_CAP")) {
            long v = std::atol(env);
            if (v >= 64 && v <= 1 << 24) return static_cast<unsigned>(v);
        }
        return 4096u;
    }();
    return cap.load();
}

namespace {

unsigned clamp_prec(unsigned prec) {
    unsigned cap = precision_cap();
    if (prec > cap)
        throw Error(ErrorCode::PrecisionExhausted,
                    "requested precision " + std::to_string(prec) + " exceeds cap " + std::to_string(cap));
    return prec < 2 ? 2 : prec;
}

// Interval [mant, mant+1]/2^prec.
RatInterval dyadic_unit(const Int& mant, unsigned prec) {
    Int den = pow2(prec);
    return {make_rat(mant, den), make_rat(mant + 1, den)};
}

// Shift so lo lands in [0,1); width must be < 1.
RatInterval shift_canonical(RatInterval iv) {
    Int f = floor_rat(iv.lo);
    if (f != 0) {
        Rat s(f);
        iv.lo -= s;
        iv.hi -= s;
    }
    return iv;
}

} // namespace

// --- SqrtSource ---------------------------------------------------------------

SqrtSource::SqrtSource(unsigned long radicand) : radicand_(radicand) {
    Int n(static_cast<unsigned long>(radicand));
    whole_ = isqrt(n);
    if (whole_ * whole_ == n)
        throw Error(ErrorCode::InvalidInput, "sqrt:" + std::to_string(radicand) + " is a perfect square");
}

RatInterval SqrtSource::enclose(unsigned prec) const {
    prec = clamp_prec(prec);
    std::lock_guard<std::mutex> lock(mu_);
    if (cached_prec_ < prec) {
        // floor(sqrt(n) * 2^p) = isqrt(n * 4^p)
        Int n(static_cast<unsigned long>(radicand_));
        Int scaled = isqrt(n << (2 * static_cast<unsigned long>(prec)));
        cached_mant_ = scaled - (whole_ << prec);
        cached_prec_ = prec;
    }
    // Derive the requested precision from the cache by flooring down; this keeps
    // successive enclosures nested.
    Int mant = cached_mant_ >> (cached_prec_ - prec);
    return dyadic_unit(mant, prec);
}

std::optional<std::string> SqrtSource::symbol() const {
    return "sqrt:" + std::to_string(radicand_);
}

// --- PhiSource ------------------------------------------------------------------

RatInterval PhiSource::enclose(unsigned prec) const {
    prec = clamp_prec(prec);
    std::lock_guard<std::mutex> lock(mu_);
    if (cached_prec_ < prec) {
        // frac(phi) = (sqrt5 - 1)/2; floor(2^p (sqrt5-1)/2) = (floor(2^p sqrt5) - 2^p) >> 1
        Int q = isqrt(Int(5) << (2 * static_cast<unsigned long>(prec)));
        cached_mant_ = (q - pow2(prec)) >> 1;
        cached_prec_ = prec;
    }
    Int mant = cached_mant_ >> (cached_prec_ - prec);
    return dyadic_unit(mant, prec);
}

// --- LiteralSource ----------------------------------------------------------------

LiteralSource::LiteralSource(std::string digits, Rat radius) : digits_(std::move(digits)), radius_(radius) {
    if (radius_ < 0) throw Error(ErrorCode::InvalidInput, "literal radius must be nonnegative");
    mid_ = frac(parse_rat(digits_));
}

RatInterval LiteralSource::enclose(unsigned) const {
    return {mid_ - radius_, mid_ + radius_};
}

std::optional<std::string> LiteralSource::symbol() const {
    return "dec:" + digits_ + "\xC2\xB1" + format_decimal(radius_, 30);
}

// --- AffineSource ------------------------------------------------------------------

AffineSource::AffineSource(std::vector<Term> terms, Rat constant)
    : terms_(std::move(terms)), constant_(std::move(constant)) {}

RatInterval AffineSource::enclose(unsigned prec) const {
    prec = clamp_prec(prec);
    // Children refined so the summed width stays within 2^(1-prec).
    Int coeff_budget = 1;
    for (const auto& t : terms_) {
        Int mag = fdiv(abs_rat(t.coeff).get_num(), t.coeff.get_den()) + 1;
        coeff_budget += mag;
    }
    unsigned extra = static_cast<unsigned>(bit_length(coeff_budget)) + 2;
    RatInterval acc{constant_, constant_};
    for (const auto& t : terms_) {
        RatInterval child = t.src->enclose(prec + extra);
        Rat a = t.coeff * child.lo;
        Rat b = t.coeff * child.hi;
        if (a > b) std::swap(a, b);
        acc.lo += a;
        acc.hi += b;
    }
    if (acc.width() >= 1)
        throw Error(ErrorCode::PrecisionExhausted, "interval width reached 1 in affine combination");
    return shift_canonical(acc);
}

bool AffineSource::refinable() const {
    for (const auto& t : terms_)
        if (!t.src->refinable()) return false;
    return true;
}

Rat AffineSource::intrinsic_radius() const {
    Rat r(0);
    for (const auto& t : terms_) r += abs_rat(t.coeff) * t.src->intrinsic_radius();
    return r;
}

// --- TorusCoord -----------------------------------------------------------------------

TorusCoord::TorusCoord(Rat value) : rational_(frac(value)) {}

TorusCoord::TorusCoord(SourcePtr src) : source_(std::move(src)) {}

RatInterval TorusCoord::enclose(unsigned prec) const {
    if (rational_) return {*rational_, *rational_};
    return source_->enclose(prec);
}

Rat TorusCoord::intrinsic_radius() const {
    if (rational_) return Rat(0);
    return source_->intrinsic_radius();
}

// --- distance to Z ----------------------------------------------------------------------

IntervalValue dist_to_zero(const RatInterval& iv) {
    if (iv.width() >= 1) return {Rat(0), Rat(1, 2)};
    auto point_dist = [](const Rat& x) {
        Rat f = frac(x);
        Rat other = Rat(1) - f;
        return f < other ? f : other;
    };
    Rat dlo = point_dist(iv.lo);
    Rat dhi = point_dist(iv.hi);
    // Integer inside [lo, hi]?
    bool has_integer = floor_rat(iv.hi) >= -floor_rat(-iv.lo); // floor(hi) >= ceil(lo)
    Rat lo = has_integer ? Rat(0) : std::min(dlo, dhi);
    // Half-integer inside? Smallest odd integer >= 2*lo.
    Rat two_lo = iv.lo * 2, two_hi = iv.hi * 2;
    Int c = -floor_rat(-two_lo);
    if (fmod_pos(c, 2) == 0) c += 1;
    bool has_half = Rat(c) <= two_hi;
    Rat hi = has_half ? Rat(1, 2) : std::max(dlo, dhi);
    return {lo, hi};
}

IntervalValue dist_to_zero(const TorusCoord& c, unsigned prec) {
    if (c.is_rational()) {
        const Rat& v = c.rational();
        Rat other = Rat(1) - v;
        Rat d = v < other ? v : other;
        return {d, d};
    }
    return dist_to_zero(c.enclose(prec));
}

// --- torus operations --------------------------------------------------------------------

TorusCoord scalar_mul(const Int& n, const TorusCoord& c) {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "scalar_mul requires n >= 0");
    if (c.is_rational()) {
        const Rat& v = c.rational();
        Int num = fmod_pos(n * v.get_num(), v.get_den());
        return TorusCoord(make_rat(num, v.get_den()));
    }
    Rat radius = c.source()->intrinsic_radius();
    if (radius * Rat(n) > Rat(1, 4))
        throw Error(ErrorCode::PrecisionExhausted,
                    "literal radius times " + n.get_str() + " exceeds 1/4");
    if (n == 0) return TorusCoord(Rat(0));
    std::vector<AffineSource::Term> terms;
    terms.push_back({Rat(n), c.source()});
    return TorusCoord(std::make_shared<AffineSource>(std::move(terms), Rat(0)));
}

TorusCoord negate(const TorusCoord& c) {
    if (c.is_rational()) {
        const Rat& v = c.rational();
        if (v == 0) return TorusCoord(Rat(0));
        return TorusCoord(Rat(1) - v);
    }
    std::vector<AffineSource::Term> terms;
    terms.push_back({Rat(-1), c.source()});
    return TorusCoord(std::make_shared<AffineSource>(std::move(terms), Rat(1)));
}

TorusCoord add_rational(const TorusCoord& c, const Rat& r) {
    if (c.is_rational()) return TorusCoord(c.rational() + r);
    std::vector<AffineSource::Term> terms;
    terms.push_back({Rat(1), c.source()});
    return TorusCoord(std::make_shared<AffineSource>(std::move(terms), r));
}

TorusPoint vec_mul(const std::vector<Int>& k, const TorusPoint& x) {
    if (k.size() != x.dim())
        throw Error(ErrorCode::DimensionMismatch,
                    "multiplier vector has length " + std::to_string(k.size()) + ", point has dim " +
                        std::to_string(x.dim()));
    TorusPoint out;
    out.coords.reserve(x.dim());
    for (size_t i = 0; i < k.size(); i++) {
        if (k[i] >= 0)
            out.coords.push_back(scalar_mul(k[i], x.coords[i]));
        else
            out.coords.push_back(negate(scalar_mul(-k[i], x.coords[i])));
    }
    return out;
}

IntervalValue torus_dist(const TorusPoint& x, unsigned prec) {
    if (x.dim() == 0) throw Error(ErrorCode::InvalidInput, "torus_dist of empty point");
    IntervalValue acc{Rat(0), Rat(0)};
    for (const auto& c : x.coords) {
        IntervalValue d = dist_to_zero(c, prec);
        acc.lo = std::max(acc.lo, d.lo);
        acc.hi = std::max(acc.hi, d.hi);
    }
    return acc;
}

// --- grammar -------------------------------------------------------------------------------

TorusCoord parse_coord(const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) throw Error(ErrorCode::InvalidInput, "empty torus coordinate");
    if (text == "phi") return TorusCoord(std::make_shared<PhiSource>());
    if (text.rfind("sqrt:", 0) == 0) {
        Int n = parse_int_scaled(text.substr(5));
        if (n < 2 || !n.fits_ulong_p())
            throw Error(ErrorCode::InvalidInput, "sqrt radicand out of range: " + text);
        return TorusCoord(std::make_shared<SqrtSource>(n.get_ui()));
    }
    if (text.rfind("dec:", 0) == 0) {
        std::string body = text.substr(4);
        size_t sep = body.find("\xC2\xB1"); // UTF-8 "±"
        size_t seplen = 2;
        if (sep == std::string::npos) {
            sep = body.find("+-");
            seplen = 2;
        }
        if (sep == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "dec literal needs a ±radius part: " + text);
        std::string digits = body.substr(0, sep);
        Rat radius = parse_rat(body.substr(sep + seplen));
        return TorusCoord(std::make_shared<LiteralSource>(digits, radius));
    }
    return TorusCoord(parse_rat(text));
}

std::string format_coord(const TorusCoord& c) {
    if (c.is_rational()) return format_rat(c.rational());
    if (auto sym = c.source()->symbol()) return *sym;
    // Derived coordinate: emit as a decimal literal with its certified radius.
    RatInterval iv = c.enclose(82);
    Rat mid = frac(iv.mid());
    Rat radius = iv.width() / 2;
    return "dec:" + format_decimal(mid, 28) + "\xC2\xB1" + format_decimal(radius, 28);
}

TorusPoint parse_point(const std::string& text) {
    TorusPoint p;
    for (const auto& part : split(text, ','))
        p.coords.push_back(parse_coord(part));
    if (p.coords.empty()) throw Error(ErrorCode::InvalidInput, "empty torus point");
    return p;
}

std::string format_point(const TorusPoint& p) {
    std::string out;
    for (size_t i = 0; i < p.coords.size(); i++) {
        if (i) out += ",";
        out += format_coord(p.coords[i]);
    }
    return out;
}

} // namespace bohr
