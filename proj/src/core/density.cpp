#include "core/density.hpp"

#include "core/error.hpp"
#include "core/homnorm.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace bohr {

namespace {

struct Rep {
    Rat mid;
    Rat radius;
};

Rep rep_of(const TorusCoord& c, unsigned prec) {
    if (c.is_rational()) return {c.rational(), Rat(0)};
    RatInterval iv = c.enclose(prec);
    return {frac(iv.mid()), iv.width() / 2};
}

IntervalValue gap_of_reps(std::vector<Rep> reps) {
    if (reps.empty()) throw Error(ErrorCode::InvalidInput, "covering gap of an empty sample");
    Rat max_radius(0);
    for (const auto& r : reps) max_radius = std::max(max_radius, r.radius);
    std::sort(reps.begin(), reps.end(), [](const Rep& a, const Rep& b) { return a.mid < b.mid; });
    Rat max_gap;
    if (reps.size() == 1) {
        max_gap = Rat(1);
    } else {
        max_gap = Rat(0);
        for (size_t i = 0; i + 1 < reps.size(); i++) max_gap = std::max(max_gap, reps[i + 1].mid - reps[i].mid);
        max_gap = std::max(max_gap, Rat(1) - reps.back().mid + reps.front().mid);
    }
    Rat slack = max_radius * 2;
    Rat lo = max_gap - slack, hi = max_gap + slack;
    if (lo < 0) lo = 0;
    if (hi > 1) hi = Rat(1);
    return {lo, hi};
}

} // namespace

IntervalValue covering_gap(const std::vector<TorusCoord>& points, unsigned prec) {
    std::vector<Rep> reps;
    reps.reserve(points.size());
    for (const auto& p : points) reps.push_back(rep_of(p, prec));
    return gap_of_reps(std::move(reps));
}

namespace {

struct ScanState {
    std::vector<Int> ss;
    std::vector<Rep> reps; // parallel to ss
};

void extend_samples(ScanState& state, const RealPolynomial& P, const SampleDomain& domain,
                    const Int& from_exclusive, const Int& to_inclusive, unsigned workers) {
    std::vector<Int> fresh;
    if (domain.spec) {
        SemigroupStream stream(*domain.spec, to_inclusive);
        while (auto s = stream.next())
            if (*s > from_exclusive) fresh.push_back(*s);
    } else {
        for (Int s = from_exclusive + 1; s <= to_inclusive; s++) fresh.push_back(s);
    }
    auto eval = [&](size_t i) { return rep_of(P.eval(fresh[i]), 80); };
    auto reps = parallel_map<Rep>(fresh.size(), workers, eval);
    for (size_t i = 0; i < fresh.size(); i++) {
        state.ss.push_back(fresh[i]);
        state.reps.push_back(reps[i]);
    }
}

IntervalValue star_discrepancy_of(const std::vector<Rep>& reps) {
    std::vector<Rat> mids;
    mids.reserve(reps.size());
    Rat max_radius(0);
    for (const auto& r : reps) {
        mids.push_back(r.mid);
        max_radius = std::max(max_radius, r.radius);
    }
    std::sort(mids.begin(), mids.end());
    unsigned long n = mids.size();
    Rat d(0);
    for (unsigned long i = 1; i <= n; i++) {
        const Rat& x = mids[i - 1];
        d = std::max(d, x - Rat(i - 1, n));
        d = std::max(d, Rat(i, n) - x);
    }
    Rat lo = d - max_radius, hi = d + max_radius;
    if (lo < 0) lo = 0;
    if (hi > 1) hi = Rat(1);
    return {lo, hi};
}

} // namespace

std::vector<DensityReport> density_scan(const RealPolynomial& P, const SampleDomain& domain,
                                        const std::vector<Int>& horizons, unsigned weyl_harmonics,
                                        unsigned workers) {
    if (horizons.empty()) throw Error(ErrorCode::InvalidInput, "density_scan needs at least one horizon");
    for (size_t i = 1; i < horizons.size(); i++)
        if (horizons[i] <= horizons[i - 1])
            throw Error(ErrorCode::InvalidInput, "horizons must be strictly increasing");

    std::vector<DensityReport> out;
    ScanState state;
    Int covered = 0;
    for (const auto& N : horizons) {
        extend_samples(state, P, domain, covered, N, workers);
        covered = N;
        if (state.ss.empty())
            throw Error(ErrorCode::InvalidInput, "no samples at horizon " + N.get_str());
        DensityReport rep;
        rep.horizon = N;
        rep.sample_count = state.ss.size();
        rep.max_gap = gap_of_reps(state.reps);
        rep.star_discrepancy = star_discrepancy_of(state.reps);
        for (unsigned h = 1; h <= weyl_harmonics; h++) {
            long double re = 0, im = 0;
            for (const auto& r : state.reps) {
                Rat hx = frac(r.mid * h);
                double angle = 2.0 * M_PI * hx.get_d();
                re += std::cos(angle);
                im += std::sin(angle);
            }
            long double n = static_cast<long double>(state.ss.size());
            double mag = static_cast<double>(std::sqrt(re * re + im * im) / n);
            rep.weyl_sums.push_back({h, std::min(mag, 1.0)});
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<DensitySample> density_samples(const RealPolynomial& P, const SampleDomain& domain,
                                           const Int& horizon, unsigned workers) {
    ScanState state;
    extend_samples(state, P, domain, 0, horizon, workers);
    std::vector<DensitySample> out;
    out.reserve(state.ss.size());
    for (size_t i = 0; i < state.ss.size(); i++)
        out.push_back({state.ss[i], state.reps[i].mid, state.reps[i].radius});
    std::sort(out.begin(), out.end(), [](const DensitySample& a, const DensitySample& b) {
        if (a.mid != b.mid) return a.mid < b.mid;
        return a.s < b.s;
    });
    return out;
}

CurveValue CurveValue::parse(const std::string& raw) {
    std::string text = trim(raw);
    CurveValue v;
    if (text == "phi") {
        v.exact = Rat(1);
        v.src = std::make_shared<PhiSource>();
        return v;
    }
    if (text.rfind("sqrt:", 0) == 0) {
        Int n = parse_int_scaled(text.substr(5));
        if (n < 2 || !n.fits_ulong_p())
            throw Error(ErrorCode::InvalidInput, "sqrt radicand out of range: " + text);
        v.src = std::make_shared<SqrtSource>(n.get_ui());
        v.exact = Rat(isqrt(n)); // whole part; the source carries the fraction
        return v;
    }
    if (text.rfind("dec:", 0) == 0) {
        std::string body = text.substr(4);
        size_t sep = body.find("\xC2\xB1");
        size_t seplen = 2;
        if (sep == std::string::npos) {
            sep = body.find("+-");
        }
        if (sep == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "dec literal needs a ±radius part: " + text);
        v.exact = parse_rat(body.substr(0, sep));
        v.radius = parse_rat(body.substr(sep + seplen));
        return v;
    }
    v.exact = parse_rat(text);
    return v;
}

GridOccupancy curve_density_check(const std::vector<CurveValue>& u, const Rat& t_max,
                                  unsigned long samples, unsigned grid) {
    unsigned d = static_cast<unsigned>(u.size());
    if (d == 0) throw Error(ErrorCode::InvalidInput, "curve_density_check needs dimension >= 1");
    if (grid < 1) throw Error(ErrorCode::InvalidInput, "grid must be >= 1");
    if (t_max <= 0) throw Error(ErrorCode::InvalidInput, "t_max must be positive");
    double total_cells = std::pow(static_cast<double>(grid), static_cast<double>(d));
    if (total_cells > 1e8) throw Error(ErrorCode::InvalidInput, "grid too fine: g^d exceeds 1e8 cells");
    unsigned long total = 1;
    for (unsigned j = 0; j < d; j++) total *= grid;
    if (samples < total)
        throw Error(ErrorCode::InvalidInput, "need at least g^d samples");

    // Certify u_j != 0 and freeze a midpoint value A_j/B_j per coordinate so a
    // sample cell is floor(frac(i^j * A_j/B_j) * g).
    std::vector<Int> A(d), B(d);
    Rat T = t_max / Rat(static_cast<unsigned long>(samples));
    for (unsigned j = 0; j < d; j++) {
        Rat lo = u[j].exact - u[j].radius, hi = u[j].exact + u[j].radius;
        Rat mid = u[j].exact;
        if (u[j].src) {
            RatInterval iv = u[j].src->enclose(128);
            lo += u[j].src_coeff * iv.lo;
            hi += u[j].src_coeff * iv.hi;
            mid += u[j].src_coeff * iv.mid();
        }
        if (lo <= 0 && hi >= 0)
            throw Error(ErrorCode::ZeroComponent, "component " + std::to_string(j + 1) + " may be zero");
        Rat tj(1);
        for (unsigned e = 0; e <= j; e++) tj *= T;
        Rat scaled = tj * mid;
        A[j] = scaled.get_num();
        B[j] = scaled.get_den();
    }

    std::vector<bool> occupied(total, false);
    unsigned long occupied_count = 0;
    Int gi(grid);
    for (unsigned long i = 1; i <= samples; i++) {
        unsigned long cell_index = 0;
        Int ipow(1);
        Int ii(static_cast<unsigned long>(i));
        for (unsigned j = 0; j < d; j++) {
            ipow *= ii;
            Int num = fmod_pos(ipow * A[j], B[j]);
            Int cell = fdiv(num * gi, B[j]);
            cell_index = cell_index * grid + cell.get_ui();
        }
        if (!occupied[cell_index]) {
            occupied[cell_index] = true;
            occupied_count++;
        }
    }
    GridOccupancy out;
    out.dim = d;
    out.cells_per_side = grid;
    out.occupied = occupied_count;
    out.total = total;
    return out;
}

std::vector<DirectionVector> direction_set(const OrbitSpec& orbit, const Rat& eps, const Int& horizon,
                                           unsigned long cap, unsigned workers) {
    orbit.validate();
    for (size_t j = 0; j < orbit.exponents.size(); j++)
        if (orbit.exponents[j] != j + 1)
            throw Error(ErrorCode::InvalidInput, "direction_set needs exponents (1, 2, ..., d)");
    if (eps <= 0) throw Error(ErrorCode::InvalidInput, "eps must be positive");

    auto samples = orbit_sample(orbit, horizon, cap, workers);
    std::vector<DirectionVector> out;
    for (const auto& sample : samples) {
        // Nearest-integer lift of the (midpoint representative of the) point.
        std::vector<Rat> lift;
        lift.reserve(sample.point.dim());
        for (const auto& c : sample.point.coords) {
            Rat mid = c.is_rational() ? c.rational() : frac(c.enclose(96).mid());
            lift.push_back(mid - Rat(round_half_down(mid)));
        }
        unsigned prec = 96;
        HomNorm nn = hom_norm(lift, prec);
        while (!(nn.bounds.hi <= eps || nn.bounds.lo > eps) && prec < precision_cap()) {
            prec *= 2;
            nn = hom_norm(lift, prec);
        }
        if (!(nn.bounds.hi <= eps) || !(nn.bounds.lo > 0)) continue;

        DirectionVector dv;
        dv.s = sample.s;
        dv.lift = lift;
        dv.quasi_norm = {nn.bounds.lo, nn.bounds.hi};

        // components x_j / nnorm^j with outward rounding, then certify the
        // unit quasi-norm identity to 2^-40.
        Rat tolerance = Rat(1) / Rat(pow2(40));
        for (;;) {
            std::vector<RatInterval> comps;
            comps.reserve(lift.size());
            Rat lo_pow(1), hi_pow(1);
            for (size_t j = 0; j < lift.size(); j++) {
                lo_pow *= nn.bounds.lo;
                hi_pow *= nn.bounds.hi;
                RatInterval c;
                if (lift[j] >= 0) {
                    c = {lift[j] / hi_pow, lift[j] / lo_pow};
                } else {
                    c = {lift[j] / lo_pow, lift[j] / hi_pow};
                }
                comps.push_back(std::move(c));
            }
            RatInterval unit = hom_norm(comps, prec);
            if (unit.lo >= Rat(1) - tolerance && unit.hi <= Rat(1) + tolerance) {
                dv.components = std::move(comps);
                dv.unit_check = unit;
                break;
            }
            if (prec >= precision_cap()) {
                dv.components.clear();
                break;
            }
            prec *= 2;
            nn = hom_norm(lift, prec);
        }
        if (dv.components.empty()) continue;
        out.push_back(std::move(dv));
    }
    if (out.empty())
        throw Error(ErrorCode::Empty, "no orbit lift has quasi-norm in (0, " + format_rat(eps) + "]");
    return out;
}

SegmentCoverage line_segment_check(const std::vector<TorusPoint>& points, const TorusPoint& anchor,
                                   unsigned axis, unsigned grid, const Rat& tol, unsigned prec) {
    if (axis < 1 || axis > anchor.dim())
        throw Error(ErrorCode::InvalidInput, "axis out of range");
    if (grid < 1) throw Error(ErrorCode::InvalidInput, "grid must be >= 1");
    for (const auto& c : anchor.coords)
        if (!c.is_rational()) throw Error(ErrorCode::InvalidInput, "anchor must be rational");

    std::vector<bool> cells(grid, false);
    unsigned marked = 0;
    for (const auto& p : points) {
        if (p.dim() != anchor.dim())
            throw Error(ErrorCode::DimensionMismatch, "sample dimension differs from anchor");
        bool near = true;
        for (size_t i = 0; i < p.dim() && near; i++) {
            if (i + 1 == axis) continue;
            TorusCoord diff = add_rational(p.coords[i], -anchor.coords[i].rational());
            if (!(dist_to_zero(diff, prec).hi <= tol)) near = false;
        }
        if (!near) continue;
        const TorusCoord& pc = p.coords[axis - 1];
        Rat mid = pc.is_rational() ? pc.rational() : frac(pc.enclose(prec).mid());
        Rat t = frac(mid - anchor.coords[axis - 1].rational());
        Int cell = fdiv(t.get_num() * grid, t.get_den());
        unsigned idx = static_cast<unsigned>(cell.get_ui());
        if (idx >= grid) idx = grid - 1;
        if (!cells[idx]) {
            cells[idx] = true;
            marked++;
        }
    }
    return SegmentCoverage{marked, grid};
}

} // namespace bohr
