#include "core/rational_points.hpp"

#include "core/error.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <map>

namespace bohr {

void OrbitSpec::validate() const {
    if (exponents.size() != base.dim())
        throw Error(ErrorCode::DimensionMismatch, "orbit exponent count must match base dimension");
    for (auto l : exponents)
        if (l < 1) throw Error(ErrorCode::InvalidInput, "orbit exponents must be >= 1");
}

Int RationalCandidate::denominator_lcm() const {
    Int l = 1;
    for (const auto& c : point) l = lcm(l, c.get_den());
    return l;
}

Rat torus_dist_rat(const Rat& a, const Rat& b) {
    Rat f = frac(a - b);
    Rat other = Rat(1) - f;
    return f < other ? f : other;
}

std::vector<OrbitSample> orbit_sample(const OrbitSpec& orbit, const Int& horizon, unsigned long cap,
                                      unsigned workers) {
    orbit.validate();
    std::vector<Int> ss;
    {
        SemigroupStream stream(orbit.spec, horizon);
        while (auto s = stream.next()) {
            ss.push_back(*s);
            if (cap && ss.size() >= cap) break;
        }
    }
    auto make_sample = [&](size_t i) {
        const Int& s = ss[i];
        TorusPoint p;
        p.coords.reserve(orbit.base.dim());
        for (size_t j = 0; j < orbit.base.dim(); j++)
            p.coords.push_back(scalar_mul(pow_int(s, orbit.exponents[j]), orbit.base.coords[j]));
        return OrbitSample{s, std::move(p)};
    };
    return parallel_map<OrbitSample>(ss.size(), workers, make_sample);
}

namespace {

bool coprime_to_all(const Int& den, const std::vector<Int>& generators) {
    for (const auto& g : generators)
        if (gcd(den, g) != 1) return false;
    return true;
}

bool lex_less(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); i++) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

// Per-level denominator cap keeping reconstruction in its uniqueness regime
// (tol < 1/(2 q^2)  <=>  q <= floor(sqrt(1/(2 tol)))).
Int level_den_cap(const Rat& tol, const Int& user_cap) {
    if (tol <= 0) return user_cap;
    Rat inv = Rat(1) / (tol * 2);
    Int cap = isqrt(floor_rat(inv));
    if (cap < 1) cap = 1;
    return std::min(cap, user_cap);
}

} // namespace

std::vector<RationalCandidate> cluster_candidates(const std::vector<std::vector<Rat>>& reps, bool exact,
                                                  const ClusterParams& params,
                                                  const std::vector<Int>& generators) {
    std::vector<RationalCandidate> out;
    if (reps.empty()) return out;

    std::map<std::vector<Rat>, RationalCandidate> found;
    if (exact) {
        std::map<std::vector<Rat>, unsigned long> counts;
        for (const auto& r : reps) counts[r]++;
        for (auto& [pt, n] : counts) {
            bool den_ok = true;
            for (const auto& c : pt)
                if (c.get_den() > params.max_den) den_ok = false;
            if (!den_ok || n < params.evidence_threshold) continue;
            RationalCandidate cand;
            cand.point = pt;
            cand.evidence = n;
            cand.tolerance_reached = Rat(0);
            cand.coprime_to_sigma = true;
            for (const auto& c : pt)
                if (!coprime_to_all(c.get_den(), generators)) cand.coprime_to_sigma = false;
            found.emplace(pt, std::move(cand));
        }
    } else {
        if (params.tol_levels.empty())
            throw Error(ErrorCode::InvalidInput, "clustering needs at least one tolerance level");
        // Candidate points from per-coordinate reconstruction at every level.
        std::map<std::vector<Rat>, bool> keys;
        for (const auto& tol : params.tol_levels) {
            Int cap = level_den_cap(tol, params.max_den);
            for (const auto& rep : reps) {
                std::vector<Rat> pt;
                pt.reserve(rep.size());
                bool ok = true;
                for (const auto& mid : rep) {
                    auto r = best_rational(mid, cap, tol);
                    if (!r) {
                        ok = false;
                        break;
                    }
                    pt.push_back(*r);
                }
                if (ok) keys.emplace(std::move(pt), true);
            }
        }
        const Rat& tol0 = params.tol_levels.front();
        for (auto& [pt, unused] : keys) {
            (void)unused;
            RationalCandidate cand;
            cand.point = pt;
            cand.tolerance_reached = tol0;
            bool any_support = false;
            for (const auto& rep : reps) {
                Rat dist(0);
                for (size_t i = 0; i < rep.size(); i++) dist = std::max(dist, torus_dist_rat(rep[i], pt[i]));
                if (dist <= tol0) {
                    cand.evidence++;
                    any_support = true;
                }
                for (const auto& tol : params.tol_levels)
                    if (dist <= tol && tol < cand.tolerance_reached) cand.tolerance_reached = tol;
            }
            if (!any_support || cand.evidence < params.evidence_threshold) continue;
            cand.coprime_to_sigma = true;
            for (const auto& c : pt)
                if (!coprime_to_all(c.get_den(), generators)) cand.coprime_to_sigma = false;
            found.emplace(pt, std::move(cand));
        }
    }

    for (auto& [pt, cand] : found) {
        if (params.coprime_only && !cand.coprime_to_sigma) continue;
        out.push_back(cand);
    }
    std::sort(out.begin(), out.end(), [](const RationalCandidate& a, const RationalCandidate& b) {
        if (a.evidence != b.evidence) return a.evidence > b.evidence;
        Int la = a.denominator_lcm(), lb = b.denominator_lcm();
        if (la != lb) return la < lb;
        return lex_less(a.point, b.point);
    });
    return out;
}

namespace {

std::vector<std::vector<Rat>> representatives(const std::vector<OrbitSample>& samples, bool exact,
                                              unsigned prec, unsigned workers) {
    auto rep_of = [&](size_t i) {
        std::vector<Rat> rep;
        rep.reserve(samples[i].point.dim());
        for (const auto& c : samples[i].point.coords) {
            if (exact)
                rep.push_back(c.rational());
            else
                rep.push_back(frac(c.enclose(prec).mid()));
        }
        return rep;
    };
    return parallel_map<std::vector<Rat>>(samples.size(), workers, rep_of);
}

} // namespace

std::vector<RationalCandidate> find_rational_limit(const OrbitSpec& orbit, const Int& horizon,
                                                   const ClusterParams& params, unsigned workers) {
    orbit.validate();
    bool exact = true;
    for (const auto& c : orbit.base.coords)
        if (!c.is_rational()) exact = false;
    auto samples = orbit_sample(orbit, horizon, params.sample_cap, workers);
    if (samples.empty()) throw Error(ErrorCode::NoCandidate, "orbit has no samples within the horizon");
    auto reps = representatives(samples, exact, 82, workers);
    auto out = cluster_candidates(reps, exact, params, orbit.spec.generators);
    if (out.empty())
        throw Error(ErrorCode::NoCandidate,
                    "no rational candidate reached evidence threshold " +
                        std::to_string(params.evidence_threshold) + " (finite-sample failure)");
    return out;
}

std::vector<Rat> slice_and_recurse(const OrbitSpec& orbit, const SliceBudget& budget, unsigned workers) {
    orbit.validate();
    bool exact = true;
    for (const auto& c : orbit.base.coords)
        if (!c.is_rational()) exact = false;

    SemigroupSpec spec_cur = orbit.spec;
    std::vector<Int> anchors; // multipliers accumulated from previous levels
    std::vector<Rat> assembled;
    size_t d = orbit.base.dim();

    for (size_t level = d; level >= 1; level--) {
        // Multiplier set for this level: anchors (excluding the virtual 1) and
        // anchor * sigma for sigma in the current semigroup.
        std::vector<Int> multipliers;
        auto sigma = enumerate(spec_cur, budget.horizon);
        if (anchors.empty()) {
            multipliers = sigma;
        } else {
            for (const auto& t : anchors) {
                multipliers.push_back(t);
                for (const auto& s : sigma) multipliers.push_back(t * s);
            }
            std::sort(multipliers.begin(), multipliers.end());
            multipliers.erase(std::unique(multipliers.begin(), multipliers.end()), multipliers.end());
        }
        if (budget.cluster.sample_cap && multipliers.size() > budget.cluster.sample_cap)
            multipliers.resize(budget.cluster.sample_cap);
        if (multipliers.empty())
            throw Error(ErrorCode::NoCandidate,
                        "level " + std::to_string(level) + ": no multipliers within the horizon");

        unsigned long exp_c = orbit.exponents[level - 1];
        const TorusCoord& base_c = orbit.base.coords[level - 1];
        auto coord_of = [&](size_t i) {
            TorusCoord c = scalar_mul(pow_int(multipliers[i], exp_c), base_c);
            if (exact) return std::vector<Rat>{c.rational()};
            return std::vector<Rat>{frac(c.enclose(82).mid())};
        };
        auto reps = parallel_map<std::vector<Rat>>(multipliers.size(), workers, coord_of);

        auto cands = cluster_candidates(reps, exact, budget.cluster, spec_cur.generators);
        if (cands.empty())
            throw Error(ErrorCode::NoCandidate,
                        "level " + std::to_string(level) + ": no rational candidate for coordinate " +
                            std::to_string(level));
        const Rat y = cands.front().point[0];
        assembled.push_back(y);

        if (level == 1) break;

        // Retain multipliers whose coordinate matches y (exactly, or within the
        // coarsest tolerance for interval bases).
        const Rat tol0 = exact ? Rat(0) : budget.cluster.tol_levels.front();
        std::vector<Int> next_anchors;
        for (size_t i = 0; i < multipliers.size(); i++) {
            if (torus_dist_rat(reps[i][0], y) <= tol0) {
                next_anchors.push_back(multipliers[i]);
                if (next_anchors.size() >= budget.anchor_cap) break;
            }
        }
        if (next_anchors.empty())
            throw Error(ErrorCode::NoCandidate,
                        "level " + std::to_string(level) + ": no samples retained around " + format_rat(y));
        anchors = std::move(next_anchors);

        const Int m = y.get_den();
        if (m > 1) spec_cur = congruence_subsemigroup(spec_cur, m);
    }

    std::reverse(assembled.begin(), assembled.end());
    return assembled;
}

} // namespace bohr
