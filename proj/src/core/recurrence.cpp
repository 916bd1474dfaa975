#include "core/recurrence.hpp"

#include "core/error.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <queue>

namespace bohr {

std::vector<Int> KFamily::elements() const {
    std::vector<Int> out;
    switch (kind) {
        case Kind::Factorials: {
            Int f = 1;
            for (unsigned i = 1; i <= bound; i++) {
                f *= i;
                out.push_back(f);
            }
            break;
        }
        case Kind::LcmPrefix: {
            Int l = 1;
            for (unsigned i = 1; i <= bound; i++) {
                l = lcm(l, Int(i));
                out.push_back(l);
            }
            break;
        }
        case Kind::Explicit:
            out = explicit_values;
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty() || out.front() < 1)
        throw Error(ErrorCode::InvalidInput, "K family must contain positive integers");
    return out;
}

KFamily KFamily::parse(const std::string& raw) {
    std::string text = trim(raw);
    KFamily k;
    auto colon = text.find(':');
    std::string head = colon == std::string::npos ? text : text.substr(0, colon);
    std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "factorials" || head == "lcm") {
        k.kind = head == "factorials" ? Kind::Factorials : Kind::LcmPrefix;
        if (tail.empty()) throw Error(ErrorCode::InvalidInput, "K family needs a bound: '" + raw + "'");
        Int b = parse_int_scaled(tail);
        if (b < 1 || b > 1000) throw Error(ErrorCode::InvalidInput, "K bound out of range: '" + raw + "'");
        k.bound = static_cast<unsigned>(b.get_ui());
    } else if (head == "explicit") {
        k.kind = Kind::Explicit;
        for (const auto& part : split(tail, ','))
            k.explicit_values.push_back(parse_int_scaled(part));
        if (k.explicit_values.empty())
            throw Error(ErrorCode::InvalidInput, "explicit K family needs values: '" + raw + "'");
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown K family '" + raw + "'");
    }
    return k;
}

std::string KFamily::format() const {
    switch (kind) {
        case Kind::Factorials: return "factorials:" + std::to_string(bound);
        case Kind::LcmPrefix: return "lcm:" + std::to_string(bound);
        case Kind::Explicit: {
            std::string out = "explicit:";
            for (size_t i = 0; i < explicit_values.size(); i++) {
                if (i) out += ",";
                out += explicit_values[i].get_str();
            }
            return out;
        }
    }
    return "";
}

Certification certify_distances(const TorusPoint& alpha, const Int& r_abs, const Rat& eps,
                                unsigned prec_cap) {
    unsigned prec = 72;
    bool refinable = true;
    for (const auto& c : alpha.coords)
        if (!c.is_refinable()) refinable = false;
    for (;;) {
        Certification cert;
        cert.precision_bits = prec;
        cert.distances.reserve(alpha.dim());
        IntervalValue maxd{Rat(0), Rat(0)};
        for (const auto& c : alpha.coords) {
            IntervalValue d = dist_to_zero(scalar_mul(r_abs, c), prec);
            maxd.lo = std::max(maxd.lo, d.lo);
            maxd.hi = std::max(maxd.hi, d.hi);
            cert.distances.push_back(std::move(d));
        }
        cert.certainty = classify(maxd, eps);
        if (cert.certainty != Certainty::Unknown) return cert;
        if (!refinable || prec >= prec_cap) return cert;
        prec = std::min(prec * 2, prec_cap);
    }
}

namespace {

// (k, s) pairs in increasing product, ties to smaller k.
class PairGenerator {
  public:
    PairGenerator(std::vector<Int> ks, const SemigroupSpec& spec, const Int& s_horizon) : ks_(std::move(ks)) {
        streams_.reserve(ks_.size());
        for (size_t i = 0; i < ks_.size(); i++) {
            streams_.emplace_back(spec, s_horizon);
            if (auto s = streams_.back().next()) heap_.push(Entry{ks_[i] * *s, ks_[i], *s, i});
        }
    }

    struct Pair {
        Int k, s, product;
    };

    std::optional<Pair> next() {
        if (heap_.empty()) return std::nullopt;
        Entry top = heap_.top();
        heap_.pop();
        if (auto s = streams_[top.idx].next()) heap_.push(Entry{ks_[top.idx] * *s, ks_[top.idx], *s, top.idx});
        return Pair{top.k, top.s, top.product};
    }

  private:
    struct Entry {
        Int product, k, s;
        size_t idx;
        bool operator>(const Entry& o) const {
            if (product != o.product) return product > o.product;
            return k > o.k;
        }
    };
    std::vector<Int> ks_;
    std::vector<SemigroupStream> streams_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
};

struct PairResult {
    Int k, s, r;
    Certification cert;
    bool zero = false;
};

void consider_best(std::optional<BestPair>& best, const PairResult& pr) {
    Rat hi(0);
    for (const auto& d : pr.cert.distances) hi = std::max(hi, d.hi);
    if (!best || hi < best->max_dist_hi)
        best = BestPair{pr.k, pr.s, pr.r, hi, pr.cert.precision_bits};
}

struct ScanControl {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    unsigned long shards_run = 0;

    bool timed_out(const SearchBudget& b) const {
        if (b.wall_clock_ms == 0) return false;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                        start)
                      .count();
        return static_cast<unsigned long>(ms) >= b.wall_clock_ms;
    }
};

} // namespace

SearchOutcome brute_search(const TorusPoint& alpha, const IntPolynomial& P, const KFamily& K,
                           const SemigroupSpec& spec, const Rat& eps, const SearchBudget& budget,
                           const ShardHook& hook, const ResumeState* resume) {
    SearchOutcome out;
    out.strategy = "brute";
    out.frontier.phase = "pairs";
    PairGenerator gen(K.elements(), spec, budget.s_horizon);

    unsigned long skip = resume ? resume->frontier.pairs_done : 0;
    if (resume) out.best = resume->best;
    out.frontier.pairs_done = 0;
    for (unsigned long i = 0; i < skip; i++) {
        if (!gen.next()) break;
        out.frontier.pairs_done++;
    }

    ScanControl control;
    for (;;) {
        std::vector<PairGenerator::Pair> shard;
        shard.reserve(budget.shard_size);
        while (shard.size() < budget.shard_size) {
            auto p = gen.next();
            if (!p) break;
            shard.push_back(std::move(*p));
        }
        if (shard.empty()) {
            out.status = "budget_exhausted";
            out.frontier.phase = "done";
            return out;
        }
        auto eval = [&](size_t i) {
            PairResult pr;
            pr.k = shard[i].k;
            pr.s = shard[i].s;
            pr.r = P.eval(shard[i].product);
            if (pr.r == 0) {
                pr.zero = true;
                return pr;
            }
            Int r_abs = pr.r < 0 ? Int(-pr.r) : pr.r;
            pr.cert = certify_distances(alpha, r_abs, eps, budget.precision_cap);
            return pr;
        };
        auto results = parallel_map<PairResult>(shard.size(), budget.workers, eval);
        for (auto& pr : results) {
            out.frontier.pairs_done++;
            out.pairs_scanned++;
            if (pr.zero) continue;
            consider_best(out.best, pr);
            if (pr.cert.certainty == Certainty::CertifiedLeq) {
                Witness w;
                w.k = pr.k;
                w.s = pr.s;
                w.ks = pr.k * pr.s;
                w.r_value = pr.r;
                w.distances = pr.cert.distances;
                w.certainty = pr.cert.certainty;
                w.precision_bits = pr.cert.precision_bits;
                out.witness = std::move(w);
                out.status = "ok";
                out.frontier.phase = "done";
                return out;
            }
        }
        control.shards_run++;
        if (hook && !hook(out.frontier, out.best)) {
            out.status = "interrupted";
            return out;
        }
        if ((budget.max_shards && control.shards_run >= budget.max_shards) || control.timed_out(budget)) {
            out.status = "interrupted";
            return out;
        }
    }
}

namespace {

// Blocks j = 1..r of coordinates c_j * x_i, as in the lifted orbit set.
TorusPoint lift_point(const TorusPoint& alpha, const IntPolynomial& P) {
    TorusPoint lifted;
    lifted.coords.reserve(P.degree() * alpha.dim());
    for (size_t j = 0; j < P.degree(); j++) {
        const Int& c = P.coeffs[j];
        Int c_abs = c < 0 ? Int(-c) : c;
        for (size_t i = 0; i < alpha.dim(); i++) {
            TorusCoord coord = scalar_mul(c_abs, alpha.coords[i]);
            if (c < 0) coord = negate(coord);
            lifted.coords.push_back(std::move(coord));
        }
    }
    return lifted;
}

} // namespace

SearchOutcome structured_search(const TorusPoint& alpha, const IntPolynomial& P, const KFamily& K,
                                const SemigroupSpec& spec, const Rat& eps, const SearchBudget& budget,
                                const ClusterParams& cluster, bool fallback_to_brute,
                                const ShardHook& hook, const ResumeState* resume) {
    SearchOutcome out;
    out.strategy = "structured";
    out.frontier.phase = "cluster";
    if (resume) out.best = resume->best;
    bool resume_in_fallback = resume && resume->frontier.phase == "fallback";

    std::optional<Int> chosen_k;
    Int modulus = 1;
    if (!resume_in_fallback) {
        // (i)+(ii): lifted orbit in T^{rd}, rational limit point hunt.
        std::optional<RationalCandidate> candidate;
        try {
            OrbitSpec orbit;
            orbit.base = lift_point(alpha, P);
            orbit.spec = spec;
            orbit.exponents.reserve(P.degree() * alpha.dim());
            for (size_t j = 1; j <= P.degree(); j++)
                for (size_t i = 0; i < alpha.dim(); i++) orbit.exponents.push_back(j);
            auto cands = find_rational_limit(orbit, budget.s_horizon, cluster, budget.workers);
            candidate = cands.front();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoCandidate) throw;
        }

        // (iii): least k in K clearing all denominators of the candidate.
        if (candidate) {
            Int den_lcm = candidate->denominator_lcm();
            for (const auto& k : K.elements()) {
                if (fmod_pos(k, den_lcm) == 0) {
                    chosen_k = k;
                    break;
                }
            }
            if (chosen_k) modulus = den_lcm;
        }
        if (!chosen_k) {
            if (!fallback_to_brute) {
                out.status = "no_rational_point";
                out.frontier.phase = "done";
                return out;
            }
        }
    }

    if (chosen_k && !resume_in_fallback) {
        // (iv): scan s in the congruence subsemigroup mod `modulus`.
        SemigroupSpec scan_spec = modulus == 1 ? spec : congruence_subsemigroup(spec, modulus);
        out.frontier.phase = "scan";
        SemigroupStream stream(scan_spec, budget.s_horizon);
        unsigned long skip = (resume && resume->frontier.phase == "scan") ? resume->frontier.s_done : 0;
        for (unsigned long i = 0; i < skip; i++) {
            if (!stream.next()) break;
            out.frontier.s_done++;
        }
        ScanControl control;
        bool exhausted = false;
        while (!exhausted) {
            std::vector<Int> shard;
            shard.reserve(budget.shard_size);
            while (shard.size() < budget.shard_size) {
                auto s = stream.next();
                if (!s) {
                    exhausted = true;
                    break;
                }
                shard.push_back(std::move(*s));
            }
            if (shard.empty()) break;
            auto eval = [&](size_t i) {
                PairResult pr;
                pr.k = *chosen_k;
                pr.s = shard[i];
                pr.r = P.eval(*chosen_k * shard[i]);
                if (pr.r == 0) {
                    pr.zero = true;
                    return pr;
                }
                Int r_abs = pr.r < 0 ? Int(-pr.r) : pr.r;
                pr.cert = certify_distances(alpha, r_abs, eps, budget.precision_cap);
                return pr;
            };
            auto results = parallel_map<PairResult>(shard.size(), budget.workers, eval);
            for (auto& pr : results) {
                out.frontier.s_done++;
                out.pairs_scanned++;
                if (pr.zero) continue;
                consider_best(out.best, pr);
                if (pr.cert.certainty == Certainty::CertifiedLeq) {
                    Witness w;
                    w.k = pr.k;
                    w.s = pr.s;
                    w.ks = pr.k * pr.s;
                    w.r_value = pr.r;
                    w.distances = pr.cert.distances;
                    w.certainty = pr.cert.certainty;
                    w.precision_bits = pr.cert.precision_bits;
                    out.witness = std::move(w);
                    out.status = "ok";
                    out.frontier.phase = "done";
                    return out;
                }
            }
            control.shards_run++;
            if (hook && !hook(out.frontier, out.best)) {
                out.status = "interrupted";
                return out;
            }
            if ((budget.max_shards && control.shards_run >= budget.max_shards) || control.timed_out(budget)) {
                out.status = "interrupted";
                return out;
            }
        }
        if (!fallback_to_brute) {
            out.status = "budget_exhausted";
            out.frontier.phase = "done";
            return out;
        }
    }

    // Fallback: plain pair scan over (k, s).
    ResumeState fb_resume;
    fb_resume.best = out.best;
    if (resume_in_fallback) fb_resume.frontier.pairs_done = resume->frontier.pairs_done;
    ShardHook fb_hook;
    if (hook) {
        fb_hook = [&](const SearchFrontier& f, const std::optional<BestPair>& b) {
            SearchFrontier g = f;
            g.phase = "fallback";
            return hook(g, b);
        };
    }
    SearchOutcome fb = brute_search(alpha, P, K, spec, eps, budget, fb_hook, &fb_resume);
    fb.strategy = "structured+brute-fallback";
    if (fb.status == "interrupted" || fb.frontier.phase == "pairs") fb.frontier.phase = "fallback";
    return fb;
}

EscapeResult escape_infimum(const TorusPoint& x, const SemigroupSpec& spec, const Int& horizon,
                            unsigned prec) {
    SemigroupStream stream(spec, horizon);
    std::optional<EscapeResult> best;
    Rat best_lo(1);
    while (auto s = stream.next()) {
        TorusPoint sx;
        sx.coords.reserve(x.dim());
        for (const auto& c : x.coords) sx.coords.push_back(scalar_mul(*s, c));
        IntervalValue d = torus_dist(sx, prec);
        if (!best || d.hi < best->value.hi) {
            best = EscapeResult{d, *s};
            best_lo = std::min(best_lo, d.lo);
        } else {
            best_lo = std::min(best_lo, d.lo);
        }
    }
    if (!best) throw Error(ErrorCode::InvalidInput, "no semigroup elements within the horizon");
    // Certified bounds on the minimum over the scanned set.
    best->value.lo = std::min(best->value.lo, best_lo);
    return *best;
}

std::set<Int> check_residues(const SemigroupSpec& spec, const Int& modulus, unsigned exponent_horizon) {
    if (modulus < 2) throw Error(ErrorCode::InvalidInput, "check_residues needs modulus >= 2");
    // Periodic closure: BFS over Z/m under multiplication by the generators.
    std::set<Int> closure;
    std::vector<Int> queue;
    auto push = [&](const Int& v) {
        if (closure.insert(v).second) queue.push_back(v);
    };
    if (spec.mode == ExponentMode::AllProducts) {
        for (const auto& g : spec.generators) push(fmod_pos(g, modulus));
    } else {
        Int base = 1;
        for (const auto& g : spec.generators) base = fmod_pos(base * g, modulus);
        push(base);
    }
    while (!queue.empty()) {
        Int v = queue.back();
        queue.pop_back();
        for (const auto& g : spec.generators) push(fmod_pos(v * g, modulus));
    }

    // Independent brute force over the exponent grid must agree (as a subset;
    // it equals the closure once the horizon covers the residue periods).
    double grid = 1;
    for (size_t i = 0; i < spec.generators.size(); i++) grid *= exponent_horizon + 1;
    if (grid > 5e6)
        throw Error(ErrorCode::InvalidInput, "exponent grid too large for the brute-force cross-check");
    std::set<Int> brute;
    std::vector<unsigned> exps(spec.generators.size(), 0);
    for (;;) {
        bool all_zero = true, valid = true;
        for (size_t i = 0; i < exps.size(); i++) {
            if (exps[i] > 0) all_zero = false;
            if (spec.mode == ExponentMode::PositiveExponents && exps[i] == 0) valid = false;
        }
        if (valid && !all_zero) {
            Int v = 1;
            for (size_t i = 0; i < exps.size(); i++)
                v = fmod_pos(v * powmod(fmod_pos(spec.generators[i], modulus), Int(exps[i]), modulus),
                             modulus);
            brute.insert(v);
        }
        size_t i = 0;
        while (i < exps.size() && exps[i] == exponent_horizon) exps[i++] = 0;
        if (i == exps.size()) break;
        exps[i]++;
    }
    for (const auto& v : brute) {
        if (!closure.count(v))
            throw Error(ErrorCode::Internal,
                        "brute-force residue " + v.get_str() + " missing from the periodic closure");
    }
    return closure;
}

} // namespace bohr
