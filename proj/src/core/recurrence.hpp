#pragma once

#include "core/polynomial.hpp"
#include "core/rational_points.hpp"
#include "core/semigroup.hpp"
#include "core/torus.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>

namespace bohr {

// Multiplier family guaranteed to contain multiples of every positive integer
// up to its bound (factorials, lcm prefixes) or an explicit list.
struct KFamily {
    enum class Kind { Factorials, LcmPrefix, Explicit };
    Kind kind = Kind::Factorials;
    unsigned bound = 12;
    std::vector<Int> explicit_values;

    std::vector<Int> elements() const; // sorted, deduplicated, all >= 1

    // "factorials:12" | "lcm:12" | "explicit:1,7,120"
    static KFamily parse(const std::string& text);
    std::string format() const;
};

struct Witness {
    Int k, s, ks;
    Int r_value; // P(k*s), never zero
    std::vector<IntervalValue> distances;
    Certainty certainty = Certainty::Unknown;
    unsigned precision_bits = 0;
};

// Best certified pair seen so far (may exceed eps); deterministic tie-breaks.
struct BestPair {
    Int k, s, r_value;
    Rat max_dist_hi;
    unsigned precision_bits = 0;
};

struct SearchBudget {
    Int s_horizon = 10000000;
    unsigned long wall_clock_ms = 0; // 0 = unlimited; caps break byte-determinism
    unsigned precision_cap = 4096;
    unsigned long shard_size = 64;
    unsigned long max_shards = 0; // 0 = unlimited; test/ops hook for kill-and-resume
    unsigned workers = 1;
};

struct SearchFrontier {
    std::string phase;            // "pairs" | "cluster" | "scan" | "fallback" | "done"
    unsigned long pairs_done = 0; // brute pairs fully evaluated
    unsigned long s_done = 0;     // structured phase-(iv) elements fully evaluated
};

struct SearchOutcome {
    std::optional<Witness> witness;
    std::optional<BestPair> best;
    std::string status; // "ok" | "budget_exhausted" | "no_rational_point" | "interrupted"
    std::string strategy;
    SearchFrontier frontier;
    unsigned long pairs_scanned = 0;
};

// Called at shard boundaries with the frontier and running best; returning
// false interrupts the search (the caller checkpoints and resumes later).
using ShardHook = std::function<bool(const SearchFrontier&, const std::optional<BestPair>&)>;

struct ResumeState {
    SearchFrontier frontier;
    std::optional<BestPair> best;
};

// Certifies max_j ||r * alpha_j||_T <= eps by interval arithmetic with
// precision doubling up to prec_cap.
struct Certification {
    std::vector<IntervalValue> distances;
    Certainty certainty;
    unsigned precision_bits;
};
Certification certify_distances(const TorusPoint& alpha, const Int& r_abs, const Rat& eps,
                                unsigned prec_cap);

// Scans pairs (k, s) in increasing k*s (ties to smaller k); returns the first
// certified witness with ||P(ks) alpha|| <= eps and P(ks) != 0.
SearchOutcome brute_search(const TorusPoint& alpha, const IntPolynomial& P, const KFamily& K,
                           const SemigroupSpec& spec, const Rat& eps, const SearchBudget& budget,
                           const ShardHook& hook = {}, const ResumeState* resume = nullptr);

// The orbit-closure route: lift to T^{rd}, locate a rational limit point, pick
// the least k in K clearing its denominators, then search s in the congruence
// subsemigroup mod that denominator. Falls back to brute_search when enabled.
SearchOutcome structured_search(const TorusPoint& alpha, const IntPolynomial& P, const KFamily& K,
                                const SemigroupSpec& spec, const Rat& eps, const SearchBudget& budget,
                                const ClusterParams& cluster, bool fallback_to_brute = true,
                                const ShardHook& hook = {}, const ResumeState* resume = nullptr);

// min over s <= horizon of ||s x||_{T^d}, with the minimizing s (first s
// attaining the minimal certified upper bound). Exact for rational x.
struct EscapeResult {
    IntervalValue value;
    Int argmin;
};
EscapeResult escape_infimum(const TorusPoint& x, const SemigroupSpec& spec, const Int& horizon,
                            unsigned prec = 96);

// Exact residue set { s mod m : s in Sigma } from the periodic closure of the
// generator orbits, cross-checked against brute force over the exponent grid.
std::set<Int> check_residues(const SemigroupSpec& spec, const Int& modulus, unsigned exponent_horizon);

} // namespace bohr
