#pragma once

#include "core/homnorm.hpp"
#include "core/semigroup.hpp"
#include "core/torus.hpp"

#include <optional>
#include <vector>

namespace bohr {

// Orbit of `base` under {(s^{l_1}, ..., s^{l_d}) : s in Sigma}.
struct OrbitSpec {
    TorusPoint base;
    std::vector<unsigned long> exponents; // each >= 1, length == base.dim()
    SemigroupSpec spec;

    void validate() const;
};

struct RationalCandidate {
    std::vector<Rat> point;    // reduced rationals in [0,1)
    unsigned long evidence = 0; // samples within the coarsest tolerance
    Rat tolerance_reached;      // finest tolerance level with >= 1 supporting sample (0 when exact)
    bool coprime_to_sigma = false;

    Int denominator_lcm() const;
};

struct ClusterParams {
    Int max_den = 10000;
    unsigned evidence_threshold = 5;
    std::vector<Rat> tol_levels = {Rat(1, 100), Rat(1, 1000), Rat(1, 10000)};
    unsigned long sample_cap = 100000;
    bool coprime_only = true;
};

struct OrbitSample {
    Int s;
    TorusPoint point;
};

// (s^{l_1} x_1, ..., s^{l_d} x_d) for s in Sigma, s <= horizon, increasing s.
std::vector<OrbitSample> orbit_sample(const OrbitSpec& orbit, const Int& horizon,
                                      unsigned long cap = 0, unsigned workers = 1);

// Clusters orbit samples around rationals with bounded denominators. Exact for
// rational bases (candidates are orbit grid points of maximal recurrence).
// Ranked by (evidence desc, denominator lcm asc, lexicographic point asc).
// Throws NO_CANDIDATE when nothing qualifies.
std::vector<RationalCandidate> find_rational_limit(const OrbitSpec& orbit, const Int& horizon,
                                                   const ClusterParams& params, unsigned workers = 1);

struct SliceBudget {
    Int horizon = 100000;          // per-level multiplier horizon
    unsigned long anchor_cap = 32; // retained samples carried into the next level
    ClusterParams cluster;
};

// The coordinate-slicing induction: project to the last coordinate, locate a
// rational y = a/m with m coprime to Sigma, restrict to the congruence
// subsemigroup Sigma_m, keep samples whose last coordinate matches y, recurse.
// Throws NO_CANDIDATE (with the failing level in the message) on failure.
std::vector<Rat> slice_and_recurse(const OrbitSpec& orbit, const SliceBudget& budget,
                                   unsigned workers = 1);

// Shared clustering core: representatives are per-coordinate values (exact
// rationals or enclosure midpoints).
std::vector<RationalCandidate> cluster_candidates(const std::vector<std::vector<Rat>>& reps,
                                                  bool exact, const ClusterParams& params,
                                                  const std::vector<Int>& generators);

// ||a - b||_T for exact rationals.
Rat torus_dist_rat(const Rat& a, const Rat& b);

} // namespace bohr
