#pragma once

#include "core/numeric.hpp"

#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace bohr {

enum class ExponentMode { AllProducts, PositiveExponents };

// Finitely generated multiplicative sub-semigroup of the positive integers.
struct SemigroupSpec {
    std::vector<Int> generators; // sorted, deduplicated, each >= 2
    ExponentMode mode = ExponentMode::AllProducts;

    static SemigroupSpec make(std::vector<Int> gens, ExponentMode mode = ExponentMode::AllProducts);

    // "gens=2,3;mode=all" / "mode=pos"
    static SemigroupSpec parse(const std::string& text);
    std::string format() const;
};

// Ordered enumeration of semigroup elements <= horizon (strictly increasing,
// no duplicates). Single consumer; separate streams over one spec may run
// concurrently.
class SemigroupStream {
  public:
    SemigroupStream(SemigroupSpec spec, Int horizon);

    // next element, or nullopt when the horizon is exhausted
    std::optional<Int> next();
    const Int& last() const { return last_; }

  private:
    SemigroupSpec spec_;
    Int horizon_;
    Int base_ = 1; // product of generators in PositiveExponents mode
    bool emitted_base_ = false;
    std::priority_queue<Int, std::vector<Int>, std::greater<Int>> frontier_;
    Int last_ = 0;
};

// Exact factorization (trial division + Pollard rho); map prime -> exponent.
std::map<Int, unsigned long> factorize(const Int& n);

// True iff no a,b >= 1 with p^a == q^b.
bool is_multiplicatively_independent(const Int& p, const Int& q);

bool is_nonlacunary(const SemigroupSpec& spec);

// All elements <= horizon in increasing order.
std::vector<Int> enumerate(const SemigroupSpec& spec, const Int& horizon);

// max over consecutive elements with from < s_{n+1} <= horizon of
// s_{n+1}/s_n - 1 as an exact rational. Throws EMPTY_WINDOW when no
// consecutive pair lands in the window.
struct RatioGap {
    Rat delta;
    Int lower, upper; // the arg-max pair
};
RatioGap ratio_gap(const SemigroupSpec& spec, const Int& from, const Int& horizon);

// Least t >= 1 with g^t == 1 (mod m); throws NOT_COPRIME when gcd(g,m) > 1.
Int multiplicative_order(const Int& g, const Int& m);

// Spec with generators { g^{ord_m(g)} }; every element is == 1 (mod m).
SemigroupSpec congruence_subsemigroup(const SemigroupSpec& spec, const Int& m);

} // namespace bohr
