#include "core/semigroup.hpp"

#include "core/error.hpp"

#include <algorithm>

namespace bohr {

SemigroupSpec SemigroupSpec::make(std::vector<Int> gens, ExponentMode mode) {
    if (gens.empty()) throw Error(ErrorCode::InvalidInput, "semigroup needs at least one generator");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (gens.front() < 2) throw Error(ErrorCode::InvalidInput, "generators must be >= 2");
    SemigroupSpec s;
    s.generators = std::move(gens);
    s.mode = mode;
    return s;
}

SemigroupSpec SemigroupSpec::parse(const std::string& text) {
    std::vector<Int> gens;
    ExponentMode mode = ExponentMode::AllProducts;
    bool saw_gens = false;
    for (const auto& field : split(text, ';')) {
        std::string f = trim(field);
        if (f.empty()) continue;
        if (f.rfind("gens=", 0) == 0) {
            for (const auto& g : split(f.substr(5), ','))
                gens.push_back(parse_int_scaled(g));
            saw_gens = true;
        } else if (f.rfind("mode=", 0) == 0) {
            std::string m = trim(f.substr(5));
            if (m == "all")
                mode = ExponentMode::AllProducts;
            else if (m == "pos")
                mode = ExponentMode::PositiveExponents;
            else
                throw Error(ErrorCode::InvalidInput, "unknown exponent mode '" + m + "'");
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown semigroup field '" + f + "'");
        }
    }
    if (!saw_gens) throw Error(ErrorCode::InvalidInput, "semigroup spec needs gens=...");
    return make(std::move(gens), mode);
}

std::string SemigroupSpec::format() const {
    std::string out = "gens=";
    for (size_t i = 0; i < generators.size(); i++) {
        if (i) out += ",";
        out += generators[i].get_str();
    }
    out += ";mode=";
    out += (mode == ExponentMode::AllProducts ? "all" : "pos");
    return out;
}

SemigroupStream::SemigroupStream(SemigroupSpec spec, Int horizon)
    : spec_(std::move(spec)), horizon_(std::move(horizon)) {
    if (spec_.mode == ExponentMode::PositiveExponents) {
        for (const auto& g : spec_.generators) base_ *= g;
        if (base_ <= horizon_) frontier_.push(base_);
    } else {
        for (const auto& g : spec_.generators)
            if (g <= horizon_) frontier_.push(g);
    }
}

std::optional<Int> SemigroupStream::next() {
    while (!frontier_.empty()) {
        Int v = frontier_.top();
        frontier_.pop();
        if (v == last_) continue; // duplicate product
        for (const auto& g : spec_.generators) {
            Int child = v * g;
            if (child <= horizon_) frontier_.push(child);
        }
        last_ = v;
        return v;
    }
    return std::nullopt;
}

std::vector<Int> enumerate(const SemigroupSpec& spec, const Int& horizon) {
    std::vector<Int> out;
    SemigroupStream stream(spec, horizon);
    while (auto v = stream.next()) out.push_back(*v);
    return out;
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's variant; n must be odd composite, not a prime power handled upstream.
    for (unsigned long c = 1;; c++) {
        Int x = 2, y = 2, d = 1;
        Int ys = y;
        unsigned long power = 1, lam = 0;
        auto step = [&](Int v) { return fmod_pos(v * v + c, n); };
        while (d == 1) {
            if (lam == power) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = step(y);
            lam++;
            Int diff = x > y ? Int(x - y) : Int(y - x);
            if (diff == 0) break;
            d = gcd(diff, n);
        }
        if (d > 1 && d < n) return d;
        (void)ys;
    }
}

void factor_into(const Int& n, std::map<Int, unsigned long>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        out[n]++;
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

std::map<Int, unsigned long> factorize(const Int& n) {
    if (n < 1) throw Error(ErrorCode::InvalidInput, "factorize needs n >= 1");
    std::map<Int, unsigned long> out;
    Int rest = n;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            out[Int(p)]++;
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        }
    }
    {
        Int p = 41;
        while (p * p <= rest && p < 100000) {
            while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
                out[p]++;
                mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
            }
            p += 2;
        }
    }
    factor_into(rest, out);
    return out;
}

bool is_multiplicatively_independent(const Int& p, const Int& q) {
    if (p < 2 || q < 2) throw Error(ErrorCode::InvalidInput, "independence test needs integers >= 2");
    auto fp = factorize(p);
    auto fq = factorize(q);
    // p^a = q^b possible iff identical prime support with parallel exponent vectors.
    if (fp.size() != fq.size()) return true;
    auto itp = fp.begin();
    auto itq = fq.begin();
    // cross-multiplied ratio must match across all primes: e_i * f_0 == f_i * e_0
    unsigned long e0 = 0, f0 = 0;
    for (; itp != fp.end(); ++itp, ++itq) {
        if (itp->first != itq->first) return true;
        if (e0 == 0) {
            e0 = itp->second;
            f0 = itq->second;
            continue;
        }
        if (Int(itp->second) * f0 != Int(itq->second) * e0) return true;
    }
    return false;
}

bool is_nonlacunary(const SemigroupSpec& spec) {
    for (size_t i = 0; i < spec.generators.size(); i++)
        for (size_t j = i + 1; j < spec.generators.size(); j++)
            if (is_multiplicatively_independent(spec.generators[i], spec.generators[j])) return true;
    return false;
}

RatioGap ratio_gap(const SemigroupSpec& spec, const Int& from, const Int& horizon) {
    if (horizon <= from) throw Error(ErrorCode::InvalidInput, "ratio_gap needs horizon > from");
    SemigroupStream stream(spec, horizon);
    std::optional<Int> prev;
    std::optional<RatioGap> best;
    while (auto v = stream.next()) {
        if (prev && *v > from) {
            Rat delta = make_rat(*v - *prev, *prev);
            if (!best || delta > best->delta) best = RatioGap{delta, *prev, *v};
        }
        prev = *v;
    }
    if (!best)
        throw Error(ErrorCode::EmptyWindow, "no consecutive pair with " + from.get_str() + " < s <= " +
                                                horizon.get_str());
    return *best;
}

Int multiplicative_order(const Int& g, const Int& m) {
    if (m < 1) throw Error(ErrorCode::InvalidInput, "modulus must be >= 1");
    if (m == 1) return 1;
    Int gm = fmod_pos(g, m);
    if (gcd(gm, m) != 1)
        throw Error(ErrorCode::NotCoprime, "gcd(" + g.get_str() + ", " + m.get_str() + ") > 1");
    // phi(m) from the factorization of m, then strip primes from the exponent.
    Int phi = 1;
    for (const auto& [p, e] : factorize(m)) {
        phi *= p - 1;
        for (unsigned long i = 1; i < e; i++) phi *= p;
    }
    Int t = phi;
    for (const auto& [p, e] : factorize(phi)) {
        (void)e;
        while (fmod_pos(t, p) == 0 && powmod(gm, t / p, m) == 1) t /= p;
    }
    return t;
}

SemigroupSpec congruence_subsemigroup(const SemigroupSpec& spec, const Int& m) {
    if (m < 1) throw Error(ErrorCode::InvalidInput, "modulus must be >= 1");
    std::vector<Int> gens;
    for (const auto& g : spec.generators) {
        if (m > 1 && gcd(fmod_pos(g, m), m) != 1)
            throw Error(ErrorCode::NotCoprime, "generator " + g.get_str() + " is not coprime to " + m.get_str());
        Int ord = multiplicative_order(g, m);
        if (!ord.fits_ulong_p())
            throw Error(ErrorCode::InvalidInput, "multiplicative order too large: " + ord.get_str());
        gens.push_back(pow_int(g, ord.get_ui()));
    }
    return SemigroupSpec::make(std::move(gens), spec.mode);
}

} // namespace bohr
