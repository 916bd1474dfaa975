#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

using Int = mpz_class;
using Rat = mpq_class;

// --- small integer helpers -------------------------------------------------

inline size_t bit_length(const Int& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// 2^e as Int
inline Int pow2(unsigned long e) {
    Int r = 1;
    r <<= e;
    return r;
}

// floor(a / b) for b > 0
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// a mod b in [0, b) for b > 0
inline Int fmod_pos(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int powmod(const Int& base, const Int& e, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// floor(sqrt(n)), n >= 0
inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// floor(n^(1/k)), n >= 0, k >= 1; exact flag set when r^k == n
Int iroot(const Int& n, unsigned long k, bool* exact = nullptr);

// --- rational helpers -------------------------------------------------------

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// fractional part in [0, 1)
Rat frac(const Rat& x);

inline Int floor_rat(const Rat& x) {
    return fdiv(x.get_num(), x.get_den());
}

// nearest integer; half rounds down so the lift lands in (-1/2, 1/2]
Int round_half_down(const Rat& x);

Rat abs_rat(const Rat& x);

// --- parsing / formatting ---------------------------------------------------

// "123", "-4/5", "1e7", "2.5e3" (must be an integer), "10000000"
Int parse_int_scaled(const std::string& text);

// "a/b", "a", decimal "0.125", scientific "1e-9", "2.5e-3"
Rat parse_rat(const std::string& text);

// canonical "num/den" (den always printed)
std::string format_rat(const Rat& x);

// decimal expansion with the given number of fractional digits (round toward zero)
std::string format_decimal(const Rat& x, int digits);

std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

// FNV-1a 64-bit, hex-formatted; used for config hashes in checkpoints.
std::string fnv1a64_hex(const std::string& data);

} // namespace bohr
