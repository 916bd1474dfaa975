#include "core/numeric.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace bohr {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Internal: return "INTERNAL";
        case ErrorCode::BudgetExhausted: return "BUDGET_EXHAUSTED";
        case ErrorCode::InvalidInput: return "INVALID_INPUT";
        case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
        case ErrorCode::NotCoprime: return "NOT_COPRIME";
        case ErrorCode::EmptyWindow: return "EMPTY_WINDOW";
        case ErrorCode::NoCandidate: return "NO_CANDIDATE";
        case ErrorCode::NoRationalPoint: return "NO_RATIONAL_POINT_FOUND";
        case ErrorCode::ConfigMismatch: return "CONFIG_MISMATCH";
        case ErrorCode::ZeroComponent: return "ZERO_COMPONENT";
        case ErrorCode::Empty: return "EMPTY";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    }
    return "UNKNOWN";
}

Int iroot(const Int& n, unsigned long k, bool* exact) {
    Int r;
    int ex = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    if (exact) *exact = (ex != 0);
    return r;
}

Rat frac(const Rat& x) {
    Int f = fdiv(x.get_num(), x.get_den());
    Rat r = x - Rat(f);
    return r;
}

Int round_half_down(const Rat& x) {
    // floor(x + 1/2) would round half up; we want lift in (-1/2, 1/2],
    // i.e. round half toward -inf on the "0.5 exactly" boundary: ceil(x - 1/2).
    Rat shifted = x - Rat(1, 2);
    Int f = fdiv(shifted.get_num(), shifted.get_den());
    if (Rat(f) == shifted) return f; // x - 1/2 integral: lift = +1/2
    return f + 1;
}

Rat abs_rat(const Rat& x) {
    return x < 0 ? Rat(-x) : x;
}

namespace {

[[noreturn]] void bad_number(const std::string& text, const char* what) {
    throw Error(ErrorCode::InvalidInput, std::string("cannot parse ") + what + ": '" + text + "'");
}

} // namespace

Int parse_int_scaled(const std::string& raw) {
    Rat r = parse_rat(raw);
    if (r.get_den() != 1) bad_number(raw, "integer");
    return r.get_num();
}

Rat parse_rat(const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) bad_number(raw, "number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num, den;
        if (mpz_set_str(num.get_mpz_t(), text.substr(0, slash).c_str(), 10) != 0)
            bad_number(raw, "rational");
        if (mpz_set_str(den.get_mpz_t(), text.substr(slash + 1).c_str(), 10) != 0 || den == 0)
            bad_number(raw, "rational");
        return make_rat(num, den);
    }
    // [-]digits[.digits][e[+-]digits]
    bool neg = false;
    size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        neg = (text[i] == '-');
        i++;
    }
    std::string int_part, frac_part, exp_part;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) int_part += text[i++];
    if (i < text.size() && text[i] == '.') {
        i++;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) frac_part += text[i++];
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        i++;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_part += text[i++];
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) exp_part += text[i++];
        if (exp_part.empty() || exp_part == "+" || exp_part == "-") bad_number(raw, "number");
    }
    if (i != text.size() || (int_part.empty() && frac_part.empty())) bad_number(raw, "number");

    Int mantissa;
    std::string digits = int_part.empty() ? std::string("0") : int_part;
    digits += frac_part;
    if (mpz_set_str(mantissa.get_mpz_t(), digits.c_str(), 10) != 0) bad_number(raw, "number");
    long exp10 = exp_part.empty() ? 0 : std::stol(exp_part);
    exp10 -= static_cast<long>(frac_part.size());

    Rat value(mantissa);
    if (exp10 > 0)
        value *= Rat(pow_int(10, static_cast<unsigned long>(exp10)));
    else if (exp10 < 0)
        value /= Rat(pow_int(10, static_cast<unsigned long>(-exp10)));
    if (neg) value = -value;
    return value;
}

std::string format_rat(const Rat& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string format_decimal(const Rat& x, int digits) {
    bool neg = x < 0;
    Rat a = neg ? Rat(-x) : x;
    Int scale = pow_int(10, static_cast<unsigned long>(digits));
    Int scaled = fdiv(a.get_num() * scale, a.get_den());
    Int ip = fdiv(scaled, scale);
    Int fp = scaled - ip * scale;
    std::string f = fp.get_str();
    f.insert(0, static_cast<size_t>(digits) - f.size(), '0');
    std::string out = (neg ? "-" : "") + ip.get_str();
    if (digits > 0) out += "." + f;
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& text) {
    size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) b++;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) e--;
    return text.substr(b, e - b);
}

std::string fnv1a64_hex(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace bohr
