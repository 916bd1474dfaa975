#pragma once

#include "core/error.hpp"
#include "core/torus.hpp"

#include <string>
#include <vector>

namespace bohr {

// c_1 n + c_2 n^2 + ... + c_r n^r (constant term identically 0).
struct IntPolynomial {
    std::vector<Int> coeffs; // coeffs[j] multiplies n^(j+1)

    size_t degree() const { return coeffs.size(); }

    static IntPolynomial make(std::vector<Int> cs) {
        if (cs.empty()) throw Error(ErrorCode::InvalidInput, "polynomial needs degree >= 1");
        bool all_zero = true;
        for (const auto& c : cs)
            if (c != 0) all_zero = false;
        if (all_zero) throw Error(ErrorCode::InvalidInput, "polynomial coefficients are all zero");
        IntPolynomial p;
        p.coeffs = std::move(cs);
        return p;
    }

    // "1,1" -> n + n^2
    static IntPolynomial parse(const std::string& text) {
        std::vector<Int> cs;
        for (const auto& part : split(text, ','))
            cs.push_back(parse_int_scaled(part));
        return make(std::move(cs));
    }

    std::string format() const {
        std::string out;
        for (size_t i = 0; i < coeffs.size(); i++) {
            if (i) out += ",";
            out += coeffs[i].get_str();
        }
        return out;
    }

    Int eval(const Int& n) const {
        Int acc = 0;
        Int power = 1;
        for (const auto& c : coeffs) {
            power *= n;
            acc += c * power;
        }
        return acc;
    }
};

// c_1 n + ... + c_d n^d with torus-coordinate coefficients (constant term is
// dropped; density mod 1 is translation invariant).
struct RealPolynomial {
    std::vector<TorusCoord> coeffs; // coeffs[j] multiplies n^(j+1); may be exact 0

    size_t degree() const { return coeffs.size(); }

    bool has_irrational_coeff() const {
        for (const auto& c : coeffs)
            if (!c.is_rational()) return true;
        return false;
    }

    // "sqrt:2@1,sqrt:3@2" — coordinate grammar @ degree; gaps filled with 0.
    static RealPolynomial parse(const std::string& text) {
        std::vector<std::pair<unsigned long, TorusCoord>> parts;
        unsigned long max_deg = 0;
        for (const auto& piece : split(text, ',')) {
            std::string p = trim(piece);
            auto at = p.rfind('@');
            if (at == std::string::npos)
                throw Error(ErrorCode::InvalidInput, "polynomial term needs coeff@degree: '" + p + "'");
            Int deg = parse_int_scaled(p.substr(at + 1));
            if (deg < 1 || !deg.fits_ulong_p())
                throw Error(ErrorCode::InvalidInput, "polynomial degree must be >= 1: '" + p + "'");
            parts.emplace_back(deg.get_ui(), parse_coord(p.substr(0, at)));
            max_deg = std::max(max_deg, deg.get_ui());
        }
        if (parts.empty()) throw Error(ErrorCode::InvalidInput, "empty polynomial");
        RealPolynomial out;
        out.coeffs.assign(max_deg, TorusCoord(Rat(0)));
        for (auto& [deg, coord] : parts) out.coeffs[deg - 1] = std::move(coord);
        return out;
    }

    // P(n) mod 1 as a torus coordinate (exact when every coefficient is rational).
    TorusCoord eval(const Int& n) const {
        Rat exact_part(0);
        std::vector<AffineSource::Term> terms;
        Int power = 1;
        for (const auto& c : coeffs) {
            power *= n;
            if (c.is_rational()) {
                const Rat& v = c.rational();
                if (v != 0) exact_part += Rat(fmod_pos(power * v.get_num(), v.get_den()), v.get_den());
            } else {
                terms.push_back({Rat(power), c.source()});
            }
        }
        exact_part.canonicalize();
        if (terms.empty()) return TorusCoord(exact_part);
        return TorusCoord(std::make_shared<AffineSource>(std::move(terms), frac(exact_part)));
    }
};

} // namespace bohr
