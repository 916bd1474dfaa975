#include "core/homnorm.hpp"

#include "core/error.hpp"

#include <algorithm>

namespace bohr {

std::optional<Rat> exact_root(const Rat& q, unsigned long k) {
    if (q < 0) return std::nullopt;
    if (k == 1) return q;
    bool num_ok = false, den_ok = false;
    Int rn = iroot(q.get_num(), k, &num_ok);
    Int rd = iroot(q.get_den(), k, &den_ok);
    if (!num_ok || !den_ok) return std::nullopt;
    return make_rat(rn, rd);
}

RatInterval root_enclosure(const Rat& q, unsigned long k, unsigned prec) {
    if (q < 0) throw Error(ErrorCode::InvalidInput, "root of negative value");
    if (auto ex = exact_root(q, k)) return {*ex, *ex};
    // m = floor(q * 2^(k*prec)); r = floor(m^(1/k)) gives
    // r/2^prec <= q^(1/k) < (r+1)/2^prec.
    Int m = fdiv(q.get_num() << (k * static_cast<unsigned long>(prec)), q.get_den());
    Int r = iroot(m, k);
    Int den = pow2(prec);
    return {make_rat(r, den), make_rat(r + 1, den)};
}

HomNorm hom_norm(const std::vector<Rat>& v, unsigned prec) {
    HomNorm out{{Rat(0), Rat(0)}, true};
    for (size_t j = 0; j < v.size(); j++) {
        Rat a = abs_rat(v[j]);
        unsigned long k = static_cast<unsigned long>(j) + 1;
        if (auto ex = exact_root(a, k)) {
            out.bounds.lo += *ex;
            out.bounds.hi += *ex;
        } else {
            RatInterval r = root_enclosure(a, k, prec);
            out.bounds.lo += r.lo;
            out.bounds.hi += r.hi;
            out.exact = false;
        }
    }
    return out;
}

RatInterval hom_norm(const std::vector<RatInterval>& v, unsigned prec) {
    RatInterval out{Rat(0), Rat(0)};
    for (size_t j = 0; j < v.size(); j++) {
        unsigned long k = static_cast<unsigned long>(j) + 1;
        // |.| of the interval
        Rat alo, ahi;
        if (v[j].lo >= 0) {
            alo = v[j].lo;
            ahi = v[j].hi;
        } else if (v[j].hi <= 0) {
            alo = -v[j].hi;
            ahi = -v[j].lo;
        } else {
            alo = Rat(0);
            ahi = std::max(Rat(-v[j].lo), v[j].hi);
        }
        out.lo += root_enclosure(alo, k, prec).lo;
        out.hi += root_enclosure(ahi, k, prec).hi;
    }
    return out;
}

std::optional<Rat> best_rational(const Rat& x, const Int& max_den, const Rat& tol) {
    if (max_den < 1) throw Error(ErrorCode::InvalidInput, "max_den must be >= 1");
    // Continued-fraction walk; the best approximation with bounded denominator
    // is the last convergent within the bound or its best semiconvergent.
    Int p_prev = 1, q_prev = 0; // h_{-1}/k_{-1}
    Int p_cur = 0, q_cur = 1;   // value 0 = floor(x) since x in [0,1)
    Int num = x.get_num(), den = x.get_den();
    Int a = fdiv(num, den);
    Int rem = num - a * den;
    p_cur = a;
    Rat best = Rat(p_cur); // q = 1 always allowed
    while (rem != 0) {
        Int n2 = den, d2 = rem;
        a = fdiv(n2, d2);
        rem = n2 - a * d2;
        num = den;
        den = d2;
        Int p_next = a * p_cur + p_prev;
        Int q_next = a * q_cur + q_prev;
        if (q_next > max_den) {
            // Best semiconvergent with denominator within the bound.
            Int t = fdiv(max_den - q_prev, q_cur);
            if (t > 0) {
                Rat semi = make_rat(t * p_cur + p_prev, t * q_cur + q_prev);
                if (abs_rat(semi - x) < abs_rat(best - x)) best = semi;
            }
            break;
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        Rat conv = make_rat(p_cur, q_cur);
        if (abs_rat(conv - x) < abs_rat(best - x)) best = conv;
        if (rem == 0) break;
    }
    if (abs_rat(best - x) > tol) return std::nullopt;
    return frac(best); // 1/1 folds to 0 on the torus
}

std::optional<Rat> rational_reconstruct(const TorusCoord& c, const Int& max_den, const Rat& tol) {
    if (c.is_rational()) return best_rational(c.rational(), max_den, tol);
    if (tol <= 0)
        throw Error(ErrorCode::InvalidInput, "rational_reconstruct on a non-exact coordinate needs tol > 0");
    unsigned prec = 82;
    RatInterval iv = c.enclose(prec);
    while (iv.width() >= tol) {
        if (!c.is_refinable() || prec >= precision_cap())
            throw Error(ErrorCode::InvalidInput,
                        "coordinate interval width is not below the reconstruction tolerance");
        prec *= 2;
        iv = c.enclose(std::min(prec, precision_cap()));
    }
    return best_rational(frac(iv.mid()), max_den, tol);
}

} // namespace bohr
