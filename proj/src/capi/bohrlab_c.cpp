#include "bohrlab.h"

#include "core/error.hpp"
#include "core/runner.hpp"
#include "core/semigroup.hpp"
#include "core/torus.hpp"

#include <cstring>
#include <new>
#include <string>

using namespace bohr;

struct bohr_torus_point {
    TorusPoint value;
};

struct bohr_semigroup {
    SemigroupSpec value;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** err, const std::string& msg) {
    if (err) *err = dup_string(msg);
}

template <typename Fn>
int guarded(char** err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        set_err(err, e.what());
        return static_cast<int>(e.code());
    } catch (const std::bad_alloc&) {
        set_err(err, "out of memory");
        return BOHR_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_err(err, e.what());
        return BOHR_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* bohr_version(void) {
    return "0.1.0";
}

const char* bohr_status_name(int status) {
    return error_code_name(static_cast<ErrorCode>(status));
}

void bohr_string_free(char* s) {
    std::free(s);
}

int bohr_torus_point_parse(const char* text, bohr_torus_point** out, char** err) {
    if (!text || !out) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        auto* pt = new bohr_torus_point{parse_point(text)};
        *out = pt;
        return BOHR_OK;
    });
}

void bohr_torus_point_free(bohr_torus_point* pt) {
    delete pt;
}

int bohr_torus_point_dim(const bohr_torus_point* pt) {
    return pt ? static_cast<int>(pt->value.dim()) : 0;
}

int bohr_torus_point_format(const bohr_torus_point* pt, char** out) {
    if (!pt || !out) return BOHR_ERR_INVALID_INPUT;
    return guarded(nullptr, [&] {
        *out = dup_string(format_point(pt->value));
        return BOHR_OK;
    });
}

int bohr_torus_point_scalar_mul(const bohr_torus_point* pt, const char* k_csv, bohr_torus_point** out,
                                char** err) {
    if (!pt || !k_csv || !out) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        std::vector<Int> k;
        for (const auto& part : split(k_csv, ',')) k.push_back(parse_int_scaled(part));
        *out = new bohr_torus_point{vec_mul(k, pt->value)};
        return BOHR_OK;
    });
}

int bohr_torus_point_dist(const bohr_torus_point* pt, char** lo, char** hi) {
    if (!pt || !lo || !hi) return BOHR_ERR_INVALID_INPUT;
    return guarded(nullptr, [&] {
        IntervalValue v = torus_dist(pt->value);
        *lo = dup_string(format_rat(v.lo));
        *hi = dup_string(format_rat(v.hi));
        return BOHR_OK;
    });
}

int bohr_semigroup_parse(const char* text, bohr_semigroup** out, char** err) {
    if (!text || !out) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        *out = new bohr_semigroup{SemigroupSpec::parse(text)};
        return BOHR_OK;
    });
}

void bohr_semigroup_free(bohr_semigroup* sg) {
    delete sg;
}

int bohr_semigroup_format(const bohr_semigroup* sg, char** out) {
    if (!sg || !out) return BOHR_ERR_INVALID_INPUT;
    return guarded(nullptr, [&] {
        *out = dup_string(sg->value.format());
        return BOHR_OK;
    });
}

int bohr_semigroup_is_nonlacunary(const bohr_semigroup* sg, int* out) {
    if (!sg || !out) return BOHR_ERR_INVALID_INPUT;
    return guarded(nullptr, [&] {
        *out = is_nonlacunary(sg->value) ? 1 : 0;
        return BOHR_OK;
    });
}

int bohr_semigroup_enumerate_csv(const bohr_semigroup* sg, const char* horizon, char** csv, char** err) {
    if (!sg || !horizon || !csv) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        Int N = parse_int_scaled(horizon);
        std::string out = "index,value,ratio_to_previous\n";
        std::optional<Int> prev;
        unsigned long idx = 0;
        for (const auto& v : enumerate(sg->value, N)) {
            idx++;
            out += std::to_string(idx) + "," + v.get_str() + ",";
            if (prev) out += format_rat(make_rat(v, *prev));
            out += "\n";
            prev = v;
        }
        *csv = dup_string(out);
        return BOHR_OK;
    });
}

int bohr_semigroup_congruence(const bohr_semigroup* sg, const char* modulus, bohr_semigroup** out,
                              char** err) {
    if (!sg || !modulus || !out) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        *out = new bohr_semigroup{congruence_subsemigroup(sg->value, parse_int_scaled(modulus))};
        return BOHR_OK;
    });
}

int bohr_multiplicative_order(const char* g, const char* modulus, char** order, char** err) {
    if (!g || !modulus || !order) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        Int ord = multiplicative_order(parse_int_scaled(g), parse_int_scaled(modulus));
        *order = dup_string(ord.get_str());
        return BOHR_OK;
    });
}

int bohr_run_json(const char* config_json, char** result_json, char** err) {
    if (!config_json || !result_json) {
        set_err(err, "null argument");
        return BOHR_ERR_INVALID_INPUT;
    }
    return guarded(err, [&] {
        nlohmann::json cfg = nlohmann::json::parse(config_json, nullptr, false);
        if (cfg.is_discarded()) throw Error(ErrorCode::InvalidInput, "config is not valid JSON");
        auto result = run_config(cfg);
        *result_json = dup_string(result.dump(2));
        std::string status = result.value("status", "ok");
        if (status == "ok") return BOHR_OK;
        if (status == "no_candidate") return static_cast<int>(BOHR_ERR_NO_CANDIDATE);
        if (status == "no_rational_point") return static_cast<int>(BOHR_ERR_NO_RATIONAL_POINT);
        return static_cast<int>(BOHR_ERR_BUDGET_EXHAUSTED); // budget_exhausted | interrupted
    });
}

} // extern "C"
