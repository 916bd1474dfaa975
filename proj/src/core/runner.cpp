#include "core/runner.hpp"

#include "core/checkpoint.hpp"
#include "core/density.hpp"
#include "core/error.hpp"
#include "core/homnorm.hpp"
#include "core/recurrence.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace bohr {

using nlohmann::json;

namespace {

std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json interval_json(const IntervalValue& v) {
    return json{{"lo", format_rat(v.lo)}, {"hi", format_rat(v.hi)}};
}

json rat_interval_json(const RatInterval& v) {
    return json{{"lo", format_rat(v.lo)}, {"hi", format_rat(v.hi)}};
}

// --- config access helpers ---------------------------------------------------

[[noreturn]] void config_error(const std::string& msg) {
    throw Error(ErrorCode::InvalidInput, msg);
}

std::string need_string(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        config_error(std::string("config field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

std::string opt_string(const json& j, const char* key, const std::string& dflt) {
    if (!j.contains(key) || j[key].is_null()) return dflt;
    if (!j[key].is_string()) config_error(std::string("config field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

unsigned long opt_u64(const json& j, const char* key, unsigned long dflt) {
    if (!j.contains(key) || j[key].is_null()) return dflt;
    if (j[key].is_number_unsigned() || j[key].is_number_integer()) {
        auto v = j[key].get<long long>();
        if (v < 0) config_error(std::string("config field '") + key + "' must be nonnegative");
        return static_cast<unsigned long>(v);
    }
    if (j[key].is_string()) {
        Int v = parse_int_scaled(j[key].get<std::string>());
        if (v < 0 || !v.fits_ulong_p())
            config_error(std::string("config field '") + key + "' out of range");
        return v.get_ui();
    }
    config_error(std::string("config field '") + key + "' must be an integer");
}

bool opt_bool(const json& j, const char* key, bool dflt) {
    if (!j.contains(key) || j[key].is_null()) return dflt;
    if (!j[key].is_boolean()) config_error(std::string("config field '") + key + "' must be a boolean");
    return j[key].get<bool>();
}

std::vector<std::string> opt_string_list(const json& j, const char* key,
                                         const std::vector<std::string>& dflt) {
    if (!j.contains(key) || j[key].is_null()) return dflt;
    std::vector<std::string> out;
    if (j[key].is_string()) {
        for (const auto& p : split(j[key].get<std::string>(), ',')) out.push_back(trim(p));
        return out;
    }
    if (!j[key].is_array()) config_error(std::string("config field '") + key + "' must be a list");
    for (const auto& e : j[key])
        if (e.is_string())
            out.push_back(e.get<std::string>());
        else
            config_error(std::string("config field '") + key + "' entries must be strings");
    return out;
}

// --- normalization -------------------------------------------------------------

json normalize_cluster(const json& cfg) {
    json in = cfg.value("cluster", json::object());
    json out;
    out["max_den"] = opt_string(in, "max_den", "10000");
    out["threshold"] = opt_u64(in, "threshold", 5);
    out["levels"] = opt_string_list(in, "levels", {"1/100", "1/1000", "1/10000"});
    out["sample_cap"] = opt_u64(in, "sample_cap", 100000);
    return out;
}

ClusterParams cluster_from(const json& normalized) {
    ClusterParams p;
    p.max_den = parse_int_scaled(normalized["max_den"].get<std::string>());
    p.evidence_threshold = static_cast<unsigned>(normalized["threshold"].get<unsigned long>());
    p.tol_levels.clear();
    for (const auto& s : normalized["levels"]) p.tol_levels.push_back(parse_rat(s.get<std::string>()));
    if (p.tol_levels.empty()) config_error("cluster.levels must be nonempty");
    p.sample_cap = normalized["sample_cap"].get<unsigned long>();
    return p;
}

} // namespace

json normalize_config(const json& cfg) {
    if (!cfg.is_object()) config_error("config must be a JSON object");
    std::string command = need_string(cfg, "command");
    json out;
    out["command"] = command;
    out["workers"] = opt_u64(cfg, "workers", 1);
    out["out"] = opt_string(cfg, "out", "");
    out["checkpoint"] = opt_string(cfg, "checkpoint", "");
    out["csv"] = opt_string(cfg, "csv", "");

    if (command == "witness") {
        out["alpha"] = need_string(cfg, "alpha");
        out["poly"] = need_string(cfg, "poly");
        out["k_family"] = opt_string(cfg, "k_family", "factorials:12");
        out["semigroup"] = need_string(cfg, "semigroup");
        out["eps"] = opt_string(cfg, "eps", "1/100");
        out["s_horizon"] = opt_string(cfg, "s_horizon", "10000000");
        out["strategy"] = opt_string(cfg, "strategy", "structured");
        out["fallback"] = opt_bool(cfg, "fallback", true);
        out["cluster"] = normalize_cluster(cfg);
        out["precision_cap"] = opt_u64(cfg, "precision_cap", 4096);
        out["shard_size"] = opt_u64(cfg, "shard_size", 64);
        out["max_shards"] = opt_u64(cfg, "max_shards", 0);
        out["wall_clock_ms"] = opt_u64(cfg, "wall_clock_ms", 0);
        Rat eps = parse_rat(out["eps"].get<std::string>());
        if (eps < 0 || eps >= Rat(1, 2)) config_error("eps must lie in [0, 1/2)");
        if (out["strategy"] != "structured" && out["strategy"] != "brute")
            config_error("strategy must be 'structured' or 'brute'");
    } else if (command == "density") {
        out["poly"] = need_string(cfg, "poly");
        bool naturals = opt_bool(cfg, "naturals", false);
        std::string sg = opt_string(cfg, "semigroup", "");
        if (sg == "naturals" || sg == "nat") {
            naturals = true;
            sg = "";
        }
        if (naturals == sg.empty() && !naturals)
            config_error("density needs either a semigroup or naturals=true");
        out["naturals"] = naturals;
        out["semigroup"] = sg;
        out["horizons"] = opt_string_list(cfg, "horizons", {"1000", "10000"});
        out["weyl"] = opt_u64(cfg, "weyl", 8);
    } else if (command == "rational-points") {
        out["base"] = need_string(cfg, "base");
        out["exps"] = opt_string(cfg, "exps", "1");
        out["semigroup"] = need_string(cfg, "semigroup");
        out["horizon"] = opt_string(cfg, "horizon", "1000000");
        out["cluster"] = normalize_cluster(cfg);
        out["coprime_only"] = opt_bool(cfg, "coprime_only", true);
        out["slice"] = opt_bool(cfg, "slice", false);
        out["anchor_cap"] = opt_u64(cfg, "anchor_cap", 32);
    } else if (command == "gaps") {
        out["semigroup"] = need_string(cfg, "semigroup");
        out["from"] = opt_string(cfg, "from", "1");
        out["horizon"] = need_string(cfg, "horizon");
    } else if (command == "residues") {
        out["semigroup"] = need_string(cfg, "semigroup");
        out["modulus"] = need_string(cfg, "modulus");
        out["exp_horizon"] = opt_u64(cfg, "exp_horizon", 20);
    } else if (command == "escape") {
        out["x"] = need_string(cfg, "x");
        out["semigroup"] = need_string(cfg, "semigroup");
        out["horizon"] = opt_string(cfg, "horizon", "10000");
        out["precision"] = opt_u64(cfg, "precision", 96);
    } else {
        config_error("unknown command '" + command + "'");
    }
    return out;
}

std::string config_hash(const json& normalized) {
    json h = normalized;
    for (const char* k : {"out", "csv", "checkpoint", "workers", "max_shards"}) h.erase(k);
    return fnv1a64_hex(h.dump());
}

int exit_code_for_status(const std::string& status) {
    if (status == "ok") return 0;
    return 2;
}

namespace {

// --- witness -----------------------------------------------------------------------

json best_pair_json(const BestPair& b) {
    return json{{"k", b.k.get_str()},
                {"s", b.s.get_str()},
                {"r_value", b.r_value.get_str()},
                {"max_dist_hi", format_rat(b.max_dist_hi)},
                {"precision_bits", b.precision_bits}};
}

std::optional<BestPair> best_pair_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    BestPair b;
    b.k = Int(j["k"].get<std::string>());
    b.s = Int(j["s"].get<std::string>());
    b.r_value = Int(j["r_value"].get<std::string>());
    b.max_dist_hi = parse_rat(j["max_dist_hi"].get<std::string>());
    b.precision_bits = j["precision_bits"].get<unsigned>();
    return b;
}

json frontier_json(const SearchFrontier& f) {
    return json{{"phase", f.phase}, {"pairs_done", f.pairs_done}, {"s_done", f.s_done}};
}

SearchFrontier frontier_from(const json& j) {
    SearchFrontier f;
    f.phase = j.value("phase", "pairs");
    f.pairs_done = j.value("pairs_done", 0ul);
    f.s_done = j.value("s_done", 0ul);
    return f;
}

json run_witness(const json& cfg) {
    TorusPoint alpha = parse_point(cfg["alpha"].get<std::string>());
    IntPolynomial P = IntPolynomial::parse(cfg["poly"].get<std::string>());
    KFamily K = KFamily::parse(cfg["k_family"].get<std::string>());
    SemigroupSpec spec = SemigroupSpec::parse(cfg["semigroup"].get<std::string>());
    Rat eps = parse_rat(cfg["eps"].get<std::string>());
    SearchBudget budget;
    budget.s_horizon = parse_int_scaled(cfg["s_horizon"].get<std::string>());
    budget.precision_cap = static_cast<unsigned>(cfg["precision_cap"].get<unsigned long>());
    budget.shard_size = cfg["shard_size"].get<unsigned long>();
    budget.max_shards = cfg["max_shards"].get<unsigned long>();
    budget.wall_clock_ms = cfg["wall_clock_ms"].get<unsigned long>();
    budget.workers = static_cast<unsigned>(cfg["workers"].get<unsigned long>());
    ClusterParams cluster = cluster_from(cfg["cluster"]);
    bool structured = cfg["strategy"] == "structured";
    bool fallback = cfg["fallback"].get<bool>();

    std::string cp_path = cfg["checkpoint"].get<std::string>();
    std::string hash = config_hash(cfg);
    ResumeState resume;
    bool has_resume = false;
    if (!cp_path.empty()) {
        if (auto cp = Checkpoint::load(cp_path)) {
            if (cp->config_hash != hash)
                throw Error(ErrorCode::ConfigMismatch,
                            "checkpoint was written by a different config (hash " + cp->config_hash +
                                " != " + hash + ")");
            resume.frontier = frontier_from(cp->state.value("frontier", json::object()));
            resume.best = best_pair_from(cp->state.value("best", json()));
            has_resume = true;
        }
    }

    auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                        started)
                      .count();
        return static_cast<unsigned long>(ms);
    };

    ShardHook hook;
    if (!cp_path.empty()) {
        hook = [&](const SearchFrontier& f, const std::optional<BestPair>& best) {
            Checkpoint cp;
            cp.config_hash = hash;
            cp.command = "witness";
            cp.elapsed_ms = elapsed_ms();
            cp.state["frontier"] = frontier_json(f);
            cp.state["best"] = best ? best_pair_json(*best) : json();
            cp.save(cp_path);
            return true;
        };
    }

    SearchOutcome outcome;
    if (structured)
        outcome = structured_search(alpha, P, K, spec, eps, budget, cluster, fallback, hook,
                                    has_resume ? &resume : nullptr);
    else
        outcome = brute_search(alpha, P, K, spec, eps, budget, hook, has_resume ? &resume : nullptr);

    json res;
    res["status"] = outcome.status;
    res["strategy"] = outcome.strategy;
    res["witness"] = json();
    if (outcome.witness) {
        const Witness& w = *outcome.witness;
        json dist = json::array();
        for (const auto& d : w.distances) dist.push_back(interval_json(d));
        res["witness"] = json{{"k", w.k.get_str()},
                              {"s", w.s.get_str()},
                              {"ks", w.ks.get_str()},
                              {"r_value", w.r_value.get_str()},
                              {"distances", dist},
                              {"certainty", certainty_name(w.certainty)},
                              {"precision_bits", w.precision_bits}};
    }
    res["best_so_far"] = outcome.best ? best_pair_json(*outcome.best) : json();
    res["budget_spent"] =
        json{{"pairs_scanned", outcome.pairs_scanned}, {"frontier", frontier_json(outcome.frontier)}};

    if (!cp_path.empty()) {
        if (outcome.status == "interrupted") {
            Checkpoint cp;
            cp.config_hash = hash;
            cp.command = "witness";
            cp.elapsed_ms = elapsed_ms();
            cp.state["frontier"] = frontier_json(outcome.frontier);
            cp.state["best"] = outcome.best ? best_pair_json(*outcome.best) : json();
            cp.save(cp_path);
            res["checkpoint"] = cp_path;
        } else {
            Checkpoint::remove(cp_path);
        }
    }
    return res;
}

// --- density --------------------------------------------------------------------------

json density_report_json(const DensityReport& r) {
    json weyl = json::array();
    for (const auto& w : r.weyl_sums) weyl.push_back(json{{"h", w.harmonic}, {"magnitude", w.magnitude}});
    return json{{"horizon", r.horizon.get_str()},
                {"samples", r.sample_count},
                {"max_gap", interval_json(r.max_gap)},
                {"star_discrepancy", interval_json(r.star_discrepancy)},
                {"weyl", weyl}};
}

json run_density(const json& cfg) {
    RealPolynomial P = RealPolynomial::parse(cfg["poly"].get<std::string>());
    SampleDomain domain = cfg["naturals"].get<bool>()
                              ? SampleDomain::naturals()
                              : SampleDomain::semigroup(SemigroupSpec::parse(cfg["semigroup"].get<std::string>()));
    std::vector<Int> horizons;
    for (const auto& h : cfg["horizons"]) horizons.push_back(parse_int_scaled(h.get<std::string>()));
    unsigned weyl = static_cast<unsigned>(cfg["weyl"].get<unsigned long>());
    unsigned workers = static_cast<unsigned>(cfg["workers"].get<unsigned long>());

    std::string cp_path = cfg["checkpoint"].get<std::string>();
    std::string hash = config_hash(cfg);
    size_t done = 0;
    json reports = json::array();
    if (!cp_path.empty()) {
        if (auto cp = Checkpoint::load(cp_path)) {
            if (cp->config_hash != hash)
                throw Error(ErrorCode::ConfigMismatch, "checkpoint belongs to a different density config");
            done = cp->state.value("horizons_done", 0ul);
            reports = cp->state.value("reports", json::array());
        }
    }

    // Horizons are recomputed from scratch per increment; sample generation is
    // deterministic, so per-horizon reports are identical across resumes.
    for (size_t i = done; i < horizons.size(); i++) {
        std::vector<Int> upto(horizons.begin(), horizons.begin() + i + 1);
        auto rs = density_scan(P, domain, upto, weyl, workers);
        reports.push_back(density_report_json(rs.back()));
        if (!cp_path.empty()) {
            Checkpoint cp;
            cp.config_hash = hash;
            cp.command = "density";
            cp.state["horizons_done"] = i + 1;
            cp.state["reports"] = reports;
            cp.save(cp_path);
        }
    }
    if (!cp_path.empty()) Checkpoint::remove(cp_path);

    json res;
    res["status"] = "ok";
    res["reports"] = reports;

    std::string csv_path = cfg["csv"].get<std::string>();
    if (!csv_path.empty()) {
        auto samples = density_samples(P, domain, horizons.back(),
                                       static_cast<unsigned>(cfg["workers"].get<unsigned long>()));
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidInput, "cannot write CSV '" + csv_path + "'");
        out << "s,mid,radius\n";
        for (const auto& s : samples)
            out << s.s.get_str() << "," << format_decimal(s.mid, 30) << "," << format_decimal(s.radius, 30)
                << "\n";
        res["csv"] = csv_path;
    }
    return res;
}

// --- rational-points -----------------------------------------------------------------------

json candidate_json(const RationalCandidate& c) {
    json pt = json::array();
    for (const auto& v : c.point) pt.push_back(format_rat(v));
    return json{{"point", pt},
                {"evidence", c.evidence},
                {"tolerance_reached", format_rat(c.tolerance_reached)},
                {"coprime_to_sigma", c.coprime_to_sigma},
                {"denominator_lcm", c.denominator_lcm().get_str()}};
}

json run_rational_points(const json& cfg) {
    OrbitSpec orbit;
    orbit.base = parse_point(cfg["base"].get<std::string>());
    orbit.spec = SemigroupSpec::parse(cfg["semigroup"].get<std::string>());
    for (const auto& e : split(cfg["exps"].get<std::string>(), ',')) {
        Int v = parse_int_scaled(e);
        if (v < 1 || !v.fits_ulong_p()) config_error("orbit exponents must be >= 1");
        orbit.exponents.push_back(v.get_ui());
    }
    Int horizon = parse_int_scaled(cfg["horizon"].get<std::string>());
    ClusterParams cluster = cluster_from(cfg["cluster"]);
    cluster.coprime_only = cfg["coprime_only"].get<bool>();
    unsigned workers = static_cast<unsigned>(cfg["workers"].get<unsigned long>());

    json res;
    try {
        if (cfg["slice"].get<bool>()) {
            SliceBudget budget;
            budget.horizon = horizon;
            budget.anchor_cap = cfg["anchor_cap"].get<unsigned long>();
            budget.cluster = cluster;
            auto pt = slice_and_recurse(orbit, budget, workers);
            json arr = json::array();
            for (const auto& v : pt) arr.push_back(format_rat(v));
            res["point"] = arr;
            res["status"] = "ok";
        } else {
            auto cands = find_rational_limit(orbit, horizon, cluster, workers);
            json arr = json::array();
            for (const auto& c : cands) arr.push_back(candidate_json(c));
            res["candidates"] = arr;
            res["status"] = "ok";
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCandidate) throw;
        res["status"] = "no_candidate";
        res["detail"] = e.what();
    }
    return res;
}

// --- gaps / residues / escape ------------------------------------------------------------------

json run_gaps(const json& cfg) {
    SemigroupSpec spec = SemigroupSpec::parse(cfg["semigroup"].get<std::string>());
    Int from = parse_int_scaled(cfg["from"].get<std::string>());
    Int horizon = parse_int_scaled(cfg["horizon"].get<std::string>());
    json res;
    RatioGap g = ratio_gap(spec, from, horizon);
    res["status"] = "ok";
    res["delta"] = format_rat(g.delta);
    res["pair"] = json::array({g.lower.get_str(), g.upper.get_str()});

    std::string csv_path = cfg["csv"].get<std::string>();
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidInput, "cannot write CSV '" + csv_path + "'");
        out << "index,value,ratio_to_previous\n";
        std::optional<Int> prev;
        unsigned long idx = 0;
        for (const auto& v : enumerate(spec, horizon)) {
            idx++;
            out << idx << "," << v.get_str() << ",";
            if (prev) out << format_rat(make_rat(v, *prev));
            out << "\n";
            prev = v;
        }
        res["csv"] = csv_path;
    }
    return res;
}

json run_residues(const json& cfg) {
    SemigroupSpec spec = SemigroupSpec::parse(cfg["semigroup"].get<std::string>());
    Int modulus = parse_int_scaled(cfg["modulus"].get<std::string>());
    unsigned horizon = static_cast<unsigned>(cfg["exp_horizon"].get<unsigned long>());
    auto residues = check_residues(spec, modulus, horizon);
    json arr = json::array();
    for (const auto& r : residues) arr.push_back(r.get_str());
    return json{{"status", "ok"}, {"residues", arr}};
}

json run_escape(const json& cfg) {
    TorusPoint x = parse_point(cfg["x"].get<std::string>());
    SemigroupSpec spec = SemigroupSpec::parse(cfg["semigroup"].get<std::string>());
    Int horizon = parse_int_scaled(cfg["horizon"].get<std::string>());
    unsigned prec = static_cast<unsigned>(cfg["precision"].get<unsigned long>());
    EscapeResult r = escape_infimum(x, spec, horizon, prec);
    return json{{"status", "ok"}, {"value", interval_json(r.value)}, {"argmin", r.argmin.get_str()}};
}

} // namespace

json run_config(const json& raw) {
    json cfg = normalize_config(raw);
    std::string command = cfg["command"].get<std::string>();
    json payload;
    if (command == "witness")
        payload = run_witness(cfg);
    else if (command == "density")
        payload = run_density(cfg);
    else if (command == "rational-points")
        payload = run_rational_points(cfg);
    else if (command == "gaps")
        payload = run_gaps(cfg);
    else if (command == "residues")
        payload = run_residues(cfg);
    else
        payload = run_escape(cfg);

    json res;
    res["command"] = command;
    res["config"] = cfg;
    res["config_hash"] = config_hash(cfg);
    res["generated_at"] = now_utc(); // the one nondeterministic field
    for (auto& [k, v] : payload.items()) res[k] = v;

    std::string out_path = cfg["out"].get<std::string>();
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidInput, "cannot write result to '" + out_path + "'");
        out << res.dump(2) << "\n";
    }
    return res;
}

std::string run_config_json(const std::string& config_text) {
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("config is not valid JSON: ") + e.what());
    }
    return run_config(cfg).dump(2);
}

} // namespace bohr
