#ifndef FSDIM_REPORT_HPP
#define FSDIM_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsdim/apriori.hpp"
#include "fsdim/autocomplexity.hpp"
#include "fsdim/automaton_io.hpp"
#include "fsdim/bitseq.hpp"
#include "fsdim/blockstat.hpp"
#include "fsdim/gambler.hpp"

namespace fsdim {

inline constexpr const char* kVersion = "fsdim 0.1.0";

struct RunConfig {
    SequenceSpec alpha;
    std::optional<SequenceSpec> beta; // absent when beta is a shift of alpha
    bool beta_is_shift = false;
    uint64_t shift_c = 0;
    uint8_t shift_pad = 0;
    uint64_t n = 0;            // prefix length in bits
    std::vector<size_t> k_list;
    uint64_t n_max = 0;        // cap on block count; 0 derives from n
    uint64_t burn_in = 0;      // in blocks; 0 picks the default
    BlockMode mode = BlockMode::aligned;
    std::set<std::string> characterizations{"entropy", "auto", "apriori",
                                            "gambler"};
    std::vector<std::string> gambler_spec_paths;
    std::string output;
    std::string format = "json";
    uint64_t exact_limit = kDefaultExactLimit;

    bool wants(const std::string& name) const {
        return characterizations.count(name) > 0;
    }

    void validate() const {
        alpha.validate();
        if (beta_is_shift == beta.has_value())
            throw std::invalid_argument(
                "config: exactly one of beta / beta-shift must be given");
        if (beta) beta->validate();
        if (n == 0) throw std::invalid_argument("config: n must be positive");
        if (k_list.empty())
            throw std::invalid_argument("config: k list must be non-empty");
        for (size_t k : k_list)
            if (k < 1 || k > 16)
                throw std::invalid_argument("config: block sizes must be in [1,16]");
        if (format != "json" && format != "csv")
            throw std::invalid_argument("config: format must be json or csv");
        for (const auto& c : characterizations)
            if (c != "entropy" && c != "auto" && c != "apriori" && c != "gambler")
                throw std::invalid_argument("config: unknown characterization " + c);
        if (characterizations.empty())
            throw std::invalid_argument("config: no characterizations requested");
    }
};

// Flat key=value config file, same keys as the CLI flags.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    cfg.characterizations.clear();
    bool have_alpha = false, have_chars = false;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        size_t last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "alpha") { cfg.alpha = SequenceSpec::parse(value); have_alpha = true; }
        else if (key == "beta") cfg.beta = SequenceSpec::parse(value);
        else if (key == "beta-shift") { cfg.beta_is_shift = true; cfg.shift_c = std::stoull(value); }
        else if (key == "beta-shift-pad") cfg.shift_pad = static_cast<uint8_t>(std::stoul(value) & 1);
        else if (key == "n") cfg.n = std::stoull(value);
        else if (key == "k") {
            std::istringstream ks(value);
            std::string tok;
            while (std::getline(ks, tok, ','))
                cfg.k_list.push_back(std::stoul(tok));
        }
        else if (key == "n-max") cfg.n_max = std::stoull(value);
        else if (key == "burn-in") cfg.burn_in = std::stoull(value);
        else if (key == "mode") {
            if (value == "aligned") cfg.mode = BlockMode::aligned;
            else if (value == "sliding") cfg.mode = BlockMode::sliding;
            else throw std::runtime_error("config: mode must be aligned or sliding");
        }
        else if (key == "chars") {
            std::istringstream cs(value);
            std::string tok;
            while (std::getline(cs, tok, ',')) cfg.characterizations.insert(tok);
            have_chars = true;
        }
        else if (key == "gambler-spec") cfg.gambler_spec_paths.push_back(value);
        else if (key == "out") cfg.output = value;
        else if (key == "format") cfg.format = value;
        else if (key == "exact-limit") cfg.exact_limit = std::stoull(value);
        else throw std::runtime_error("config line " + std::to_string(line_no) +
                                      ": unknown key " + key);
    }
    if (!have_chars)
        cfg.characterizations = {"entropy", "auto", "apriori", "gambler"};
    if (!have_alpha) throw std::runtime_error("config: alpha is required");
    return cfg;
}

struct ReportPerK {
    double inf = 0.0;
    double sup = 0.0;
    uint64_t n_max = 0;   // extent of the N sweep (blocks or bits)
    uint64_t burn_in = 0; // start of the N sweep
};

struct ReportEstimate {
    std::map<size_t, ReportPerK> per_k;
    double dim_est = 1.0;
    double Dim_est = 1.0;

    void finalize() {
        dim_est = 1.0;
        Dim_est = 1.0;
        for (const auto& [k, e] : per_k) {
            dim_est = std::min(dim_est, e.inf);
            Dim_est = std::min(Dim_est, e.sup);
        }
    }
};

struct GamblerSideEstimate {
    double limsup_est = 0.0;
    double liminf_est = 0.0;
    double dim_value = 0.0; // 1 - limsup_est, clamped into [0,1]
    double Dim_value = 0.0; // 1 - liminf_est, clamped into [0,1]
    bool clamped = false;
};

struct CrossCheck {
    std::string name;
    size_t k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = false; // lhs <= rhs + slack
};

struct DimensionReport {
    RunConfig config;
    std::optional<ReportEstimate> entropy;
    std::optional<ReportEstimate> auto_est;
    std::optional<ReportEstimate> apriori;
    std::map<size_t, EntropyProfile> entropy_profiles;
    std::map<size_t, GamblerSideEstimate> gambler_bridged;
    struct UserGambler {
        std::string path;
        GamblerSideEstimate est;
    };
    std::vector<UserGambler> gambler_user;
    std::vector<CrossCheck> cross_checks;
    std::string version = kVersion;
};

namespace detail {

inline uint64_t auto_burn_in(uint64_t n_max) {
    if (n_max <= 128) return n_max / 2;
    return default_burn_in(n_max);
}

inline GamblerSideEstimate clamp_gambler(double dim_rate, double Dim_rate) {
    GamblerSideEstimate g;
    g.limsup_est = 1.0 - dim_rate;
    g.liminf_est = 1.0 - Dim_rate;
    g.dim_value = dim_rate;
    g.Dim_value = Dim_rate;
    if (g.dim_value < 0.0 || g.dim_value > 1.0 || g.Dim_value < 0.0 ||
        g.Dim_value > 1.0 || std::isinf(g.dim_value) || std::isinf(g.Dim_value)) {
        g.clamped = true;
        g.dim_value = std::clamp(g.dim_value, 0.0, 1.0);
        g.Dim_value = std::clamp(g.Dim_value, 0.0, 1.0);
    }
    return g;
}

} // namespace detail

// Finite-horizon inequality chain between the characterizations present
// in the report, per block size.  The aligned-mode checks (a)/(b) compare
// the code side with the entropy side through the exact Shannon bound and
// the Huffman H+1 guarantee; (c) is the relaxed-code comparison and (d)
// the martingale/measure bridge identity.
inline std::vector<CrossCheck> cross_check(const DimensionReport& rep) {
    std::vector<CrossCheck> out;
    const double eps = 1e-9;
    std::set<size_t> ks;
    if (rep.entropy)
        for (const auto& [k, e] : rep.entropy->per_k) ks.insert(k);
    if (rep.auto_est)
        for (const auto& [k, e] : rep.auto_est->per_k) ks.insert(k);
    if (rep.apriori)
        for (const auto& [k, e] : rep.apriori->per_k) ks.insert(k);
    for (size_t k : ks) {
        bool has_e = rep.entropy && rep.entropy->per_k.count(k);
        bool has_a = rep.auto_est && rep.auto_est->per_k.count(k);
        bool has_p = rep.apriori && rep.apriori->per_k.count(k);
        double kk = static_cast<double>(k);
        if (has_e && has_a && rep.config.mode == BlockMode::aligned) {
            double e_inf = rep.entropy->per_k.at(k).inf;
            double a_inf = rep.auto_est->per_k.at(k).inf;
            CrossCheck a{"entropy_le_auto", k, e_inf, a_inf,
                         std::log2(kk) / kk + eps, false};
            a.holds = a.lhs <= a.rhs + a.slack;
            out.push_back(a);
            CrossCheck b{"auto_le_entropy_plus_1k", k, a_inf, e_inf,
                         1.0 / kk + eps, false};
            b.holds = b.lhs <= b.rhs + b.slack;
            out.push_back(b);
        }
        if (has_a && has_p) {
            CrossCheck c{"apriori_le_auto_plus_1k", k,
                         rep.apriori->per_k.at(k).inf,
                         rep.auto_est->per_k.at(k).inf, 1.0 / kk + eps, false};
            c.holds = c.lhs <= c.rhs + c.slack;
            out.push_back(c);
        }
        if (has_p && rep.gambler_bridged.count(k)) {
            double g = 1.0 - rep.gambler_bridged.at(k).limsup_est;
            double p = rep.apriori->per_k.at(k).inf;
            CrossCheck d{"gambler_eq_apriori", k, std::abs(g - p), 0.0, eps,
                         false};
            d.holds = d.lhs <= d.rhs + d.slack;
            out.push_back(d);
        }
    }
    return out;
}

inline DimensionReport estimate_all(const RunConfig& cfg) {
    cfg.validate();
    DimensionReport rep;
    rep.config = cfg;

    BitString alpha = generate(cfg.alpha, cfg.n);
    BitString beta = cfg.beta_is_shift
                         ? shift_oracle(alpha, cfg.shift_c, cfg.shift_pad)
                         : generate(*cfg.beta, cfg.n);

    bool need_apriori_sweep = cfg.wants("apriori") || cfg.wants("gambler");
    if (cfg.wants("entropy")) rep.entropy.emplace();
    if (cfg.wants("auto")) rep.auto_est.emplace();
    if (cfg.wants("apriori")) rep.apriori.emplace();

    for (size_t k : cfg.k_list) {
        if (cfg.n < k)
            throw std::invalid_argument("config: n smaller than block size");
        uint64_t blocks_avail =
            cfg.mode == BlockMode::aligned ? cfg.n / k : cfg.n - k + 1;
        uint64_t n_blocks =
            cfg.n_max ? std::min(cfg.n_max, blocks_avail) : blocks_avail;
        if (n_blocks < 1)
            throw std::invalid_argument("config: no complete block at k=" +
                                        std::to_string(k));
        uint64_t burn = cfg.burn_in ? cfg.burn_in : detail::auto_burn_in(n_blocks);
        if (burn >= n_blocks)
            throw std::invalid_argument("config: burn_in must be below N_max");

        if (rep.entropy) {
            ReportPerK pk;
            pk.n_max = n_blocks;
            pk.burn_in = burn;
            pk.inf = std::numeric_limits<double>::infinity();
            pk.sup = -std::numeric_limits<double>::infinity();
            std::vector<uint64_t> schedule;
            for (uint64_t p = 1; p < n_blocks; p *= 2)
                if (p >= std::max<uint64_t>(burn, 1)) schedule.push_back(p);
            schedule.push_back(n_blocks);
            size_t next = 0;
            EntropyProfile prof;
            prof.k = k;
            prof.mode = cfg.mode;
            cond_entropy_sweep(alpha, beta, k, n_blocks, cfg.mode,
                               [&](uint64_t nn, double h) {
                                   if (nn >= std::max<uint64_t>(burn, 1)) {
                                       double v = h / static_cast<double>(k);
                                       pk.inf = std::min(pk.inf, v);
                                       pk.sup = std::max(pk.sup, v);
                                   }
                                   if (next < schedule.size() &&
                                       nn == schedule[next]) {
                                       prof.points.emplace_back(nn, h);
                                       ++next;
                                   }
                               });
            rep.entropy->per_k[k] = pk;
            rep.entropy_profiles[k] = std::move(prof);
        }

        // block decoding and block processes are aligned constructions;
        // they keep aligned block counts even for sliding entropy reports
        uint64_t aligned_blocks =
            cfg.n_max ? std::min(cfg.n_max, cfg.n / k) : cfg.n / k;
        uint64_t aligned_burn =
            cfg.burn_in ? cfg.burn_in : detail::auto_burn_in(aligned_blocks);
        if (aligned_blocks < 1 || aligned_burn >= aligned_blocks)
            throw std::invalid_argument("config: infeasible N range at k=" +
                                        std::to_string(k));

        if (rep.auto_est) {
            DimEstimate est =
                dim_estimate_auto(alpha, beta, k, aligned_blocks, aligned_burn);
            ReportPerK pk{est.per_k.at(k).inf, est.per_k.at(k).sup,
                          aligned_blocks, aligned_burn};
            rep.auto_est->per_k[k] = pk;
        }

        if (need_apriori_sweep) {
            uint64_t n_bits = std::min<uint64_t>(aligned_blocks * k, cfg.n - k);
            uint64_t burn_bits = std::min<uint64_t>(aligned_burn * k, n_bits - 1);
            AprioriEstimateDetail detail_est = dim_estimate_apriori_detail(
                alpha, beta, k, n_bits, burn_bits);
            if (rep.apriori) {
                ReportPerK pk{detail_est.sweep.ka_rate.inf,
                              detail_est.sweep.ka_rate.sup, n_bits, burn_bits};
                rep.apriori->per_k[k] = pk;
            }
            if (cfg.wants("gambler")) {
                rep.gambler_bridged[k] = detail::clamp_gambler(
                    detail_est.sweep.ka_rate.inf,
                    detail_est.sweep.best_start_rate_sup);
            }
        }
    }
    if (rep.entropy) rep.entropy->finalize();
    if (rep.auto_est) rep.auto_est->finalize();
    if (rep.apriori) rep.apriori->finalize();

    if (cfg.wants("gambler")) {
        for (const auto& path : cfg.gambler_spec_paths) {
            ParsedAutomaton parsed = load_automaton(path);
            if (parsed.type != AutomatonType::gambler || !parsed.gambler)
                throw std::runtime_error("not a gambler file: " + path);
            auto valid = validate_gambler(*parsed.gambler);
            if (!valid.ok)
                throw std::runtime_error("invalid gambler " + path + ": " +
                                         valid.error);
            const GamblerSpec& g = *parsed.gambler;
            if (cfg.n <= static_cast<uint64_t>(g.lookahead))
                throw std::invalid_argument(
                    "config: n too small for gambler look-ahead in " + path);
            uint64_t rounds = cfg.n - static_cast<uint64_t>(g.lookahead);
            auto traj = run_gambler(g, alpha, beta, rounds, cfg.exact_limit);
            auto est =
                exponent_estimates(traj, detail::auto_burn_in(rounds));
            GamblerSideEstimate side =
                detail::clamp_gambler(1.0 - est.limsup_est, 1.0 - est.liminf_est);
            side.limsup_est = est.limsup_est;
            side.liminf_est = est.liminf_est;
            rep.gambler_user.push_back({path, side});
        }
    }

    rep.cross_checks = cross_check(rep);
    return rep;
}

namespace detail {

inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') { out += '\\'; out += c; }
        else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else out += c;
    }
    return out + "\"";
}

inline void append_estimate_json(std::ostringstream& out, const char* name,
                                 const ReportEstimate& est,
                                 const std::map<size_t, EntropyProfile>* profiles) {
    out << json_escape(name) << ":{";
    out << "\"Dim_est\":" << fmt_num(est.Dim_est);
    out << ",\"dim_est\":" << fmt_num(est.dim_est);
    out << ",\"note\":\"finite-horizon estimates over the recorded N ranges\"";
    out << ",\"per_k\":{";
    bool first = true;
    for (const auto& [k, pk] : est.per_k) {
        if (!first) out << ",";
        first = false;
        out << "\"" << k << "\":{\"burn_in\":" << pk.burn_in
            << ",\"inf\":" << fmt_num(pk.inf) << ",\"n_max\":" << pk.n_max
            << ",\"sup\":" << fmt_num(pk.sup) << "}";
    }
    out << "}";
    if (profiles) {
        out << ",\"profile\":{";
        first = true;
        for (const auto& [k, prof] : *profiles) {
            if (!first) out << ",";
            first = false;
            out << "\"" << k << "\":[";
            for (size_t i = 0; i < prof.points.size(); ++i) {
                if (i) out << ",";
                out << "[" << prof.points[i].first << ","
                    << fmt_num(prof.points[i].second) << "]";
            }
            out << "]";
        }
        out << "}";
    }
    out << "}";
}

inline void append_gambler_entry(std::ostringstream& out,
                                 const GamblerSideEstimate& g) {
    out << "{\"Dim_value\":" << fmt_num(g.Dim_value)
        << ",\"clamped\":" << (g.clamped ? "true" : "false")
        << ",\"dim_value\":" << fmt_num(g.dim_value)
        << ",\"liminf_est\":" << fmt_num(g.liminf_est)
        << ",\"limsup_est\":" << fmt_num(g.limsup_est) << "}";
}

} // namespace detail

inline std::string to_json(const DimensionReport& rep) {
    using detail::fmt_num;
    using detail::json_escape;
    std::ostringstream out;
    out << "{\"config\":{";
    out << "\"alpha\":" << json_escape(rep.config.alpha.str());
    if (rep.config.beta_is_shift) {
        out << ",\"beta_shift\":" << rep.config.shift_c;
        out << ",\"beta_shift_pad\":" << int(rep.config.shift_pad);
    } else {
        out << ",\"beta\":" << json_escape(rep.config.beta->str());
    }
    out << ",\"burn_in\":" << rep.config.burn_in;
    out << ",\"characterizations\":[";
    bool first = true;
    for (const auto& c : rep.config.characterizations) {
        if (!first) out << ",";
        first = false;
        out << json_escape(c);
    }
    out << "]";
    out << ",\"exact_limit\":" << rep.config.exact_limit;
    out << ",\"gambler_specs\":[";
    first = true;
    for (const auto& p : rep.config.gambler_spec_paths) {
        if (!first) out << ",";
        first = false;
        out << json_escape(p);
    }
    out << "]";
    out << ",\"k_list\":[";
    first = true;
    for (size_t k : rep.config.k_list) {
        if (!first) out << ",";
        first = false;
        out << k;
    }
    out << "]";
    out << ",\"mode\":" << json_escape(to_string(rep.config.mode));
    out << ",\"n\":" << rep.config.n;
    out << ",\"n_max\":" << rep.config.n_max;
    out << "}";

    out << ",\"cross_checks\":[";
    first = true;
    for (const auto& c : rep.cross_checks) {
        if (!first) out << ",";
        first = false;
        out << "{\"holds\":" << (c.holds ? "true" : "false") << ",\"k\":" << c.k
            << ",\"lhs\":" << fmt_num(c.lhs) << ",\"name\":" << json_escape(c.name)
            << ",\"rhs\":" << fmt_num(c.rhs) << ",\"slack\":" << fmt_num(c.slack)
            << "}";
    }
    out << "]";

    out << ",\"estimates\":{";
    bool need_comma = false;
    if (rep.apriori) {
        detail::append_estimate_json(out, "apriori", *rep.apriori, nullptr);
        need_comma = true;
    }
    if (rep.auto_est) {
        if (need_comma) out << ",";
        detail::append_estimate_json(out, "auto", *rep.auto_est, nullptr);
        need_comma = true;
    }
    if (rep.entropy) {
        if (need_comma) out << ",";
        detail::append_estimate_json(out, "entropy", *rep.entropy,
                                     &rep.entropy_profiles);
        need_comma = true;
    }
    if (!rep.gambler_bridged.empty() || !rep.gambler_user.empty()) {
        if (need_comma) out << ",";
        out << "\"gambler\":{\"bridged\":{";
        first = true;
        for (const auto& [k, g] : rep.gambler_bridged) {
            if (!first) out << ",";
            first = false;
            out << "\"" << k << "\":";
            detail::append_gambler_entry(out, g);
        }
        out << "},\"note\":\"capital growth rates are lower bounds on the "
               "supremum over gamblers; the dim-side values are upper bounds "
               "on the dimension\",\"user\":[";
        first = true;
        for (const auto& u : rep.gambler_user) {
            if (!first) out << ",";
            first = false;
            out << "{\"Dim_value\":" << fmt_num(u.est.Dim_value)
                << ",\"clamped\":" << (u.est.clamped ? "true" : "false")
                << ",\"dim_value\":" << fmt_num(u.est.dim_value)
                << ",\"liminf_est\":" << fmt_num(u.est.liminf_est)
                << ",\"limsup_est\":" << fmt_num(u.est.limsup_est)
                << ",\"path\":" << json_escape(u.path) << "}";
        }
        out << "]}";
    }
    out << "}";
    out << ",\"version\":" << json_escape(rep.version) << "}";
    out << "\n";
    return out.str();
}

inline std::string to_csv(const DimensionReport& rep) {
    using detail::fmt_num;
    std::ostringstream out;
    out << "characterization,k,inf,sup\n";
    auto emit = [&](const char* name, const ReportEstimate& est) {
        for (const auto& [k, pk] : est.per_k)
            out << name << "," << k << "," << fmt_num(pk.inf) << ","
                << fmt_num(pk.sup) << "\n";
    };
    if (rep.apriori) emit("apriori", *rep.apriori);
    if (rep.auto_est) emit("auto", *rep.auto_est);
    if (rep.entropy) emit("entropy", *rep.entropy);
    for (const auto& [k, g] : rep.gambler_bridged)
        out << "gambler_bridged," << k << "," << fmt_num(g.dim_value) << ","
            << fmt_num(g.Dim_value) << "\n";
    for (const auto& u : rep.gambler_user)
        out << "gambler_user:" << u.path << ",," << fmt_num(u.est.dim_value)
            << "," << fmt_num(u.est.Dim_value) << "\n";
    return out.str();
}

inline void write_report(const DimensionReport& rep, const std::string& path) {
    std::string text = rep.config.format == "csv" ? to_csv(rep) : to_json(rep);
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << text;
}

} // namespace fsdim

#endif
