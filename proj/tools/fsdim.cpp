// Command line front end: sequence generation, dimension estimation,
// property-check suites and automaton validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsdim/automaton_io.hpp"
#include "fsdim/checks.hpp"
#include "fsdim/report.hpp"

namespace {

int run_gen(const std::string& kind, const std::string& pattern,
            uint64_t p_num, uint64_t p_den, uint64_t seed,
            const std::string& in_path, const std::string& spec_str,
            uint64_t n, const std::string& out_path) {
    fsdim::SequenceSpec spec;
    if (!spec_str.empty()) {
        spec = fsdim::SequenceSpec::parse(spec_str);
    } else if (kind == "champernowne") {
        spec = fsdim::SequenceSpec::champernowne();
    } else if (kind == "periodic") {
        spec = fsdim::SequenceSpec::periodic(fsdim::BitString::from_string(pattern));
    } else if (kind == "bernoulli") {
        spec = fsdim::SequenceSpec::bernoulli(p_num, p_den, seed);
    } else if (kind == "file") {
        spec = fsdim::SequenceSpec::file(in_path);
    } else {
        std::cerr << "gen: unknown kind " << kind << "\n";
        return 2;
    }
    fsdim::BitString bits = fsdim::generate(spec, n);
    fsdim::write_bits(out_path, bits);
    return 0;
}

int run_check(const std::string& suite, uint64_t seed) {
    std::vector<fsdim::CheckReport> reports;
    if (suite == "all") {
        reports = fsdim::run_all_checks(seed);
    } else if (suite == "doubling") {
        reports.push_back(fsdim::check_doubling_suite(200, seed));
    } else if (suite == "mixture") {
        reports.push_back(fsdim::check_mixture_suite(100, seed));
    } else if (suite == "superadd-ksd") {
        reports.push_back(fsdim::check_ksd_superadd_suite(500, seed));
    } else if (suite == "superadd-ka") {
        reports.push_back(fsdim::check_ka_superadd_suite(500, seed));
    } else if (suite == "calibration") {
        reports.push_back(fsdim::check_calibration_suite(seed));
    } else if (suite == "codes") {
        reports.push_back(fsdim::check_code_family_suite(100, seed));
    } else if (suite == "bridges") {
        reports.push_back(fsdim::check_bridge_suite(100, seed));
    } else if (suite == "combiner") {
        reports.push_back(fsdim::check_combiner_suite(50, seed));
    } else {
        std::cerr << "check: unknown suite " << suite << "\n";
        return 2;
    }
    bool all_ok = true;
    for (const auto& r : reports) {
        if (r.ok()) {
            std::printf("ok   %-18s cases=%llu\n", r.name.c_str(),
                        static_cast<unsigned long long>(r.cases));
        } else {
            all_ok = false;
            std::printf("FAIL %-18s cases=%llu failures=%llu: %s\n",
                        r.name.c_str(), static_cast<unsigned long long>(r.cases),
                        static_cast<unsigned long long>(r.failures),
                        r.detail.c_str());
        }
    }
    return all_ok ? 0 : 1;
}

int run_validate(const std::string& gambler_path, const std::string& mode_path,
                 const std::string& process_path, size_t l_max, size_t m_max) {
    int given = int(!gambler_path.empty()) + int(!mode_path.empty()) +
                int(!process_path.empty());
    if (given != 1) {
        std::cerr << "validate: give exactly one of --gambler/--mode/--process\n";
        return 2;
    }
    if (!gambler_path.empty()) {
        auto parsed = fsdim::load_automaton(gambler_path);
        if (parsed.type != fsdim::AutomatonType::gambler) {
            std::cerr << "validate: " << gambler_path << " is not a gambler file\n";
            return 1;
        }
        auto v = fsdim::validate_gambler(*parsed.gambler);
        if (!v.ok) {
            std::printf("invalid: %s\n", v.error.c_str());
            return 1;
        }
        std::printf("ok: gambler with %zu states, lookahead %d\n",
                    parsed.gambler->state_count(), parsed.gambler->lookahead);
        return 0;
    }
    if (!process_path.empty()) {
        auto parsed = fsdim::load_automaton(process_path);
        if (parsed.type != fsdim::AutomatonType::process) {
            std::cerr << "validate: " << process_path << " is not a process file\n";
            return 1;
        }
        auto v = fsdim::validate_process(*parsed.process);
        if (!v.ok) {
            std::printf("invalid: %s\n", v.error.c_str());
            return 1;
        }
        std::printf("ok: process with %zu states\n", parsed.process->state_count());
        return 0;
    }
    auto parsed = fsdim::load_automaton(mode_path);
    if (parsed.type != fsdim::AutomatonType::mode) {
        std::cerr << "validate: " << mode_path << " is not a mode file\n";
        return 1;
    }
    auto v = fsdim::validate_mode(*parsed.mode, l_max, m_max);
    if (!v.ok) {
        std::printf("invalid: %s\n", v.error.c_str());
        std::printf("witness B=%s P=%s A-set:", v.witness_b.str().c_str(),
                    v.witness_p.str().c_str());
        for (const auto& a : v.witness_as) std::printf(" %s", a.str().c_str());
        std::printf("\n");
        return 1;
    }
    std::printf("ok: observed valence %d (declared %d) at Lmax=%zu mmax=%zu\n",
                v.c_obs, parsed.mode->declared_valence, l_max, m_max);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conditional finite-state dimension estimation toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write a bit sequence file");
    std::string gen_kind = "champernowne", gen_pattern, gen_in, gen_spec, gen_out;
    uint64_t gen_pnum = 1, gen_pden = 2, gen_seed = 0, gen_n = 0;
    gen->add_option("--kind", gen_kind, "champernowne|periodic|bernoulli|file");
    gen->add_option("--pattern", gen_pattern, "pattern bits for periodic");
    gen->add_option("--p-num", gen_pnum, "bernoulli numerator");
    gen->add_option("--p-den", gen_pden, "bernoulli denominator");
    gen->add_option("--seed", gen_seed, "bernoulli seed");
    gen->add_option("--in", gen_in, "input path for kind=file");
    gen->add_option("--spec", gen_spec, "sequence spec string (overrides --kind)");
    gen->add_option("--n", gen_n, "number of bits")->required();
    gen->add_option("--out", gen_out, "output path")->required();

    // estimate
    auto* est = app.add_subcommand("estimate", "run the dimension estimators");
    std::string est_alpha, est_beta, est_mode = "aligned", est_chars;
    std::string est_out, est_format = "json", est_config;
    std::vector<std::string> est_gambler_specs;
    std::string est_k;
    uint64_t est_n = 0, est_nmax = 0, est_burn = 0, est_exact = fsdim::kDefaultExactLimit;
    int64_t est_shift = -1;
    uint64_t est_shift_pad = 0;
    est->add_option("--config", est_config, "key=value config file");
    est->add_option("--alpha", est_alpha, "sequence spec or bit file path");
    est->add_option("--beta", est_beta, "sequence spec or bit file path");
    est->add_option("--beta-shift", est_shift, "beta = alpha shifted right by c");
    est->add_option("--beta-shift-pad", est_shift_pad, "pad bit for the shift");
    est->add_option("--n", est_n, "prefix length in bits");
    est->add_option("--k", est_k, "comma-separated block sizes");
    est->add_option("--n-max", est_nmax, "cap on the block count");
    est->add_option("--burn-in", est_burn, "first block count included");
    est->add_option("--mode", est_mode, "aligned|sliding");
    est->add_option("--chars", est_chars,
                    "comma list of entropy,auto,apriori,gambler");
    est->add_option("--gambler-spec", est_gambler_specs,
                    "gambler automaton file (repeatable)");
    est->add_option("--out", est_out, "report path (default stdout)");
    est->add_option("--format", est_format, "json|csv");
    est->add_option("--exact-limit", est_exact,
                    "rounds of exact rational capital tracking");

    // check
    auto* chk = app.add_subcommand("check", "run the property-check suites");
    std::string chk_suite = "all";
    uint64_t chk_seed = 12345;
    chk->add_option("--suite", chk_suite,
                    "all|doubling|mixture|superadd-ksd|superadd-ka|calibration|"
                    "codes|bridges|combiner");
    chk->add_option("--seed", chk_seed, "base seed");

    // validate
    auto* val = app.add_subcommand("validate", "validate an automaton file");
    std::string val_gambler, val_mode, val_process;
    size_t val_lmax = 8, val_mmax = 10;
    val->add_option("--gambler", val_gambler, "gambler file");
    val->add_option("--mode", val_mode, "description mode file");
    val->add_option("--process", val_process, "probabilistic process file");
    val->add_option("--Lmax", val_lmax, "max condition length for mode checks");
    val->add_option("--mmax", val_mmax, "max description length for mode checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_kind, gen_pattern, gen_pnum, gen_pden, gen_seed,
                           gen_in, gen_spec, gen_n, gen_out);
        if (chk->parsed()) return run_check(chk_suite, chk_seed);
        if (val->parsed())
            return run_validate(val_gambler, val_mode, val_process, val_lmax,
                                val_mmax);

        // estimate
        fsdim::RunConfig cfg;
        if (!est_config.empty()) {
            std::ifstream in(est_config);
            if (!in) throw std::runtime_error("cannot open config: " + est_config);
            std::ostringstream buf;
            buf << in.rdbuf();
            cfg = fsdim::parse_config_text(buf.str());
        } else {
            cfg.characterizations.clear();
        }
        if (!est_alpha.empty()) cfg.alpha = fsdim::SequenceSpec::parse(est_alpha);
        if (!est_beta.empty()) cfg.beta = fsdim::SequenceSpec::parse(est_beta);
        if (est_shift >= 0) {
            cfg.beta_is_shift = true;
            cfg.shift_c = static_cast<uint64_t>(est_shift);
            cfg.shift_pad = static_cast<uint8_t>(est_shift_pad & 1);
            cfg.beta.reset();
        }
        if (est_n) cfg.n = est_n;
        if (!est_k.empty()) {
            cfg.k_list.clear();
            std::istringstream ks(est_k);
            std::string tok;
            while (std::getline(ks, tok, ','))
                cfg.k_list.push_back(std::stoul(tok));
        }
        if (est_nmax) cfg.n_max = est_nmax;
        if (est_burn) cfg.burn_in = est_burn;
        if (est_mode == "sliding") cfg.mode = fsdim::BlockMode::sliding;
        if (!est_chars.empty()) {
            cfg.characterizations.clear();
            std::istringstream cs(est_chars);
            std::string tok;
            while (std::getline(cs, tok, ',')) cfg.characterizations.insert(tok);
        }
        if (cfg.characterizations.empty())
            cfg.characterizations = {"entropy", "auto", "apriori", "gambler"};
        for (const auto& p : est_gambler_specs) cfg.gambler_spec_paths.push_back(p);
        if (!est_out.empty()) cfg.output = est_out;
        if (!est_format.empty()) cfg.format = est_format;
        cfg.exact_limit = est_exact;
        if (cfg.n == 0 && cfg.alpha.kind == fsdim::SequenceSpec::Kind::file)
            cfg.n = fsdim::read_bits(cfg.alpha.path).size();

        fsdim::DimensionReport rep = fsdim::estimate_all(cfg);
        fsdim::write_report(rep, cfg.output);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
