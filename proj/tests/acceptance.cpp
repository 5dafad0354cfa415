// Acceptance suite: one line per criterion, non-zero exit on any failure.
// Thresholds marked "oracle" come from tests/oracle/entropy_oracle.py, an
// independent Python counting script whose output is frozen here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fsdim/automaton_io.hpp"
#include "fsdim/checks.hpp"
#include "fsdim/report.hpp"

using namespace fsdim;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<std::string()> run; // returns failure detail, empty = pass
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string check_time(double seconds, double budget) {
    if (seconds < budget) return "";
    std::ostringstream s;
    s << "runtime " << seconds << "s exceeds budget " << budget << "s";
    return s.str();
}

GamblerSpec lookahead_follower() {
    GamblerSpec g;
    g.lookahead = 1;
    g.state_names = {"s0"};
    g.resize_bets();
    for (uint64_t w = 0; w < 4; ++w)
        g.slot(0, w) = GamblerSpec::Bet{(w & 1) ? Rat(0) : Rat(1), 0, 0};
    return g;
}

std::string criterion_self_condition() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.alpha = SequenceSpec::champernowne();
    cfg.beta = SequenceSpec::champernowne();
    cfg.n = 1 << 14;
    cfg.k_list = {1, 2, 4, 8};
    auto rep = estimate_all(cfg);
    std::ostringstream fail;
    for (size_t k : cfg.k_list) {
        double bound = 1.0 / static_cast<double>(k) + 0.02;
        if (rep.entropy->per_k.at(k).inf != 0.0 ||
            rep.entropy->per_k.at(k).sup != 0.0)
            fail << "entropy not exactly 0 at k=" << k << "; ";
        if (rep.auto_est->per_k.at(k).inf > bound)
            fail << "auto " << rep.auto_est->per_k.at(k).inf << " > " << bound
                 << " at k=" << k << "; ";
        if (rep.apriori->per_k.at(k).inf > bound)
            fail << "apriori " << rep.apriori->per_k.at(k).inf << " > " << bound
                 << " at k=" << k << "; ";
        if (rep.gambler_bridged.at(k).dim_value > bound)
            fail << "gambler " << rep.gambler_bridged.at(k).dim_value << " > "
                 << bound << " at k=" << k << "; ";
    }
    fail << check_time(elapsed_s(t0), 5.0);
    return fail.str();
}

std::string criterion_shift_example() {
    auto t0 = std::chrono::steady_clock::now();
    const std::string path = "acceptance_follower.gambler";
    {
        std::ofstream out(path);
        out << serialize_gambler(lookahead_follower());
    }
    RunConfig cfg;
    cfg.alpha = SequenceSpec::bernoulli(1, 2, 1);
    cfg.beta_is_shift = true;
    cfg.shift_c = 1;
    cfg.n = 1 << 14;
    cfg.k_list = {4, 8};
    cfg.characterizations = {"entropy", "gambler"};
    cfg.gambler_spec_paths = {path};
    auto rep = estimate_all(cfg);
    std::remove(path.c_str());
    std::ostringstream fail;
    if (rep.gambler_user.size() != 1 || rep.gambler_user[0].est.limsup_est != 1.0)
        fail << "supplied gambler limsup "
             << (rep.gambler_user.empty() ? -1.0
                                          : rep.gambler_user[0].est.limsup_est)
             << " != 1 exactly; ";
    if (!rep.gambler_user.empty() && rep.gambler_user[0].est.dim_value != 0.0)
        fail << "1 - limsup != 0; ";
    for (size_t k : cfg.k_list) {
        double bound = 1.0 / static_cast<double>(k) + 0.01;
        if (rep.entropy->per_k.at(k).inf > bound ||
            rep.entropy->per_k.at(k).sup > bound)
            fail << "entropy per-k above " << bound << " at k=" << k << "; ";
    }
    fail << check_time(elapsed_s(t0), 5.0);
    return fail.str();
}

std::string criterion_normality_proxy() {
    auto t0 = std::chrono::steady_clock::now();
    // oracle: tests/oracle/entropy_oracle.py on champernowne(2^20) vs zeros
    //   k=1 inf=0.994985032485  k=2 inf=0.993531236064  k=4 inf=0.988640013438
    const std::vector<std::pair<size_t, double>> oracle = {
        {1, 0.994985032485}, {2, 0.993531236064}, {4, 0.988640013438}};
    RunConfig cfg;
    cfg.alpha = SequenceSpec::champernowne();
    cfg.beta = SequenceSpec::parse("zeros");
    cfg.n = 1 << 20;
    cfg.k_list = {1, 2, 4};
    cfg.characterizations = {"entropy"};
    auto rep = estimate_all(cfg);
    std::ostringstream fail;
    for (auto [k, t_k] : oracle) {
        double est = rep.entropy->per_k.at(k).inf;
        if (est < t_k - 1e-6)
            fail << "k=" << k << " estimate " << est << " below oracle " << t_k
                 << "; ";
        if (std::abs(est - t_k) > 1e-6)
            fail << "k=" << k << " estimate " << est
                 << " does not reproduce oracle " << t_k << "; ";
    }
    fail << check_time(elapsed_s(t0), 60.0);
    return fail.str();
}

std::string criterion_doubling() {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = check_doubling_suite(200, 0xD0B1);
    std::ostringstream fail;
    if (!rep.ok()) fail << rep.detail << "; ";
    if (rep.cases != 200) fail << "expected 200 cases; ";
    fail << check_time(elapsed_s(t0), 10.0);
    return fail.str();
}

std::string criterion_mixture() {
    auto rep = check_mixture_suite(100, 0x313C);
    if (!rep.ok()) return rep.detail;
    if (rep.cases != 100) return "expected 100 cases";
    return "";
}

std::string criterion_superadditivity() {
    auto ksd_rep = check_ksd_superadd_suite(500, 0x5ADD);
    auto ka_rep = check_ka_superadd_suite(500, 0x5ADE);
    std::ostringstream fail;
    if (!ksd_rep.ok()) fail << "ksd: " << ksd_rep.detail << "; ";
    if (ksd_rep.cases < 500) fail << "ksd cases " << ksd_rep.cases << " < 500; ";
    if (!ka_rep.ok()) fail << "ka: " << ka_rep.detail << "; ";
    if (ka_rep.cases < 500) fail << "ka cases " << ka_rep.cases << " < 500; ";
    return fail.str();
}

std::string criterion_calibration() {
    auto rep = check_calibration_suite(0xCA11, 6, 8);
    return rep.ok() ? "" : rep.detail;
}

std::string criterion_code_family() {
    // 50 distributions over each alphabet
    Rng rng(0xC0DE);
    std::ostringstream fail;
    for (size_t k : {size_t{2}, size_t{3}}) {
        std::vector<std::vector<Rat>> dists;
        for (int i = 0; i < 50; ++i)
            dists.push_back(checkgen::random_distribution(rng, k));
        FamilyBuild fb = build_family_with_map(k, dists);
        for (size_t i = 0; i < dists.size(); ++i) {
            const PrefixCode& code = fb.family.codes[fb.code_of_dist[i]];
            double h = 0, avg = 0;
            for (size_t s = 0; s < dists[i].size(); ++s) {
                double p = dists[i][s].to_double();
                if (p > 0) h -= p * std::log2(p);
                avg += p * static_cast<double>(code.codewords[s].size());
            }
            if (avg > h + 1.0 + 1e-9)
                fail << "k=" << k << " dist " << i << ": avg " << avg << " > H+1 "
                     << h + 1.0 << "; ";
            if (code.max_len() > dists[i].size() - 1)
                fail << "k=" << k << " dist " << i << ": depth " << code.max_len()
                     << " above alphabet bound; ";
        }
    }
    return fail.str();
}

std::string criterion_bridges() {
    auto rep = check_bridge_suite(100, 0xB41D);
    if (!rep.ok()) return rep.detail;
    return "";
}

std::string criterion_combiner() {
    auto rep = check_combiner_suite(50, 0xC0B1);
    if (!rep.ok()) return rep.detail;
    return "";
}

std::string agreement_failures(const DimensionReport& rep, const std::string& tag) {
    std::ostringstream fail;
    for (const auto& c : rep.cross_checks)
        if (!c.holds)
            fail << tag << ": cross check " << c.name << " k=" << c.k
                 << " lhs=" << c.lhs << " rhs=" << c.rhs << "; ";
    double lo = 2.0, hi = -1.0;
    for (double v : {rep.entropy->per_k.at(4).inf, rep.auto_est->per_k.at(4).inf,
                     rep.apriori->per_k.at(4).inf,
                     rep.gambler_bridged.at(4).dim_value}) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo > 0.15)
        fail << tag << ": per-k=4 estimates spread " << (hi - lo) << " > 0.15; ";
    return fail.str();
}

std::string criterion_agreement() {
    std::ostringstream fail;
    for (int i = 0; i < 20; ++i) {
        RunConfig cfg;
        cfg.alpha = SequenceSpec::bernoulli(1, 2, 1000 + 2 * i);
        cfg.beta = SequenceSpec::bernoulli(1, 2, 1001 + 2 * i);
        cfg.n = 1 << 14;
        cfg.k_list = {2, 4};
        cfg.burn_in = 1024;
        auto rep = estimate_all(cfg);
        fail << agreement_failures(rep, "pair " + std::to_string(i));
        if (!fail.str().empty()) break;
    }
    if (!fail.str().empty()) return fail.str();
    RunConfig cfg;
    cfg.alpha = SequenceSpec::champernowne();
    cfg.beta = SequenceSpec::parse("zeros");
    cfg.n = 1 << 20;
    cfg.k_list = {2, 4};
    auto rep = estimate_all(cfg);
    fail << agreement_failures(rep, "champernowne/zeros");
    return fail.str();
}

std::string criterion_determinism() {
    const std::string cfg_path = "acceptance_determinism.cfg";
    {
        std::ofstream out(cfg_path);
        out << "alpha=bernoulli:1/2:42\n"
            << "beta=bernoulli:1/2:43\n"
            << "n=4096\n"
            << "k=2,4\n"
            << "format=json\n";
    }
    std::string out1 = "acceptance_report_1.json";
    std::string out2 = "acceptance_report_2.json";
    auto run_once = [&](const std::string& out) {
        std::string cmd = std::string(FSDIM_CLI_PATH) + " estimate --config " +
                          cfg_path + " --out " + out;
        return std::system(cmd.c_str());
    };
    int rc1 = run_once(out1);
    int rc2 = run_once(out2);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    std::string a = slurp(out1), b = slurp(out2);
    std::remove(cfg_path.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    std::ostringstream fail;
    if (rc1 != 0 || rc2 != 0) fail << "cli exit codes " << rc1 << "," << rc2 << "; ";
    if (a.empty()) fail << "empty report; ";
    if (a != b) fail << "reports differ between runs; ";
    return fail.str();
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "self-condition zero", criterion_self_condition},
        {2, "shift example", criterion_shift_example},
        {3, "unconditional normality proxy", criterion_normality_proxy},
        {4, "doubling inequality", criterion_doubling},
        {5, "mixture sandwich", criterion_mixture},
        {6, "superadditivity suites", criterion_superadditivity},
        {7, "calibration", criterion_calibration},
        {8, "code-family bound", criterion_code_family},
        {9, "bridge exactness", criterion_bridges},
        {10, "combiner equivalence", criterion_combiner},
        {11, "cross-characterization agreement", criterion_agreement},
        {12, "determinism", criterion_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double dt = elapsed_s(t0);
        if (detail.empty()) {
            std::printf("criterion %2d PASS (%6.2fs)  %s\n", c.id, dt,
                        c.name.c_str());
        } else {
            ++failures;
            std::printf("criterion %2d FAIL (%6.2fs)  %s: %s\n", c.id, dt,
                        c.name.c_str(), detail.c_str());
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all 12 criteria passed\n");
    return failures ? 1 : 0;
}
