#ifndef FSDIM_CHECKS_HPP
#define FSDIM_CHECKS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fsdim/apriori.hpp"
#include "fsdim/autocomplexity.hpp"
#include "fsdim/bitseq.hpp"
#include "fsdim/blockstat.hpp"
#include "fsdim/gambler.hpp"
#include "fsdim/rational.hpp"

namespace fsdim {

// Seeded property suites over randomized inputs.  The same harness backs
// the CLI `check` subcommand, the unit tests and the acceptance run.

struct CheckReport {
    std::string name;
    uint64_t cases = 0;
    uint64_t failures = 0;
    std::string detail; // first failure, empty when clean

    explicit CheckReport(std::string n = {}) : name(std::move(n)) {}

    bool ok() const { return failures == 0; }
};

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() { return splitmix64_next(state_); }
    uint64_t below(uint64_t n) { return next() % n; }
    uint8_t bit() { return static_cast<uint8_t>(next() & 1); }

    BitString bits(size_t n) {
        BitString r;
        r.reserve(n);
        for (size_t i = 0; i < n; ++i) r.push_back(bit());
        return r;
    }

    BitString biased_bits(size_t n, uint64_t num, uint64_t den) {
        BitString r;
        r.reserve(n);
        for (size_t i = 0; i < n; ++i)
            r.push_back(below(den) < num ? 1 : 0);
        return r;
    }

    Rat unit_rat(uint64_t max_den = 4) {
        uint64_t den = 1 + below(max_den);
        uint64_t num = below(den + 1);
        return Rat(num, den);
    }

private:
    uint64_t state_;
};

namespace checkgen {

// Correlated or independent pair of test sequences.
inline std::pair<BitString, BitString> random_pair(Rng& rng, size_t n) {
    BitString a;
    switch (rng.below(3)) {
    case 0: a = rng.bits(n); break;
    case 1: a = rng.biased_bits(n, 1, 4); break;
    default: a = rng.biased_bits(n, 7, 8); break;
    }
    BitString b;
    switch (rng.below(4)) {
    case 0: b = rng.bits(n); break;
    case 1: b = shift_oracle(a, 1, 0); break;
    case 2: { // alpha with sparse flips
        b = a;
        BitString flipped;
        flipped.reserve(n);
        for (size_t i = 0; i < n; ++i)
            flipped.push_back(rng.below(8) == 0 ? (b[i] ^ 1) : b[i]);
        b = flipped;
        break;
    }
    default:
        b = generate(SequenceSpec::periodic(rng.bits(1 + rng.below(3))), n);
        break;
    }
    return {a, b};
}

inline GamblerSpec random_gambler(Rng& rng, size_t max_states = 3,
                                  int lookahead = -1) {
    GamblerSpec g;
    g.lookahead = lookahead >= 0 ? lookahead : static_cast<int>(rng.below(2));
    size_t n = 1 + rng.below(max_states);
    for (size_t s = 0; s < n; ++s) g.state_names.push_back("s" + std::to_string(s));
    g.start = 0;
    g.resize_bets();
    for (size_t s = 0; s < n; ++s)
        for (uint64_t w = 0; w < g.window_count(); ++w)
            g.slot(s, w) = GamblerSpec::Bet{rng.unit_rat(),
                                            static_cast<int>(rng.below(n)),
                                            static_cast<int>(rng.below(n))};
    return g;
}

inline ProbProcess random_process(Rng& rng, size_t max_states = 4) {
    ProbProcess p;
    size_t n = 1 + rng.below(max_states);
    for (size_t s = 0; s < n; ++s) p.state_names.push_back("s" + std::to_string(s));
    p.start = 0;
    p.resize_emits();
    for (size_t s = 0; s < n; ++s)
        for (uint8_t b : {uint8_t{0}, uint8_t{1}})
            p.slot(s, b) = ProbProcess::Emit{rng.unit_rat(),
                                             static_cast<int>(rng.below(n)),
                                             static_cast<int>(rng.below(n))};
    return p;
}

inline DescriptionMode copy_mode() {
    DescriptionMode d;
    d.vertex_count = 1;
    d.declared_valence = 1;
    for (uint8_t a : {uint8_t{0}, uint8_t{1}})
        for (uint8_t b : {uint8_t{0}, uint8_t{1}})
            d.edges.push_back({0, 0, true, a, b, true, a});
    return d;
}

inline DescriptionMode zero_emitter_mode() {
    DescriptionMode d;
    d.vertex_count = 1;
    d.declared_valence = 1;
    for (uint8_t b : {uint8_t{0}, uint8_t{1}})
        d.edges.push_back({0, 0, true, 0, b, false, 0});
    return d;
}

// Copy mode with a parity state; still a one-valued relation.
inline DescriptionMode parity_copy_mode() {
    DescriptionMode d;
    d.vertex_count = 2;
    d.declared_valence = 2;
    for (int v : {0, 1})
        for (uint8_t a : {uint8_t{0}, uint8_t{1}})
            for (uint8_t b : {uint8_t{0}, uint8_t{1}})
                d.edges.push_back({v, v ^ (a & 1), true, a, b, true, a});
    return d;
}

inline DescriptionMode union_mode() {
    DescriptionMode d;
    d.vertex_count = 2;
    d.declared_valence = 2;
    for (uint8_t a : {uint8_t{0}, uint8_t{1}})
        for (uint8_t b : {uint8_t{0}, uint8_t{1}})
            d.edges.push_back({0, 0, true, a, b, true, a});
    for (uint8_t b : {uint8_t{0}, uint8_t{1}})
        d.edges.push_back({1, 1, true, 0, b, false, 0});
    return d;
}

inline std::vector<Rat> random_distribution(Rng& rng, size_t k,
                                            bool allow_zero = true) {
    const size_t n = size_t{1} << k;
    std::vector<uint64_t> counts(n);
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i) {
        counts[i] = allow_zero ? rng.below(8) : 1 + rng.below(8);
        total += counts[i];
    }
    if (total == 0) { counts[0] = 1; total = 1; }
    std::vector<Rat> dist(n);
    for (size_t i = 0; i < n; ++i) dist[i] = Rat(counts[i], total);
    return dist;
}

inline DescriptionMode random_compiled_mode(Rng& rng, size_t k) {
    size_t n_dists = 1 + rng.below(2);
    std::vector<std::vector<Rat>> dists;
    for (size_t i = 0; i < n_dists; ++i)
        dists.push_back(random_distribution(rng, k));
    FamilyBuild fb = build_family_with_map(k, dists);
    ConditionMap cmap;
    cmap.k = k;
    for (uint64_t b = 0; b < (uint64_t{1} << k); ++b)
        cmap.code_index.push_back(rng.below(fb.family.codes.size()));
    return compile_block_mode(k, fb.family, cmap);
}

// Ten structurally varied modes, each accepted by validate_mode before use.
inline std::vector<DescriptionMode> validated_mode_pool(Rng& rng) {
    std::vector<DescriptionMode> pool;
    pool.push_back(copy_mode());
    pool.push_back(zero_emitter_mode());
    pool.push_back(parity_copy_mode());
    pool.push_back(union_mode());
    pool.push_back(random_compiled_mode(rng, 1));
    pool.push_back(random_compiled_mode(rng, 1));
    pool.push_back(random_compiled_mode(rng, 2));
    pool.push_back(random_compiled_mode(rng, 2));
    // random one-valued decoders: every edge carries a description bit
    while (pool.size() < 10) {
        DescriptionMode d;
        size_t n = 1 + rng.below(2);
        d.vertex_count = n;
        size_t n_edges = 2 + rng.below(4);
        for (size_t e = 0; e < n_edges; ++e)
            d.edges.push_back({static_cast<int>(rng.below(n)),
                               static_cast<int>(rng.below(n)), true, rng.bit(),
                               rng.bit(), true, rng.bit()});
        d.declared_valence = static_cast<int>(n) + 2;
        auto v = validate_mode(d, 4, 5);
        if (v.ok) pool.push_back(d);
    }
    for (auto& d : pool) {
        auto v = validate_mode(d, 4, 5);
        if (!v.ok)
            throw std::logic_error("mode pool member failed validation: " + v.error);
    }
    return pool;
}

inline std::vector<SuperadditivitySample> random_splits(Rng& rng, size_t count,
                                                        size_t max_len) {
    std::vector<SuperadditivitySample> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        size_t l1 = rng.below(max_len + 1);
        size_t l2 = rng.below(max_len + 1);
        out.push_back({rng.bits(l1), rng.bits(l1), rng.bits(l2), rng.bits(l2)});
    }
    return out;
}

} // namespace checkgen

// Independent reference for the account combiner: simulate the gamblers on
// separate accounts, pool and redistribute every T rounds, and track each
// component standalone as well.
struct MultiAccountReference {
    std::vector<Rat> total; // pooled capital after round i
    std::vector<std::vector<Rat>> solo; // standalone capital per gambler
};

inline MultiAccountReference simulate_multi_account(
    const std::vector<GamblerSpec>& gs, const BitString& alpha,
    const BitString& beta, uint64_t n_rounds, uint64_t period) {
    const size_t l = gs.size();
    const size_t c = static_cast<size_t>(gs[0].lookahead);
    MultiAccountReference ref;
    ref.total.assign(n_rounds + 1, Rat(1));
    ref.solo.assign(l, std::vector<Rat>(n_rounds + 1, Rat(1)));

    std::vector<Rat> account(l, Rat(1, l));
    std::vector<int> acc_state(l), solo_state(l);
    std::vector<Rat> solo_cap(l, Rat(1));
    for (size_t j = 0; j < l; ++j) acc_state[j] = solo_state[j] = gs[j].start;

    for (uint64_t i = 0; i < n_rounds; ++i) {
        uint64_t w = beta.pack(i, c + 1);
        uint8_t a = alpha[i];
        Rat pooled;
        for (size_t j = 0; j < l; ++j) {
            const auto& bet = gs[j].bet(static_cast<size_t>(acc_state[j]), w);
            Rat part = a == 0 ? bet.stake0 : Rat(1) - bet.stake0;
            account[j] = account[j] * Rat(2) * part;
            acc_state[j] = a == 0 ? bet.next0 : bet.next1;
            pooled += account[j];

            const auto& sbet = gs[j].bet(static_cast<size_t>(solo_state[j]), w);
            Rat spart = a == 0 ? sbet.stake0 : Rat(1) - sbet.stake0;
            solo_cap[j] = solo_cap[j] * Rat(2) * spart;
            solo_state[j] = a == 0 ? sbet.next0 : sbet.next1;
            ref.solo[j][i + 1] = solo_cap[j];
        }
        ref.total[i + 1] = pooled;
        if ((i + 1) % period == 0)
            for (size_t j = 0; j < l; ++j) account[j] = pooled * Rat(1, l);
    }
    return ref;
}

inline CheckReport check_doubling_suite(uint64_t cases, uint64_t seed) {
    CheckReport rep{"doubling"};
    Rng rng(seed);
    const size_t ks[] = {1, 2, 4};
    const uint64_t ns[] = {4, 16, 64};
    for (uint64_t i = 0; i < cases; ++i) {
        size_t k = ks[rng.below(3)];
        uint64_t n = ns[rng.below(3)];
        auto [a, b] = checkgen::random_pair(rng, 2 * k * n);
        auto c = check_doubling(a, b, k, n);
        ++rep.cases;
        if (!c.holds && rep.failures++ == 0)
            rep.detail = "k=" + std::to_string(k) + " N=" + std::to_string(n) +
                         " lhs=" + std::to_string(c.lhs) +
                         " rhs=" + std::to_string(c.rhs);
    }
    return rep;
}

inline CheckReport check_mixture_suite(uint64_t cases, uint64_t seed) {
    CheckReport rep{"mixture"};
    Rng rng(seed);
    const size_t ks[] = {2, 4, 8};
    for (uint64_t i = 0; i < cases; ++i) {
        size_t k = ks[rng.below(3)];
        uint64_t n = 4 + rng.below(24);
        auto [a, b] = checkgen::random_pair(rng, k * n + k - 1);
        auto c = mixture_bound_check(a, b, k, n);
        ++rep.cases;
        if (!c.holds && rep.failures++ == 0)
            rep.detail = "k=" + std::to_string(k) + " N=" + std::to_string(n) +
                         " sliding=" + std::to_string(c.h_sliding) +
                         " avg=" + std::to_string(c.avg_offsets);
    }
    return rep;
}

inline CheckReport check_ksd_superadd_suite(uint64_t splits, uint64_t seed) {
    CheckReport rep{"superadditivity-ksd"};
    Rng rng(seed);
    auto pool = checkgen::validated_mode_pool(rng);
    uint64_t per_mode = (splits + pool.size() - 1) / pool.size();
    for (const auto& mode : pool) {
        auto samples = checkgen::random_splits(rng, per_mode, 4);
        auto res = check_superadditivity_ksd(mode, samples);
        rep.cases += res.cases;
        if (!res.ok && rep.failures++ == 0) rep.detail = res.detail;
    }
    return rep;
}

inline CheckReport check_ka_superadd_suite(uint64_t splits, uint64_t seed) {
    CheckReport rep{"superadditivity-ka"};
    Rng rng(seed);
    const size_t n_procs = 50;
    uint64_t per_proc = (splits + n_procs - 1) / n_procs;
    for (size_t p = 0; p < n_procs; ++p) {
        ProbProcess proc = checkgen::random_process(rng);
        auto samples = checkgen::random_splits(rng, per_proc, 6);
        auto res = check_superadditivity_ka(proc, samples);
        rep.cases += res.cases;
        if (!res.ok && rep.failures++ == 0) rep.detail = res.detail;
    }
    return rep;
}

// Compiled block modes at k in {1,2}: observed valence from bounded
// validation, then the counting bound for every B and m.
inline CheckReport check_calibration_suite(uint64_t seed, size_t l_max = 6,
                                           uint64_t m_max = 8) {
    CheckReport rep{"calibration"};
    Rng rng(seed);
    for (size_t k : {size_t{1}, size_t{2}}) {
        DescriptionMode mode = checkgen::random_compiled_mode(rng, k);
        auto val = validate_mode(mode, l_max, static_cast<size_t>(m_max));
        if (!val.ok) {
            ++rep.cases;
            if (rep.failures++ == 0) rep.detail = val.error;
            continue;
        }
        uint64_t c_obs = static_cast<uint64_t>(val.c_obs);
        for (size_t blen = 0; blen <= l_max; ++blen) {
            for (uint64_t bv = 0; bv < (uint64_t{1} << blen); ++bv) {
                BitString b = BitString::unpack(bv, blen);
                std::vector<uint64_t> count_le(m_max + 1, 0);
                for (uint64_t av = 0; av < (uint64_t{1} << blen); ++av) {
                    auto kv = ksd(mode, BitString::unpack(av, blen), b);
                    if (!kv) continue;
                    for (uint64_t m = *kv; m <= m_max; ++m) ++count_le[m];
                }
                for (uint64_t m = 0; m <= m_max; ++m) {
                    uint64_t bound = c_obs * ((uint64_t{2} << m) - 1);
                    ++rep.cases;
                    if (count_le[m] > bound && rep.failures++ == 0)
                        rep.detail = "k=" + std::to_string(k) + " B=" + b.str() +
                                     " m=" + std::to_string(m) + " count=" +
                                     std::to_string(count_le[m]) + " bound=" +
                                     std::to_string(bound);
                }
            }
        }
    }
    return rep;
}

// Code family guarantee: each distribution's chosen code has expected
// length at most H + 1, and Huffman depth stays below the alphabet size.
inline CheckReport check_code_family_suite(uint64_t cases, uint64_t seed) {
    CheckReport rep{"code-family"};
    Rng rng(seed);
    for (uint64_t i = 0; i < cases; ++i) {
        size_t k = 2 + rng.below(2); // alphabets of 4 and 8 symbols
        auto dist = checkgen::random_distribution(rng, k);
        PrefixCode code = huffman_code(k, dist);
        double h = 0.0, avg = 0.0;
        for (size_t s = 0; s < dist.size(); ++s) {
            double p = dist[s].to_double();
            if (p > 0) h -= p * std::log2(p);
            avg += p * static_cast<double>(code.codewords[s].size());
        }
        ++rep.cases;
        bool ok = avg <= h + 1.0 + 1e-9 &&
                  code.max_len() <= dist.size() - 1 && is_prefix_free(code) &&
                  kraft_sum(code) <= Rat(1);
        if (!ok && rep.failures++ == 0)
            rep.detail = "k=" + std::to_string(k) + " avg=" + std::to_string(avg) +
                         " H=" + std::to_string(h) +
                         " maxlen=" + std::to_string(code.max_len());
    }
    return rep;
}

// process_to_gambler capital identity and gambler_to_measure normalization,
// both as exact rational equalities.
inline CheckReport check_bridge_suite(uint64_t cases, uint64_t seed) {
    CheckReport rep{"bridges"};
    Rng rng(seed);
    for (uint64_t i = 0; i < cases; ++i) {
        ProbProcess proc = checkgen::random_process(rng, 3);
        int c = static_cast<int>(rng.below(3));
        uint64_t n = 1 + rng.below(12);
        GamblerSpec g = process_to_gambler(proc, c);
        BitString alpha = rng.bits(n);
        BitString beta = rng.bits(n + static_cast<size_t>(c));
        auto traj = run_gambler(g, alpha, beta, n);
        Rat prob = process_prob(proc, static_cast<size_t>(proc.start), alpha,
                                beta.substr(static_cast<size_t>(c), n));
        BigUint scale(1);
        scale.shl(n);
        Rat expected = prob * Rat(scale, BigUint(1));
        ++rep.cases;
        if (!exact_eq(traj.values[n], expected)) {
            if (rep.failures++ == 0)
                rep.detail = "capital identity failed at case " + std::to_string(i);
            continue;
        }
        BitString b2 = rng.bits(static_cast<size_t>(c) + 1 + rng.below(8));
        MeasureTable t = gambler_to_measure(g, b2);
        Rat sum;
        for (const auto& p : t.prob) sum += p;
        ++rep.cases;
        if (!sum.is_one() && rep.failures++ == 0)
            rep.detail = "measure sum " + sum.str() + " at case " + std::to_string(i);
    }
    return rep;
}

inline CheckReport check_combiner_suite(uint64_t cases, uint64_t seed) {
    CheckReport rep{"combiner"};
    Rng rng(seed);
    for (uint64_t i = 0; i < cases; ++i) {
        size_t l = 1 + rng.below(3);
        int c = static_cast<int>(rng.below(2));
        std::vector<GamblerSpec> gs;
        for (size_t j = 0; j < l; ++j)
            gs.push_back(checkgen::random_gambler(rng, 3, c));
        uint64_t period = 1 + rng.below(3);
        uint64_t n = 1 + rng.below(12);
        BitString alpha = rng.bits(n);
        BitString beta = rng.bits(n + static_cast<size_t>(c));

        GamblerSpec combined = combine_accounts(gs, period);
        auto traj = run_gambler(combined, alpha, beta, n);
        auto ref = simulate_multi_account(gs, alpha, beta, n, period);

        bool equal = true;
        for (uint64_t t = 0; t <= n; ++t)
            if (!exact_eq(traj.values[t], ref.total[t])) { equal = false; break; }
        ++rep.cases;
        if (!equal) {
            if (rep.failures++ == 0)
                rep.detail = "combined trajectory mismatch at case " + std::to_string(i);
            continue;
        }

        // loss bound: total * l^ceil(t/T) >= best standalone capital
        bool bound_ok = true;
        for (uint64_t t = 1; t <= n && bound_ok; ++t) {
            uint64_t events = (t + period - 1) / period;
            Rat factor(1);
            for (uint64_t e = 0; e < events; ++e) factor *= Rat(l);
            Rat lhs = ref.total[t] * factor;
            for (size_t j = 0; j < l; ++j)
                if (lhs < ref.solo[j][t]) { bound_ok = false; break; }
        }
        ++rep.cases;
        if (!bound_ok && rep.failures++ == 0)
            rep.detail = "loss bound failed at case " + std::to_string(i);
    }
    return rep;
}

inline std::vector<CheckReport> run_all_checks(uint64_t seed) {
    return {
        check_doubling_suite(200, seed),
        check_mixture_suite(100, seed + 1),
        check_ksd_superadd_suite(500, seed + 2),
        check_ka_superadd_suite(500, seed + 3),
        check_calibration_suite(seed + 4),
        check_code_family_suite(100, seed + 5),
        check_bridge_suite(100, seed + 6),
        check_combiner_suite(50, seed + 7),
    };
}

} // namespace fsdim

#endif
