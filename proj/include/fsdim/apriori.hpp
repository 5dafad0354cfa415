#ifndef FSDIM_APRIORI_HPP
#define FSDIM_APRIORI_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsdim/autocomplexity.hpp"
#include "fsdim/bitseq.hpp"
#include "fsdim/blockstat.hpp"
#include "fsdim/gambler.hpp"
#include "fsdim/rational.hpp"

namespace fsdim {

// Finite-state conditional probabilistic bit emitter.  In every state,
// reading a condition bit fixes the probability of emitting 0 and the two
// successor states; the successor is deterministic given the emitted bit.
struct ProbProcess {
    struct Emit {
        Rat q0; // probability of emitting 0
        int next0 = 0;
        int next1 = 0;
    };

    std::vector<std::string> state_names;
    std::vector<std::optional<Emit>> emits; // [state * 2 + input_bit]
    int start = 0;

    size_t state_count() const { return state_names.size(); }

    std::optional<Emit>& slot(size_t s, uint8_t b) { return emits[s * 2 + b]; }
    const std::optional<Emit>& slot(size_t s, uint8_t b) const {
        return emits[s * 2 + b];
    }

    const Emit& emit(size_t s, uint8_t b) const {
        const auto& e = slot(s, b);
        if (!e)
            throw std::runtime_error("process: missing emit entry at state " +
                                     state_names[s] + ", input " +
                                     std::to_string(int(b)));
        return *e;
    }

    void resize_emits() { emits.assign(state_count() * 2, std::nullopt); }
};

struct ProcessValidation {
    bool ok = true;
    std::string error;
};

inline ProcessValidation validate_process(const ProbProcess& m) {
    if (m.state_count() == 0) return {false, "process has no states"};
    if (m.start < 0 || static_cast<size_t>(m.start) >= m.state_count())
        return {false, "start state out of range"};
    if (m.emits.size() != m.state_count() * 2)
        return {false, "emit table has wrong size"};
    for (size_t s = 0; s < m.state_count(); ++s) {
        for (uint8_t b : {uint8_t{0}, uint8_t{1}}) {
            const auto& e = m.slot(s, b);
            std::string where = "state " + m.state_names[s] + ", input " +
                                std::to_string(int(b));
            if (!e) return {false, "missing emit entry: " + where};
            if (e->q0 > Rat(1)) return {false, "probability out of range: " + where};
            for (int next : {e->next0, e->next1})
                if (next < 0 || static_cast<size_t>(next) >= m.state_count())
                    return {false, "successor out of range: " + where};
        }
    }
    return {};
}

// m_{M,s}(A | B): exact probability that the process emits A while reading
// B from state s.
inline Rat process_prob(const ProbProcess& m, size_t s, const BitString& a,
                        const BitString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("process_prob: |A| != |B|");
    Rat prob(1);
    int state = static_cast<int>(s);
    for (size_t i = 0; i < a.size(); ++i) {
        const auto& e = m.emit(static_cast<size_t>(state), b[i]);
        prob = prob * (a[i] == 0 ? e.q0 : Rat(1) - e.q0);
        if (prob.is_zero()) return prob;
        state = a[i] == 0 ? e.next0 : e.next1;
    }
    return prob;
}

struct AprioriValue {
    std::vector<Rat> per_state;
    double ka_bits = 0.0; // -log2 of the best state's probability
};

inline AprioriValue ka(const ProbProcess& m, const BitString& a,
                       const BitString& b) {
    AprioriValue v;
    v.per_state.reserve(m.state_count());
    const Rat* best = nullptr;
    for (size_t s = 0; s < m.state_count(); ++s) {
        v.per_state.push_back(process_prob(m, s, a, b));
        if (!best || *best < v.per_state.back()) best = &v.per_state.back();
    }
    if (!best || best->is_zero())
        v.ka_bits = std::numeric_limits<double>::infinity();
    else
        v.ka_bits = -best->log2();
    return v;
}

inline Rat max_state_prob(const ProbProcess& m, const BitString& a,
                          const BitString& b) {
    Rat best;
    for (size_t s = 0; s < m.state_count(); ++s) {
        Rat p = process_prob(m, s, a, b);
        if (best < p) best = p;
    }
    return best;
}

// Superadditivity in the probability domain, compared exactly:
// m_max(A1A2 | B1B2) <= m_max(A1 | B1) * m_max(A2 | B2).
inline SuperadditivityResult check_superadditivity_ka(
    const ProbProcess& m, const std::vector<SuperadditivitySample>& samples) {
    SuperadditivityResult res;
    for (const auto& s : samples) {
        ++res.cases;
        Rat whole = max_state_prob(m, s.a1 + s.a2, s.b1 + s.b2);
        Rat parts = max_state_prob(m, s.a1, s.b1) * max_state_prob(m, s.a2, s.b2);
        if (!(whole <= parts)) {
            res.ok = false;
            res.counterexample = s;
            res.detail = "m(A1A2|B1B2)=" + whole.str() + " > product " +
                         parts.str();
            return res;
        }
    }
    return res;
}

// Dyadic distribution of a prefix code: codeword length l becomes 2^-l,
// with the Kraft slack added to the lexicographically least symbol so the
// probabilities sum to exactly 1.
inline std::vector<Rat> dyadic_distribution(const PrefixCode& code) {
    std::vector<Rat> probs;
    probs.reserve(code.codewords.size());
    Rat sum;
    for (const auto& w : code.codewords) {
        BigUint den(1);
        den.shl(w.size());
        probs.emplace_back(BigUint(1), std::move(den));
        sum += probs.back();
    }
    if (Rat(1) < sum)
        throw std::logic_error("dyadic_distribution: Kraft sum above 1");
    probs[0] += Rat(1) - sum;
    return probs;
}

struct BlockProcess {
    ProbProcess process;
    size_t lookahead = 0;                // equals the block size k
    std::vector<int> block_start_states; // one per possible stored block
};

// Block tree process: while generating content block j with the tree
// conditionals of family[cmap(stored block)], the shifted condition bits
// (belonging to block j+1) are buffered; at the boundary the buffer
// becomes the stored block.  States are synchronized triples
// (stored block, content prefix, condition prefix) with equal depths.
inline BlockProcess build_block_process(size_t k,
                                        const std::vector<std::vector<Rat>>& family,
                                        const std::vector<size_t>& cmap,
                                        size_t state_cap = 262144) {
    if (k < 1 || k > 15)
        throw std::invalid_argument("build_block_process: k out of range");
    const size_t n_blocks = size_t{1} << k;
    if (cmap.size() != n_blocks)
        throw std::invalid_argument("build_block_process: condition map not total");
    for (size_t idx : cmap)
        if (idx >= family.size())
            throw std::invalid_argument("build_block_process: map index out of range");

    // states per stored block: sum over depth j < k of 4^j
    uint64_t per_block = 0;
    for (size_t j = 0; j < k; ++j) per_block += uint64_t{1} << (2 * j);
    uint64_t total = per_block * n_blocks;
    if (total > state_cap)
        throw std::runtime_error(
            "build_block_process: state cap exceeded (" + std::to_string(total) +
            " states for k=" + std::to_string(k) + ")");

    // subtree masses of each family distribution over the content tree
    std::vector<std::vector<Rat>> mass(family.size());
    for (size_t f = 0; f < family.size(); ++f) {
        if (family[f].size() != n_blocks)
            throw std::invalid_argument("build_block_process: bad distribution size");
        auto& t = mass[f];
        t.assign(2 * n_blocks, Rat());
        for (size_t sym = 0; sym < n_blocks; ++sym)
            t[n_blocks + sym] = family[f][sym];
        for (size_t v = n_blocks - 1; v >= 1; --v) t[v] = t[2 * v] + t[2 * v + 1];
        if (!t[1].is_one())
            throw std::invalid_argument(
                "build_block_process: distribution does not sum to 1");
    }

    // state index: for stored block g and depth j, prefix pair (ca, cb):
    // offset(g) + base(j) + (ca << j) + cb
    std::vector<uint64_t> base(k + 1, 0);
    for (size_t j = 1; j <= k; ++j)
        base[j] = base[j - 1] + (uint64_t{1} << (2 * (j - 1)));

    auto state_id = [&](uint64_t g, size_t j, uint64_t ca, uint64_t cb) {
        return g * per_block + base[j] + (ca << j) + cb;
    };

    BlockProcess out;
    out.lookahead = k;
    ProbProcess& m = out.process;
    m.state_names.resize(total);
    for (uint64_t g = 0; g < n_blocks; ++g)
        for (size_t j = 0; j < k; ++j)
            for (uint64_t ca = 0; ca < (uint64_t{1} << j); ++ca)
                for (uint64_t cb = 0; cb < (uint64_t{1} << j); ++cb) {
                    std::string name = "g" + BitString::unpack(g, k).str();
                    if (j)
                        name += "_a" + BitString::unpack(ca, j).str() + "b" +
                                BitString::unpack(cb, j).str();
                    m.state_names[state_id(g, j, ca, cb)] = name;
                }
    m.resize_emits();

    const Rat half(1, 2);
    for (uint64_t g = 0; g < n_blocks; ++g) {
        const auto& t = mass[cmap[g]];
        for (size_t j = 0; j < k; ++j) {
            for (uint64_t ca = 0; ca < (uint64_t{1} << j); ++ca) {
                uint64_t node = (uint64_t{1} << j) + ca;
                Rat q0 = t[node].is_zero() ? half : t[2 * node] / t[node];
                for (uint64_t cb = 0; cb < (uint64_t{1} << j); ++cb) {
                    uint64_t sid = state_id(g, j, ca, cb);
                    for (uint8_t b : {uint8_t{0}, uint8_t{1}}) {
                        ProbProcess::Emit e;
                        e.q0 = q0;
                        if (j + 1 < k) {
                            e.next0 = static_cast<int>(
                                state_id(g, j + 1, ca << 1, (cb << 1) | b));
                            e.next1 = static_cast<int>(
                                state_id(g, j + 1, (ca << 1) | 1, (cb << 1) | b));
                        } else {
                            uint64_t next_block = ((cb << 1) | b) &
                                                  ((uint64_t{1} << k) - 1);
                            e.next0 = e.next1 =
                                static_cast<int>(state_id(next_block, 0, 0, 0));
                        }
                        m.slot(sid, b) = e;
                    }
                }
            }
        }
    }
    for (uint64_t g = 0; g < n_blocks; ++g)
        out.block_start_states.push_back(static_cast<int>(state_id(g, 0, 0, 0)));
    m.start = out.block_start_states[0];
    return out;
}

// Martingale of the process measure against the uniform measure: the
// gambler bets the emission probabilities read off the last window bit,
// so its capital is m_{M,s}(a_1..a_N | b_{1+c}..b_{N+c}) * 2^N exactly.
inline GamblerSpec process_to_gambler(const ProbProcess& m, int lookahead) {
    auto v = validate_process(m);
    if (!v.ok) throw std::invalid_argument("process_to_gambler: " + v.error);
    GamblerSpec g;
    g.lookahead = lookahead;
    g.state_names = m.state_names;
    g.start = m.start;
    g.resize_bets();
    for (size_t s = 0; s < m.state_count(); ++s) {
        for (uint64_t w = 0; w < g.window_count(); ++w) {
            const auto& e = m.emit(s, static_cast<uint8_t>(w & 1));
            g.slot(s, w) = GamblerSpec::Bet{e.q0, e.next0, e.next1};
        }
    }
    return g;
}

struct MeasureTable {
    size_t len = 0;
    std::vector<Rat> prob; // indexed by packed content string
};

// P(X) = m_G(X | B) * 2^{-|X|} over all X of length |B| - c; sums to 1.
inline MeasureTable gambler_to_measure(const GamblerSpec& g, const BitString& b) {
    const size_t c = static_cast<size_t>(g.lookahead);
    if (b.size() < c)
        throw std::invalid_argument("gambler_to_measure: oracle shorter than look-ahead");
    MeasureTable t;
    t.len = b.size() - c;
    if (t.len > 20)
        throw std::invalid_argument("gambler_to_measure: content length too large");
    BigUint den(1);
    den.shl(t.len);
    Rat scale(BigUint(1), den);
    t.prob.reserve(size_t{1} << t.len);
    for (uint64_t x = 0; x < (uint64_t{1} << t.len); ++x)
        t.prob.push_back(capital_after(g, BitString::unpack(x, t.len), b) * scale);
    return t;
}

// One pass over the input computing ka-style values for every prefix
// length, restricted to the block-start states (the stored condition
// block is the only unknown at round one).
struct AprioriSweep {
    PerKEstimate ka_rate;        // min/max over N of ka_N / N
    double gambler_limsup = 0.0; // sup over starts of max_N log2(m)/N
    double gambler_liminf = 0.0; // best start's min_N log2(m)/N
    // min over starts of max_N (neglog/N); 1 - gambler_liminf without the
    // floating-point round trip
    double best_start_rate_sup = 0.0;
};

inline AprioriSweep apriori_sweep(const BitString& alpha, const BitString& beta,
                                  size_t k,
                                  const std::vector<std::vector<Rat>>& family,
                                  const std::vector<size_t>& cmap,
                                  uint64_t n_max_bits, uint64_t burn_in_bits) {
    const size_t n_blocks = size_t{1} << k;
    if (alpha.size() < n_max_bits || beta.size() < n_max_bits + k)
        throw std::invalid_argument("apriori_sweep: inputs too short");
    if (burn_in_bits >= n_max_bits)
        throw std::invalid_argument("burn_in must be below N_max");

    const double inf = std::numeric_limits<double>::infinity();
    // per-distribution log2 subtree masses over the content tree
    std::vector<std::vector<double>> logmass(family.size());
    for (size_t f = 0; f < family.size(); ++f) {
        std::vector<Rat> t(2 * n_blocks);
        for (size_t sym = 0; sym < n_blocks; ++sym) t[n_blocks + sym] = family[f][sym];
        for (size_t v = n_blocks - 1; v >= 1; --v) t[v] = t[2 * v] + t[2 * v + 1];
        logmass[f].resize(2 * n_blocks);
        for (size_t v = 1; v < 2 * n_blocks; ++v)
            logmass[f][v] = t[v].is_zero() ? -inf : t[v].log2();
    }

    struct Tracker {
        size_t dist;
        uint64_t node = 1;
        uint64_t buf = 0;
        double neglog = 0.0;
        double rate_sup = -1.0; // max over N of neglog / N
        bool dead = false;
    };
    std::vector<Tracker> starts(n_blocks);
    for (uint64_t g = 0; g < n_blocks; ++g) starts[g].dist = cmap[g];

    AprioriSweep out;
    out.ka_rate = {inf, -inf};
    double min_rate_all = inf; // min over N >= burn, starts of neglog / N
    size_t depth = 0;
    for (uint64_t i = 0; i < n_max_bits; ++i) {
        uint8_t a = alpha[i];
        uint8_t b = beta[i + k];
        double ka_n = inf;
        for (auto& t : starts) {
            if (!t.dead) {
                const auto& lm = logmass[t.dist];
                uint64_t child = 2 * t.node + a;
                if (lm[t.node] == -inf) {
                    t.neglog += 1.0; // zero-mass subtree: conditionals are 1/2
                } else if (lm[child] == -inf) {
                    t.dead = true;
                } else {
                    t.neglog += lm[t.node] - lm[child];
                }
                t.node = child;
                t.buf = (t.buf << 1) | b;
                if (depth + 1 == k) {
                    t.dist = cmap[t.buf & (n_blocks - 1)];
                    t.node = 1;
                    t.buf = 0;
                }
            }
            double cur = t.dead ? inf : t.neglog;
            ka_n = std::min(ka_n, cur);
            if (i + 1 >= std::max<uint64_t>(burn_in_bits, 1)) {
                double rate = cur / static_cast<double>(i + 1);
                t.rate_sup = std::max(t.rate_sup, rate);
            }
        }
        depth = (depth + 1) % k;
        if (i + 1 >= std::max<uint64_t>(burn_in_bits, 1)) {
            double rate = ka_n / static_cast<double>(i + 1);
            out.ka_rate.inf = std::min(out.ka_rate.inf, rate);
            out.ka_rate.sup = std::max(out.ka_rate.sup, rate);
            min_rate_all = std::min(min_rate_all, rate);
        }
    }
    out.gambler_limsup = 1.0 - min_rate_all;
    double best_rate_sup = inf;
    for (const auto& t : starts)
        best_rate_sup = std::min(best_rate_sup, t.rate_sup);
    out.best_start_rate_sup = best_rate_sup;
    out.gambler_liminf = 1.0 - best_rate_sup;
    return out;
}

struct AprioriEstimateDetail {
    DimEstimate estimate;
    std::vector<std::vector<Rat>> family; // one distribution per condition
    std::vector<size_t> cmap;             // identity over conditions
    AprioriSweep sweep;
};

// Family construction per condition: the exact empirical conditional
// distribution (observed blocks never have probability zero under it, and
// the sweep stays inside the window the family was built from), uniform
// for conditions never observed.
inline std::vector<std::vector<Rat>> apriori_family(const EmpiricalConditionals& e) {
    const size_t n = size_t{1} << e.k;
    std::vector<std::vector<Rat>> family(n);
    for (size_t b = 0; b < n; ++b) {
        if (e.cond_total[b] == 0) {
            family[b].assign(n, Rat(1, n));
            continue;
        }
        family[b].resize(n);
        for (size_t a = 0; a < n; ++a)
            family[b][a] = Rat(e.counts[b][a], e.cond_total[b]);
    }
    return family;
}

inline AprioriEstimateDetail dim_estimate_apriori_detail(const BitString& alpha,
                                                         const BitString& beta,
                                                         size_t k,
                                                         uint64_t n_max_bits,
                                                         uint64_t burn_in_bits) {
    if (beta.size() < n_max_bits + k)
        throw std::invalid_argument("dim_estimate_apriori: oracle too short for look-ahead");
    uint64_t n_full_blocks = n_max_bits / k;
    if (n_full_blocks < 1)
        throw std::invalid_argument("dim_estimate_apriori: no complete block");
    // The process conditions content block j on its stored block, which is
    // the plain aligned beta block j; the +k shift affects only which bits
    // the process reads while emitting (the buffer for block j+1).
    JointBlockDist dist =
        joint_block_dist(alpha, beta, k, n_full_blocks, BlockMode::aligned);
    AprioriEstimateDetail out;
    out.family = apriori_family(empirical_conditionals(dist));
    out.cmap.resize(size_t{1} << k);
    for (size_t b = 0; b < out.cmap.size(); ++b) out.cmap[b] = b;
    out.sweep = apriori_sweep(alpha, beta, k, out.family, out.cmap, n_max_bits,
                              burn_in_bits);
    out.estimate.burn_in = burn_in_bits;
    out.estimate.per_k[k] = out.sweep.ka_rate;
    out.estimate.finalize();
    return out;
}

inline DimEstimate dim_estimate_apriori(const BitString& alpha,
                                        const BitString& beta, size_t k,
                                        uint64_t n_max_bits,
                                        uint64_t burn_in_bits) {
    return dim_estimate_apriori_detail(alpha, beta, k, n_max_bits, burn_in_bits)
        .estimate;
}

} // namespace fsdim

#endif
