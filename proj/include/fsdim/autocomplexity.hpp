#ifndef FSDIM_AUTOCOMPLEXITY_HPP
#define FSDIM_AUTOCOMPLEXITY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsdim/bitseq.hpp"
#include "fsdim/blockstat.hpp"
#include "fsdim/rational.hpp"

namespace fsdim {

// Labeled multigraph defining an automatic description mode.  An edge may
// carry an (a,b) io pair, a description bit p, both, or neither; paths may
// start and end at any vertex.
struct ModeEdge {
    int from = 0;
    int to = 0;
    bool has_io = false;
    uint8_t a = 0, b = 0;
    bool has_p = false;
    uint8_t p = 0;
};

struct DescriptionMode {
    size_t vertex_count = 0;
    std::vector<ModeEdge> edges;
    int declared_valence = 1;
    // Optional; synthesized as v0, v1, ... when empty.
    std::vector<std::string> vertex_names;

    std::string vertex_name(size_t i) const {
        if (i < vertex_names.size()) return vertex_names[i];
        return "v" + std::to_string(i);
    }
};

// Minimal number of description bits over all paths spelling (A, B), or
// nullopt when no path exists.  0/1 shortest path over (vertex, position)
// layers; zero-cost cycles are fine since costs are non-negative.
inline std::optional<uint64_t> ksd(const DescriptionMode& d, const BitString& a,
                                   const BitString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("ksd: |A| != |B|");
    const size_t n = a.size();
    const size_t v_count = d.vertex_count;
    if (v_count == 0) return std::nullopt;

    std::vector<std::vector<int>> out(v_count);
    for (int e = 0; e < static_cast<int>(d.edges.size()); ++e)
        out[static_cast<size_t>(d.edges[e].from)].push_back(e);

    const uint32_t inf = std::numeric_limits<uint32_t>::max();
    std::vector<uint32_t> dist(v_count * (n + 1), inf);
    std::deque<uint32_t> queue;
    for (size_t v = 0; v < v_count; ++v) {
        dist[v * (n + 1)] = 0;
        queue.push_back(static_cast<uint32_t>(v * (n + 1)));
    }
    while (!queue.empty()) {
        uint32_t node = queue.front();
        queue.pop_front();
        size_t v = node / (n + 1), pos = node % (n + 1);
        uint32_t base = dist[node];
        for (int ei : out[v]) {
            const ModeEdge& e = d.edges[static_cast<size_t>(ei)];
            size_t npos = pos;
            if (e.has_io) {
                if (pos >= n || a[pos] != e.a || b[pos] != e.b) continue;
                npos = pos + 1;
            }
            uint32_t cost = base + (e.has_p ? 1 : 0);
            uint32_t nn = static_cast<uint32_t>(e.to * (n + 1) + npos);
            if (cost < dist[nn]) {
                dist[nn] = cost;
                if (e.has_p) queue.push_back(nn);
                else queue.push_front(nn);
            }
        }
    }
    uint32_t best = inf;
    for (size_t v = 0; v < v_count; ++v)
        best = std::min(best, dist[v * (n + 1) + n]);
    if (best == inf) return std::nullopt;
    return best;
}

namespace detail {

// Set of A-strings of length <= 8, indexed by their packed value.
struct ABitset {
    std::array<uint64_t, 4> w{};

    bool any() const { return w[0] | w[1] | w[2] | w[3]; }
    void set(unsigned i) { w[i >> 6] |= uint64_t{1} << (i & 63); }
    bool or_with(const ABitset& o) {
        uint64_t changed = 0;
        for (int i = 0; i < 4; ++i) {
            uint64_t before = w[i];
            w[i] |= o.w[i];
            changed |= w[i] ^ before;
        }
        return changed != 0;
    }
    int popcount() const {
        int c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }
    template <typename F> void for_each(F f) const {
        for (int i = 0; i < 4; ++i) {
            uint64_t x = w[i];
            while (x) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(x));
                f(static_cast<unsigned>(i * 64) + bit);
                x &= x - 1;
            }
        }
    }
};

inline uint64_t interleave_zeros(uint32_t v32) {
    uint64_t v = v32;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
    v = (v | (v << 2)) & 0x3333333333333333ull;
    v = (v | (v << 1)) & 0x5555555555555555ull;
    return v;
}

// Maps every member r to 2r + bit: prefixes of length i become prefixes of
// length i+1 extended with the emitted bit.
inline ABitset spread(const ABitset& s, uint8_t bit) {
    ABitset r;
    for (int j = 0; j < 2; ++j) {
        uint64_t x = s.w[j];
        if (!x) continue;
        uint64_t lo = interleave_zeros(static_cast<uint32_t>(x)) << bit;
        uint64_t hi = interleave_zeros(static_cast<uint32_t>(x >> 32)) << bit;
        r.w[2 * j] |= lo;
        r.w[2 * j + 1] |= hi;
    }
    return r;
}

} // namespace detail

struct ModeValidation {
    bool ok = true;
    int c_obs = 0;
    std::string error;
    BitString witness_b, witness_p;
    std::vector<BitString> witness_as;
};

// Exhaustively counts, for every condition B with |B| <= l_max and every
// description P with |P| <= m_max, the distinct A with (A,B,P) realizable;
// reports the maximum and fails if it exceeds the declared valence.
inline ModeValidation validate_mode(const DescriptionMode& d, size_t l_max = 8,
                                    size_t m_max = 10) {
    if (l_max > 8)
        throw std::invalid_argument("validate_mode supports l_max <= 8");
    if (m_max > 14)
        throw std::invalid_argument("validate_mode supports m_max <= 14");
    ModeValidation res;
    const size_t v_count = d.vertex_count;
    if (v_count == 0) return res;

    std::vector<std::vector<int>> out(v_count);
    for (int e = 0; e < static_cast<int>(d.edges.size()); ++e)
        out[static_cast<size_t>(d.edges[e].from)].push_back(e);

    const size_t trie = size_t{1} << (m_max + 1); // ids 1 .. trie-1
    std::vector<detail::ABitset> dp;

    for (size_t blen = 0; blen <= l_max; ++blen) {
        for (uint64_t bv = 0; bv < (uint64_t{1} << blen); ++bv) {
            BitString b = BitString::unpack(bv, blen);
            dp.assign(trie * (blen + 1) * v_count, {});
            auto cell = [&](size_t pi, size_t i, size_t v) -> detail::ABitset& {
                return dp[(pi * (blen + 1) + i) * v_count + v];
            };
            for (size_t v = 0; v < v_count; ++v) cell(1, 0, v).set(0);

            for (size_t pi = 1; pi < trie; ++pi) {
                bool pi_can_grow = 2 * pi + 1 < trie;
                for (size_t i = 0; i <= blen; ++i) {
                    // epsilon closure within (pi, i)
                    bool changed = true;
                    while (changed) {
                        changed = false;
                        for (const ModeEdge& e : d.edges) {
                            if (e.has_io || e.has_p) continue;
                            const auto& src =
                                cell(pi, i, static_cast<size_t>(e.from));
                            if (!src.any()) continue;
                            detail::ABitset copy = src;
                            if (cell(pi, i, static_cast<size_t>(e.to))
                                    .or_with(copy))
                                changed = true;
                        }
                    }
                    for (size_t v = 0; v < v_count; ++v) {
                        const detail::ABitset src = cell(pi, i, v);
                        if (!src.any()) continue;
                        for (int ei : out[v]) {
                            const ModeEdge& e = d.edges[static_cast<size_t>(ei)];
                            if (!e.has_io && !e.has_p) continue;
                            size_t npi = pi;
                            if (e.has_p) {
                                if (!pi_can_grow) continue;
                                npi = 2 * pi + e.p;
                            }
                            if (e.has_io) {
                                if (i >= blen || b[i] != e.b) continue;
                                detail::ABitset ext = detail::spread(src, e.a);
                                cell(npi, i + 1, static_cast<size_t>(e.to))
                                    .or_with(ext);
                            } else {
                                cell(npi, i, static_cast<size_t>(e.to))
                                    .or_with(src);
                            }
                        }
                    }
                }
            }

            for (size_t pi = 1; pi < trie; ++pi) {
                detail::ABitset all;
                for (size_t v = 0; v < v_count; ++v)
                    all.or_with(cell(pi, blen, v));
                int cnt = all.popcount();
                if (cnt > res.c_obs) {
                    res.c_obs = cnt;
                    res.witness_b = b;
                    // recover P from the heap id
                    size_t plen = 0, tmp = pi;
                    while (tmp > 1) { tmp >>= 1; ++plen; }
                    res.witness_p =
                        BitString::unpack(pi - (size_t{1} << plen), plen);
                    res.witness_as.clear();
                    all.for_each([&](unsigned av) {
                        res.witness_as.push_back(BitString::unpack(av, blen));
                    });
                }
            }
        }
    }

    if (res.c_obs > d.declared_valence) {
        res.ok = false;
        res.error = "valence exceeded: observed " + std::to_string(res.c_obs) +
                    " > declared " + std::to_string(d.declared_valence) +
                    " at B=" + res.witness_b.str() + " P=" + res.witness_p.str();
    }
    return res;
}

// #{A : |A| = |B|, ksd(A,B) <= m}; the calibration bound compares this
// against c_obs * (2^{m+1} - 1).
inline uint64_t calibration_check(const DescriptionMode& d, uint64_t m,
                                  const BitString& b) {
    if (b.size() > 20)
        throw std::invalid_argument("calibration_check: |B| too large");
    uint64_t count = 0;
    for (uint64_t av = 0; av < (uint64_t{1} << b.size()); ++av) {
        auto k = ksd(d, BitString::unpack(av, b.size()), b);
        if (k && *k <= m) ++count;
    }
    return count;
}

struct SuperadditivitySample {
    BitString a1, b1, a2, b2;
};

struct SuperadditivityResult {
    bool ok = true;
    uint64_t cases = 0;
    SuperadditivitySample counterexample;
    std::string detail;
};

inline SuperadditivityResult check_superadditivity_ksd(
    const DescriptionMode& d, const std::vector<SuperadditivitySample>& samples) {
    SuperadditivityResult res;
    for (const auto& s : samples) {
        ++res.cases;
        auto whole = ksd(d, s.a1 + s.a2, s.b1 + s.b2);
        if (!whole) continue; // concatenation unrealizable: vacuously fine
        auto p1 = ksd(d, s.a1, s.b1);
        auto p2 = ksd(d, s.a2, s.b2);
        if (!p1 || !p2 || *whole < *p1 + *p2) {
            res.ok = false;
            res.counterexample = s;
            res.detail = "ksd(A1A2|B1B2)=" + std::to_string(*whole) +
                         " parts=" + (p1 ? std::to_string(*p1) : "none") + "+" +
                         (p2 ? std::to_string(*p2) : "none");
            return res;
        }
    }
    return res;
}

// Prefix-free code over the 2^k block alphabet.
struct PrefixCode {
    size_t k = 0;
    std::vector<BitString> codewords; // indexed by packed symbol

    size_t max_len() const {
        size_t m = 0;
        for (const auto& w : codewords) m = std::max(m, w.size());
        return m;
    }

    friend bool operator==(const PrefixCode& a, const PrefixCode& b) {
        return a.k == b.k && a.codewords == b.codewords;
    }
};

inline bool is_prefix_free(const PrefixCode& c) {
    for (size_t i = 0; i < c.codewords.size(); ++i)
        for (size_t j = 0; j < c.codewords.size(); ++j) {
            if (i == j) continue;
            const auto& wi = c.codewords[i];
            const auto& wj = c.codewords[j];
            if (wi.size() > wj.size()) continue;
            if (wj.prefix(wi.size()) == wi) return false;
        }
    return true;
}

inline Rat kraft_sum(const PrefixCode& c) {
    Rat sum;
    for (const auto& w : c.codewords)
        sum += Rat(BigUint(1), [&] {
            BigUint d(1);
            d.shl(w.size());
            return d;
        }());
    return sum;
}

// Huffman code with deterministic tie-breaking: nodes are ordered by
// (probability, lexicographically least contained symbol); the first of
// the two merged nodes takes branch bit 0.  Zero-probability symbols stay
// in the alphabet and receive codewords.
inline PrefixCode huffman_code(size_t k, const std::vector<Rat>& probs) {
    const size_t n = size_t{1} << k;
    if (probs.size() != n)
        throw std::invalid_argument("huffman_code: distribution must cover 2^k symbols");
    Rat total;
    for (const auto& p : probs) total += p;
    if (!total.is_one())
        throw std::invalid_argument("huffman_code: probabilities must sum to 1");

    struct Node {
        Rat p;
        uint64_t min_sym;
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    nodes.reserve(2 * n);
    for (uint64_t s = 0; s < n; ++s) nodes.push_back({probs[s], s, -1, -1});

    auto before = [&](int x, int y) {
        if (nodes[x].p != nodes[y].p) return nodes[x].p < nodes[y].p;
        return nodes[x].min_sym < nodes[y].min_sym;
    };

    // Two-queue merge: leaves sorted once, merged nodes appear in
    // non-decreasing order of the same key.
    std::vector<int> leaves(n);
    for (size_t i = 0; i < n; ++i) leaves[i] = static_cast<int>(i);
    std::sort(leaves.begin(), leaves.end(), before);
    std::deque<int> q1(leaves.begin(), leaves.end()), q2;
    auto pop_min = [&]() {
        int pick;
        if (q1.empty()) { pick = q2.front(); q2.pop_front(); }
        else if (q2.empty()) { pick = q1.front(); q1.pop_front(); }
        else if (before(q2.front(), q1.front())) { pick = q2.front(); q2.pop_front(); }
        else { pick = q1.front(); q1.pop_front(); }
        return pick;
    };
    while (q1.size() + q2.size() > 1) {
        int a = pop_min();
        int b = pop_min();
        Node merged{nodes[a].p + nodes[b].p,
                    std::min(nodes[a].min_sym, nodes[b].min_sym), a, b};
        nodes.push_back(merged);
        q2.push_back(static_cast<int>(nodes.size()) - 1);
    }
    int root = q1.empty() ? q2.front() : q1.front();

    PrefixCode code;
    code.k = k;
    code.codewords.resize(n);
    std::vector<std::pair<int, BitString>> stack{{root, BitString{}}};
    while (!stack.empty()) {
        auto [idx, word] = stack.back();
        stack.pop_back();
        if (nodes[idx].left < 0) {
            code.codewords[nodes[idx].min_sym] = word;
            continue;
        }
        BitString w0 = word, w1 = word;
        w0.push_back(0);
        w1.push_back(1);
        stack.emplace_back(nodes[idx].left, std::move(w0));
        stack.emplace_back(nodes[idx].right, std::move(w1));
    }
    return code;
}

struct CodeFamily {
    size_t k = 0;
    std::vector<PrefixCode> codes;
};

// Condition block -> index into a CodeFamily; total on the 2^k blocks.
struct ConditionMap {
    size_t k = 0;
    std::vector<size_t> code_index; // size 2^k
};

struct FamilyBuild {
    CodeFamily family;
    std::vector<size_t> code_of_dist; // per input distribution
};

inline FamilyBuild build_family_with_map(size_t k,
                                         const std::vector<std::vector<Rat>>& dists) {
    FamilyBuild out;
    out.family.k = k;
    for (const auto& dist : dists) {
        PrefixCode code = huffman_code(k, dist);
        size_t idx = out.family.codes.size();
        for (size_t i = 0; i < out.family.codes.size(); ++i)
            if (out.family.codes[i] == code) { idx = i; break; }
        if (idx == out.family.codes.size())
            out.family.codes.push_back(std::move(code));
        out.code_of_dist.push_back(idx);
    }
    return out;
}

// Deduplicated Huffman codes of the given distributions; for each input
// distribution its own Huffman code is in the family, so the minimum
// expected length over the family is at most H + 1.
inline CodeFamily build_code_family(size_t k,
                                    const std::vector<std::vector<Rat>>& dists) {
    if (dists.empty())
        throw std::invalid_argument("build_code_family: need at least one distribution");
    return build_family_with_map(k, dists).family;
}

// The condition-guessing block decoder.  From the hub the mode branches
// silently over a guessed condition block, walks that code's tree
// consuming description bits, then emits the decoded block paired with
// the guessed condition bits.  The last code bit rides on the edge that
// emits the first block bit, so every block costs exactly its codeword.
// Paths whose guess differs from the actual condition spell a different B
// and never pollute the relation.
inline DescriptionMode compile_block_mode(size_t k, const CodeFamily& family,
                                          const ConditionMap& cmap) {
    if (cmap.k != k || family.k != k)
        throw std::invalid_argument("compile_block_mode: k mismatch");
    const size_t n_blocks = size_t{1} << k;
    if (cmap.code_index.size() != n_blocks)
        throw std::invalid_argument("compile_block_mode: condition map not total");
    for (size_t idx : cmap.code_index)
        if (idx >= family.codes.size())
            throw std::invalid_argument("compile_block_mode: map index out of range");

    DescriptionMode mode;
    const int hub = 0;
    mode.vertex_count = 1;
    auto fresh = [&] { return static_cast<int>(mode.vertex_count++); };

    for (uint64_t g = 0; g < n_blocks; ++g) {
        const PrefixCode& code = family.codes[cmap.code_index[g]];
        BitString guess = BitString::unpack(g, k);

        // emit chains, one per decoded symbol; chain[t] emits bits t..k-1
        std::vector<std::vector<int>> chain(n_blocks);
        for (uint64_t sym = 0; sym < n_blocks; ++sym) {
            BitString block = BitString::unpack(sym, k);
            std::vector<int>& nodes = chain[sym];
            for (size_t t = 1; t < k; ++t) nodes.push_back(fresh());
            nodes.push_back(hub);
            for (size_t t = 1; t < k; ++t)
                mode.edges.push_back({nodes[t - 1], nodes[t], true, block[t],
                                      guess[t], false, 0});
        }

        // code tree over proper codeword prefixes; the edge completing a
        // codeword is fused with the first emitted bit
        struct TrieNode {
            int child[2] = {-1, -1};
            int vertex = 0;
        };
        std::vector<TrieNode> trie(1);
        trie[0].vertex = fresh();
        mode.edges.push_back({hub, trie[0].vertex, false, 0, 0, false, 0});
        for (uint64_t sym = 0; sym < n_blocks; ++sym) {
            const BitString& w = code.codewords[sym];
            BitString block = BitString::unpack(sym, k);
            int cur = 0;
            for (size_t t = 0; t + 1 < w.size(); ++t) {
                uint8_t x = w[t];
                if (trie[static_cast<size_t>(cur)].child[x] < 0) {
                    TrieNode node;
                    node.vertex = fresh();
                    mode.edges.push_back({trie[static_cast<size_t>(cur)].vertex,
                                          node.vertex, false, 0, 0, true, x});
                    trie[static_cast<size_t>(cur)].child[x] =
                        static_cast<int>(trie.size());
                    trie.push_back(node);
                }
                cur = trie[static_cast<size_t>(cur)].child[x];
            }
            mode.edges.push_back({trie[static_cast<size_t>(cur)].vertex,
                                  chain[sym][0], true, block[0], guess[0], true,
                                  w[w.size() - 1]});
        }
    }

    // With fixed (B, P) the continuation from any start vertex is fully
    // determined, so the valence cannot exceed the vertex count.
    mode.declared_valence = static_cast<int>(mode.vertex_count);
    return mode;
}

// Per-condition empirical block counts extracted from a joint distribution.
struct EmpiricalConditionals {
    size_t k = 0;
    uint64_t total_blocks = 0;
    std::vector<std::vector<uint64_t>> counts; // [condition][symbol]
    std::vector<uint64_t> cond_total;          // [condition]
};

inline EmpiricalConditionals empirical_conditionals(const JointBlockDist& d) {
    if (d.k > 10)
        throw std::invalid_argument(
            "empirical_conditionals: block size above 10 needs 4^k tables");
    EmpiricalConditionals e;
    e.k = d.k;
    e.total_blocks = d.total;
    const size_t n = size_t{1} << d.k;
    e.counts.assign(n, std::vector<uint64_t>(n, 0));
    e.cond_total.assign(n, 0);
    for (const auto& [key, cnt] : d.counts) {
        uint64_t a = JointBlockDist::key_content(key, d.k);
        uint64_t b = JointBlockDist::key_condition(key, d.k);
        e.counts[b][a] += cnt;
        e.cond_total[b] += cnt;
    }
    return e;
}

// Exact empirical conditional distributions; conditions never observed get
// the uniform distribution.
inline std::vector<std::vector<Rat>> conditional_dists(
    const EmpiricalConditionals& e) {
    const size_t n = size_t{1} << e.k;
    std::vector<std::vector<Rat>> dists(n, std::vector<Rat>(n));
    for (size_t b = 0; b < n; ++b) {
        if (e.cond_total[b] == 0) {
            for (size_t a = 0; a < n; ++a) dists[b][a] = Rat(1, n);
        } else {
            for (size_t a = 0; a < n; ++a)
                dists[b][a] = Rat(e.counts[b][a], e.cond_total[b]);
        }
    }
    return dists;
}

struct AutoEstimateDetail {
    DimEstimate estimate;
    CodeFamily family;
    ConditionMap cmap;
    DescriptionMode mode;
};

// Dimension estimate via the compiled block decoder at one block size.
// Per-condition Huffman codes are built from the empirical joint
// distribution at N_max; the per-prefix description length is the codeword
// length sum, which the compiled mode attains up to start/end slack.
inline AutoEstimateDetail dim_estimate_auto_detail(const BitString& alpha,
                                                   const BitString& beta,
                                                   size_t k, uint64_t n_max,
                                                   uint64_t burn_in) {
    if (burn_in >= n_max)
        throw std::invalid_argument("burn_in must be below N_max");
    JointBlockDist dist =
        joint_block_dist(alpha, beta, k, n_max, BlockMode::aligned);
    EmpiricalConditionals emp = empirical_conditionals(dist);
    FamilyBuild built = build_family_with_map(k, conditional_dists(emp));

    AutoEstimateDetail out;
    out.family = std::move(built.family);
    out.cmap.k = k;
    out.cmap.code_index = std::move(built.code_of_dist);
    out.mode = compile_block_mode(k, out.family, out.cmap);

    std::vector<uint32_t> len_of(size_t{1} << (2 * k));
    for (uint64_t b = 0; b < (uint64_t{1} << k); ++b) {
        const PrefixCode& code = out.family.codes[out.cmap.code_index[b]];
        for (uint64_t a = 0; a < (uint64_t{1} << k); ++a)
            len_of[(a << k) | b] = static_cast<uint32_t>(code.codewords[a].size());
    }

    PerKEstimate pk{std::numeric_limits<double>::infinity(), 0.0};
    uint64_t cum = 0;
    for (uint64_t j = 0; j < n_max; ++j) {
        cum += len_of[detail::packed_pair(alpha, beta, k, j, BlockMode::aligned)];
        uint64_t n = j + 1;
        if (n < std::max<uint64_t>(burn_in, 1)) continue;
        double v = static_cast<double>(cum) /
                   (static_cast<double>(k) * static_cast<double>(n));
        pk.inf = std::min(pk.inf, v);
        pk.sup = std::max(pk.sup, v);
    }
    out.estimate.burn_in = burn_in;
    out.estimate.per_k[k] = pk;
    out.estimate.finalize();
    return out;
}

inline DimEstimate dim_estimate_auto(const BitString& alpha,
                                     const BitString& beta, size_t k,
                                     uint64_t n_max, uint64_t burn_in) {
    return dim_estimate_auto_detail(alpha, beta, k, n_max, burn_in).estimate;
}

} // namespace fsdim

#endif
