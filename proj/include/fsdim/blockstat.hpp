#ifndef FSDIM_BLOCKSTAT_HPP
#define FSDIM_BLOCKSTAT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "fsdim/bitseq.hpp"

namespace fsdim {

enum class BlockMode { aligned, sliding };

inline const char* to_string(BlockMode m) {
    return m == BlockMode::aligned ? "aligned" : "sliding";
}

// Empirical joint distribution of (content block, condition block) pairs.
// Keys are the two k-bit blocks packed into one word, so k <= 31.
struct JointBlockDist {
    size_t k = 0;
    uint64_t total = 0;
    std::unordered_map<uint64_t, uint64_t> counts;     // (A<<k)|B -> count
    std::unordered_map<uint64_t, uint64_t> cond_counts; // B -> count

    uint64_t count(const BitString& a, const BitString& b) const {
        if (a.size() != k || b.size() != k)
            throw std::invalid_argument("block size mismatch");
        auto it = counts.find((a.pack(0, k) << k) | b.pack(0, k));
        return it == counts.end() ? 0 : it->second;
    }

    static uint64_t key_content(uint64_t key, size_t k) { return key >> k; }
    static uint64_t key_condition(uint64_t key, size_t k) {
        return key & ((uint64_t{1} << k) - 1);
    }
};

namespace detail {

inline void check_block_args(size_t k, uint64_t n_blocks) {
    if (k < 1 || k > 31) throw std::invalid_argument("block size k must be in [1,31]");
    if (n_blocks < 1) throw std::invalid_argument("block count N must be >= 1");
}

inline void check_length(const BitString& a, const BitString& b, size_t k,
                         uint64_t n_blocks, BlockMode mode) {
    size_t need = mode == BlockMode::aligned ? k * n_blocks : n_blocks + k - 1;
    if (a.size() < need || b.size() < need)
        throw std::invalid_argument("input shorter than required " +
                                    std::to_string(need) + " bits");
}

// Packed (A_i, B_i) for pair index i (0-based).
inline uint64_t packed_pair(const BitString& a, const BitString& b, size_t k,
                            uint64_t i, BlockMode mode) {
    size_t pos = mode == BlockMode::aligned ? static_cast<size_t>(i) * k
                                            : static_cast<size_t>(i);
    return (a.pack(pos, k) << k) | b.pack(pos, k);
}

} // namespace detail

inline JointBlockDist joint_block_dist(const BitString& alpha,
                                       const BitString& beta, size_t k,
                                       uint64_t n_blocks, BlockMode mode) {
    detail::check_block_args(k, n_blocks);
    detail::check_length(alpha, beta, k, n_blocks, mode);
    JointBlockDist d;
    d.k = k;
    d.total = n_blocks;
    for (uint64_t i = 0; i < n_blocks; ++i) {
        uint64_t key = detail::packed_pair(alpha, beta, k, i, mode);
        ++d.counts[key];
        ++d.cond_counts[key & ((uint64_t{1} << k) - 1)];
    }
    return d;
}

// Conditional Shannon entropy H(content | condition) in bits, in [0, k].
// With exact integer counts the only rounding comes from log2; summation
// runs in sorted key order so the value depends only on the counts, not
// on the order the pairs were inserted.
inline double cond_entropy(const JointBlockDist& d) {
    if (d.total == 0) throw std::invalid_argument("empty distribution");
    auto sorted_sum = [](const std::unordered_map<uint64_t, uint64_t>& m) {
        std::vector<std::pair<uint64_t, uint64_t>> items(m.begin(), m.end());
        std::sort(items.begin(), items.end());
        double s = 0.0;
        for (const auto& [key, n] : items)
            s += static_cast<double>(n) * std::log2(static_cast<double>(n));
        return s;
    };
    double h = (sorted_sum(d.cond_counts) - sorted_sum(d.counts)) /
               static_cast<double>(d.total);
    return std::clamp(h, 0.0, static_cast<double>(d.k));
}

// Incremental H_{k,N} sweep.  Calls visit(N, H_{k,N}) for every N in
// [1, n_max]; the caller decides what to aggregate.
template <typename Visit>
inline void cond_entropy_sweep(const BitString& alpha, const BitString& beta,
                               size_t k, uint64_t n_max, BlockMode mode,
                               Visit&& visit) {
    detail::check_block_args(k, n_max);
    detail::check_length(alpha, beta, k, n_max, mode);
    std::unordered_map<uint64_t, uint64_t> counts, cond;
    counts.reserve(1024);
    cond.reserve(1024);
    double s_pair = 0.0, s_cond = 0.0;
    const uint64_t cond_mask = (uint64_t{1} << k) - 1;
    for (uint64_t i = 0; i < n_max; ++i) {
        uint64_t key = detail::packed_pair(alpha, beta, k, i, mode);
        uint64_t& n = counts[key];
        if (n) s_pair -= static_cast<double>(n) * std::log2(static_cast<double>(n));
        ++n;
        s_pair += static_cast<double>(n) * std::log2(static_cast<double>(n));
        uint64_t& m = cond[key & cond_mask];
        if (m) s_cond -= static_cast<double>(m) * std::log2(static_cast<double>(m));
        ++m;
        s_cond += static_cast<double>(m) * std::log2(static_cast<double>(m));
        double h = (s_cond - s_pair) / static_cast<double>(i + 1);
        visit(i + 1, std::clamp(h, 0.0, static_cast<double>(k)));
    }
}

struct EntropyProfile {
    size_t k = 0;
    BlockMode mode = BlockMode::aligned;
    std::vector<std::pair<uint64_t, double>> points; // (N, H_{k,N})
};

inline EntropyProfile entropy_profile(const BitString& alpha,
                                      const BitString& beta, size_t k,
                                      const std::vector<uint64_t>& schedule,
                                      BlockMode mode) {
    if (schedule.empty())
        throw std::invalid_argument("entropy profile schedule is empty");
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("schedule must be strictly increasing");
    EntropyProfile p;
    p.k = k;
    p.mode = mode;
    size_t next = 0;
    cond_entropy_sweep(alpha, beta, k, schedule.back(), mode,
                       [&](uint64_t n, double h) {
                           if (next < schedule.size() && n == schedule[next]) {
                               p.points.emplace_back(n, h);
                               ++next;
                           }
                       });
    return p;
}

struct PerKEstimate {
    double inf = 0.0; // min over the N window of the per-bit value
    double sup = 0.0; // max over the same window
};

// Finite-horizon stand-ins for liminf/limsup: extrema of the per-bit value
// over N in [burn_in, N_max], then inf over k on both sides.
struct DimEstimate {
    double dim_est = 0.0;
    double Dim_est = 0.0;
    std::map<size_t, PerKEstimate> per_k;
    uint64_t burn_in = 0;

    void finalize() {
        dim_est = 1.0;
        Dim_est = 1.0;
        for (const auto& [k, e] : per_k) {
            dim_est = std::min(dim_est, e.inf);
            Dim_est = std::min(Dim_est, e.sup);
        }
    }
};

inline uint64_t default_burn_in(uint64_t n_max) {
    return std::max<uint64_t>(64, n_max / 16);
}

inline DimEstimate dim_estimate_entropy(const BitString& alpha,
                                        const BitString& beta, size_t k_max,
                                        uint64_t n_max, uint64_t burn_in,
                                        BlockMode mode) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (burn_in >= n_max)
        throw std::invalid_argument("burn_in must be below N_max");
    DimEstimate est;
    est.burn_in = burn_in;
    for (size_t k = 1; k <= k_max; ++k) {
        PerKEstimate pk{1.0, 0.0};
        cond_entropy_sweep(alpha, beta, k, n_max, mode,
                           [&](uint64_t n, double h) {
                               if (n < std::max<uint64_t>(burn_in, 1)) return;
                               double v = h / static_cast<double>(k);
                               pk.inf = std::min(pk.inf, v);
                               pk.sup = std::max(pk.sup, v);
                           });
        est.per_k[k] = pk;
    }
    est.finalize();
    return est;
}

struct DoublingCheck {
    double lhs = 0.0; // H_{2k,N} / 2k
    double rhs = 0.0; // H_{k,2N} / k
    bool holds = false;
};

// Block doubling never increases entropy per bit (aligned splits).
inline DoublingCheck check_doubling(const BitString& alpha,
                                    const BitString& beta, size_t k,
                                    uint64_t n_blocks) {
    DoublingCheck c;
    c.lhs = cond_entropy(joint_block_dist(alpha, beta, 2 * k, n_blocks,
                                          BlockMode::aligned)) /
            static_cast<double>(2 * k);
    c.rhs = cond_entropy(joint_block_dist(alpha, beta, k, 2 * n_blocks,
                                          BlockMode::aligned)) /
            static_cast<double>(k);
    c.holds = c.lhs <= c.rhs + 1e-12;
    return c;
}

struct MixtureCheck {
    double h_sliding = 0.0;   // entropy of the offset mixture
    double avg_offsets = 0.0; // mean entropy over the k aligned offsets
    bool holds = false;
};

// The sliding-window distribution over the first kN windows is the uniform
// mixture of the k offset-aligned distributions; its entropy sits between
// the average offset entropy and that average plus log2(k).
inline MixtureCheck mixture_bound_check(const BitString& alpha,
                                        const BitString& beta, size_t k,
                                        uint64_t n_blocks) {
    detail::check_block_args(k, n_blocks);
    size_t need = k * static_cast<size_t>(n_blocks) + k - 1;
    if (alpha.size() < need || beta.size() < need)
        throw std::invalid_argument("input shorter than required " +
                                    std::to_string(need) + " bits");
    MixtureCheck c;
    double sum = 0.0;
    for (size_t off = 0; off < k; ++off) {
        BitString a = alpha.substr(off, alpha.size() - off);
        BitString b = beta.substr(off, beta.size() - off);
        sum += cond_entropy(joint_block_dist(a, b, k, n_blocks,
                                             BlockMode::aligned));
    }
    c.avg_offsets = sum / static_cast<double>(k);
    c.h_sliding = cond_entropy(joint_block_dist(alpha, beta, k,
                                                k * n_blocks,
                                                BlockMode::sliding));
    double logk = std::log2(static_cast<double>(k));
    c.holds = c.avg_offsets <= c.h_sliding + 1e-12 &&
              c.h_sliding <= c.avg_offsets + logk + 1e-12;
    return c;
}

} // namespace fsdim

#endif
