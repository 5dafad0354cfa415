#ifndef FSDIM_GAMBLER_HPP
#define FSDIM_GAMBLER_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fsdim/bitseq.hpp"
#include "fsdim/rational.hpp"

namespace fsdim {

// Finite-state gambler with oracle look-ahead c.  Before betting on bit
// a_i the gambler sees the window beta[i..i+c] (c+1 bits); the stake is
// the fraction of capital placed on 0, and the state transition consumes
// the revealed bit.
struct GamblerSpec {
    struct Bet {
        Rat stake0;
        int next0 = 0;
        int next1 = 0;
    };

    int lookahead = 0;
    std::vector<std::string> state_names;
    int start = 0;
    std::vector<std::optional<Bet>> bets; // [state * window_count + window]

    size_t window_count() const { return size_t{1} << (lookahead + 1); }
    size_t state_count() const { return state_names.size(); }

    std::optional<Bet>& slot(size_t s, uint64_t w) {
        return bets[s * window_count() + w];
    }
    const std::optional<Bet>& slot(size_t s, uint64_t w) const {
        return bets[s * window_count() + w];
    }

    const Bet& bet(size_t s, uint64_t w) const {
        const auto& e = slot(s, w);
        if (!e)
            throw std::runtime_error("gambler: missing transition at state " +
                                     state_names[s] + ", window " +
                                     BitString::unpack(w, lookahead + 1).str());
        return *e;
    }

    void resize_bets() { bets.assign(state_count() * window_count(), std::nullopt); }
};

struct GamblerValidation {
    bool ok = true;
    std::string error;
};

inline GamblerValidation validate_gambler(const GamblerSpec& g) {
    GamblerValidation v;
    if (g.state_count() == 0) return {false, "gambler has no states"};
    if (g.start < 0 || static_cast<size_t>(g.start) >= g.state_count())
        return {false, "start state out of range"};
    if (g.bets.size() != g.state_count() * g.window_count())
        return {false, "bet table has wrong size"};
    const Rat one(1);
    for (size_t s = 0; s < g.state_count(); ++s) {
        for (uint64_t w = 0; w < g.window_count(); ++w) {
            const auto& e = g.slot(s, w);
            std::string where = "state " + g.state_names[s] + ", window " +
                                BitString::unpack(w, g.lookahead + 1).str();
            if (!e) return {false, "missing transition: " + where};
            if (e->stake0 > one)
                return {false, "stake out of range: " + where};
            for (int next : {e->next0, e->next1})
                if (next < 0 || static_cast<size_t>(next) >= g.state_count())
                    return {false, "missing transition: " + where};
        }
    }
    return v;
}

// Exact capital as an unreduced fraction.  Products over thousands of
// rounds stay cheap because each step multiplies by a small factor;
// normalization happens only when a caller asks for a Rat.
struct ExactCapital {
    BigUint num{1};
    BigUint den{1};

    double log2() const { return num.log2() - den.log2(); }
    Rat to_rat() const { return Rat(num, den); }
};

inline bool exact_eq(const ExactCapital& a, const ExactCapital& b) {
    return a.num * b.den == b.num * a.den;
}

inline bool exact_eq(const ExactCapital& a, const Rat& b) {
    return a.num * b.den() == b.num() * a.den;
}

struct CapitalTrajectory {
    // values[i] = m_i held exactly, for i <= exact limit; log2_values[i]
    // covers the whole run, with -inf once the capital hits zero.
    std::vector<ExactCapital> values;
    std::vector<double> log2_values;

    size_t rounds() const { return log2_values.size() - 1; }
};

inline constexpr uint64_t kDefaultExactLimit = 4096;

inline CapitalTrajectory run_gambler(const GamblerSpec& g,
                                     const BitString& alpha,
                                     const BitString& beta, uint64_t n_rounds,
                                     uint64_t exact_limit = kDefaultExactLimit) {
    const size_t c = static_cast<size_t>(g.lookahead);
    if (alpha.size() < n_rounds)
        throw std::invalid_argument("alpha shorter than round count");
    if (beta.size() < n_rounds + c)
        throw std::invalid_argument("oracle too short: need " +
                                    std::to_string(n_rounds + c) + " bits");
    CapitalTrajectory traj;
    traj.values.reserve(std::min(n_rounds, exact_limit) + 1);
    traj.log2_values.reserve(n_rounds + 1);
    ExactCapital cap;
    traj.values.push_back(cap);
    traj.log2_values.push_back(0.0);

    int state = g.start;
    bool exact = exact_limit > 0;
    bool broke = false;
    double logm = 0.0;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (uint64_t i = 0; i < n_rounds; ++i) {
        const auto& bet = g.bet(static_cast<size_t>(state), beta.pack(i, c + 1));
        uint8_t a = alpha[i];
        const BigUint& qn = bet.stake0.num();
        const BigUint& qd = bet.stake0.den();
        BigUint part = (a == 0) ? qn : qd - qn;
        if (!broke) {
            if (part.is_zero()) {
                broke = true;
            } else if (exact) {
                BigUint two_part = part;
                two_part.shl(1);
                cap.num = cap.num * two_part;
                cap.den = cap.den * qd;
            } else {
                logm += 1.0 + part.log2() - qd.log2();
            }
        }
        if (broke) {
            if (exact) cap.num = BigUint(0);
            logm = neg_inf;
        } else if (exact) {
            logm = cap.log2();
        }
        if (exact) {
            traj.values.push_back(cap);
            if (static_cast<uint64_t>(traj.values.size()) > exact_limit) {
                exact = false;
            }
        }
        traj.log2_values.push_back(logm);
        state = (a == 0) ? bet.next0 : bet.next1;
    }
    return traj;
}

struct ExponentEstimate {
    double limsup_est = 0.0;
    double liminf_est = 0.0;
    uint64_t burn_in = 0;
};

inline ExponentEstimate exponent_estimates(const CapitalTrajectory& traj,
                                           uint64_t burn_in) {
    uint64_t n = traj.rounds();
    uint64_t lo = std::max<uint64_t>(burn_in, 1);
    if (n < lo) throw std::invalid_argument("trajectory shorter than burn_in");
    ExponentEstimate e;
    e.burn_in = burn_in;
    e.limsup_est = -std::numeric_limits<double>::infinity();
    e.liminf_est = std::numeric_limits<double>::infinity();
    for (uint64_t i = lo; i <= n; ++i) {
        double v = traj.log2_values[i] / static_cast<double>(i);
        e.limsup_est = std::max(e.limsup_est, v);
        e.liminf_est = std::min(e.liminf_est, v);
    }
    return e;
}

struct SgaleSeries {
    std::vector<double> values; // log2 of the s-gale after i rounds
    // Finite-horizon flags: the sup/inf over the second half of the run
    // compared against the first half.
    bool unbounded = false;
    bool tends_to_infinity = false;
};

inline SgaleSeries sgale_values(const CapitalTrajectory& traj, const Rat& s) {
    SgaleSeries out;
    const double shift = s.to_double() - 1.0;
    const size_t n = traj.rounds();
    out.values.resize(n + 1);
    for (size_t i = 0; i <= n; ++i)
        out.values[i] = traj.log2_values[i] + shift * static_cast<double>(i);
    if (n >= 2) {
        size_t mid = n / 2;
        double sup1 = -std::numeric_limits<double>::infinity(), sup2 = sup1;
        double inf1 = std::numeric_limits<double>::infinity(), inf2 = inf1;
        for (size_t i = 1; i <= mid; ++i) {
            sup1 = std::max(sup1, out.values[i]);
            inf1 = std::min(inf1, out.values[i]);
        }
        for (size_t i = mid + 1; i <= n; ++i) {
            sup2 = std::max(sup2, out.values[i]);
            inf2 = std::min(inf2, out.values[i]);
        }
        out.unbounded = sup2 > sup1 + 1e-9;
        out.tends_to_infinity = inf2 > inf1 + 1e-9;
    }
    return out;
}

// One finite-state gambler equivalent to running the given gamblers on
// separate accounts and redistributing the pooled capital evenly after
// every T rounds.  States are (component states, round within the period,
// exact capital shares); only states reachable from the uniform start are
// constructed.
inline GamblerSpec combine_accounts(const std::vector<GamblerSpec>& gs,
                                    uint64_t period,
                                    size_t state_cap = 1000000) {
    if (gs.empty()) throw std::invalid_argument("combine_accounts: empty list");
    if (period < 1) throw std::invalid_argument("combine_accounts: T must be >= 1");
    const int c = gs[0].lookahead;
    for (const auto& g : gs) {
        if (g.lookahead != c)
            throw std::invalid_argument("combine_accounts: mixed look-ahead");
        auto v = validate_gambler(g);
        if (!v.ok)
            throw std::invalid_argument("combine_accounts: invalid gambler: " +
                                        v.error);
    }
    const size_t l = gs.size();
    const Rat uniform_share(1, l);

    struct Key {
        std::vector<int> comp;
        uint64_t r;
        std::vector<Rat> shares;
        bool operator<(const Key& o) const {
            if (comp != o.comp) return comp < o.comp;
            if (r != o.r) return r < o.r;
            for (size_t i = 0; i < shares.size(); ++i) {
                if (shares[i] != o.shares[i]) return shares[i] < o.shares[i];
            }
            return false;
        }
    };

    std::map<Key, int> index;
    std::vector<Key> order;
    auto intern = [&](const Key& k) {
        auto [it, inserted] = index.emplace(k, static_cast<int>(order.size()));
        if (inserted) {
            order.push_back(k);
            if (order.size() > state_cap)
                throw std::runtime_error("combine_accounts: state cap exceeded");
        }
        return it->second;
    };

    Key start;
    start.r = 0;
    for (const auto& g : gs) start.comp.push_back(g.start);
    start.shares.assign(l, uniform_share);
    intern(start);

    GamblerSpec out;
    out.lookahead = c;
    out.start = 0;

    const uint64_t windows = uint64_t{1} << (c + 1);
    std::vector<std::vector<GamblerSpec::Bet>> rows;
    for (size_t idx = 0; idx < order.size(); ++idx) {
        const Key cur = order[idx];
        std::vector<GamblerSpec::Bet> row;
        row.reserve(windows);
        for (uint64_t w = 0; w < windows; ++w) {
            Rat pooled_stake;
            std::vector<Rat> q(l);
            for (size_t j = 0; j < l; ++j) {
                q[j] = gs[j].bet(static_cast<size_t>(cur.comp[j]), w).stake0;
                pooled_stake += cur.shares[j] * q[j];
            }
            GamblerSpec::Bet bet;
            bet.stake0 = pooled_stake;
            for (uint8_t a : {uint8_t{0}, uint8_t{1}}) {
                Key next;
                next.r = (cur.r + 1) % period;
                next.comp.resize(l);
                std::vector<Rat> parts(l);
                Rat total;
                for (size_t j = 0; j < l; ++j) {
                    const auto& b = gs[j].bet(static_cast<size_t>(cur.comp[j]), w);
                    next.comp[j] = (a == 0) ? b.next0 : b.next1;
                    parts[j] = cur.shares[j] *
                               (a == 0 ? q[j] : Rat(1) - q[j]);
                    total += parts[j];
                }
                if (cur.r + 1 == period || total.is_zero()) {
                    // Redistribution round, or the pool went broke (shares
                    // are then immaterial and pinned to uniform).
                    next.shares.assign(l, uniform_share);
                } else {
                    next.shares.resize(l);
                    for (size_t j = 0; j < l; ++j)
                        next.shares[j] = parts[j] / total;
                }
                int ni = intern(next);
                (a == 0 ? bet.next0 : bet.next1) = ni;
            }
            row.push_back(std::move(bet));
        }
        rows.push_back(std::move(row));
    }

    out.state_names.reserve(order.size());
    for (size_t i = 0; i < order.size(); ++i)
        out.state_names.push_back("c" + std::to_string(i));
    out.resize_bets();
    for (size_t s = 0; s < rows.size(); ++s)
        for (uint64_t w = 0; w < windows; ++w)
            out.slot(s, w) = rows[s][w];
    return out;
}

// Capital after playing x against oracle prefix of b, as an exact rational.
inline Rat capital_after(const GamblerSpec& g, const BitString& x,
                         const BitString& b) {
    const size_t c = static_cast<size_t>(g.lookahead);
    if (b.size() < x.size() + c)
        throw std::invalid_argument("oracle too short for martingale check");
    Rat m(1);
    int state = g.start;
    for (size_t i = 0; i < x.size(); ++i) {
        const auto& bet = g.bet(static_cast<size_t>(state), b.pack(i, c + 1));
        Rat part = x[i] == 0 ? bet.stake0 : Rat(1) - bet.stake0;
        m = m * Rat(2) * part;
        state = x[i] == 0 ? bet.next0 : bet.next1;
    }
    return m;
}

struct MartingaleCheckResult {
    bool ok = true;
    BitString counterexample;
    Rat lhs, rhs; // m(X0) + m(X1) vs 2 m(X)
};

// Verifies m(X0) + m(X1) = 2 m(X) for every X up to the given depth, each
// capital recomputed by an independent replay.
inline MartingaleCheckResult martingale_check(const GamblerSpec& g,
                                              const BitString& b,
                                              size_t depth = 6) {
    const size_t c = static_cast<size_t>(g.lookahead);
    if (b.size() < depth + c)
        throw std::invalid_argument("oracle too short for requested depth");
    for (size_t len = 0; len < depth; ++len) {
        for (uint64_t v = 0; v < (uint64_t{1} << len); ++v) {
            BitString x = BitString::unpack(v, len);
            BitString x0 = x, x1 = x;
            x0.push_back(0);
            x1.push_back(1);
            Rat lhs = capital_after(g, x0, b) + capital_after(g, x1, b);
            Rat rhs = Rat(2) * capital_after(g, x, b);
            if (lhs != rhs) return {false, x, lhs, rhs};
        }
    }
    return {};
}

} // namespace fsdim

#endif
