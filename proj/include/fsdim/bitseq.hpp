#ifndef FSDIM_BITSEQ_HPP
#define FSDIM_BITSEQ_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsdim {

// Finite word over {0,1}.  One byte per bit keeps indexing trivial; the
// sequences this library handles top out around 2^20 bits.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
        for (uint8_t b : bits_)
            if (b > 1) throw std::invalid_argument("BitString element not 0/1");
    }

    static BitString from_string(std::string_view s) {
        BitString r;
        r.bits_.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("BitString literal must be 0/1");
            r.bits_.push_back(static_cast<uint8_t>(c - '0'));
        }
        return r;
    }

    static BitString zeros(size_t n) {
        BitString r;
        r.bits_.assign(n, 0);
        return r;
    }

    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    uint8_t operator[](size_t i) const { return bits_[i]; }
    void push_back(uint8_t b) { bits_.push_back(b & 1); }
    void reserve(size_t n) { bits_.reserve(n); }

    BitString substr(size_t pos, size_t len) const {
        if (pos + len > bits_.size())
            throw std::out_of_range("BitString::substr out of range");
        BitString r;
        r.bits_.assign(bits_.begin() + static_cast<long>(pos),
                       bits_.begin() + static_cast<long>(pos + len));
        return r;
    }

    BitString prefix(size_t len) const { return substr(0, len); }

    friend BitString operator+(const BitString& a, const BitString& b) {
        BitString r = a;
        r.bits_.insert(r.bits_.end(), b.bits_.begin(), b.bits_.end());
        return r;
    }

    // Packs bits [pos, pos+k) big-endian into an integer; k <= 63.
    uint64_t pack(size_t pos, size_t k) const {
        uint64_t v = 0;
        for (size_t i = 0; i < k; ++i) v = (v << 1) | bits_[pos + i];
        return v;
    }

    static BitString unpack(uint64_t v, size_t k) {
        BitString r;
        r.bits_.resize(k);
        for (size_t i = 0; i < k; ++i)
            r.bits_[k - 1 - i] = static_cast<uint8_t>((v >> i) & 1);
        return r;
    }

    std::string str() const {
        std::string s(bits_.size(), '0');
        for (size_t i = 0; i < bits_.size(); ++i) s[i] += bits_[i];
        return s;
    }

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.bits_ == b.bits_;
    }
    friend bool operator!=(const BitString& a, const BitString& b) {
        return a.bits_ != b.bits_;
    }
    friend bool operator<(const BitString& a, const BitString& b) {
        return a.bits_ < b.bits_;
    }

private:
    std::vector<uint8_t> bits_;
};

// splitmix64, fixed constants for bit-exact reproducibility.
inline uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SequenceSpec {
    enum class Kind { champernowne, periodic, bernoulli, file };

    Kind kind = Kind::champernowne;
    BitString pattern;           // periodic
    uint64_t p_num = 1, p_den = 2; // bernoulli, bit = 1 with prob p_num/p_den
    uint64_t seed = 0;           // bernoulli
    std::string path;            // file

    static SequenceSpec champernowne() { return SequenceSpec{}; }

    static SequenceSpec periodic(BitString pat) {
        SequenceSpec s;
        s.kind = Kind::periodic;
        s.pattern = std::move(pat);
        return s;
    }

    static SequenceSpec bernoulli(uint64_t num, uint64_t den, uint64_t seed) {
        SequenceSpec s;
        s.kind = Kind::bernoulli;
        s.p_num = num;
        s.p_den = den;
        s.seed = seed;
        return s;
    }

    static SequenceSpec file(std::string p) {
        SequenceSpec s;
        s.kind = Kind::file;
        s.path = std::move(p);
        return s;
    }

    // Text form used by the CLI and config files:
    //   champernowne | zeros | ones | periodic:<bits> |
    //   bernoulli:<num>/<den>:<seed> | file:<path>
    static SequenceSpec parse(std::string_view s) {
        if (s == "champernowne") return champernowne();
        if (s == "zeros") return periodic(BitString::from_string("0"));
        if (s == "ones") return periodic(BitString::from_string("1"));
        if (s.rfind("periodic:", 0) == 0)
            return periodic(BitString::from_string(s.substr(9)));
        if (s.rfind("bernoulli:", 0) == 0) {
            std::string rest(s.substr(10));
            size_t colon = rest.rfind(':');
            if (colon == std::string::npos)
                throw std::invalid_argument(
                    "bernoulli spec needs bernoulli:<num>/<den>:<seed>");
            std::string frac = rest.substr(0, colon);
            size_t slash = frac.find('/');
            if (slash == std::string::npos)
                throw std::invalid_argument("bernoulli probability needs num/den");
            return bernoulli(std::stoull(frac.substr(0, slash)),
                             std::stoull(frac.substr(slash + 1)),
                             std::stoull(rest.substr(colon + 1)));
        }
        if (s.rfind("file:", 0) == 0) return file(std::string(s.substr(5)));
        // bare path, e.g. "seq.txt"
        if (s.find('.') != std::string_view::npos ||
            s.find('/') != std::string_view::npos)
            return file(std::string(s));
        throw std::invalid_argument("unrecognized sequence spec: " + std::string(s));
    }

    std::string str() const {
        switch (kind) {
        case Kind::champernowne: return "champernowne";
        case Kind::periodic: return "periodic:" + pattern.str();
        case Kind::bernoulli:
            return "bernoulli:" + std::to_string(p_num) + "/" +
                   std::to_string(p_den) + ":" + std::to_string(seed);
        case Kind::file: return "file:" + path;
        }
        return "";
    }

    void validate() const {
        switch (kind) {
        case Kind::periodic:
            if (pattern.empty())
                throw std::invalid_argument("periodic pattern must be non-empty");
            break;
        case Kind::bernoulli:
            if (p_den == 0 || p_num > p_den)
                throw std::invalid_argument(
                    "bernoulli probability must satisfy 0 <= p_num <= p_den, p_den > 0");
            break;
        default:
            break;
        }
    }
};

inline BitString read_bits_text(std::string_view text) {
    BitString r;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '0' || c == '1') {
            r.push_back(static_cast<uint8_t>(c - '0'));
        } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r' &&
                   c != '\v' && c != '\f') {
            throw std::runtime_error("illegal character '" + std::string(1, c) +
                                     "' at byte offset " + std::to_string(i));
        }
    }
    return r;
}

inline BitString read_bits(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open bit file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_bits_text(buf.str());
}

inline void write_bits(const std::string& path, const BitString& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bit file: " + path);
    const std::string s = x.str();
    for (size_t i = 0; i < s.size(); ++i) {
        out << s[i];
        if ((i + 1) % 64 == 0) out << '\n';
    }
    if (s.empty() || s.size() % 64 != 0) out << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

// First n bits of the sequence described by spec.  Deterministic, and
// generate(spec, n) is always a prefix of generate(spec, m) for n <= m.
inline BitString generate(const SequenceSpec& spec, size_t n) {
    spec.validate();
    BitString out;
    out.reserve(n);
    switch (spec.kind) {
    case SequenceSpec::Kind::champernowne: {
        // Binary expansions of 1, 2, 3, ... concatenated.
        for (uint64_t v = 1; out.size() < n; ++v) {
            uint64_t mask = 1;
            while (mask <= v / 2) mask <<= 1;
            for (; mask && out.size() < n; mask >>= 1)
                out.push_back((v & mask) ? 1 : 0);
        }
        break;
    }
    case SequenceSpec::Kind::periodic:
        for (size_t i = 0; i < n; ++i)
            out.push_back(spec.pattern[i % spec.pattern.size()]);
        break;
    case SequenceSpec::Kind::bernoulli: {
        uint64_t state = spec.seed;
        for (size_t i = 0; i < n; ++i) {
            uint64_t draw = splitmix64_next(state);
            // draw / 2^64 < p_num / p_den, compared exactly in 128 bits
            unsigned __int128 lhs =
                static_cast<unsigned __int128>(draw) * spec.p_den;
            unsigned __int128 rhs =
                static_cast<unsigned __int128>(spec.p_num) << 64;
            out.push_back(lhs < rhs ? 1 : 0);
        }
        break;
    }
    case SequenceSpec::Kind::file: {
        BitString data = read_bits(spec.path);
        if (data.size() < n)
            throw std::runtime_error("bit file shorter than requested prefix: " +
                                     spec.path);
        return data.prefix(n);
    }
    }
    return out;
}

// beta with b_{i+c} = x_i: result[i] = pad for i < c, else x[i-c]; the
// result keeps the length of x.
inline BitString shift_oracle(const BitString& x, size_t c, uint8_t pad) {
    BitString r;
    r.reserve(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        r.push_back(i < c ? (pad & 1) : x[i - c]);
    return r;
}

} // namespace fsdim

#endif
