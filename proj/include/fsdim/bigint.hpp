#ifndef FSDIM_BIGINT_HPP
#define FSDIM_BIGINT_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsdim {

// Arbitrary-precision unsigned integer, little-endian 32-bit limbs.
// Only the operations the library needs: exact capitals and probabilities
// are products and sums of non-negative rationals, so there is no sign.
class BigUint {
public:
    BigUint() = default;

    BigUint(uint64_t v) {
        if (v) {
            limbs_.push_back(static_cast<uint32_t>(v));
            if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
        }
    }

    static BigUint from_decimal(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("empty integer literal");
        BigUint r;
        for (char ch : s) {
            if (ch < '0' || ch > '9')
                throw std::invalid_argument("bad digit in integer literal");
            r.mul_small(10);
            r.add_small(static_cast<uint32_t>(ch - '0'));
        }
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }

    bool fits_u64() const { return limbs_.size() <= 2; }

    uint64_t to_u64() const {
        uint64_t v = 0;
        if (!limbs_.empty()) v = limbs_[0];
        if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
        return v;
    }

    size_t bit_length() const {
        if (limbs_.empty()) return 0;
        uint32_t top = limbs_.back();
        size_t b = 0;
        while (top) { ++b; top >>= 1; }
        return (limbs_.size() - 1) * 32 + b;
    }

    bool bit(size_t i) const {
        size_t limb = i / 32;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 32)) & 1;
    }

    static int compare(const BigUint& a, const BigUint& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i])
                return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }
    bool operator!=(const BigUint& o) const { return limbs_ != o.limbs_; }
    bool operator<(const BigUint& o) const { return compare(*this, o) < 0; }
    bool operator<=(const BigUint& o) const { return compare(*this, o) <= 0; }

    BigUint& operator+=(const BigUint& o) {
        if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            limbs_[i] = static_cast<uint32_t>(s);
            carry = s >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
        return *this;
    }

    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

    // Requires *this >= o.
    BigUint& operator-=(const BigUint& o) {
        assert(compare(*this, o) >= 0);
        int64_t borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            int64_t d = static_cast<int64_t>(limbs_[i]) - borrow -
                        (i < o.limbs_.size() ? static_cast<int64_t>(o.limbs_[i]) : 0);
            borrow = d < 0;
            limbs_[i] = static_cast<uint32_t>(d + (borrow << 32));
        }
        trim();
        return *this;
    }

    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }

    BigUint operator*(const BigUint& o) const {
        if (is_zero() || o.is_zero()) return BigUint{};
        std::vector<uint32_t> out(limbs_.size() + o.limbs_.size(), 0);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t carry = 0;
            uint64_t ai = limbs_[i];
            for (size_t j = 0; j < o.limbs_.size(); ++j) {
                uint64_t cur = out[i + j] + ai * o.limbs_[j] + carry;
                out[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            size_t pos = i + o.limbs_.size();
            while (carry) {
                uint64_t cur = out[pos] + carry;
                out[pos] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
                ++pos;
            }
        }
        BigUint r;
        r.limbs_ = std::move(out);
        r.trim();
        return r;
    }

    BigUint& operator*=(const BigUint& o) { return *this = *this * o; }

    void mul_small(uint64_t f) {
        if (f == 0 || is_zero()) { limbs_.clear(); return; }
        uint32_t lo = static_cast<uint32_t>(f);
        uint32_t hi = static_cast<uint32_t>(f >> 32);
        if (hi == 0) {
            uint64_t carry = 0;
            for (auto& limb : limbs_) {
                uint64_t cur = static_cast<uint64_t>(limb) * lo + carry;
                limb = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            while (carry) {
                limbs_.push_back(static_cast<uint32_t>(carry));
                carry >>= 32;
            }
        } else {
            *this = *this * BigUint(f);
        }
    }

    void add_small(uint64_t v) { *this += BigUint(v); }

    // In-place division by a small divisor; returns the remainder.
    uint32_t divmod_small(uint32_t d) {
        if (d == 0) throw std::invalid_argument("division by zero");
        uint64_t rem = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | limbs_[i];
            limbs_[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        trim();
        return static_cast<uint32_t>(rem);
    }

    size_t trailing_zero_bits() const {
        if (is_zero()) return 0;
        size_t i = 0;
        while (limbs_[i] == 0) ++i;
        uint32_t v = limbs_[i];
        size_t b = 0;
        while (!(v & 1)) { ++b; v >>= 1; }
        return i * 32 + b;
    }

    void shr(size_t k) {
        if (is_zero() || k == 0) return;
        size_t limb_shift = k / 32, bit_shift = k % 32;
        if (limb_shift >= limbs_.size()) { limbs_.clear(); return; }
        limbs_.erase(limbs_.begin(), limbs_.begin() + static_cast<long>(limb_shift));
        if (bit_shift) {
            for (size_t i = 0; i < limbs_.size(); ++i) {
                uint64_t cur = limbs_[i] >> bit_shift;
                if (i + 1 < limbs_.size())
                    cur |= static_cast<uint64_t>(limbs_[i + 1]) << (32 - bit_shift);
                limbs_[i] = static_cast<uint32_t>(cur);
            }
        }
        trim();
    }

    void shl(size_t k) {
        if (is_zero() || k == 0) return;
        size_t limb_shift = k / 32, bit_shift = k % 32;
        if (bit_shift) {
            uint32_t carry = 0;
            for (auto& limb : limbs_) {
                uint64_t cur = (static_cast<uint64_t>(limb) << bit_shift) | carry;
                limb = static_cast<uint32_t>(cur);
                carry = static_cast<uint32_t>(cur >> 32);
            }
            if (carry) limbs_.push_back(carry);
        }
        limbs_.insert(limbs_.begin(), limb_shift, 0);
    }

    static BigUint gcd(BigUint a, BigUint b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        size_t za = a.trailing_zero_bits(), zb = b.trailing_zero_bits();
        size_t shift = std::min(za, zb);
        a.shr(za);
        b.shr(zb);
        while (true) {
            int c = compare(a, b);
            if (c == 0) break;
            if (c < 0) std::swap(a, b);
            a -= b;
            a.shr(a.trailing_zero_bits());
        }
        a.shl(shift);
        return a;
    }

    double to_double() const {
        double r = 0;
        for (size_t i = limbs_.size(); i-- > 0;)
            r = r * 4294967296.0 + limbs_[i];
        return r;
    }

    // log2 of the value; -inf for zero.  Uses the top 64 bits so the result
    // is accurate to ~1 ulp regardless of magnitude.
    double log2() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        size_t bl = bit_length();
        if (bl <= 64) return std::log2(static_cast<double>(to_u64()));
        BigUint top = *this;
        top.shr(bl - 64);
        return std::log2(static_cast<double>(top.to_u64())) +
               static_cast<double>(bl - 64);
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        BigUint tmp = *this;
        std::string out;
        while (!tmp.is_zero()) {
            uint32_t r = tmp.divmod_small(1000000000u);
            std::string chunk = std::to_string(r);
            if (!tmp.is_zero())
                chunk = std::string(9 - chunk.size(), '0') + chunk;
            out = chunk + out;
        }
        return out;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<uint32_t> limbs_;
};

} // namespace fsdim

#endif
