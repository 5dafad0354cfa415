#ifndef FSDIM_RATIONAL_HPP
#define FSDIM_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "fsdim/bigint.hpp"

namespace fsdim {

// Exact non-negative rational, always normalized (gcd 1, zero is 0/1).
// Stakes, probabilities, capitals and capital shares are all >= 0, so a
// sign would be dead weight here; subtraction requires lhs >= rhs.
class Rat {
public:
    Rat() : num_(0), den_(1) {}

    Rat(uint64_t n, uint64_t d = 1) : num_(n), den_(d) {
        if (d == 0) throw std::invalid_argument("rational with zero denominator");
        normalize();
    }

    Rat(BigUint n, BigUint d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero())
            throw std::invalid_argument("rational with zero denominator");
        normalize();
    }

    // Accepts "num/den" or a bare "num".
    static Rat parse(std::string_view s) {
        size_t slash = s.find('/');
        if (slash == std::string_view::npos)
            return Rat(BigUint::from_decimal(s), BigUint(1));
        return Rat(BigUint::from_decimal(s.substr(0, slash)),
                   BigUint::from_decimal(s.substr(slash + 1)));
    }

    const BigUint& num() const { return num_; }
    const BigUint& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    // Requires a >= b.
    friend Rat operator-(const Rat& a, const Rat& b) {
        BigUint lhs = a.num_ * b.den_;
        BigUint rhs = b.num_ * a.den_;
        if (BigUint::compare(lhs, rhs) < 0)
            throw std::invalid_argument("negative result in Rat subtraction");
        return Rat(lhs - rhs, a.den_ * b.den_);
    }

    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }

    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw std::invalid_argument("division by zero rational");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return BigUint::compare(a.num_ * b.den_, b.num_ * a.den_) < 0;
    }
    friend bool operator<=(const Rat& a, const Rat& b) {
        return BigUint::compare(a.num_ * b.den_, b.num_ * a.den_) <= 0;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    double to_double() const { return num_.to_double() / den_.to_double(); }

    double log2() const { return num_.log2() - den_.log2(); }

    std::string str() const {
        if (den_ == BigUint(1)) return num_.to_decimal();
        return num_.to_decimal() + "/" + den_.to_decimal();
    }

private:
    void normalize() {
        if (num_.is_zero()) { den_ = BigUint(1); return; }
        BigUint g = BigUint::gcd(num_, den_);
        if (g != BigUint(1)) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }

    // Exact division by a known divisor, via schoolbook long division in
    // base 2 (divisor is a gcd, so the remainder is zero).
    static BigUint divide_exact(const BigUint& a, const BigUint& b) {
        if (b == BigUint(1)) return a;
        if (b.fits_u64() && b.to_u64() <= 0xFFFFFFFFull) {
            BigUint q = a;
            q.divmod_small(static_cast<uint32_t>(b.to_u64()));
            return q;
        }
        // Bitwise long division; adequate for the sizes normalization sees.
        BigUint q, rem;
        size_t n = a.bit_length();
        for (size_t i = n; i-- > 0;) {
            rem.shl(1);
            if (a.bit(i)) rem.add_small(1);
            q.shl(1);
            if (BigUint::compare(rem, b) >= 0) {
                rem -= b;
                q.add_small(1);
            }
        }
        return q;
    }

    BigUint num_, den_;
};

} // namespace fsdim

#endif
