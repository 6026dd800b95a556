#ifndef CLONELAB_RATIONAL_HPP
#define CLONELAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "clonelab/errors.hpp"

namespace clonelab {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with a big-integer numerator and denominator.
///
/// Values are NOT reduced automatically: comparisons cross-multiply, so a
/// quotient like 76/120 can be carried and printed exactly as computed.
/// The denominator is kept positive.
class BigRat {
public:
    BigRat() : num_(0), den_(1) {}
    BigRat(BigInt value) : num_(std::move(value)), den_(1) {}  // NOLINT: implicit by design
    BigRat(long value) : num_(value), den_(1) {}               // NOLINT
    BigRat(int value) : num_(value), den_(1) {}                // NOLINT
    BigRat(BigInt num, BigInt den);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_integer() const { return num_ % den_ == 0; }

    /// Divides out the gcd. Only called explicitly; comparisons and
    /// arithmetic never normalize behind the caller's back.
    BigRat reduced() const;

    friend BigRat operator+(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRat operator-(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRat operator*(const BigRat& a, const BigRat& b) {
        return BigRat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        if (b.num_ == 0) throw Error("division by zero");
        return BigRat(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const BigRat& a, const BigRat& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const BigRat& a, const BigRat& b) { return !(a == b); }
    friend bool operator<(const BigRat& a, const BigRat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const BigRat& a, const BigRat& b) { return !(b < a); }
    friend bool operator>(const BigRat& a, const BigRat& b) { return b < a; }
    friend bool operator>=(const BigRat& a, const BigRat& b) { return !(a < b); }

    /// "p" when the denominator is 1, otherwise "p/q", exactly as stored.
    std::string to_string() const;

    /// Parses "p" or "p/q".
    static BigRat from_string(const std::string& text);

private:
    BigInt num_;
    BigInt den_;
};

}  // namespace clonelab

#endif  // CLONELAB_RATIONAL_HPP
