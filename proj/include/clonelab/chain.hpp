#ifndef CLONELAB_CHAIN_HPP
#define CLONELAB_CHAIN_HPP

#include <cstdint>

#include "clonelab/errors.hpp"

namespace clonelab {

/// Value taken by a chain element. Chains are initial segments of the
/// naturals, so a byte covers every domain this library tabulates.
using Element = std::uint8_t;

/// A finite chain 0 < 1 < ... < size-1.
///
/// One-element chains are rejected: every operation on them is constant and
/// identity checks become vacuous.
class Chain {
public:
    explicit Chain(int size) : size_(size) {
        if (size < 2) throw InvalidChain("chain must have at least 2 elements");
        if (size > 256) throw InvalidChain("chain sizes above 256 are not supported");
    }

    int size() const { return size_; }

    friend bool operator==(const Chain& a, const Chain& b) { return a.size_ == b.size_; }
    friend bool operator!=(const Chain& a, const Chain& b) { return !(a == b); }

private:
    int size_;
};

}  // namespace clonelab

#endif  // CLONELAB_CHAIN_HPP
