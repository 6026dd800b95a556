#ifndef CLONELAB_ERRORS_HPP
#define CLONELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clonelab {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ArityMismatch : Error {
    using Error::Error;
};
struct DomainMismatch : Error {
    using Error::Error;
};
struct ElementOutOfRange : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct UnknownOp : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct EvenArity : Error {
    using Error::Error;
};
struct OddArity : Error {
    using Error::Error;
};
struct ParityViolation : Error {
    using Error::Error;
};
struct NotAlmostDivisible : Error {
    using Error::Error;
};
struct NotAMajority : Error {
    using Error::Error;
};
struct ArityTooSmall : Error {
    using Error::Error;
};
struct OutOfStatedRange : Error {
    using Error::Error;
};
struct TupleTooShort : Error {
    using Error::Error;
};
struct NonMonotoneSymbol : Error {
    using Error::Error;
};
struct NotPairwiseIntersecting : Error {
    using Error::Error;
};
struct ArityTooLargeForSearch : Error {
    using Error::Error;
};
struct AlmostUnary : Error {
    using Error::Error;
};
struct ArityOverBudget : Error {
    using Error::Error;
};
struct InvalidLattice : Error {
    using Error::Error;
};
struct InvalidChain : Error {
    using Error::Error;
};
struct InvalidVarMap : Error {
    using Error::Error;
};
struct ProjectionGenerator : Error {
    using Error::Error;
};

}  // namespace clonelab

#endif  // CLONELAB_ERRORS_HPP
