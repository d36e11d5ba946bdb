#pragma once

#include <optional>
#include <vector>

#include "mcf/base.hpp"

namespace mcf {

/// Balanced p-adic digits of an exact rational over the index window [lo, hi].
/// Digits lie in [-(p-1)/2, (p-1)/2]; x == sum_{j=lo}^{hi} d_j p^j (mod p^{hi+1})
/// whenever nu_p(x) >= lo.
std::vector<long> balanced_digits(const Rat& x, const Prime& p, long lo, long hi);

/// An element of Y = Z[1/p] /\ (-p/2, p/2), stored as mantissa / p^exponent with
/// p not dividing the mantissa (zero has exponent 0).
class YElem {
public:
    explicit YElem(const Prime& p) : p_(p), mant_(0), exp_(0) {}
    YElem(const Prime& p, Int mantissa, long exponent);

    const Prime& prime() const { return p_; }
    const Int& mantissa() const { return mant_; }
    long exponent() const { return exp_; }

    bool is_zero() const { return mant_ == 0; }
    /// nu_p: -exponent for nonzero elements, +infinity for zero.
    Val valuation() const { return is_zero() ? Val::inf() : Val::of(-exp_); }

    Rat to_rational() const;

    friend bool operator==(const YElem& a, const YElem& b) {
        return a.mant_ == b.mant_ && a.exp_ == b.exp_;
    }
    friend bool operator!=(const YElem& a, const YElem& b) { return !(a == b); }

private:
    Prime p_;
    Int mant_;
    long exp_;
};

/// A p-adic scalar: either an exact rational or a value known modulo p^N
/// (absolute precision N). Truncated values keep a canonical representative
/// m / p^e with m balanced modulo p^{N+e}.
class PAdic {
public:
    static PAdic exact(const Prime& p, Rat value);
    /// Truncated value with representative `value`, known modulo p^precision.
    static PAdic truncated(const Prime& p, const Rat& value, long precision);

    const Prime& prime() const { return p_; }
    bool is_exact() const { return !prec_.has_value(); }
    /// Absolute precision of a truncated value; logic error on exact values.
    long precision() const { return prec_.value(); }
    const Rat& repr() const { return value_; }

    bool is_exact_zero() const { return is_exact() && value_ == 0; }
    /// A truncated value whose known digits are all zero.
    bool indistinguishable_from_zero() const { return !is_exact() && value_ == 0; }

    /// Exact valuation when determined; for a truncated value that is
    /// indistinguishable from zero, only nu >= precision is known and
    /// `determined` is false.
    struct ValInfo {
        Val val;
        bool determined;
    };
    ValInfo valuation_info() const;
    /// Valuation, requiring it to be determined (InsufficientPrecision otherwise).
    Val valuation() const;
    /// Lower bound on the valuation, always available.
    Val valuation_lb() const;

    PAdic operator-() const;
    friend PAdic operator+(const PAdic& a, const PAdic& b);
    friend PAdic operator-(const PAdic& a, const PAdic& b);
    friend PAdic operator*(const PAdic& a, const PAdic& b);
    friend PAdic operator/(const PAdic& a, const PAdic& b);
    PAdic inv() const;

    /// Balanced fractional part: the digits of the expansion with indices <= 0.
    /// Truncated inputs need precision >= 1.
    YElem s() const;

private:
    PAdic(const Prime& p, Rat v, std::optional<long> prec)
        : p_(p), value_(std::move(v)), prec_(prec) {}

    void normalize();

    Prime p_;
    Rat value_;
    std::optional<long> prec_;  // nullopt = exact
};

PAdic operator+(const PAdic& a, const PAdic& b);
PAdic operator-(const PAdic& a, const PAdic& b);
PAdic operator*(const PAdic& a, const PAdic& b);
PAdic operator/(const PAdic& a, const PAdic& b);

/// Whether |x - y|_p < 1; equals s(x) == s(y). Needs precision >= 1 on both.
bool s_equivalent(const PAdic& x, const PAdic& y);

}  // namespace mcf
