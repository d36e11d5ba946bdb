#pragma once

#include <gmpxx.h>

#include <limits>
#include <stdexcept>
#include <string>

namespace mcf {

using Int = mpz_class;
using Rat = mpq_class;

struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("division by exact zero") {}
};

struct InsufficientPrecision : std::runtime_error {
    explicit InsufficientPrecision(const std::string& what)
        : std::runtime_error("insufficient precision: " + what) {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what)
        : std::runtime_error("precision exhausted: " + what) {}
};

struct NonSimpleRoot : std::runtime_error {
    explicit NonSimpleRoot(const std::string& what)
        : std::runtime_error("non-simple root: " + what) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct InvalidPlan : std::invalid_argument {
    explicit InvalidPlan(const std::string& what) : std::invalid_argument(what) {}
};

/// An odd prime, validated at construction.
class Prime {
public:
    explicit Prime(long p) : p_(p) {
        if (p < 3 || p % 2 == 0 || !is_prime(p))
            throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    }

    long value() const { return p_; }
    Int big() const { return Int(p_); }

    /// p^e for e >= 0.
    Int pow(long e) const {
        Int r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_),
                      static_cast<unsigned long>(e));
        return r;
    }

    friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Prime& a, const Prime& b) { return a.p_ != b.p_; }

private:
    static bool is_prime(long p) {
        Int z(p);
        return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
    }

    long p_;
};

/// A p-adic valuation: an integer or +infinity (the valuation of zero).
class Val {
public:
    constexpr Val() : v_(0), finite_(true) {}

    static constexpr Val inf() {
        Val r;
        r.finite_ = false;
        return r;
    }
    static constexpr Val of(long v) {
        Val r;
        r.v_ = v;
        return r;
    }

    bool is_inf() const { return !finite_; }
    long get() const {
        if (!finite_) throw std::logic_error("valuation is +infinity");
        return v_;
    }

    Val operator+(const Val& o) const {
        if (is_inf() || o.is_inf()) return inf();
        return of(v_ + o.v_);
    }
    Val operator+(long k) const { return finite_ ? of(v_ + k) : inf(); }

    friend bool operator==(const Val& a, const Val& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
    }
    friend bool operator!=(const Val& a, const Val& b) { return !(a == b); }
    friend bool operator<(const Val& a, const Val& b) {
        if (a.is_inf()) return false;
        if (b.is_inf()) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const Val& a, const Val& b) { return a < b || a == b; }
    friend bool operator>(const Val& a, const Val& b) { return b < a; }
    friend bool operator>=(const Val& a, const Val& b) { return b <= a; }

    friend Val min(const Val& a, const Val& b) { return a < b ? a : b; }

    std::string str() const { return finite_ ? std::to_string(v_) : "inf"; }

private:
    long v_;
    bool finite_;
};

/// nu_p of a nonzero integer.
inline long vp_int(const Int& n, const Prime& p) {
    if (n == 0) throw std::invalid_argument("vp_int of zero");
    Int q = n;
    long v = 0;
    Int pb = p.big();
    while (mpz_divisible_p(q.get_mpz_t(), pb.get_mpz_t())) {
        mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), pb.get_mpz_t());
        ++v;
    }
    return v;
}

/// nu_p of a rational, +infinity for zero.
inline Val vp(const Rat& x, const Prime& p) {
    if (x == 0) return Val::inf();
    return Val::of(vp_int(x.get_num(), p) - vp_int(x.get_den(), p));
}

/// |x|_infty as a rational.
inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Rat rat_of(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace mcf
