#include "mcf/padic.hpp"

namespace mcf {

namespace {

/// Representative of m modulo p^k in the balanced range (-p^k/2, p^k/2).
Int balanced_mod(const Int& m, const Int& modulus) {
    Int r;
    mpz_mod(r.get_mpz_t(), m.get_mpz_t(), modulus.get_mpz_t());
    if (2 * r > modulus) r -= modulus;
    return r;
}

Int inv_mod(const Int& a, const Int& modulus) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw std::invalid_argument("not invertible modulo p^k");
    return r;
}

}  // namespace

std::vector<long> balanced_digits(const Rat& x, const Prime& p, long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("balanced_digits: lo > hi");
    Val v = vp(x, p);
    if (v < Val::of(lo))
        throw std::invalid_argument("balanced_digits: window starts above nu_p(x)");
    std::vector<long> digits;
    digits.reserve(static_cast<size_t>(hi - lo + 1));
    Rat y = x;
    // shift so that the digit at index lo becomes the units digit
    Rat shift(p.pow(lo < 0 ? -lo : lo));
    if (lo < 0)
        y *= shift;
    else if (lo > 0)
        y /= shift;
    Int pb = p.big();
    for (long j = lo; j <= hi; ++j) {
        Int u = y.get_num(), d = y.get_den();
        Int r = balanced_mod(u * inv_mod(d, pb), pb);
        digits.push_back(r.get_si());
        y = (y - Rat(r)) / pb;
    }
    return digits;
}

YElem::YElem(const Prime& p, Int mantissa, long exponent)
    : p_(p), mant_(std::move(mantissa)), exp_(exponent) {
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    if (exp_ < 0) throw std::invalid_argument("YElem: negative exponent");
    if (mpz_divisible_ui_p(mant_.get_mpz_t(), static_cast<unsigned long>(p.value())))
        throw std::invalid_argument("YElem: p divides mantissa");
    if (2 * abs(mant_) >= p.pow(exp_ + 1))
        throw std::invalid_argument("YElem: |value| >= p/2");
}

Rat YElem::to_rational() const {
    Rat r(mant_, p_.pow(exp_));
    r.canonicalize();
    return r;
}

PAdic PAdic::exact(const Prime& p, Rat value) {
    return PAdic(p, std::move(value), std::nullopt);
}

PAdic PAdic::truncated(const Prime& p, const Rat& value, long precision) {
    PAdic r(p, value, precision);
    r.normalize();
    return r;
}

void PAdic::normalize() {
    if (is_exact()) return;
    long N = *prec_;
    Val v = vp(value_, p_);
    if (v >= Val::of(N)) {
        value_ = 0;
        return;
    }
    long e = std::max(0L, -v.get());
    Int modulus = p_.pow(N + e);
    Rat scaled = value_ * Rat(p_.pow(e));  // now nu_p >= 0, denominator coprime to p
    Int m = balanced_mod(scaled.get_num() * inv_mod(scaled.get_den(), modulus), modulus);
    value_ = Rat(m, p_.pow(e));
    value_.canonicalize();
}

PAdic::ValInfo PAdic::valuation_info() const {
    if (is_exact()) return {vp(value_, p_), true};
    if (value_ == 0) return {Val::of(*prec_), false};
    return {vp(value_, p_), true};
}

Val PAdic::valuation() const {
    auto info = valuation_info();
    if (!info.determined)
        throw InsufficientPrecision("value indistinguishable from zero at precision " +
                                    std::to_string(*prec_));
    return info.val;
}

Val PAdic::valuation_lb() const { return valuation_info().val; }

PAdic PAdic::operator-() const { return PAdic(p_, -value_, prec_); }

namespace {

std::optional<long> min_prec(std::optional<long> a, std::optional<long> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

PAdic make(const Prime& p, const Rat& v, std::optional<long> prec) {
    if (prec) return PAdic::truncated(p, v, *prec);
    return PAdic::exact(p, v);
}

void check_same_prime(const PAdic& a, const PAdic& b) {
    if (a.prime() != b.prime())
        throw std::invalid_argument("mixed primes in p-adic arithmetic");
}

std::optional<long> prec_of(const PAdic& x) {
    return x.is_exact() ? std::nullopt : std::optional<long>(x.precision());
}

}  // namespace

PAdic operator+(const PAdic& a, const PAdic& b) {
    check_same_prime(a, b);
    return make(a.prime(), a.repr() + b.repr(), min_prec(prec_of(a), prec_of(b)));
}

PAdic operator-(const PAdic& a, const PAdic& b) {
    check_same_prime(a, b);
    return make(a.prime(), a.repr() - b.repr(), min_prec(prec_of(a), prec_of(b)));
}

PAdic operator*(const PAdic& a, const PAdic& b) {
    check_same_prime(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return PAdic::exact(a.prime(), Rat(0));
    // error(xy) = x*eb + y*ea + ea*eb with nu(ea) >= Na, nu(eb) >= Nb
    std::optional<long> prec;
    Val va = a.valuation_lb(), vb = b.valuation_lb();
    if (!b.is_exact()) {
        Val t = va + b.precision();
        if (!t.is_inf()) prec = min_prec(prec, t.get());
    }
    if (!a.is_exact()) {
        Val t = vb + a.precision();
        if (!t.is_inf()) prec = min_prec(prec, t.get());
    }
    if (!a.is_exact() && !b.is_exact()) prec = min_prec(prec, a.precision() + b.precision());
    return make(a.prime(), a.repr() * b.repr(), prec);
}

PAdic PAdic::inv() const {
    if (is_exact_zero()) throw DivisionByZero();
    if (indistinguishable_from_zero())
        throw InsufficientPrecision("divisor indistinguishable from zero");
    if (is_exact()) return PAdic::exact(p_, 1 / value_);
    long nv = valuation().get();
    return PAdic::truncated(p_, 1 / value_, *prec_ - 2 * nv);
}

PAdic operator/(const PAdic& a, const PAdic& b) {
    check_same_prime(a, b);
    return a * b.inv();
}

YElem PAdic::s() const {
    if (!is_exact()) {
        if (*prec_ < 1)
            throw InsufficientPrecision("s-function needs absolute precision >= 1");
        if (indistinguishable_from_zero()) return YElem(p_);
    }
    Val v = vp(value_, p_);
    if (v >= Val::of(1)) return YElem(p_);
    long lo = std::min(v.get(), 0L);
    std::vector<long> digits = balanced_digits(value_, p_, lo, 0);
    Int mant(0);
    Int pb = p_.big();
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) mant = mant * pb + Int(*it);
    return YElem(p_, mant, -lo);
}

bool s_equivalent(const PAdic& x, const PAdic& y) {
    for (const PAdic* z : {&x, &y})
        if (!z->is_exact() && z->precision() < 1)
            throw InsufficientPrecision("s_equivalence needs absolute precision >= 1");
    PAdic d = x - y;
    auto info = d.valuation_info();
    if (!info.determined) return true;  // nu >= precision >= 1
    return info.val >= Val::of(1);
}

}  // namespace mcf
