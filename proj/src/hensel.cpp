#include "mcf/hensel.hpp"

namespace mcf {

Int poly_eval(const std::vector<Int>& poly, const Int& x) {
    Int acc(0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat poly_eval(const std::vector<Int>& poly, const Rat& x) {
    Rat acc(0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

std::vector<Int> poly_derivative(const std::vector<Int>& poly) {
    std::vector<Int> d;
    for (size_t i = 1; i < poly.size(); ++i) d.push_back(Int(static_cast<long>(i)) * poly[i]);
    return d;
}

PAdic hensel_lift(const AlgebraicInput& input, const Prime& p) {
    if (input.precision < 1) throw std::invalid_argument("hensel_lift: precision < 1");
    if (input.poly.empty()) throw std::invalid_argument("hensel_lift: empty polynomial");
    Int pb = p.big();
    std::vector<Int> dpoly = poly_derivative(input.poly);
    Int f0 = poly_eval(input.poly, input.seed);
    Int df0 = poly_eval(dpoly, input.seed);
    if (!mpz_divisible_p(f0.get_mpz_t(), pb.get_mpz_t()))
        throw std::invalid_argument("hensel_lift: poly(seed) != 0 (mod p)");
    if (mpz_divisible_p(df0.get_mpz_t(), pb.get_mpz_t()))
        throw NonSimpleRoot("poly'(seed) == 0 (mod p)");

    // Newton iteration with doubling precision.
    Int r = input.seed;
    long k = 1;
    while (k < input.precision) {
        k = std::min(2 * k, input.precision);
        Int modulus = p.pow(k);
        Int f = poly_eval(input.poly, r);
        Int df = poly_eval(dpoly, r);
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), modulus.get_mpz_t()) == 0)
            throw NonSimpleRoot("derivative not invertible during lifting");
        r = r - f * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
    }
    return PAdic::truncated(p, Rat(r), input.precision);
}

}  // namespace mcf
