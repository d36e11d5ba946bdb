#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcf/padic.hpp"
#include "mcf/random.hpp"

using namespace mcf;

namespace {
const Prime p5(5);
const Prime p7(7);

Rat digits_value(const std::vector<long>& d, const Prime& p, long lo) {
    Rat acc(0), pw(1), pr(p.value());
    for (long j = 0; j > lo; --j) pw /= pr;
    for (size_t i = 0; i < d.size(); ++i) {
        acc += Rat(d[i]) * pw;
        pw *= pr;
    }
    return acc;
}
}  // namespace

TEST_CASE("prime validation") {
    CHECK_THROWS_AS(Prime(4), std::invalid_argument);
    CHECK_THROWS_AS(Prime(2), std::invalid_argument);
    CHECK_THROWS_AS(Prime(9), std::invalid_argument);
    CHECK(Prime(10007).value() == 10007);
}

TEST_CASE("balanced digits: fixed windows") {
    CHECK(balanced_digits(Rat(7), p5, 0, 1) == std::vector<long>{2, 1});
    CHECK(balanced_digits(Rat(0), p5, 0, 3) == std::vector<long>{0, 0, 0, 0});
    CHECK(balanced_digits(Rat(-1), p5, 0, 1) == std::vector<long>{-1, 0});
}

TEST_CASE("balanced digits: range, reconstruction, low zeros") {
    Rng rng(11);
    for (int it = 0; it < 200; ++it) {
        Rat x = rng.rational(500, p5, 3);
        long N = rng.uniform_long(0, 64);
        Val v = vp(x, p5);
        long lo = v.is_inf() ? -3 : std::min(v.get(), 0L);
        auto d = balanced_digits(x, p5, lo, N);
        for (long dig : d) CHECK(std::abs(dig) <= 2);
        // digits below the valuation are zero
        if (!v.is_inf())
            for (long j = lo; j < v.get() && j <= N; ++j)
                CHECK(d[static_cast<size_t>(j - lo)] == 0);
        // x == sum d_j p^j (mod p^{N+1})
        Rat diff = x - digits_value(d, p5, lo);
        CHECK(vp(diff, p5) >= Val::of(N + 1));
    }
}

TEST_CASE("valuation") {
    CHECK(vp(rat_of(32, 25), p5) == Val::of(-2));
    CHECK(vp(Rat(0), p5) == Val::inf());
    CHECK(vp(Rat(50), p5) == Val::of(2));
}

TEST_CASE("YElem invariants") {
    CHECK_THROWS_AS(YElem(p5, Int(10), 1), std::invalid_argument);  // p | mantissa
    CHECK_THROWS_AS(YElem(p5, Int(13), 1), std::invalid_argument);  // 13/5 >= 5/2
    YElem y(p5, Int(12), 1);                                        // 12/5 < 5/2
    CHECK(y.to_rational() == rat_of(12, 5));
    CHECK(y.valuation() == Val::of(-1));
    CHECK(YElem(p5).valuation() == Val::inf());
}

TEST_CASE("s-function on exact values") {
    auto s_of = [](const Rat& x, const Prime& p) {
        return PAdic::exact(p, x).s().to_rational();
    };
    CHECK(s_of(rat_of(7, 5), p5) == rat_of(7, 5));
    CHECK(s_of(rat_of(132, 5), p5) == rat_of(7, 5));
    CHECK(s_of(Rat(50), p5) == 0);  // positive valuation: empty sum
    CHECK(s_of(Rat(0), p5) == 0);
}

TEST_CASE("s-function properties on random inputs") {
    Rng rng(23);
    for (int it = 0; it < 300; ++it) {
        Rat x = rng.rational(1000, p7, 3);
        YElem s = PAdic::exact(p7, x).s();
        // membership in Y
        Rat sv = s.to_rational();
        CHECK(2 * rat_abs(sv) < Rat(7));
        if (!s.is_zero()) CHECK(s.mantissa() % 7 != 0);
        // nu(x - s(x)) >= 1
        CHECK(vp(x - sv, p7) >= Val::of(1));
    }
}

TEST_CASE("s_equivalence") {
    auto ex = [](long n, long d = 1) { return PAdic::exact(p5, rat_of(n, d)); };
    CHECK(s_equivalent(ex(7), ex(32)));
    CHECK(s_equivalent(ex(7, 5), ex(7, 5)));
    CHECK_FALSE(s_equivalent(ex(7, 5), ex(2, 5)));
    Rng rng(5);
    for (int it = 0; it < 1000; ++it) {
        PAdic x = PAdic::exact(p5, rng.rational(200, p5, 2));
        PAdic y = PAdic::exact(p5, rng.rational(200, p5, 2));
        CHECK(s_equivalent(x, y) == (x.s().to_rational() == y.s().to_rational()));
    }
}

TEST_CASE("exact field operations") {
    PAdic a = PAdic::exact(p5, rat_of(7, 5));
    PAdic zero = PAdic::exact(p5, Rat(0));
    CHECK((a + zero).repr() == rat_of(7, 5));
    PAdic d = PAdic::exact(p5, rat_of(32, 5)) - a;
    CHECK(d.repr() == 5);
    CHECK(d.valuation() == Val::of(1));
    PAdic q = PAdic::exact(p5, Rat(1)) / PAdic::exact(p5, Rat(5));
    CHECK(q.repr() == rat_of(1, 5));
    CHECK(q.valuation() == Val::of(-1));
    CHECK_THROWS_AS(a / zero, DivisionByZero);
}

TEST_CASE("truncated representative is balanced and canonical") {
    PAdic t = PAdic::truncated(p5, Rat(7), 1);
    CHECK(t.repr() == 2);  // 7 == 2 (mod 5), balanced
    PAdic u = PAdic::truncated(p5, Rat(13), 2);
    CHECK(u.repr() == 13 - 25);  // balanced representative mod 25
    PAdic v = PAdic::truncated(p5, rat_of(7, 5), 1);
    CHECK(v.repr() == rat_of(7, 5));  // mantissa 7 balanced mod 25
    PAdic z = PAdic::truncated(p5, Rat(25), 2);
    CHECK(z.indistinguishable_from_zero());
    CHECK_FALSE(z.is_exact_zero());
}

TEST_CASE("precision propagation calculus") {
    PAdic x = PAdic::truncated(p5, Rat(7), 10);
    PAdic y = PAdic::truncated(p5, rat_of(2, 5), 6);
    CHECK((x + y).precision() == 6);  // min of precisions
    // mul: min(va+Nb, vb+Na, Na+Nb) = min(0+6, -1+10, 16) = 6
    CHECK((x * y).precision() == 6);
    // inv: N - 2 nu(y); nu(y) = -1
    CHECK(y.inv().precision() == 8);
    PAdic mixed = PAdic::exact(p5, Rat(3)) * x;  // exact scalar keeps precision
    CHECK(mixed.precision() == 10);
    PAdic z = PAdic::truncated(p5, Rat(25), 2);  // indistinguishable from zero
    CHECK_THROWS_AS(z.inv(), InsufficientPrecision);
    CHECK_THROWS_AS(x / z, InsufficientPrecision);
}

TEST_CASE("valuation info on truncated values") {
    PAdic x = PAdic::truncated(p5, Rat(50), 4);
    auto info = x.valuation_info();
    CHECK(info.determined);
    CHECK(info.val == Val::of(2));
    PAdic z = PAdic::truncated(p5, Rat(625), 3);
    auto zi = z.valuation_info();
    CHECK_FALSE(zi.determined);
    CHECK(z.valuation_lb() >= Val::of(3));
    CHECK_THROWS_AS(z.valuation(), InsufficientPrecision);
}

TEST_CASE("s requires positive precision on truncated inputs") {
    PAdic low = PAdic::truncated(p5, Rat(7), 0);
    CHECK_THROWS_AS(low.s(), InsufficientPrecision);
    PAdic ok = PAdic::truncated(p5, Rat(7), 1);
    CHECK(ok.s().to_rational() == 2);
}

TEST_CASE("truncated arithmetic is consistent with exact arithmetic mod p^N") {
    Rng rng(77);
    for (int it = 0; it < 200; ++it) {
        Rat a = rng.rational(100, p5, 2), b = rng.rational(100, p5, 2);
        PAdic ta = PAdic::truncated(p5, a, 20), tb = PAdic::truncated(p5, b, 20);
        PAdic sum = ta + tb, prod = ta * tb;
        CHECK(vp(sum.repr() - (a + b), p5) >= Val::of(sum.precision()));
        CHECK(vp(prod.repr() - a * b, p5) >= Val::of(prod.precision()));
    }
}
