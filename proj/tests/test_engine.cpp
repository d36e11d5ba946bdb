#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcf/engine.hpp"
#include "mcf/hensel.hpp"
#include "mcf/random.hpp"

using namespace mcf;

namespace {
const Prime p5(5);
const Prime p7(7);

PAdic ex(const Prime& p, const Rat& x) { return PAdic::exact(p, x); }

ExpansionTrace worked_run() {
    return expand_trace(ex(p5, rat_of(32, 5)), ex(p5, rat_of(26, 5)), 10);
}
}  // namespace

TEST_CASE("jp_step on the worked pair") {
    JPStep s = jp_step(ex(p5, rat_of(32, 5)), ex(p5, rat_of(26, 5)));
    CHECK(s.a.to_rational() == rat_of(7, 5));
    CHECK(s.b.to_rational() == rat_of(1, 5));
    REQUIRE(s.next.has_value());
    CHECK(s.next->first.repr() == rat_of(1, 5));
    CHECK(s.next->second.repr() == 1);

    JPStep s2 = jp_step(s.next->first, s.next->second);
    CHECK(s2.a.to_rational() == rat_of(1, 5));
    CHECK(s2.b.to_rational() == 1);
    CHECK_FALSE(s2.next.has_value());  // beta_1 - b_1 == 0
}

TEST_CASE("beta in Y terminates immediately") {
    JPStep s = jp_step(ex(p5, rat_of(123, 7)), ex(p5, rat_of(7, 5)));
    CHECK(s.b.to_rational() == rat_of(7, 5));
    CHECK_FALSE(s.next.has_value());
}

TEST_CASE("expand: worked pair is Finite(2)") {
    MCFExpansion e = expand(ex(p5, rat_of(32, 5)), ex(p5, rat_of(26, 5)), 10);
    CHECK(e.status == TermStatus::Finite);
    REQUIRE(e.length() == 2);
    CHECK(e.a[0].to_rational() == rat_of(7, 5));
    CHECK(e.b[0].to_rational() == rat_of(1, 5));
    CHECK(e.a[1].to_rational() == rat_of(1, 5));
    CHECK(e.b[1].to_rational() == 1);
}

TEST_CASE("expand: truncated pair that hits an uncertifiable exact zero") {
    // beta = alpha + 1 forces beta_1 = (alpha - a_0)/(beta_0 - b_0) = 1, so the
    // run terminates at step 1 in exact arithmetic; a truncated input can only
    // report that the termination test is undecidable.
    PAdic alpha = hensel_lift({{Int(-6), Int(0), Int(1)}, Int(1), 200}, p5);
    PAdic beta = alpha + ex(p5, Rat(1));
    MCFExpansion e = expand(alpha, beta, 5);
    CHECK(e.status == TermStatus::PrecisionExhausted);
    CHECK(e.length() == 1);
}

TEST_CASE("expand: truncated pair with an infinite expansion runs to depth") {
    PAdic alpha = hensel_lift({{Int(-6), Int(0), Int(1)}, Int(1), 200}, p5);
    PAdic beta = hensel_lift({{Int(-11), Int(0), Int(1)}, Int(1), 200}, p5);
    MCFExpansion e = expand(alpha, beta, 5);
    CHECK(e.status == TermStatus::DepthLimited);
    CHECK(e.length() == 5);
}

TEST_CASE("convergents on the worked run") {
    MCFExpansion e = expand(ex(p5, rat_of(32, 5)), ex(p5, rat_of(26, 5)), 10);
    ConvergentTriple c0 = convergents(e, 0);
    CHECK(c0.A == rat_of(7, 5));
    CHECK(c0.B == rat_of(1, 5));
    CHECK(c0.C == 1);
    ConvergentTriple c1 = convergents(e, 1);
    CHECK(c1.A == rat_of(32, 25));
    CHECK(c1.B == rat_of(26, 25));
    CHECK(c1.C == rat_of(1, 5));
    CHECK(c1.A / c1.C == rat_of(32, 5));
    CHECK(c1.B / c1.C == rat_of(26, 5));
    // seeds
    CHECK(convergents(e, -2).B == 1);
    CHECK(convergents(e, -1).A == 1);
    CHECK_THROWS_AS(convergents(e, 2), IndexOutOfRange);
}

TEST_CASE("nu(C_1) == -K_1 on the worked run") {
    ExpansionTrace t = worked_run();
    CHECK(t.K(1) == 1);
    CHECK(vp(t.C(1), p5) == Val::of(-1));
}

TEST_CASE("digit laws, nu(C_n) = -K_n, determinant on random pairs") {
    Rng rng(42);
    for (int it = 0; it < 30; ++it) {
        const Prime& p = it % 2 ? p5 : p7;
        ExpansionTrace t = expand_trace(ex(p, rng.rational(5000, p, 2)),
                                        ex(p, rng.rational(5000, p, 2)), 25);
        for (long n = 1; n < t.length(); ++n) {
            const TraceStep& s = t.step(n);
            CHECK(s.a.valuation() < Val::of(0));
            CHECK(s.b.valuation() > s.a.valuation());
            CHECK(vp(t.C(n), p) == Val::of(-t.K(n)));
        }
        for (long n = 0; n < t.length(); ++n) {
            IdentityReport r = identity_checks(t, n);
            CHECK(r.matrix_ok);
            CHECK(r.det_ok);
            CHECK(r.cross_ok);
            CHECK(r.diff_ok);
        }
        if (t.status == TermStatus::Finite) {
            // The finite expansion reproduces the input exactly when the last
            // state equals its digit pair; otherwise only beta_l - b_l == 0.
            long l = t.length() - 1;
            if (t.step(l).alpha->repr() == t.step(l).a.to_rational()) {
                CHECK(t.Qalpha(l) == t.alpha.repr());
                CHECK(t.Qbeta(l) == t.beta.repr());
            }
        }
    }
}

TEST_CASE("tilde sequences: seeds, recurrence vs closed form") {
    ExpansionTrace t = worked_run();
    CHECK(t.tildeA(-1) == 0);
    CHECK(t.tildeB(-1) == 0);
    CHECK(t.tildeA(0) == -1);
    CHECK(t.tildeB(0) == 0);
    CHECK(t.tildeA(1) == t.step(1).b.to_rational());
    CHECK(t.tildeB(1) == 1);

    Rng rng(17);
    for (int it = 0; it < 20; ++it) {
        ExpansionTrace tr = expand_trace(ex(p5, rng.rational(100000, p5, 3)),
                                         ex(p5, rng.rational(100000, p5, 3)), 30);
        MCFExpansion e = tr.digits();
        for (long n = -1; n < tr.length(); ++n) {
            auto [ta, tb] = tilde_sequences(e, n);
            CHECK(ta == tr.tildeA(n));
            CHECK(tb == tr.tildeB(n));
            if (n >= 0) {
                // closed forms against the convergents
                CHECK(ta == tr.A(n) * tr.C(n - 1) - tr.A(n - 1) * tr.C(n));
                CHECK(tb == tr.B(n) * tr.C(n - 1) - tr.B(n - 1) * tr.C(n));
            }
        }
    }
}

TEST_CASE("residual seeds and worked values") {
    ExpansionTrace t = worked_run();
    CHECK(t.Va(-2).repr() == 0);
    CHECK(t.Vb(-2).repr() == -1);
    CHECK(t.Va(-1).repr() == -1);
    CHECK(t.Vb(-1).repr() == 0);
    CHECK(t.Va(1).repr() == 0);  // C_1 alpha - A_1 = (1/5)(32/5) - 32/25
    CHECK(t.Vb(1).repr() == 0);
    CHECK(t.vVa(0) == Val::of(1));
}

TEST_CASE("residual step identity holds on random pairs") {
    Rng rng(9);
    for (int it = 0; it < 15; ++it) {
        ExpansionTrace t = expand_trace(ex(p5, rng.rational(100000, p5, 3)),
                                        ex(p5, rng.rational(100000, p5, 3)), 25);
        for (long n = 0; n + 1 < t.length(); ++n) CHECK(residual_step_identity(t, n));
    }
}

TEST_CASE("certified prefix radius and perturbation stability") {
    Rng rng(31);
    for (int it = 0; it < 25; ++it) {
        const Prime& p = it % 2 ? p7 : p5;
        Rat a = rng.rational(10000, p, 2), b = rng.rational(10000, p, 2);
        ExpansionTrace t = expand_trace(ex(p, a), ex(p, b), 10);
        MCFExpansion e = t.digits();
        for (long n = 0; n < std::min(t.length(), 9L); ++n) {
            long r = certified_prefix_radius(e, n);
            CHECK(r == 2 * t.K(n));
            // perturb strictly inside the ball of radius p^{-2K_n}: the
            // perturbation p^{r+1} has p-adic absolute value p^{-(r+1)}
            Rat eps(p.pow(r + 1));
            MCFExpansion e2 = expand(ex(p, Rat(a + eps)), ex(p, Rat(b - eps)), 10);
            REQUIRE(e2.length() >= n + 1);
            for (long i = 0; i <= n; ++i) {
                CHECK(e.a[static_cast<size_t>(i)] == e2.a[static_cast<size_t>(i)]);
                CHECK(e.b[static_cast<size_t>(i)] == e2.b[static_cast<size_t>(i)]);
            }
        }
    }
}

TEST_CASE("all-unit-k expansions have radius exponent 2n") {
    std::vector<YElem> a, b;
    a.push_back(YElem(p5, Int(1), 0));
    b.push_back(YElem(p5, Int(1), 0));
    for (int i = 0; i < 10; ++i) {
        a.push_back(YElem(p5, Int(2), 1));  // k_n = 1
        b.push_back(YElem(p5, Int(1), 0));
    }
    ExpansionTrace t = trace_from_digits(p5, a, b, 3);
    for (long n = 0; n < t.length(); ++n)
        CHECK(certified_prefix_radius(t, n) == 2 * n);
}

TEST_CASE("proxy-limit residual valuations are stable across margins") {
    Rng rng(55);
    {
        // digits with k_m = 2, nu(b_m) >= -1 by hand
        std::vector<YElem> a, b;
        a.push_back(YElem(p5, Int(2), 0));
        b.push_back(YElem(p5, Int(1), 0));
        for (int m = 1; m < 30; ++m) {
            long ma = rng.uniform_long(1, 12);
            while (ma % 5 == 0) ma = rng.uniform_long(1, 12);
            a.push_back(YElem(p5, Int(ma), 2));
            b.push_back(YElem(p5, Int(rng.uniform_long(1, 4)), 1));
        }
        ExpansionTrace deep = trace_from_digits(p5, a, b, 6);
        std::vector<YElem> a2(a.begin(), a.end() - 5), b2(b.begin(), b.end() - 5);
        ExpansionTrace shallow = trace_from_digits(p5, a2, b2, 6);
        for (long n = 0; n < shallow.length(); ++n) {
            if (!deep.residuals_certified(n) || !shallow.residuals_certified(n)) continue;
            CHECK(deep.vVa(n) == shallow.vVa(n));
            CHECK(deep.vVb(n) == shallow.vVb(n));
        }
    }
}

TEST_CASE("trace_from_digits rejects malformed digit sequences") {
    std::vector<YElem> a{YElem(p5, Int(1), 0)}, b{YElem(p5, Int(1), 0)};
    CHECK_THROWS_AS(trace_from_digits(p5, a, {}, 2), std::invalid_argument);
    // a_1 must have negative valuation
    std::vector<YElem> bad_a{YElem(p5, Int(1), 0), YElem(p5, Int(1), 0)};
    std::vector<YElem> bad_b{YElem(p5, Int(1), 0), YElem(p5, Int(1), 0)};
    CHECK_THROWS_AS(trace_from_digits(p5, bad_a, bad_b, 0), std::logic_error);
}
