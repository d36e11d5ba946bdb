#include "mcf/engine.hpp"

#include <array>

namespace mcf {

JPStep jp_step(const PAdic& alpha, const PAdic& beta) {
    if (alpha.prime() != beta.prime())
        throw std::invalid_argument("jp_step: mixed primes");
    JPStep out{alpha.s(), beta.s(), std::nullopt};
    PAdic d = beta - PAdic::exact(beta.prime(), out.b.to_rational());
    if (d.is_exact_zero()) return out;
    if (d.indistinguishable_from_zero())
        throw PrecisionExhausted("beta_k - b_k indistinguishable from zero");
    PAdic next_alpha = d.inv();
    PAdic next_beta = (alpha - PAdic::exact(alpha.prime(), out.a.to_rational())) / d;
    out.next = std::make_pair(std::move(next_alpha), std::move(next_beta));
    return out;
}

namespace {

void check_digit_laws(const YElem& a, const YElem& b, long n) {
    // |a_n|_p > 1 and |b_n|_p < |a_n|_p for n >= 1
    if (n < 1) return;
    if (!(a.valuation() < Val::of(0)))
        throw std::logic_error("digit law violated: |a_n|_p <= 1 at n=" + std::to_string(n));
    if (!(b.valuation() > a.valuation()))
        throw std::logic_error("digit law violated: |b_n|_p >= |a_n|_p at n=" + std::to_string(n));
}

// Rolling state for the three-term recurrences.
struct RecState {
    // X[0] = X_{n-1}, X[1] = X_{n-2}, X[2] = X_{n-3}
    std::array<Rat, 3> A{Rat(1), Rat(0), Rat(0)};   // A_{-1}, A_{-2}, (A_{-3} unused: 0)
    std::array<Rat, 3> B{Rat(0), Rat(1), Rat(0)};
    std::array<Rat, 3> C{Rat(0), Rat(0), Rat(0)};
    std::array<Rat, 3> tA{Rat(0), Rat(0), Rat(0)};  // tildeA_{-1}, below -1: 0
    std::array<Rat, 3> tB{Rat(0), Rat(0), Rat(0)};

    static Rat step3(const Rat& an, const Rat& bn, const std::array<Rat, 3>& X) {
        return an * X[0] + bn * X[1] + X[2];
    }
    static void push(std::array<Rat, 3>& X, Rat v) {
        X[2] = X[1];
        X[1] = X[0];
        X[0] = std::move(v);
    }
};

void append_step(ExpansionTrace& t, RecState& st, const YElem& a, const YElem& b,
                 std::optional<Rat> prev_a_rat) {
    long n = t.length();
    TraceStep s(t.p);
    s.a = a;
    s.b = b;
    Rat ar = a.to_rational(), br = b.to_rational();
    if (n == 0) {
        s.A = ar;
        s.B = br;
        s.C = Rat(1);
        s.tA = Rat(-1);
        s.tB = Rat(0);
        s.h = Val::inf();
        s.k = 0;
        s.K = 0;
    } else {
        s.A = RecState::step3(ar, br, st.A);
        s.B = RecState::step3(ar, br, st.B);
        s.C = RecState::step3(ar, br, st.C);
        if (n == 1) {
            s.tA = br;
            s.tB = Rat(1);
        } else {
            // tildeX_n = -b_n tildeX_{n-1} - a_{n-1} tildeX_{n-2} + tildeX_{n-3}
            s.tA = -br * st.tA[0] - *prev_a_rat * st.tA[1] + st.tA[2];
            s.tB = -br * st.tB[0] - *prev_a_rat * st.tB[1] + st.tB[2];
        }
        s.k = a.exponent();
        s.K = t.steps.back().K + s.k;
        s.h = b.is_zero() ? Val::inf() : Val::of(b.valuation().get() + s.k);
    }
    RecState::push(st.A, s.A);
    RecState::push(st.B, s.B);
    RecState::push(st.C, s.C);
    RecState::push(st.tA, s.tA);
    RecState::push(st.tB, s.tB);
    t.steps.push_back(std::move(s));
}

void fill_residual(const ExpansionTrace& t, TraceStep& s) {
    PAdic Cn = PAdic::exact(t.p, s.C);
    s.Va = Cn * t.alpha - PAdic::exact(t.p, s.A);
    s.Vb = Cn * t.beta - PAdic::exact(t.p, s.B);
    auto ia = s.Va.valuation_info(), ib = s.Vb.valuation_info();
    s.vVa = ia.val;
    s.vVb = ib.val;
    s.v_certified = ia.determined && ib.determined;
}

}  // namespace

MCFExpansion expand(const PAdic& alpha, const PAdic& beta, long max_depth) {
    ExpansionTrace t = expand_trace(alpha, beta, max_depth, false);
    return t.digits();
}

ExpansionTrace expand_trace(const PAdic& alpha, const PAdic& beta, long max_depth,
                            bool keep_quotients) {
    if (max_depth < 0) throw std::invalid_argument("expand: max_depth < 0");
    ExpansionTrace t{alpha.prime(), alpha, beta, TermStatus::DepthLimited, {}, std::nullopt};
    RecState st;
    PAdic ca = alpha, cb = beta;
    std::optional<Rat> prev_a;
    for (long n = 0; n < max_depth; ++n) {
        std::optional<JPStep> stepped;
        try {
            stepped = jp_step(ca, cb);
        } catch (const PrecisionExhausted&) {
            t.status = TermStatus::PrecisionExhausted;
            return t;
        } catch (const InsufficientPrecision&) {
            t.status = TermStatus::PrecisionExhausted;
            return t;
        }
        JPStep& step = *stepped;
        check_digit_laws(step.a, step.b, n);
        append_step(t, st, step.a, step.b, prev_a);
        TraceStep& s = t.steps.back();
        if (keep_quotients) {
            s.alpha = ca;
            s.beta = cb;
        }
        fill_residual(t, s);
        prev_a = step.a.to_rational();
        if (!step.next) {
            t.status = TermStatus::Finite;
            return t;
        }
        ca = step.next->first;
        cb = step.next->second;
    }
    return t;
}

ExpansionTrace trace_from_digits(const Prime& p, const std::vector<YElem>& a,
                                 const std::vector<YElem>& b, long margin) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("trace_from_digits: bad digit sequences");
    if (margin < 0) throw std::invalid_argument("trace_from_digits: margin < 0");
    long L = static_cast<long>(a.size());
    ExpansionTrace t{p, PAdic::exact(p, Rat(0)), PAdic::exact(p, Rat(0)),
                     TermStatus::DepthLimited, {}, std::nullopt};
    RecState st;
    std::optional<Rat> prev_a;
    for (long n = 0; n < L; ++n) {
        check_digit_laws(a[n], b[n], n);
        append_step(t, st, a[n], b[n], prev_a);
        prev_a = a[n].to_rational();
    }
    long N = L - 1;
    const TraceStep& deep = t.steps.back();
    if (deep.C == 0) throw std::invalid_argument("trace_from_digits: C_N == 0");
    t.alpha = PAdic::exact(p, deep.A / deep.C);
    t.beta = PAdic::exact(p, deep.B / deep.C);
    t.proxy = ProxyInfo{N, deep.K};
    for (long n = 0; n + margin <= N; ++n) {
        TraceStep& s = t.steps[static_cast<size_t>(n)];
        fill_residual(t, s);
        // proxy error: nu(C_n (alpha_true - Q_N)) >= K_N - K_n + floor((N+2)/2)
        Val ta = Val::of(deep.K - s.K + (N + 2) / 2);
        Val tb = Val::of(deep.K - s.K + (N + 3) / 2);
        s.v_certified = s.v_certified && s.vVa < ta && s.vVb < tb;
    }
    return t;
}

const TraceStep& ExpansionTrace::step(long n) const {
    if (n < 0 || n >= length())
        throw IndexOutOfRange("trace index " + std::to_string(n));
    return steps[static_cast<size_t>(n)];
}

Rat ExpansionTrace::A(long n) const {
    if (n == -2) return Rat(0);
    if (n == -1) return Rat(1);
    return step(n).A;
}
Rat ExpansionTrace::B(long n) const {
    if (n == -2) return Rat(1);
    if (n == -1) return Rat(0);
    return step(n).B;
}
Rat ExpansionTrace::C(long n) const {
    if (n == -2 || n == -1) return Rat(0);
    return step(n).C;
}
Rat ExpansionTrace::tildeA(long n) const {
    if (n == -1) return Rat(0);
    return step(n).tA;
}
Rat ExpansionTrace::tildeB(long n) const {
    if (n == -1) return Rat(0);
    return step(n).tB;
}
long ExpansionTrace::K(long n) const {
    if (n <= 0) return 0;
    return step(n).K;
}
Rat ExpansionTrace::Qalpha(long n) const {
    const TraceStep& s = step(n);
    if (s.C == 0) throw DivisionByZero();
    return s.A / s.C;
}
Rat ExpansionTrace::Qbeta(long n) const {
    const TraceStep& s = step(n);
    if (s.C == 0) throw DivisionByZero();
    return s.B / s.C;
}
PAdic ExpansionTrace::Va(long n) const {
    if (n == -2) return PAdic::exact(p, Rat(0));
    if (n == -1) return PAdic::exact(p, Rat(-1));
    return step(n).Va;
}
PAdic ExpansionTrace::Vb(long n) const {
    if (n == -2) return PAdic::exact(p, Rat(-1));
    if (n == -1) return PAdic::exact(p, Rat(0));
    return step(n).Vb;
}
Val ExpansionTrace::vVa(long n) const {
    if (n == -2) return Val::inf();
    if (n == -1) return Val::of(0);
    return step(n).vVa;
}
Val ExpansionTrace::vVb(long n) const {
    if (n == -2) return Val::of(0);
    if (n == -1) return Val::inf();
    return step(n).vVb;
}
bool ExpansionTrace::residuals_certified(long n) const {
    if (n == -2 || n == -1) return true;
    return step(n).v_certified;
}

MCFExpansion ExpansionTrace::digits() const {
    MCFExpansion e{p, {}, {}, status};
    e.a.reserve(steps.size());
    e.b.reserve(steps.size());
    for (const auto& s : steps) {
        e.a.push_back(s.a);
        e.b.push_back(s.b);
    }
    return e;
}

ConvergentTriple convergents(const MCFExpansion& e, long n) {
    if (n < -2 || n >= e.length())
        throw IndexOutOfRange("convergents index " + std::to_string(n));
    if (n == -2) return {Rat(0), Rat(1), Rat(0)};
    if (n == -1) return {Rat(1), Rat(0), Rat(0)};
    RecState st;
    ConvergentTriple out{Rat(0), Rat(0), Rat(0)};
    for (long i = 0; i <= n; ++i) {
        Rat ar = e.a[static_cast<size_t>(i)].to_rational();
        Rat br = e.b[static_cast<size_t>(i)].to_rational();
        out.A = i == 0 ? ar : RecState::step3(ar, br, st.A);
        out.B = i == 0 ? br : RecState::step3(ar, br, st.B);
        out.C = i == 0 ? Rat(1) : RecState::step3(ar, br, st.C);
        RecState::push(st.A, out.A);
        RecState::push(st.B, out.B);
        RecState::push(st.C, out.C);
    }
    return out;
}

std::pair<Rat, Rat> tilde_sequences(const MCFExpansion& e, long n) {
    if (n < -1 || n >= e.length())
        throw IndexOutOfRange("tilde index " + std::to_string(n));
    if (n == -1) return {Rat(0), Rat(0)};
    if (n == 0) return {Rat(-1), Rat(0)};
    std::array<Rat, 3> tA{Rat(-1), Rat(0), Rat(0)};  // tildeA_0, tildeA_{-1}, .
    std::array<Rat, 3> tB{Rat(0), Rat(0), Rat(0)};
    Rat curA(e.b[1].to_rational()), curB(1);
    RecState::push(tA, curA);
    RecState::push(tB, curB);
    for (long i = 2; i <= n; ++i) {
        Rat br = e.b[static_cast<size_t>(i)].to_rational();
        Rat ap = e.a[static_cast<size_t>(i - 1)].to_rational();
        curA = -br * tA[0] - ap * tA[1] + tA[2];
        curB = -br * tB[0] - ap * tB[1] + tB[2];
        RecState::push(tA, curA);
        RecState::push(tB, curB);
    }
    return {curA, curB};
}

long certified_prefix_radius(const MCFExpansion& e, long n) {
    if (n < 0 || n >= e.length())
        throw IndexOutOfRange("prefix radius index " + std::to_string(n));
    long K = 0;
    for (long i = 1; i <= n; ++i) K += e.a[static_cast<size_t>(i)].exponent();
    return 2 * K;
}

long certified_prefix_radius(const ExpansionTrace& t, long n) { return 2 * t.K(n); }

namespace {

/// Zero test for identity residues: exact values must vanish, truncated ones
/// must be indistinguishable from zero at a positive precision.
bool identity_holds(const PAdic& d) {
    if (d.is_exact()) return d.is_exact_zero();
    if (d.precision() <= 0)
        throw InsufficientPrecision("identity undecidable at retained precision");
    return d.indistinguishable_from_zero();
}

}  // namespace

IdentityReport identity_checks(const ExpansionTrace& t, long n) {
    IdentityReport rep;
    (void)t.step(n);  // bounds check

    // (i) matrix product identity and unit determinant
    std::array<std::array<Rat, 3>, 3> M{{{Rat(1), Rat(0), Rat(0)},
                                         {Rat(0), Rat(1), Rat(0)},
                                         {Rat(0), Rat(0), Rat(1)}}};
    for (long k = 0; k <= n; ++k) {
        Rat ak = t.step(k).a.to_rational(), bk = t.step(k).b.to_rational();
        // right-multiply by the step matrix [[a,1,0],[b,0,1],[1,0,0]]
        for (auto& row : M) {
            Rat c0 = row[0] * ak + row[1] * bk + row[2];
            Rat c1 = row[0];
            Rat c2 = row[1];
            row = {c0, c1, c2};
        }
    }
    for (int j = 0; j < 3; ++j) {
        rep.matrix_ok = rep.matrix_ok && M[0][static_cast<size_t>(j)] == t.A(n - j) &&
                        M[1][static_cast<size_t>(j)] == t.B(n - j) &&
                        M[2][static_cast<size_t>(j)] == t.C(n - j);
    }
    Rat det = t.A(n) * (t.B(n - 1) * t.C(n - 2) - t.B(n - 2) * t.C(n - 1)) -
              t.A(n - 1) * (t.B(n) * t.C(n - 2) - t.B(n - 2) * t.C(n)) +
              t.A(n - 2) * (t.B(n) * t.C(n - 1) - t.B(n - 1) * t.C(n));
    rep.det_ok = det == 1;

    // (ii) cross-difference identity, defined for n >= 2
    if (n >= 2) {
        Rat lhs = (t.Qalpha(n) - t.Qalpha(n - 1)) * (t.Qbeta(n) - t.Qbeta(n - 2)) -
                  (t.Qbeta(n) - t.Qbeta(n - 1)) * (t.Qalpha(n) - t.Qalpha(n - 2));
        rep.cross_ok = lhs == 1 / (t.C(n) * t.C(n - 1) * t.C(n - 2));
    }

    // (iii) identity (alpha - Q_{n-1})(beta - Q_{n-2}) - (beta - Q_{n-1})(alpha - Q_{n-2})
    if (n >= 2 && t.step(n).alpha.has_value()) {
        const PAdic& an = *t.step(n).alpha;
        const PAdic& bn = *t.step(n).beta;
        PAdic denom = an * PAdic::exact(t.p, t.C(n - 1)) + bn * PAdic::exact(t.p, t.C(n - 2)) +
                      PAdic::exact(t.p, t.C(n - 3));
        auto q = [&](const Rat& r) { return PAdic::exact(t.p, r); };
        PAdic lhs = (t.alpha - q(t.Qalpha(n - 1))) * (t.beta - q(t.Qbeta(n - 2))) -
                    (t.beta - q(t.Qbeta(n - 1))) * (t.alpha - q(t.Qalpha(n - 2)));
        PAdic rhs = (q(t.C(n - 1)) * q(t.C(n - 2)) * denom).inv();
        rep.diff_ok = identity_holds(lhs - rhs);
    }
    return rep;
}

bool residual_step_identity(const ExpansionTrace& t, long n) {
    if (n + 1 >= t.length() || !t.step(n + 1).alpha.has_value())
        throw IndexOutOfRange("residual step identity needs quotients at n+1");
    const PAdic& an1 = *t.step(n + 1).alpha;
    const PAdic& bn1 = *t.step(n + 1).beta;
    // alpha_{n+1} V_n + beta_{n+1} V_{n-1} + V_{n-2} = 0
    PAdic ra = an1 * t.Va(n) + bn1 * t.Va(n - 1) + t.Va(n - 2);
    PAdic rb = an1 * t.Vb(n) + bn1 * t.Vb(n - 1) + t.Vb(n - 2);
    return identity_holds(ra) && identity_holds(rb);
}

}  // namespace mcf
