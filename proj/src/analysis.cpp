#include "mcf/analysis.hpp"

#include <algorithm>

namespace mcf {

namespace {

Rat rat_pow(const Rat& x, long n) {
    if (n < 0) throw std::invalid_argument("rat_pow: negative exponent");
    Rat acc(1), base = x;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

std::string rs(const Rat& x) { return x.get_str(); }

Rat pow2_inv(long kappa) {
    Int d(1);
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(kappa));
    Rat r(1, d);
    r.canonicalize();
    return r;
}

}  // namespace

TildeX tilde_x(const Prime& p, long kappa) {
    if (kappa < 1) throw std::invalid_argument("tilde_x: kappa < 1");
    Rat half = rat_of(1, 2);
    Rat inv2p(1, 2 * p.value());
    Rat invp3(1, 1);
    invp3 /= Rat(p.pow(3));
    inv2p.canonicalize();
    auto f = [&](const Rat& x) -> Rat { return x * x * x - half * x * x - inv2p * x - invp3; };
    Rat lo = half, hi(1);
    // f(1/2) < 0 < f(1) for every odd prime
    Rat eps = pow2_inv(kappa);
    while (hi - lo > eps) {
        Rat mid = (lo + hi) / 2;
        Rat v = f(mid);
        if (v == 0) {
            lo = mid;
            hi = mid;
            break;
        }
        (v < 0 ? lo : hi) = mid;
    }
    return TildeX{p, lo, hi};
}

BoundReport check_rate_theorem(const ExpansionTrace& t, long n_max) {
    BoundReport rep{"rate_theorem", {}};
    long top = std::min(n_max, t.length() - 1);
    for (long n = 0; n <= top; ++n) {
        if (!t.residuals_certified(n)) continue;
        Val va = t.vVa(n), vb = t.vVb(n);
        Val ba = Val::of((n + 2) / 2), bb = Val::of((n + 3) / 2);
        rep.add(n, "vVa=" + va.str(), ba.str(), va >= ba);
        rep.add(n, "vVb=" + vb.str(), bb.str(), vb >= bb);
        Val m = min(va, vb);
        rep.add(n, "min=" + m.str(), std::to_string(n / 2 + 1), m >= Val::of(n / 2 + 1));
    }
    return rep;
}

BoundReport check_upper_bound(const ExpansionTrace& t, long n_max) {
    BoundReport rep{"upper_bound", {}};
    long top = std::min(n_max, t.length() - 1);
    for (long n = 0; n <= top; ++n) {
        PAdic d = t.Va(n - 1) * t.Vb(n - 2) - t.Vb(n - 1) * t.Va(n - 2);
        auto info = d.valuation_info();
        if (!info.determined) continue;
        if (t.proxy) {
            // proxy error must sit above the claimed valuation K_n
            long Kref = t.K(std::max(n - 1, 0L));
            long thr = t.proxy->K_N - Kref + (t.proxy->N + 2) / 2;
            if (!(Val::of(t.K(n)) < Val::of(thr))) continue;
        }
        rep.add(n, "v(det2)=" + info.val.str(), std::to_string(t.K(n)),
                info.val == Val::of(t.K(n)));
        if (n >= 1 && t.residuals_certified(n) && t.residuals_certified(n - 1) &&
            n + 1 <= t.length() - 1) {
            Val mn = min(t.vVa(n), t.vVb(n));
            Val mp = min(t.vVa(n - 1), t.vVb(n - 1));
            Val sum = mn + mp;
            rep.add(n, "minsum=" + sum.str(), "K_" + std::to_string(n + 1) + "=" +
                    std::to_string(t.K(n + 1)), sum <= Val::of(t.K(n + 1)));
        }
    }
    return rep;
}

long GrowthPlan::ell_at(long n) const {
    if (kind != Kind::Ells) throw std::logic_error("ell_at on non-Ells plan");
    if (n < 0) return 0;
    size_t i = std::min(static_cast<size_t>(n), ell.size() - 1);
    return ell[i];
}

void GrowthPlan::validate() const {
    switch (kind) {
        case Kind::Ells:
            if (ell.empty()) throw InvalidPlan("empty ell sequence");
            for (long e : ell)
                if (e < 1) throw InvalidPlan("ell_n must be >= 1");
            break;
        case Kind::Degree:
            if (D < 1) throw InvalidPlan("D must be >= 1");
            break;
        case Kind::UnitK:
            break;
    }
}

long GrowthPlan::f(long n) const {
    long s = 0;
    for (long j = 0; j <= n; ++j) s += ell_at(j);
    return s;
}

namespace {

/// Per-index digit constraints realized by construct_fast: exponent of a_m and
/// the guaranteed floor on nu(b_m).
struct DigitSchedule {
    std::vector<long> k;       // k_m for m = 1..depth-1 (k[0] unused)
    std::vector<long> nb_min;  // floor on nu(b_m)
};

DigitSchedule schedule_of(const GrowthPlan& plan, long depth) {
    DigitSchedule s;
    s.k.assign(static_cast<size_t>(depth), 0);
    s.nb_min.assign(static_cast<size_t>(depth), 0);
    long km1 = 0, km2 = 0;  // k_{m-1}, k_{m-2} with k_0 = k_{-1} = 0
    for (long m = 1; m < depth; ++m) {
        long k, nb;
        switch (plan.kind) {
            case GrowthPlan::Kind::UnitK:
                k = 1;
                nb = 0;
                break;
            case GrowthPlan::Kind::Ells:
                k = plan.ell_at(m - 1) + plan.ell_at(m - 2);
                nb = plan.ell_at(m - 1) - k;
                break;
            case GrowthPlan::Kind::Degree:
                k = (plan.D - 1) * (km1 + km2) + 2 * plan.D;
                nb = (plan.D - 1) * km1 + plan.D - k;
                break;
        }
        s.k[static_cast<size_t>(m)] = k;
        s.nb_min[static_cast<size_t>(m)] = nb;
        km2 = km1;
        km1 = k;
    }
    return s;
}

YElem random_a_digit(const Prime& p, long k, Rng& rng) {
    Int half = (p.pow(k + 1) - 1) / 2;
    for (;;) {
        Int m = rng.uniform(-half, half);
        if (m == 0) continue;
        if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p.value()))) continue;
        return YElem(p, m, k);
    }
}

YElem random_b_digit(const Prime& p, long nb_min, Rng& rng) {
    if (nb_min > 0) return YElem(p);  // only 0 has positive valuation inside Y
    long e = -nb_min;
    Int half = (p.pow(e + 1) - 1) / 2;
    Int m = rng.uniform(-half, half);
    if (m == 0) return YElem(p);
    long v = vp_int(m, p);
    Int mant;
    mpz_divexact(mant.get_mpz_t(), m.get_mpz_t(), p.pow(v).get_mpz_t());
    return YElem(p, mant, e - v);
}

}  // namespace

ConstructedDigits construct_fast(const GrowthPlan& plan, const Prime& p, long depth, Rng& rng) {
    plan.validate();
    if (depth < 1) throw InvalidPlan("depth must be >= 1");
    DigitSchedule sched = schedule_of(plan, depth);
    ConstructedDigits out;
    long half0 = (p.value() - 1) / 2;
    out.a.push_back(YElem(p, Int(rng.uniform_long(-half0, half0)), 0));
    out.b.push_back(YElem(p, Int(rng.uniform_long(-half0, half0)), 0));
    for (long m = 1; m < depth; ++m) {
        out.a.push_back(random_a_digit(p, sched.k[static_cast<size_t>(m)], rng));
        out.b.push_back(random_b_digit(p, sched.nb_min[static_cast<size_t>(m)], rng));
    }
    return out;
}

ExpansionTrace construct_fast_trace(const GrowthPlan& plan, const Prime& p, long n_max,
                                    long margin, Rng& rng) {
    ConstructedDigits d = construct_fast(plan, p, n_max + margin + 1, rng);
    return trace_from_digits(p, d.a, d.b, margin);
}

BoundReport growth_bound(const ExpansionTrace& t, long n_max, const TildeX& xt) {
    BoundReport rep{"growth_bound", {}};
    long top = std::min(n_max, t.length() - 1);
    Rat plo = xt.scaled_lo(), phi = xt.scaled_hi();
    Rat H(0);
    for (long i = 0; i <= std::min(top, 2L); ++i) {
        Rat scale = rat_pow(plo, i);
        for (const Rat& x : {t.A(i), t.B(i), t.C(i)}) H = std::max(H, Rat(rat_abs(x) / scale));
    }
    for (long n = 0; n <= top; ++n) {
        Rat m = std::max({rat_abs(t.A(n)), rat_abs(t.B(n)), rat_abs(t.C(n))});
        Rat ub = H * rat_pow(phi, n);
        rep.add(n, rs(m), "<=" + rs(ub), m <= ub);
        Rat lb = height_floor(n, t.K(n), t.p, xt).scaled;
        rep.add(n, rs(m), ">=" + rs(lb), m >= lb);
    }
    return rep;
}

StepBoundResult step_bound(const Rat& x0, const Rat& y0, const Int& z0, const Prime& p,
                           const TildeX& xt) {
    if (z0 == 0) throw std::invalid_argument("step_bound: z0 == 0");
    for (const Rat* w : {&x0, &y0}) {
        Int den = w->get_den();
        while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p.value())))
            mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(),
                            static_cast<unsigned long>(p.value()));
        if (den != 1) throw std::invalid_argument("step_bound: x0, y0 must lie in Z[1/p]");
    }
    Rat ax = rat_abs(x0), ay = rat_abs(y0), az = rat_abs(Rat(z0));
    Rat pr(p.value());
    StepBoundResult r{Rat(0), 0, 0, false, false};
    Rat two_p_term = Rat(1, 2 * p.value()) + rat_of(1, 4);
    r.M = std::max({az, Rat(ay / pr + az / 2),
                    Rat(ax / (pr * pr) + ay / (2 * pr) + two_p_term * az)});
    Rat s2 = std::max({az, Rat((ay + az) / 2), Rat((ax + ay + az) / 4)});
    Rat s2bis = ax + ay + az;
    Rat s3 = Rat(3 * std::max({ax, ay, az}));
    r.chain_ok = r.M <= s2 && s2 <= s2bis && s2bis <= s3;

    Rat pw(1);
    while (r.M * pw > 1) {
        pw *= xt.hi;
        ++r.cert_bound;
    }
    PAdic alpha = PAdic::exact(p, Rat(x0) / Rat(z0));
    PAdic beta = PAdic::exact(p, Rat(y0) / Rat(z0));
    MCFExpansion e = expand(alpha, beta, r.cert_bound + 5);
    r.terminated = e.status == TermStatus::Finite;
    r.actual = e.length();
    return r;
}

HeightFloor height_floor(long n, long K_n, const Prime& p, const TildeX& xt) {
    Rat pw = rat_pow(xt.hi, n);
    HeightFloor f;
    f.plain = 1 / (3 * pw);
    f.scaled = f.plain / Rat(p.pow(K_n));
    return f;
}

bool height_floor_holds(const ExpansionTrace& tr, long n, const Rat& t, const Rat& u,
                        const Rat& v, const TildeX& xt) {
    if (n + 1 > tr.length() - 1)
        throw IndexOutOfRange("height_floor_holds: trace too short for n+1");
    if (v == 0) return true;
    long R = 2 * tr.K(n + 1);
    Val da = vp(tr.alpha.repr() - t / v, tr.p);
    Val db = vp(tr.beta.repr() - u / v, tr.p);
    if (!(min(da, db) > Val::of(R))) return true;  // outside the open ball
    Rat height = std::max({rat_abs(t), rat_abs(u), rat_abs(v)});
    return height >= height_floor(n, tr.K(n), tr.p, xt).plain;
}

BoundReport linear_dependence_monitor(const ExpansionTrace& t, const Rat& A, const Rat& B,
                                      const Rat& C, long n_max) {
    BoundReport rep{"linear_dependence", {}};
    PAdic rel = PAdic::exact(t.p, A) * t.alpha + PAdic::exact(t.p, B) * t.beta +
                PAdic::exact(t.p, C);
    if (!(rel.is_exact_zero() || rel.indistinguishable_from_zero()))
        throw std::invalid_argument("declared relation does not hold on the inputs");

    Val va = t.alpha.valuation_lb(), vb = t.beta.valuation_lb();
    long delta = 0;
    if (!va.is_inf()) delta = std::max(delta, -va.get());
    if (!vb.is_inf()) delta = std::max(delta, -vb.get());

    long top = std::min(n_max, t.length() - 1);
    bool s_zero_tail = false;
    for (long n = 0; n <= top; ++n) {
        Rat Sn = A * t.A(n - 1) + B * t.B(n - 1) + C * t.C(n - 1);
        // S_n = -(A V^a_{n-1} + B V^b_{n-1}); the combination below must vanish
        PAdic comb = PAdic::exact(t.p, Sn) + PAdic::exact(t.p, A) * t.Va(n - 1) +
                     PAdic::exact(t.p, B) * t.Vb(n - 1);
        bool ok = comb.is_exact() ? comb.is_exact_zero() : comb.indistinguishable_from_zero();
        rep.add(n, "S_" + std::to_string(n) + "=" + rs(Sn), "-(A*Va+B*Vb)", ok);
        s_zero_tail = Sn == 0;
        if (t.residuals_certified(n)) {
            Val mv = min(t.vVa(n), t.vVb(n));
            Rat Mn = std::max({rat_abs(t.A(n)), rat_abs(t.B(n)), rat_abs(t.C(n))}) *
                     Rat(t.p.pow(t.K(n) + delta));
            Rat UnMn(0);
            if (!mv.is_inf()) {
                long e = t.K(n) + mv.get();
                Rat Un = e >= 0 ? Rat(1) / Rat(t.p.pow(e)) : Rat(t.p.pow(-e));
                UnMn = Un * Mn;
            }
            rep.add(n, "UnMn=" + rs(UnMn), "reported", true);
        }
    }
    rep.add(top + 1,
            t.status == TermStatus::Finite ? "expansion finite" : "expansion not finite",
            s_zero_tail ? "S vanishes at tail" : "S nonzero at tail", true);
    return rep;
}

long RelationPoly::total_degree() const {
    long d = 0;
    for (const auto& [i, j, c] : terms)
        if (c != 0) d = std::max(d, i + j);
    return d;
}

Int RelationPoly::coeff_abs_sum() const {
    Int s(0);
    for (const auto& [i, j, c] : terms) s += abs(c);
    return s;
}

Rat RelationPoly::eval(const Rat& x, const Rat& y) const {
    Rat acc(0);
    for (const auto& [i, j, c] : terms) acc += Rat(c) * rat_pow(x, i) * rat_pow(y, j);
    return acc;
}

PAdic RelationPoly::eval(const PAdic& x, const PAdic& y) const {
    PAdic acc = PAdic::exact(x.prime(), Rat(0));
    for (const auto& [i, j, c] : terms) {
        PAdic term = PAdic::exact(x.prime(), Rat(c));
        for (long r = 0; r < i; ++r) term = term * x;
        for (long r = 0; r < j; ++r) term = term * y;
        acc = acc + term;
    }
    return acc;
}

RelationPoly RelationPoly::dX() const {
    RelationPoly d;
    for (const auto& [i, j, c] : terms)
        if (i > 0) d.terms.emplace_back(i - 1, j, c * Int(i));
    return d;
}

RelationPoly RelationPoly::dY() const {
    RelationPoly d;
    for (const auto& [i, j, c] : terms)
        if (j > 0) d.terms.emplace_back(i, j - 1, c * Int(j));
    return d;
}

BoundReport relation_propagation_check(const RelationPoly& F,
                                       const std::vector<Approximant>& approx,
                                       const PAdic& alpha, const PAdic& beta) {
    BoundReport rep{"relation_propagation", {}};
    const Prime& p = alpha.prime();
    PAdic at_root = F.eval(alpha, beta);
    if (!(at_root.is_exact_zero() || at_root.indistinguishable_from_zero()))
        throw std::invalid_argument("F(alpha, beta) != 0 at the working precision");

    long D = F.total_degree();
    Int K = F.coeff_abs_sum();
    PAdic A10 = F.dX().eval(alpha, beta);
    PAdic A01 = F.dY().eval(alpha, beta);
    long h;  // H = p^{-h}, the larger of |A10|_p, |A01|_p
    {
        Val v10 = A10.valuation(), v01 = A01.valuation();
        h = min(v10, v01).get();
    }

    for (size_t idx = 0; idx < approx.size(); ++idx) {
        long n = static_cast<long>(idx);
        const Approximant& ap = approx[idx];
        if (ap.v == 0) throw std::invalid_argument("approximant with v == 0");
        Rat tx(ap.t, ap.v), uy(ap.u, ap.v);
        tx.canonicalize();
        uy.canonicalize();
        Int Mn = std::max({Int(abs(ap.t)), Int(abs(ap.u)), Int(abs(ap.v))});
        Rat Fv = F.eval(tx, uy);
        if (Fv == 0) {
            rep.add(n, "F=0", "relation holds", true);
            continue;
        }
        Rat KMD = Rat(K) * rat_pow(Rat(Mn), D);
        long vF = vp(Fv, p).get();
        // |F|_p >= 1/(K M^D)  <=>  p^{vF} <= K M^D
        bool ok1 = vF <= 0 || Rat(p.pow(vF)) <= KMD;
        rep.add(n, "p^vF=" + std::to_string(vF), "<=K*M^D=" + rs(KMD), ok1);
        // m = min valuation of the two differences; a difference that is
        // indistinguishable from zero only contributes a lower bound, which is
        // enough when the other coordinate's valuation is determined and smaller
        PAdic da = alpha - PAdic::exact(p, tx);
        PAdic db = beta - PAdic::exact(p, uy);
        auto ia = da.valuation_info();
        auto ib = db.valuation_info();
        std::optional<long> m;
        if (ia.determined && ib.determined)
            m = min(ia.val, ib.val).get();
        else if (ia.determined && ia.val <= db.valuation_lb())
            m = ia.val.get();
        else if (ib.determined && ib.val <= da.valuation_lb())
            m = ib.val.get();
        if (!m) {
            rep.add(n, "m uncertifiable at working precision", "skipped", true);
            continue;
        }
        // U_n >= 1/(H K M^D)  <=>  p^{m+h} <= K M^D
        bool ok2 = *m + h <= 0 || Rat(p.pow(*m + h)) <= KMD;
        rep.add(n, "p^(m+h), m=" + std::to_string(*m), "<=K*M^D", ok2);
    }
    return rep;
}

namespace {

// Offset C making min nu(V_n) >= (D-1)K_n + Dn + C hold on the first indices.
long calibrate_C(const ExpansionTrace& t, long D, long n_max) {
    long Cc = 0;
    bool have_c = false;
    for (long i = 0; i <= std::min(2L, n_max); ++i) {
        if (!t.residuals_certified(i)) continue;
        Val mv = min(t.vVa(i), t.vVb(i));
        if (mv.is_inf()) continue;
        long c = mv.get() - (D - 1) * t.K(i) - D * i;
        Cc = have_c ? std::min(Cc, c) : c;
        have_c = true;
    }
    return Cc;
}

}  // namespace

BoundReport check_construction(const ExpansionTrace& t, const GrowthPlan& plan, long n_max) {
    plan.validate();
    BoundReport rep{"construction", {}};
    long Cc = plan.kind == GrowthPlan::Kind::Degree ? calibrate_C(t, plan.D, n_max) : 0;
    long top = std::min(n_max, t.length() - 1);
    for (long n = 0; n <= top; ++n) {
        if (!t.residuals_certified(n)) continue;
        Val mv = min(t.vVa(n), t.vVb(n));
        switch (plan.kind) {
            case GrowthPlan::Kind::Ells: {
                long f = plan.f(n);
                rep.add(n, "minv=" + mv.str(), ">=" + std::to_string(f), mv >= Val::of(f));
                break;
            }
            case GrowthPlan::Kind::UnitK: {
                long tgt = n / 2 + 1;
                rep.add(n, "minv=" + mv.str(), "==" + std::to_string(tgt),
                        mv == Val::of(tgt));
                break;
            }
            case GrowthPlan::Kind::Degree: {
                long tgt = (plan.D - 1) * t.K(n) + plan.D * n + Cc;
                rep.add(n, "minv=" + mv.str(), ">=" + std::to_string(tgt),
                        mv >= Val::of(tgt));
                break;
            }
        }
    }
    return rep;
}

BoundReport fast_relation_suite(const GrowthPlan& plan, long D, const Prime& p, long n_max,
                                long margin, Rng& rng) {
    plan.validate();
    if (D < 1) throw InvalidPlan("D must be >= 1");
    long depth = n_max + margin + 1;
    DigitSchedule sched = schedule_of(plan, depth);
    {
        long km1 = 0, km2 = 0;
        for (long m = 1; m < depth; ++m) {
            long k = sched.k[static_cast<size_t>(m)];
            long h = sched.nb_min[static_cast<size_t>(m)] + k;
            if (k < (D - 1) * (km1 + km2) + 2 * D)
                throw InvalidPlan("plan violates k_{n+1} >= (D-1)(k_n+k_{n-1}) + 2D");
            if (h < (D - 1) * km1 + D)
                throw InvalidPlan("plan violates h_{n+1} >= (D-1)k_n + D");
            km2 = km1;
            km1 = k;
        }
    }
    ExpansionTrace t = construct_fast_trace(plan, p, n_max, margin, rng);
    BoundReport rep{"fast_relation", {}};
    long Cc = calibrate_C(t, D, n_max);  // offset from the pre-asymptotic window

    long delta = 0;  // alpha, beta may have negative valuation
    for (const PAdic* z : {&t.alpha, &t.beta}) {
        Val v = z->valuation_lb();
        if (!v.is_inf()) delta = std::max(delta, -v.get());
    }

    std::vector<Rat> un_mnD;
    for (long n = 0; n <= n_max; ++n) {
        if (!t.residuals_certified(n)) continue;
        Val mv = min(t.vVa(n), t.vVb(n));
        long target = (D - 1) * t.K(n) + D * n + Cc;
        rep.add(n, "minv=" + mv.str(), ">=" + std::to_string(target), mv >= Val::of(target));
        if (mv.is_inf()) continue;
        Rat scale(p.pow(t.K(n) + delta));
        for (const Rat* conv : {&t.step(n).A, &t.step(n).B, &t.step(n).C})
            if (Rat(*conv * scale).get_den() != 1)
                throw std::logic_error("scaled convergent is not an integer");
        Rat Mn = std::max({rat_abs(t.A(n)), rat_abs(t.B(n)), rat_abs(t.C(n))}) * scale;
        long e = t.K(n) + mv.get();
        Rat Un = e >= 0 ? Rat(1) / Rat(p.pow(e)) : Rat(p.pow(-e));
        un_mnD.push_back(Un * rat_pow(Mn, D));
    }
    // the products decay geometrically overall but admit small local bumps, so
    // compare against a lenient geometric envelope instead of term-by-term
    bool decays = un_mnD.size() >= 6 && un_mnD.back() < rat_of(1, 1000000);
    Rat env = un_mnD.empty() ? Rat(0) : un_mnD.front();
    for (size_t i = 1; i < un_mnD.size(); ++i) {
        env *= rat_of(9, 10);
        if (!(un_mnD[i] <= env)) decays = false;
    }
    rep.add(n_max + 1, "UnMn^D under geometric envelope", "ratio 9/10, tail < 1e-6",
            decays);
    return rep;
}

}  // namespace mcf
