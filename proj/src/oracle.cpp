#include "mcf/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcf::oracle {

namespace {

// Independent valuation: strip factors of p from numerator and denominator.
long naive_vp(const Rat& x, const Prime& p) {
    if (x == 0) throw std::invalid_argument("naive_vp of zero");
    long v = 0;
    Int n = x.get_num(), d = x.get_den(), pb = p.big();
    while (n % pb == 0) {
        n /= pb;
        ++v;
    }
    while (d % pb == 0) {
        d /= pb;
        --v;
    }
    return v;
}

bool vp_at_least(const Rat& x, const Prime& p, long bound) {
    if (x == 0) return true;
    return naive_vp(x, p) >= bound;
}

}  // namespace

std::vector<long> naive_balanced_expand(const Rat& x, const Prime& p, long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("naive_balanced_expand: empty window");
    if (!vp_at_least(x, p, lo))
        throw std::invalid_argument("naive_balanced_expand: valuation below window");
    Rat y = x;
    Rat pr(p.value());
    for (long j = 0; j > lo; --j) y *= pr;
    for (long j = 0; j < lo; ++j) y /= pr;
    long half = (p.value() - 1) / 2;
    std::vector<long> digits;
    for (long j = lo; j <= hi; ++j) {
        long found = half + 1;
        for (long r = -half; r <= half; ++r) {
            if (vp_at_least(y - Rat(r), p, 1)) {
                found = r;
                break;
            }
        }
        if (found > half)
            throw std::invalid_argument("naive_balanced_expand: no balanced remainder");
        digits.push_back(found);
        y = (y - Rat(found)) / pr;
    }
    return digits;
}

Rat naive_s(const Rat& x, const Prime& p) {
    if (x == 0) return Rat(0);
    long v = naive_vp(x, p);
    long lo = std::min(v, 0L);
    std::vector<long> d = naive_balanced_expand(x, p, lo, 0);
    Rat acc(0), pw(1);
    Rat pr(p.value());
    for (long j = 0; j > lo; --j) pw /= pr;  // pw = p^lo
    for (size_t i = 0; i < d.size(); ++i) {
        acc += Rat(d[i]) * pw;
        pw *= pr;
    }
    return acc;
}

RationalJPRun rational_jp(const Rat& x0, const Rat& y0, const Int& z0, const Prime& p,
                          long max_steps) {
    if (z0 == 0) throw std::invalid_argument("rational_jp: z0 == 0");
    for (const Rat* w : {&x0, &y0}) {
        Int den = w->get_den();
        while (den % p.value() == 0) den /= p.value();
        if (den != 1)
            throw std::invalid_argument("rational_jp: x0, y0 must lie in Z[1/p]");
    }
    RationalJPRun run;
    Rat x = x0, y = y0, z(z0);
    for (long n = 0; n < max_steps; ++n) {
        run.states.push_back({x, y, z});
        Rat a = naive_s(Rat(x / z), p), b = naive_s(Rat(y / z), p);
        run.digits.emplace_back(a, b);
        ++run.steps;
        Rat ynext = x - a * z;
        Rat znext = y - b * z;
        if (znext == 0) {
            run.terminated = true;
            run.states.push_back({z, ynext, znext});
            return run;
        }
        x = z;
        y = ynext;
        z = znext;
    }
    return run;
}

SearchResult small_height_search(const ExpansionTrace& tr, long n, long height_cap,
                                 long exponent_cap, const TildeX& xt, bool parallel) {
    if (!tr.alpha.is_exact() || !tr.beta.is_exact())
        throw std::invalid_argument("small_height_search needs exact inputs");
    if (n + 1 > tr.length() - 1)
        throw std::invalid_argument("small_height_search: trace shorter than n+2");
    const Prime& p = tr.p;
    const Rat alpha = tr.alpha.repr(), beta = tr.beta.repr();
    long R = 2 * tr.K(n + 1) + 1;  // need valuation >= R, i.e. |.|_p < p^{-2K_{n+1}}
    Rat floor = height_floor(n, tr.K(n), p, xt).plain;

    // The Z[1/p] lattice slice: mantissa m with |m| <= cap, exponent 0..cap_e,
    // skipping duplicate representations (p | m with positive exponent).
    std::vector<Rat> lattice;
    for (long e = 0; e <= exponent_cap; ++e) {
        Rat scale(1, 1);
        if (e > 0) scale = Rat(1, p.pow(e));
        scale.canonicalize();
        for (long m = -height_cap; m <= height_cap; ++m) {
            if (e > 0 && (m == 0 || m % p.value() == 0)) continue;
            lattice.push_back(Rat(m) * scale);
        }
    }

    SearchResult out;
    out.floor = floor;
    std::vector<std::vector<SearchHit>> buckets;
    std::vector<long long> counts;
    long vmax = height_cap;
#ifdef _OPENMP
    int nth = parallel ? omp_get_max_threads() : 1;
#else
    int nth = 1;
    (void)parallel;
#endif
    buckets.resize(static_cast<size_t>(nth));
    counts.assign(static_cast<size_t>(nth), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nth) if (parallel)
#endif
    for (long vi = 1; vi <= 2 * vmax; ++vi) {
#ifdef _OPENMP
        int tid = omp_get_thread_num();
#else
        int tid = 0;
#endif
        long v = vi <= vmax ? vi : -(vi - vmax);
        Rat vr(v);
        std::vector<Rat> ts, us;
        for (const Rat& cand : lattice) {
            ++counts[static_cast<size_t>(tid)];
            if (vp_at_least(alpha - cand / vr, p, R)) ts.push_back(cand);
            ++counts[static_cast<size_t>(tid)];
            if (vp_at_least(beta - cand / vr, p, R)) us.push_back(cand);
        }
        for (const Rat& t : ts)
            for (const Rat& u : us) {
                Rat h = std::max({rat_abs(t), rat_abs(u), rat_abs(Rat(v))});
                buckets[static_cast<size_t>(tid)].push_back({t, u, Int(v), h, h >= floor});
            }
    }
    for (int i = 0; i < nth; ++i) {
        out.candidates += counts[static_cast<size_t>(i)];
        out.hits.insert(out.hits.end(), buckets[static_cast<size_t>(i)].begin(),
                        buckets[static_cast<size_t>(i)].end());
    }
    std::sort(out.hits.begin(), out.hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.height != b.height) return a.height < b.height;
        if (a.t != b.t) return a.t < b.t;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    return out;
}

}  // namespace mcf::oracle
