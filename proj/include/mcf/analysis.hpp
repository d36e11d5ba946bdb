#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mcf/engine.hpp"
#include "mcf/random.hpp"

namespace mcf {

/// Certified rational enclosure of the positive real root of
/// X^3 - X^2/2 - X/(2p) - 1/p^3. Always contained in (1/2, 1).
struct TildeX {
    Prime p;
    Rat lo, hi;

    Rat mid() const { return (lo + hi) / 2; }
    Rat width() const { return hi - lo; }
    /// Enclosure of the companion root p*xt of X^3 - (p/2)X^2 - (p/2)X - 1.
    Rat scaled_lo() const { return lo * p.big(); }
    Rat scaled_hi() const { return hi * p.big(); }
};

/// Sign-change bisection in exact rational arithmetic; width <= 2^-kappa.
TildeX tilde_x(const Prime& p, long kappa);

struct BoundRow {
    long n;
    std::string lhs, rhs;
    bool ok;
};

struct BoundReport {
    std::string name;
    std::vector<BoundRow> rows;

    void add(long n, std::string lhs, std::string rhs, bool ok) {
        rows.push_back({n, std::move(lhs), std::move(rhs), ok});
    }
    bool all_hold() const {
        for (const auto& r : rows)
            if (!r.ok) return false;
        return true;
    }
    std::optional<long> first_violation() const {
        for (const auto& r : rows)
            if (!r.ok) return r.n;
        return std::nullopt;
    }
};

/// nu(alpha - Q_n^a) >= K_n + floor((n+2)/2), nu(beta - Q_n^b) >= K_n + floor((n+3)/2),
/// and min residual valuation >= floor(n/2) + 1, over certified indices n <= n_max.
BoundReport check_rate_theorem(const ExpansionTrace& t, long n_max);

/// nu(V_{n-1}^a V_{n-2}^b - V_{n-1}^b V_{n-2}^a) == K_n, and
/// min_n + min_{n-1} <= K_{n+1}.
BoundReport check_upper_bound(const ExpansionTrace& t, long n_max);

/// Digit-generation plan for fast-convergent expansions.
struct GrowthPlan {
    enum class Kind { Ells, Degree, UnitK };
    Kind kind = Kind::UnitK;
    std::vector<long> ell;  // Ells: ell_n = ell[min(n, size-1)]
    long D = 1;             // Degree

    static GrowthPlan ells(std::vector<long> e) {
        GrowthPlan g;
        g.kind = Kind::Ells;
        g.ell = std::move(e);
        return g;
    }
    static GrowthPlan degree(long D) {
        GrowthPlan g;
        g.kind = Kind::Degree;
        g.D = D;
        return g;
    }
    static GrowthPlan unit_k() { return GrowthPlan{}; }

    long ell_at(long n) const;  // Ells only; ell_{-1} = ell_{-2} = 0
    void validate() const;      // throws InvalidPlan
    /// Cumulative target f(n) = sum_{j=0}^n ell_j (Ells plans).
    long f(long n) const;
};

struct ConstructedDigits {
    std::vector<YElem> a, b;
};

/// Randomized digits meeting the plan's k/h constraints exactly at the floor.
ConstructedDigits construct_fast(const GrowthPlan& plan, const Prime& p, long depth, Rng& rng);

/// construct_fast + trace with deep-convergent proxy limit.
ExpansionTrace construct_fast_trace(const GrowthPlan& plan, const Prime& p, long n_max,
                                    long margin, Rng& rng);

/// Euclidean growth: max{|A_n|,|B_n|,|C_n|} <= H (p*xt)^n with H from the first
/// three terms; plus the companion floor max >= 1/(3 p^{K_n} xt^n).
BoundReport growth_bound(const ExpansionTrace& t, long n_max, const TildeX& xt);

struct StepBoundResult {
    Rat M;
    long cert_bound;  // certified n* with M * xt_hi^{n*} <= 1 (upper enclosure of
                      // -log M / log xt)
    long actual;      // digit pairs emitted before termination
    bool terminated;
    bool chain_ok;    // M <= stima2 <= stima2bis <= 3*max
};

/// Termination bound for rational input alpha = x0/z0, beta = y0/z0.
StepBoundResult step_bound(const Rat& x0, const Rat& y0, const Int& z0, const Prime& p,
                           const TildeX& xt);

struct HeightFloor {
    Rat plain;   // 1/(3 xt_hi^n)
    Rat scaled;  // 1/(3 p^{K_n} xt_hi^n)
};
HeightFloor height_floor(long n, long K_n, const Prime& p, const TildeX& xt);

/// Companion checker: a triple (t, u, v) inside the p^{-2K_{n+1}} ball around
/// the trace's pair must have height >= 1/(3 xt_hi^n). Returns true when the
/// triple is outside the ball (vacuous) or the floor holds.
bool height_floor_holds(const ExpansionTrace& tr, long n, const Rat& t, const Rat& u,
                        const Rat& v, const TildeX& xt);

/// S_n = A A_{n-1} + B B_{n-1} + C C_{n-1} checked against the residual
/// combination -(A V_{n-1}^a + B V_{n-1}^b) at every index; reports U_n * M_n.
BoundReport linear_dependence_monitor(const ExpansionTrace& t, const Rat& A, const Rat& B,
                                      const Rat& C, long n_max);

/// Bivariate integer polynomial F(X, Y).
struct RelationPoly {
    std::vector<std::tuple<long, long, Int>> terms;  // (deg_x, deg_y, coeff)

    long total_degree() const;
    Int coeff_abs_sum() const;  // K
    Rat eval(const Rat& x, const Rat& y) const;
    PAdic eval(const PAdic& x, const PAdic& y) const;
    RelationPoly dX() const;
    RelationPoly dY() const;
};

struct Approximant {
    Int t, u, v;
};

/// Liouville-type contrapositive: at every index with F(t/v, u/v) != 0,
/// |F(t/v, u/v)|_p >= 1/(K M^D) and U_n >= 1/(H K M^D).
BoundReport relation_propagation_check(const RelationPoly& F,
                                       const std::vector<Approximant>& approx,
                                       const PAdic& alpha, const PAdic& beta);

/// Plan-specific valuation report on a constructed trace: Ells plans must meet
/// min nu(V_n) >= f(n); UnitK plans must hit min nu(V_n) == floor(n/2) + 1
/// exactly; Degree plans must meet min nu(V_n) >= (D-1)K_n + Dn + C with C
/// calibrated on the first indices.
BoundReport check_construction(const ExpansionTrace& t, const GrowthPlan& plan, long n_max);

/// Constructs a D-compatible expansion, verifies
/// min nu(V_n) >= (D-1) K_n + D n + C, and checks U_n * M_n^D decays.
BoundReport fast_relation_suite(const GrowthPlan& plan, long D, const Prime& p, long n_max,
                                long margin, Rng& rng);

}  // namespace mcf
