#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mcf/padic.hpp"

namespace mcf {

enum class TermStatus { Finite, DepthLimited, PrecisionExhausted };

/// One Jacobi-Perron step. `next` is empty when beta_k - b_k == 0 exactly
/// (the algorithm terminates with this digit pair included).
/// Throws PrecisionExhausted when termination cannot be decided on a
/// truncated input.
struct JPStep {
    YElem a, b;
    std::optional<std::pair<PAdic, PAdic>> next;
};
JPStep jp_step(const PAdic& alpha, const PAdic& beta);

/// Digit pairs of a dimension-2 p-adic MCF.
struct MCFExpansion {
    Prime p;
    std::vector<YElem> a, b;
    TermStatus status;

    long length() const { return static_cast<long>(a.size()); }
};

MCFExpansion expand(const PAdic& alpha, const PAdic& beta, long max_depth);

struct ConvergentTriple {
    Rat A, B, C;
};

/// (A_n, B_n, C_n) by the three-term recurrence, n >= -2.
ConvergentTriple convergents(const MCFExpansion& e, long n);

/// (tildeA_n, tildeB_n) by their recurrence, n >= -1.
std::pair<Rat, Rat> tilde_sequences(const MCFExpansion& e, long n);

/// Radius exponent 2*K_n of the certified-prefix ball: any input pair within
/// p-adic distance < p^{-2K_n} shares the digit pairs 0..n.
long certified_prefix_radius(const MCFExpansion& e, long n);

/// Full per-step record of a run.
struct TraceStep {
    YElem a, b;
    std::optional<PAdic> alpha, beta;  // complete quotients, when retained
    Rat A, B, C;
    Rat tA, tB;
    Val h;      // nu_p(b_n/a_n); +inf when b_n == 0; meaningful for n >= 1
    long k = 0;
    long K = 0;
    PAdic Va, Vb;  // residuals C_n*alpha - A_n, C_n*beta - B_n
    Val vVa = Val::of(0), vVb = Val::of(0);
    bool v_certified = false;

    TraceStep(const Prime& p)
        : a(p), b(p), Va(PAdic::exact(p, Rat(0))), Vb(PAdic::exact(p, Rat(0))) {}
};

/// Marks a trace whose alpha/beta are deep convergents standing in for the
/// true limit of a digit-prescribed expansion.
struct ProxyInfo {
    long N;    // depth of the stand-in convergent
    long K_N;
};

struct ExpansionTrace {
    Prime p;
    PAdic alpha, beta;  // inputs (or proxy limits)
    TermStatus status;
    std::vector<TraceStep> steps;
    std::optional<ProxyInfo> proxy;

    long length() const { return static_cast<long>(steps.size()); }
    const TraceStep& step(long n) const;

    // Seeded sequences; indices from -2 (convergents, residuals) or -1 (tilde).
    Rat A(long n) const;
    Rat B(long n) const;
    Rat C(long n) const;
    Rat tildeA(long n) const;
    Rat tildeB(long n) const;
    long K(long n) const;  // K_0 = 0
    Rat Qalpha(long n) const;
    Rat Qbeta(long n) const;
    PAdic Va(long n) const;
    PAdic Vb(long n) const;
    /// Residual valuations; certified exact when residuals_certified(n).
    Val vVa(long n) const;
    Val vVb(long n) const;
    bool residuals_certified(long n) const;

    MCFExpansion digits() const;
};

ExpansionTrace expand_trace(const PAdic& alpha, const PAdic& beta, long max_depth,
                            bool keep_quotients = true);

/// Trace of a digit-prescribed expansion. The limit pair is represented by the
/// deepest convergent; residual valuations are computed for indices n with
/// n + margin <= deepest index and flagged certified when the proxy error
/// provably cannot affect them.
ExpansionTrace trace_from_digits(const Prime& p, const std::vector<YElem>& a,
                                 const std::vector<YElem>& b, long margin);

struct IdentityReport {
    bool matrix_ok = true;  // matrix product equals the stacked convergent matrix
    bool det_ok = true;     // determinant == 1
    bool cross_ok = true;   // cross-difference identity against 1/(C_n C_{n-1} C_{n-2})
    bool diff_ok = true;    // identity relating (alpha - Q)(beta - Q) differences
                            // to the complete quotients
    bool all() const { return matrix_ok && det_ok && cross_ok && diff_ok; }
};

/// Exact on exact inputs, valuation-level on truncated ones.
IdentityReport identity_checks(const ExpansionTrace& t, long n);

/// V_n = -(beta_{n+1}/alpha_{n+1}) V_{n-1} - (1/alpha_{n+1}) V_{n-2},
/// for both residual families. Needs retained complete quotients at step n+1.
bool residual_step_identity(const ExpansionTrace& t, long n);

long certified_prefix_radius(const ExpansionTrace& t, long n);

}  // namespace mcf
