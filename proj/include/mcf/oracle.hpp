#pragma once

#include <utility>
#include <vector>

#include "mcf/analysis.hpp"

namespace mcf::oracle {

/// Reference implementation of balanced digit extraction: repeated division
/// with the remainder forced into [-(p-1)/2, (p-1)/2] by scanning candidate
/// remainders. Deliberately shares no code with balanced_digits.
std::vector<long> naive_balanced_expand(const Rat& x, const Prime& p, long lo, long hi);

/// Reference s-function built on naive_balanced_expand.
Rat naive_s(const Rat& x, const Prime& p);

/// One state of the integer-level recurrence
///   x_n = a_n z_n + y_{n+1},  y_n = b_n z_n + z_{n+1},  x_{n+1} = z_n.
struct RationalJPState {
    Rat x, y, z;
};

struct RationalJPRun {
    std::vector<RationalJPState> states;          // states[n] = (x_n, y_n, z_n)
    std::vector<std::pair<Rat, Rat>> digits;      // (a_n, b_n) as rationals
    long steps = 0;                               // digit pairs emitted
    bool terminated = false;                      // z_{steps} == 0 reached
};

/// Runs the recurrence until z vanishes (or max_steps digit pairs).
/// Requires z0 != 0 and x0, y0 in Z[1/p].
RationalJPRun rational_jp(const Rat& x0, const Rat& y0, const Int& z0, const Prime& p,
                          long max_steps);

/// A candidate (t, u, v) approximating (alpha, beta) inside the target ball.
struct SearchHit {
    Rat t, u;
    Int v;
    Rat height;  // max{|t|, |u|, |v|}
    bool floor_ok;
};

struct SearchResult {
    std::vector<SearchHit> hits;  // sorted by height, then lexicographically
    long long candidates = 0;     // lattice points scanned
    Rat floor;                    // 1/(3 xt_hi^n)

    bool all_above_floor() const {
        for (const auto& h : hits)
            if (!h.floor_ok) return false;
        return true;
    }
};

/// Exhaustive scan for t, u in Z[1/p] (|mantissa| <= height_cap, p-exponent
/// <= exponent_cap) and integer v with 1 <= |v| <= height_cap such that
/// max{|alpha - t/v|_p, |beta - u/v|_p} < p^{-2 K_{n+1}}. Every hit is checked
/// against the height floor 1/(3 xt_hi^n). Requires exact alpha, beta and
/// trace length >= n+2.
SearchResult small_height_search(const ExpansionTrace& tr, long n, long height_cap,
                                 long exponent_cap, const TildeX& xt, bool parallel);

}  // namespace mcf::oracle
