#pragma once

#include "mcf/base.hpp"

namespace mcf {

/// Seeded random source for experiments; deterministic given the seed.
class Rng {
public:
    explicit Rng(unsigned long seed) : g_(gmp_randinit_default) { g_.seed(seed); }

    /// Uniform integer in [lo, hi].
    Int uniform(const Int& lo, const Int& hi) {
        Int span = hi - lo + 1;
        if (span <= 0) throw std::invalid_argument("Rng::uniform: empty range");
        return lo + Int(g_.get_z_range(span));
    }

    long uniform_long(long lo, long hi) { return uniform(Int(lo), Int(hi)).get_si(); }

    /// Random rational with |num| <= height_cap, 1 <= den <= height_cap, and an
    /// extra p-power in the denominator up to p^max_p_exp.
    Rat rational(long height_cap, const Prime& p, long max_p_exp) {
        Int num = uniform(Int(-height_cap), Int(height_cap));
        Int den = uniform(Int(1), Int(height_cap));
        long e = uniform_long(0, max_p_exp);
        Rat r(num, den * p.pow(e));
        r.canonicalize();
        return r;
    }

private:
    gmp_randclass g_;
};

}  // namespace mcf
