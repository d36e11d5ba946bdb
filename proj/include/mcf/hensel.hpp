#pragma once

#include <vector>

#include "mcf/padic.hpp"

namespace mcf {

/// Hensel input: an integer polynomial (coefficients c0..cd), a seed residue
/// class mod p with poly(seed) == 0 and poly'(seed) != 0 (mod p), and a target
/// absolute precision.
struct AlgebraicInput {
    std::vector<Int> poly;  // c0 + c1 X + ... + cd X^d
    Int seed;
    long precision = 1;
};

Int poly_eval(const std::vector<Int>& poly, const Int& x);
Rat poly_eval(const std::vector<Int>& poly, const Rat& x);
std::vector<Int> poly_derivative(const std::vector<Int>& poly);

/// Newton lifting of a simple root mod p to a root mod p^N.
/// Returns a truncated PAdic r with poly(r) == 0 (mod p^N), r == seed (mod p).
PAdic hensel_lift(const AlgebraicInput& input, const Prime& p);

}  // namespace mcf
