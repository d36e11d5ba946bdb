#pragma once

#include <json.hpp>
#include <string>

#include "mcf/analysis.hpp"
#include "mcf/hensel.hpp"

namespace mcf::io {

using nlohmann::json;

/// Exact rational as a decimal string, "num/den" (den omitted when 1).
std::string rat_str(const Rat& x);
Rat parse_rat(const std::string& s);

/// YElem from a rational whose denominator is a power of p.
YElem y_of_rat(const Rat& x, const Prime& p);

/// An input literal: either "num/den" or
/// "root:<c0,c1,...,cd>@<seed>@<precision>[+offset|-offset]".
struct InputSpec {
    enum class Kind { Rational, Root };
    Kind kind = Kind::Rational;
    Rat rational;
    AlgebraicInput root;
    Rat offset;        // added after lifting (Root only)
    std::string text;  // original literal
};

InputSpec parse_input(const std::string& s);

/// Realize the literal at the given prime: exact rationals, Hensel-lifted
/// truncated roots.
PAdic realize(const InputSpec& in, const Prime& p);

std::string status_str(TermStatus s);
TermStatus status_of(const std::string& s);

/// Stable trace schema:
/// { "p", "input", "status", "steps": [ { "n", "a", "b", "A", "B", "C",
///   "tildeA", "tildeB", "h", "k", "K", "vVa", "vVb" } ] }.
/// Valuations serialize as integers; absent or infinite ones as "inf".
json trace_json(const ExpansionTrace& t, const std::string& input_desc);

/// A trace file read back; numbers re-parsed exactly.
struct ParsedTraceStep {
    long n = 0;
    Rat a, b, A, B, C, tildeA, tildeB;
    Val h;
    long k = 0, K = 0;
    Val vVa, vVb;
    bool vVa_known = false, vVb_known = false;
};

struct ParsedTrace {
    long p = 0;
    std::string input;
    std::string status;
    std::vector<ParsedTraceStep> steps;
};

ParsedTrace parse_trace(const json& j);

json report_json(const BoundReport& r);
/// RFC-4180 CSV with header name,n,lhs,rhs,ok.
std::string report_csv(const BoundReport& r);

}  // namespace mcf::io
