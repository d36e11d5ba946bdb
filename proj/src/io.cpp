#include "mcf/io.hpp"

#include <sstream>

namespace mcf::io {

std::string rat_str(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_str();
}

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

YElem y_of_rat(const Rat& x, const Prime& p) {
    if (x == 0) return YElem(p);
    Val v = vp(x, p);
    long e = std::max(0L, -v.get());
    Rat scaled = x * Rat(p.pow(e));
    if (scaled.get_den() != 1)
        throw std::invalid_argument("denominator is not a power of " +
                                    std::to_string(p.value()));
    return YElem(p, scaled.get_num(), e);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

InputSpec parse_input(const std::string& s) {
    InputSpec in;
    in.text = s;
    if (s.rfind("root:", 0) != 0) {
        in.kind = InputSpec::Kind::Rational;
        in.rational = parse_rat(s);
        return in;
    }
    in.kind = InputSpec::Kind::Root;
    in.offset = Rat(0);
    auto parts = split(s.substr(5), '@');
    if (parts.size() != 3)
        throw std::invalid_argument("root literal needs coeffs@seed@precision: " + s);
    for (const std::string& c : split(parts[0], ',')) {
        if (c.empty()) throw std::invalid_argument("empty coefficient in " + s);
        in.root.poly.emplace_back(c);
    }
    if (in.root.poly.size() < 2)
        throw std::invalid_argument("root literal needs degree >= 1: " + s);
    in.root.seed = Int(parts[1]);
    // precision with an optional trailing +k / -k offset
    std::string prec = parts[2];
    size_t cut = prec.find_first_of("+-", 1);
    if (cut != std::string::npos) {
        in.offset = parse_rat(prec.substr(cut + 1));
        if (prec[cut] == '-') in.offset = -in.offset;
        prec = prec.substr(0, cut);
    }
    in.root.precision = std::stol(prec);
    if (in.root.precision < 1)
        throw std::invalid_argument("precision must be >= 1: " + s);
    return in;
}

PAdic realize(const InputSpec& in, const Prime& p) {
    if (in.kind == InputSpec::Kind::Rational) return PAdic::exact(p, in.rational);
    PAdic r = hensel_lift(in.root, p);
    if (in.offset != 0) r = r + PAdic::exact(p, in.offset);
    return r;
}

std::string status_str(TermStatus s) {
    switch (s) {
        case TermStatus::Finite: return "Finite";
        case TermStatus::DepthLimited: return "DepthLimited";
        case TermStatus::PrecisionExhausted: return "PrecisionExhausted";
    }
    throw std::logic_error("unknown status");
}

TermStatus status_of(const std::string& s) {
    if (s == "Finite") return TermStatus::Finite;
    if (s == "DepthLimited") return TermStatus::DepthLimited;
    if (s == "PrecisionExhausted") return TermStatus::PrecisionExhausted;
    throw std::invalid_argument("unknown status: " + s);
}

namespace {

json val_json(const Val& v) {
    if (v.is_inf()) return json("inf");
    return json(v.get());
}

Val val_of_json(const json& j, bool& known) {
    known = true;
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return Val::inf();
        throw std::invalid_argument("bad valuation: " + j.dump());
    }
    return Val::of(j.get<long>());
}

}  // namespace

json trace_json(const ExpansionTrace& t, const std::string& input_desc) {
    json steps = json::array();
    for (long n = 0; n < t.length(); ++n) {
        const TraceStep& s = t.step(n);
        json row;
        row["n"] = n;
        row["a"] = rat_str(s.a.to_rational());
        row["b"] = rat_str(s.b.to_rational());
        row["A"] = rat_str(s.A);
        row["B"] = rat_str(s.B);
        row["C"] = rat_str(s.C);
        row["tildeA"] = rat_str(s.tA);
        row["tildeB"] = rat_str(s.tB);
        row["h"] = val_json(s.h);
        row["k"] = s.k;
        row["K"] = s.K;
        row["vVa"] = s.v_certified ? val_json(s.vVa) : json("inf");
        row["vVb"] = s.v_certified ? val_json(s.vVb) : json("inf");
        steps.push_back(std::move(row));
    }
    json out;
    out["p"] = t.p.value();
    out["input"] = input_desc;
    out["status"] = status_str(t.status);
    out["steps"] = std::move(steps);
    return out;
}

ParsedTrace parse_trace(const json& j) try {
    ParsedTrace t;
    t.p = j.at("p").get<long>();
    Prime{t.p};  // validate
    t.input = j.at("input").get<std::string>();
    t.status = j.at("status").get<std::string>();
    status_of(t.status);  // validate
    for (const json& row : j.at("steps")) {
        ParsedTraceStep s;
        s.n = row.at("n").get<long>();
        s.a = parse_rat(row.at("a").get<std::string>());
        s.b = parse_rat(row.at("b").get<std::string>());
        s.A = parse_rat(row.at("A").get<std::string>());
        s.B = parse_rat(row.at("B").get<std::string>());
        s.C = parse_rat(row.at("C").get<std::string>());
        s.tildeA = parse_rat(row.at("tildeA").get<std::string>());
        s.tildeB = parse_rat(row.at("tildeB").get<std::string>());
        bool dummy;
        s.h = val_of_json(row.at("h"), dummy);
        s.k = row.at("k").get<long>();
        s.K = row.at("K").get<long>();
        s.vVa = val_of_json(row.at("vVa"), s.vVa_known);
        s.vVb = val_of_json(row.at("vVb"), s.vVb_known);
        t.steps.push_back(std::move(s));
    }
    return t;
} catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace document: ") + e.what());
}

json report_json(const BoundReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"ok", row.ok}});
    return json{{"name", r.name}, {"all_hold", r.all_hold()}, {"rows", std::move(rows)}};
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace

std::string report_csv(const BoundReport& r) {
    std::ostringstream os;
    os << "name,n,lhs,rhs,ok\r\n";
    for (const auto& row : r.rows)
        os << csv_field(r.name) << ',' << row.n << ',' << csv_field(row.lhs) << ','
           << csv_field(row.rhs) << ',' << (row.ok ? "true" : "false") << "\r\n";
    return os.str();
}

}  // namespace mcf::io
