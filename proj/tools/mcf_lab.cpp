// mcf-lab: run p-adic Jacobi-Perron expansions, verification suites,
// digit constructions, and brute-force searches from the command line.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mcf/io.hpp"
#include "mcf/oracle.hpp"

namespace {

using namespace mcf;
using mcf::io::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPrecision = 2;
constexpr int kExitViolation = 3;

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("MCF_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n < 1) throw CLI::ValidationError("MCF_LAB_THREADS must be an integer >= 1");
        omp_set_num_threads(n);
    }
#endif
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw CLI::ValidationError("cannot open output file " + out_path);
    os << text;
}

struct CommonOpts {
    long p = 5;
    std::string alpha, beta;
    long depth = 30;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& c, bool need_pair) {
    cmd->add_option("--p", c.p, "odd prime");
    auto* a = cmd->add_option("--alpha", c.alpha, "alpha literal (num/den or root:...)");
    auto* b = cmd->add_option("--beta", c.beta, "beta literal");
    if (need_pair) {
        a->required();
        b->required();
    }
    cmd->add_option("--depth", c.depth, "maximum digit pairs");
    cmd->add_option("--out", c.out, "output file (default stdout)");
    cmd->add_option("--format", c.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

ExpansionTrace run_pair(const CommonOpts& c) {
    Prime p(c.p);
    PAdic alpha = io::realize(io::parse_input(c.alpha), p);
    PAdic beta = io::realize(io::parse_input(c.beta), p);
    return expand_trace(alpha, beta, c.depth);
}

int cmd_expand(const CommonOpts& c) {
    ExpansionTrace t = run_pair(c);
    json j = io::trace_json(t, c.alpha + " " + c.beta);
    emit(j.dump(2), c.out);
    return t.status == TermStatus::PrecisionExhausted ? kExitPrecision : kExitOk;
}

// Clears the prime-free part of the denominators: alpha = x0/z0, beta = y0/z0
// with x0, y0 in Z[1/p] and z0 a p-free integer.
void triple_of(const Rat& alpha, const Rat& beta, const Prime& p, Rat& x0, Rat& y0, Int& z0) {
    auto pfree = [&](Int d) {
        while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p.value())))
            mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(),
                            static_cast<unsigned long>(p.value()));
        return d;
    };
    Int da = pfree(alpha.get_den()), db = pfree(beta.get_den());
    mpz_lcm(z0.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
    x0 = alpha * Rat(z0);
    y0 = beta * Rat(z0);
}

BoundReport steps_report(const Rat& alpha, const Rat& beta, const Prime& p, const TildeX& xt) {
    Rat x0, y0;
    Int z0;
    triple_of(alpha, beta, p, x0, y0, z0);
    StepBoundResult r = step_bound(x0, y0, z0, p, xt);
    BoundReport rep{"steps", {}};
    rep.add(0, "M=" + r.M.get_str(), "chain", r.chain_ok);
    rep.add(0, "terminated", "required", r.terminated);
    rep.add(0, "steps=" + std::to_string(r.actual),
            "<=" + std::to_string(r.cert_bound), r.actual <= r.cert_bound);
    return rep;
}

BoundReport heights_report(const ExpansionTrace& t, const TildeX& xt, long height_cap,
                           long exponent_cap) {
    BoundReport rep{"heights", {}};
    long top = std::min(3L, t.length() - 2);
    for (long n = 0; n <= top; ++n) {
        auto res = oracle::small_height_search(t, n, height_cap, exponent_cap, xt, true);
        rep.add(n, "hits=" + std::to_string(res.hits.size()),
                "height>=" + res.floor.get_str(), res.all_above_floor());
    }
    return rep;
}

BoundReport identities_report(const ExpansionTrace& t) {
    BoundReport rep{"identities", {}};
    for (long n = 0; n < t.length(); ++n) {
        IdentityReport r = identity_checks(t, n);
        rep.add(n, "matrix", "product of step matrices", r.matrix_ok);
        rep.add(n, "det", "1", r.det_ok);
        rep.add(n, "cross", "1/(C_n C_{n-1} C_{n-2})", r.cross_ok);
        rep.add(n, "diff", "complete-quotient form", r.diff_ok);
    }
    return rep;
}

struct PlanOpts {
    std::vector<long> ell;
    long D = 0;
    bool unit_k = false;

    bool any() const { return !ell.empty() || D > 0 || unit_k; }
    GrowthPlan plan() const {
        if (!ell.empty()) return GrowthPlan::ells(ell);
        if (D > 0) return GrowthPlan::degree(D);
        return GrowthPlan::unit_k();
    }
};

void add_plan(CLI::App* cmd, PlanOpts& po) {
    cmd->add_option("--ell", po.ell, "growth exponents l_0,l_1,... (last repeats)")
        ->delimiter(',');
    cmd->add_option("--D", po.D, "degree-D growth plan");
    cmd->add_flag("--unit-k", po.unit_k, "all-k_n=1 plan");
}

void mark_tight(BoundReport& rep) {
    for (auto& row : rep.rows) {
        auto eq = row.lhs.find('=');
        if (row.lhs.rfind("min=", 0) == 0 && row.ok &&
            row.lhs.substr(eq + 1) == row.rhs)
            row.rhs += " tight";
    }
}

int finish_reports(const std::vector<BoundReport>& reports, const std::string& out,
                   const std::string& format) {
    bool all = true;
    if (format == "csv") {
        std::string text;
        for (const auto& r : reports) {
            text += io::report_csv(r);
            all = all && r.all_hold();
        }
        emit(text, out);
    } else {
        json arr = json::array();
        for (const auto& r : reports) {
            arr.push_back(io::report_json(r));
            all = all && r.all_hold();
        }
        emit(arr.dump(2), out);
    }
    return all ? kExitOk : kExitViolation;
}

struct VerifyOpts {
    CommonOpts common;
    PlanOpts plan;
    std::string suite = "all";
    long batch = 0;
    unsigned long seed = 1;
    long margin = 12;
    long height_cap = 50;
    long exponent_cap = 1;
    Rat relA = Rat(1), relB = Rat(1);
};

std::vector<BoundReport> verify_one(const VerifyOpts& v, const ExpansionTrace& t,
                                    const TildeX& xt) {
    std::vector<BoundReport> out;
    bool all = v.suite == "all";
    long top = t.length() - 1;
    if (all || v.suite == "rate") {
        BoundReport r = check_rate_theorem(t, top);
        if (v.plan.unit_k) mark_tight(r);
        out.push_back(std::move(r));
    }
    if (all || v.suite == "upper") out.push_back(check_upper_bound(t, top));
    if (all || v.suite == "growth") out.push_back(growth_bound(t, top, xt));
    if (all || v.suite == "identities") out.push_back(identities_report(t));
    if ((all || v.suite == "steps") && t.alpha.is_exact() && !t.proxy)
        out.push_back(steps_report(t.alpha.repr(), t.beta.repr(), t.p, xt));
    if ((all || v.suite == "heights") && t.alpha.is_exact())
        out.push_back(heights_report(t, xt, v.height_cap, v.exponent_cap));
    if (all || v.suite == "dependence") {
        // a rational pair always satisfies the declared relation with
        // C = -(A alpha + B beta)
        if (t.alpha.is_exact() && !t.proxy) {
            Rat C = -(v.relA * t.alpha.repr() + v.relB * t.beta.repr());
            out.push_back(linear_dependence_monitor(t, v.relA, v.relB, C, top));
        }
    }
    return out;
}

int cmd_verify(const VerifyOpts& v) {
    Prime p(v.common.p);
    TildeX xt = tilde_x(p, 80);
    std::vector<BoundReport> reports;
    bool precision_exhausted = false;

    auto collect = [&](const ExpansionTrace& t) {
        precision_exhausted =
            precision_exhausted || t.status == TermStatus::PrecisionExhausted;
        auto rs = verify_one(v, t, xt);
        reports.insert(reports.end(), rs.begin(), rs.end());
    };

    if (v.batch > 0) {
        // batch items are pre-generated serially, then verified in parallel
        Rng rng(v.seed);
        std::vector<std::pair<Rat, Rat>> inputs;
        for (long i = 0; i < v.batch; ++i) {
            Rat a = rng.rational(10000, p, 2), b = rng.rational(10000, p, 2);
            inputs.emplace_back(a, b);
        }
        std::vector<std::vector<BoundReport>> slots(inputs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < static_cast<long>(inputs.size()); ++i) {
            ExpansionTrace t =
                expand_trace(PAdic::exact(p, inputs[static_cast<size_t>(i)].first),
                             PAdic::exact(p, inputs[static_cast<size_t>(i)].second),
                             v.common.depth);
            slots[static_cast<size_t>(i)] = verify_one(v, t, xt);
        }
        for (const auto& rs : slots) reports.insert(reports.end(), rs.begin(), rs.end());
    } else if (v.plan.any()) {
        Rng rng(v.seed);
        ExpansionTrace t =
            construct_fast_trace(v.plan.plan(), p, v.common.depth, v.margin, rng);
        collect(t);
        reports.push_back(check_construction(t, v.plan.plan(), t.length() - 1));
    } else {
        if (v.common.alpha.empty() || v.common.beta.empty())
            throw CLI::ValidationError("verify needs --alpha/--beta, a plan, or --batch");
        collect(run_pair(v.common));
    }
    int rc = finish_reports(reports, v.common.out, v.common.format);
    if (precision_exhausted && rc == kExitOk) return kExitPrecision;
    return rc;
}

struct ConstructOpts {
    long p = 5;
    PlanOpts plan;
    long n = 20;
    long margin = 12;
    unsigned long seed = 1;
    std::string out;
};

int cmd_construct(const ConstructOpts& c) {
    Prime p(c.p);
    if (!c.plan.any()) throw CLI::ValidationError("construct needs --ell, --D, or --unit-k");
    GrowthPlan plan = c.plan.plan();
    plan.validate();
    Rng rng(c.seed);
    ExpansionTrace t = construct_fast_trace(plan, p, c.n, c.margin, rng);
    BoundReport rep = check_construction(t, plan, c.n);
    json j;
    j["trace"] = io::trace_json(t, "constructed");
    j["report"] = io::report_json(rep);
    emit(j.dump(2), c.out);
    return rep.all_hold() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic multidimensional continued fraction laboratory"};
    app.require_subcommand(1);

    CommonOpts eo;
    auto* expand_cmd = app.add_subcommand("expand", "run an expansion, write the trace");
    add_common(expand_cmd, eo, true);

    VerifyOpts vo;
    auto* verify_cmd = app.add_subcommand("verify", "run bound/identity suites");
    add_common(verify_cmd, vo.common, false);
    add_plan(verify_cmd, vo.plan);
    verify_cmd
        ->add_option("--suite", vo.suite,
                     "rate | upper | growth | steps | heights | identities | dependence | all")
        ->check(CLI::IsMember({"rate", "upper", "growth", "steps", "heights", "identities",
                               "dependence", "all"}));
    verify_cmd->add_option("--batch", vo.batch, "verify this many random pairs");
    verify_cmd->add_option("--seed", vo.seed, "rng seed");
    verify_cmd->add_option("--margin", vo.margin, "proxy-limit margin for plans");
    verify_cmd->add_option("--height-cap", vo.height_cap, "search mantissa cap");
    verify_cmd->add_option("--exp-cap", vo.exponent_cap, "search p-exponent cap");

    ConstructOpts co;
    auto* construct_cmd = app.add_subcommand("construct", "build a digit-prescribed expansion");
    construct_cmd->add_option("--p", co.p, "odd prime");
    add_plan(construct_cmd, co.plan);
    construct_cmd->add_option("--n", co.n, "target depth");
    construct_cmd->add_option("--margin", co.margin, "proxy-limit margin");
    construct_cmd->add_option("--seed", co.seed, "rng seed");
    construct_cmd->add_option("--out", co.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        apply_thread_cap();
        if (*expand_cmd) return cmd_expand(eo);
        if (*verify_cmd) return cmd_verify(vo);
        if (*construct_cmd) return cmd_construct(co);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const PrecisionExhausted& e) {
        std::cerr << e.what() << "\n";
        return kExitPrecision;
    } catch (const InsufficientPrecision& e) {
        std::cerr << e.what() << "\n";
        return kExitPrecision;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
}
