// Compares the serial reference and the OpenMP-parallel lattice search.
#include <chrono>
#include <cstdio>

#include "mcf/oracle.hpp"

using namespace mcf;

namespace {

double run(const ExpansionTrace& tr, long n, long cap, long ecap, const TildeX& xt,
           bool parallel, oracle::SearchResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = oracle::small_height_search(tr, n, cap, ecap, xt, parallel);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    long cap = argc > 1 ? std::atol(argv[1]) : 400;
    long ecap = argc > 2 ? std::atol(argv[2]) : 2;
    Prime p(5);
    TildeX xt = tilde_x(p, 40);
    Rng rng(12345);
    ExpansionTrace tr = expand_trace(PAdic::exact(p, rng.rational(500, p, 1)),
                                     PAdic::exact(p, rng.rational(500, p, 1)), 8);
    std::printf("lattice caps: height %ld, exponent %ld\n", cap, ecap);
    for (long n = 0; n <= 2 && n + 1 < tr.length(); ++n) {
        oracle::SearchResult serial_r, parallel_r;
        double ts = run(tr, n, cap, ecap, xt, false, serial_r);
        double tp = run(tr, n, cap, ecap, xt, true, parallel_r);
        bool agree = serial_r.hits.size() == parallel_r.hits.size() &&
                     serial_r.candidates == parallel_r.candidates;
        std::printf(
            "n=%ld  candidates=%lld  hits=%zu  serial=%.3fs  parallel=%.3fs  "
            "speedup=%.2fx  agree=%s\n",
            n, serial_r.candidates, serial_r.hits.size(), ts, tp,
            tp > 0 ? ts / tp : 0.0, agree ? "yes" : "NO");
        if (!agree) return 1;
    }
    return 0;
}
