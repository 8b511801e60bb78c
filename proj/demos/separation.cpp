// Small tour: exact pebbling numbers of a lollipop and a double lollipop,
// then Monte Carlo thresholds of the same two families at n = 256 and 1024.

#include <cstdio>

#include "pebbling/pi_search.hpp"
#include "pebbling/threshold_lab.hpp"

using namespace pebbling;

int main() {
    const Graph g = make_lollipop({.family = Family::lollipop, .n = 8});
    const Graph h = make_double_lollipop({.family = Family::double_lollipop, .n = 8, .path_len_override = 2});
    const PiResult pg = pebbling_number_exact(g, OrbitSpec::from_graph(g));
    const PiResult ph = pebbling_number_exact(h, OrbitSpec::from_graph(h));
    std::printf("pi(lollipop n=8)        = %llu\n", static_cast<unsigned long long>(pg.pi));
    std::printf("pi(double lollipop n=8) = %llu\n", static_cast<unsigned long long>(ph.pi));

    for (std::uint64_t n : {256u, 1024u}) {
        const Graph G = generate({.family = Family::lollipop, .n = n});
        const Graph H = generate({.family = Family::double_lollipop, .n = n, .m = 2});
        const auto eg = estimate_tau(G, {1, 2}, 1000, {1, 0});
        const auto eh = estimate_tau(H, {1, 2}, 1000, {1, 1});
        std::printf("n=%-5llu tau(G)=%-6llu tau(H)=%-6llu ratio=%.3f\n", static_cast<unsigned long long>(n),
                    static_cast<unsigned long long>(eg.tau_hat), static_cast<unsigned long long>(eh.tau_hat),
                    static_cast<double>(eg.tau_hat) / static_cast<double>(eh.tau_hat));
    }
}
