// Acceptance gate. `acceptance` runs every criterion; `acceptance K` runs
// criterion K only. Prints one PASS/FAIL line per criterion and exits
// nonzero if any failed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "oracles.hpp"
#include "pebbling/exact_counts.hpp"
#include "pebbling/pebble_engine.hpp"
#include "pebbling/pi_search.hpp"
#include "pebbling/random_model.hpp"
#include "pebbling/threshold_lab.hpp"

using namespace pebbling;

namespace {

// Tolerances and budgets.
constexpr double kBudget1 = 60, kBudget3 = 30, kBudget4 = 60, kBudget6 = 600, kBudget8 = 1800;  // seconds
constexpr double kTailRelErr = 1e-6;
constexpr double kTailBand = 10;
constexpr double kChiSquareAlpha = 1e-3;
constexpr double kSlopeGap = 0.1;
constexpr double kMassSigmas = 3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void info(const std::string& line) { std::printf("    info: %s\n", line.c_str()); }

Outcome exact_pebbling_numbers() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    auto check = [&](const Graph& g, Count expected, const char* name, std::uint64_t k) {
        const Count found = pebbling_number_exact(g, OrbitSpec::from_graph(g)).pi;
        const Count brute = oracle::pebbling_number(g);
        if (found != expected || brute != expected) ok = false;
        detail += fmt::format("{}{}={} ", name, k, found);
    };
    for (std::uint64_t k = 2; k <= 5; ++k) check(make_path(k), Count{1} << (k - 1), "P", k);
    for (std::uint64_t k = 2; k <= 6; ++k) check(make_complete(k), k, "K", k);
    const double secs = seconds_since(start);
    return {ok && secs < kBudget1, detail + fmt::format("({:.1f}s < {}s)", secs, kBudget1)};
}

Outcome counterexample_ordering() {
    const Graph g = make_lollipop({.family = Family::lollipop, .n = 8});
    const Graph h = make_double_lollipop({.family = Family::double_lollipop, .n = 8, .path_len_override = 2});
    const Count pg = pebbling_number_exact(g, OrbitSpec::from_graph(g)).pi;
    const Count ph = pebbling_number_exact(h, OrbitSpec::from_graph(h)).pi;
    return {pg < ph && pg <= 3 * g.size(), fmt::format("pi(G)={} <= 3n={}, pi(H)={}", pg, 3 * g.size(), ph)};
}

Outcome birthday_normalization() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    for (std::int64_t n = 1; n <= 40; ++n)
        for (std::int64_t t = 1; t <= 40; ++t) {
            BigInt s = 0;
            for (std::int64_t k = 0; k < t; ++k) s += birthday_count(n, t, k);
            if (s != BigInt(oracle::binomial(static_cast<std::uint64_t>(n + t - 1), static_cast<std::uint64_t>(t)))) ok = false;
        }
    std::mt19937_64 rng(2024);
    int checked = 0;
    while (checked < 1000) {
        const auto n = static_cast<std::int64_t>(1 + rng() % 200), t = static_cast<std::int64_t>(2 + rng() % 200);
        const auto k = static_cast<std::int64_t>(1 + rng() % static_cast<std::uint64_t>(t - 1));
        if (t - k > n) continue;
        if (ratio_a(n, t, k) != BigRational(birthday_count(n, t, k - 1), birthday_count(n, t, k))) ok = false;
        ++checked;
    }
    const double secs = seconds_since(start);
    return {ok && secs < kBudget3, fmt::format("1600 sums, {} ratio triples ({:.1f}s < {}s)", checked, secs, kBudget3)};
}

Outcome tail_trend() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<long double> logs;
    std::vector<double> scaled_log10;
    bool ok = true;
    for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
        const auto t = static_cast<std::uint64_t>(ceil_pow(n, 0.8L));
        const auto j = static_cast<std::uint64_t>(floor_pow(n, 0.55L));
        const TailRatio r = tail_ratio(n, t, j, {.backend = Backend::log_space});
        if (n <= 10000) {
            const TailRatio e = tail_ratio(n, t, j, {.backend = Backend::exact_integer});
            const long double rel = std::fabs(std::expm1(r.log_value - e.log_value));
            if (rel > kTailRelErr) ok = false;
            info(fmt::format("n={} log/exact relative error {:.2e}", n, static_cast<double>(rel)));
        }
        logs.push_back(r.log_value);
        scaled_log10.push_back(static_cast<double>(r.log_value / std::log(10.0L)) + 0.05 * std::log10(static_cast<double>(n)));
        info(fmt::format("n={} t={} j={} tail=1e{:.2f} tail*n^0.05=1e{:.2f}", n, t, j,
                         static_cast<double>(r.log_value / std::log(10.0L)), scaled_log10.back()));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < logs.size(); ++i) decreasing = decreasing && logs[i] < logs[i - 1];
    const auto [lo, hi] = std::minmax_element(scaled_log10.begin(), scaled_log10.end());
    const double spread = *hi - *lo;
    const bool band = spread <= std::log10(kTailBand);
    bool below_start = true;
    for (double v : scaled_log10) below_start = below_start && v <= scaled_log10.front() + std::log10(kTailBand);
    info(fmt::format("strictly decreasing: {}; stays below 10x its n=1e3 value: {}", decreasing, below_start));
    const double secs = seconds_since(start);
    return {ok && decreasing && band && secs < kBudget4,
            fmt::format("decreasing={}, band spread={:.1f} decades (limit 1), ({:.1f}s < {}s)", decreasing, spread, secs,
                        kBudget4)};
}

Outcome sampler_uniformity() {
    std::map<std::vector<Count>, std::uint64_t> counts;
    oracle::for_each_configuration(4, 3, [&](const oracle::State& s) { counts[s] = 0; });
    RandomSource rng({5, 0});
    const std::uint64_t draws = 100000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const Configuration c = sample_configuration(4, 3, rng);
        ++counts.at(std::vector<Count>(c.counts().begin(), c.counts().end()));
    }
    const double expected = static_cast<double>(draws) / static_cast<double>(counts.size());
    double chi2 = 0;
    for (const auto& [_, k] : counts) chi2 += (static_cast<double>(k) - expected) * (static_cast<double>(k) - expected) / expected;
    const double p = boost::math::gamma_q((static_cast<double>(counts.size()) - 1) / 2, chi2 / 2);
    return {counts.size() == 20 && p > kChiSquareAlpha, fmt::format("{} cells, chi2={:.2f}, p={:.3f}", counts.size(), chi2, p)};
}

// Every distinct generated family graph with at most `max_n` vertices.
std::vector<Graph> family_graphs(std::uint64_t max_n) {
    std::vector<FamilyParams> params;
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        params.push_back({.family = Family::path, .n = n});
        params.push_back({.family = Family::complete, .n = n});
        std::vector<std::optional<std::uint64_t>> overrides{std::nullopt};
        for (std::uint64_t l = 1; l < n; ++l) overrides.push_back(l);
        for (const auto& o : overrides) {
            params.push_back({.family = Family::lollipop, .n = n, .path_len_override = o});
            for (std::int64_t m = 0; m <= 3; ++m)
                params.push_back({.family = Family::double_lollipop, .n = n, .m = m, .path_len_override = o});
            for (Ratio eps : {Ratio{1, 4}, Ratio{1, 3}, Ratio{1, 2}, Ratio{1, 1}})
                params.push_back({.family = Family::clique_chain, .n = n, .epsilon = eps, .path_len_override = o});
        }
    }
    std::set<std::vector<Edge>> seen;
    std::vector<Graph> out;
    for (const auto& p : params) {
        try {
            Graph g = generate(p);
            if (seen.insert(g.edges()).second) out.push_back(std::move(g));
        } catch (const Error&) {
        }
    }
    return out;
}

Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t configs = 0, checks = 0, mismatches = 0;
    const auto graphs = family_graphs(9);
    for (const Graph& g : graphs) {
        const OrbitSpec orbits = OrbitSpec::from_graph(g);
        const StructuralSolver structural(g);
        std::vector<ReachabilitySolver> generic;
        for (Vertex v = 0; v < g.size(); ++v) generic.emplace_back(g, v);
        for (Count t = 0; t <= 12; ++t)
            for_each_canonical(orbits, t, [&](const Configuration& c) {
                ++configs;
                for (Vertex v = 0; v < g.size(); ++v) {
                    ++checks;
                    if (structural.reachable(c, v) != generic[v].reachable(c)) ++mismatches;
                }
                return true;
            });
    }
    const double secs = seconds_since(start);
    return {mismatches == 0 && secs < kBudget6,
            fmt::format("{} graphs, {} canonical configurations, {} (config, target) checks, {} mismatches ({:.1f}s < {}s)",
                        graphs.size(), configs, checks, mismatches, secs, kBudget6)};
}

Outcome estimator_correctness() {
    const std::vector<std::pair<std::string, Graph>> graphs{{"K2", make_complete(2)}, {"K3", make_complete(3)},
                                                            {"K4", make_complete(4)}, {"P2", make_path(2)},
                                                            {"P3", make_path(3)},     {"P4", make_path(4)}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, g] : graphs) {
        const std::uint64_t exact = tau_exact(g, {1, 2}, OrbitSpec::from_graph(g)).tau;
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
            if (estimate_tau(g, {1, 2}, 2000, {seed, 0}).tau_hat == exact) ++hits;
        ok = ok && hits == 10;
        detail += fmt::format("{}:tau={} {}/10 ", name, exact, hits);
    }
    return {ok, detail};
}

Outcome separation_study() {
    const auto start = std::chrono::steady_clock::now();
    StudyConfig cfg;
    cfg.family_H = {.family = Family::double_lollipop, .m = 2};
    cfg.sizes = {256, 1024, 4096, 16384};
    cfg.trials = 2000;
    cfg.master_seed = 1;
    const StudySeries s = scaling_study(cfg);
    bool increasing = s.rows.size() == cfg.sizes.size();
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const StudyRow& r = s.rows[i];
        increasing = increasing && r.G && r.H && (i == 0 || r.ratio > s.rows[i - 1].ratio);
        if (r.G && r.H)
            info(fmt::format("n={} tau_G={} [{}, {}] tau_H={} [{}, {}] ratio={:.3f}", r.n, r.G->tau_hat, r.G->tau_ci_low,
                             r.G->tau_ci_high, r.H->tau_hat, r.H->tau_ci_low, r.H->tau_ci_high, r.ratio));
    }
    const double gap = s.slope_G - s.slope_H;
    const double secs = seconds_since(start);
    return {increasing && gap >= kSlopeGap && secs < kBudget8,
            fmt::format("ratio increasing={}, slope_G={:.3f} slope_H={:.3f} gap={:.3f} >= {} ({:.0f}s < {}s)", increasing,
                        s.slope_G, s.slope_H, gap, kSlopeGap, secs, kBudget8)};
}

Outcome markov_mass() {
    const std::uint64_t n = 4096;
    const auto t = static_cast<std::uint64_t>(floor_pow(n, 0.99L));
    const PathMass m = markov_path_mass(generate({.family = Family::lollipop, .n = n}), t, 10000, {9, 0});
    const double target = m.occupied_expectation();
    const double z = std::fabs(m.mean - target) / m.stderr_mean;
    info(fmt::format("mean pebbles vs t*L/n={:.3f}: {:.1f} SE", m.first_moment(),
                     std::fabs(m.mean - m.first_moment()) / m.stderr_mean));
    info(fmt::format("mean occupied path vertices {:.3f} vs t*L/(n+t-1)={:.3f}: {:.1f} SE", m.mean_occupied, target,
                     std::fabs(m.mean_occupied - target) / m.stderr_occupied));
    return {z <= kMassSigmas, fmt::format("n={} t={} L={} mean={:.3f} (SE {:.3f}) vs t*L/(n+t-1)={:.3f}: {:.1f} SE (limit {})",
                                          n, t, m.path_len, m.mean, m.stderr_mean, target, z, kMassSigmas)};
}

Outcome monotonicity() {
    std::mt19937_64 rng(10);
    std::vector<Graph> graphs = family_graphs(7);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 2 + rng() % 6;
        std::set<Edge> edges;
        for (Vertex v = 1; v < n; ++v) edges.insert({static_cast<Vertex>(rng() % v), v});
        for (std::size_t k = rng() % (n + 1); k-- > 0;) {
            const auto u = static_cast<Vertex>(rng() % n), v = static_cast<Vertex>(rng() % n);
            if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
        }
        const std::vector<Edge> list(edges.begin(), edges.end());
        graphs.emplace_back(n, list);
    }
    std::vector<SolvabilityOracle> oracles;
    oracles.reserve(graphs.size());
    for (const Graph& g : graphs) oracles.emplace_back(g);
    int flips = 0, solvable_before = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::size_t gi = rng() % graphs.size();
        const Graph& g = graphs[gi];
        Configuration c(g.size());
        for (Count k = rng() % (3 * g.size() + 4); k-- > 0;) c.add(static_cast<Vertex>(rng() % g.size()));
        const bool before = is_solvable(g, c);
        c.add(static_cast<Vertex>(rng() % g.size()));
        const bool after = is_solvable(g, c);
        solvable_before += before;
        if (before && !after) ++flips;
        if (after != oracles[gi].solvable(c)) ++flips;
    }
    return {flips == 0, fmt::format("10000 triples on {} graphs, {} solvable before, {} violations", graphs.size(),
                                    solvable_before, flips)};
}

// Non-increasing sequences of length n summing to t.
void for_each_partition(std::size_t n, Count t, const std::function<void(const std::vector<Count>&)>& visit) {
    std::vector<Count> s(n, 0);
    std::function<void(std::size_t, Count, Count)> rec = [&](std::size_t i, Count left, Count cap) {
        if (i == n) {
            if (left == 0) visit(s);
            return;
        }
        for (Count x = std::min(left, cap) + 1; x-- > 0;) {
            s[i] = x;
            rec(i + 1, left - x, x);
        }
        s[i] = 0;
    };
    rec(0, t, t);
}

Outcome clique_delivery() {
    std::uint64_t checks = 0, violations = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        const Graph g = make_complete(n);
        const Count t_max = 12;
        for (Count t = 1; t <= t_max; ++t)
            for_each_partition(n, t, [&](const std::vector<Count>& s) {
                Count occupied = 0;
                for (Count x : s) occupied += x > 0;
                const Count b = t - occupied;
                const Count c = std::min<Count>(3, b / 2);
                if (c == 0) return;
                const Configuration conf(s);
                // Sinks with equal counts are interchangeable on K_n.
                for (std::size_t v = 0; v < n; ++v) {
                    if (v > 0 && s[v] == s[v - 1]) continue;
                    ++checks;
                    const Count fast = clique_deliverable(g, conf, static_cast<Vertex>(v));
                    const Count brute = oracle::max_on(g, s, static_cast<Vertex>(v));
                    if (fast < c || brute < c || fast > brute) ++violations;
                }
            });
    }
    return {violations == 0, fmt::format("{} (configuration, sink) checks up to symmetry, {} violations", checks, violations)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact pebbling numbers of paths and cliques", exact_pebbling_numbers},
        {"lollipop below double lollipop, pi(G) <= 3n", counterexample_ordering},
        {"birthday normalization and ratio identity", birthday_normalization},
        {"tail ratio trend and n^0.05 band", tail_trend},
        {"sampler uniformity (chi-square)", sampler_uniformity},
        {"structural vs generic solver sweep", oracle_equivalence},
        {"estimate_tau matches tau_exact", estimator_correctness},
        {"separation study", separation_study},
        {"path mass vs t*L/(n+t-1)", markov_mass},
        {"solvability monotone in added pebbles", monotonicity},
        {"clique delivery guarantee", clique_delivery},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
        return 2;
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i + 1) != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("ACCEPTANCE %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
