#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "pebbling/orbits.hpp"
#include "pebbling/pebble_engine.hpp"
#include "pebbling/random_model.hpp"

using namespace pebbling;

namespace {

// Random connected graph: a random tree plus a few extra edges.
Graph random_graph(std::mt19937_64& rng, std::size_t n) {
    std::set<Edge> edges;
    for (Vertex v = 1; v < n; ++v) edges.insert({static_cast<Vertex>(rng() % v), v});
    const std::size_t extra = rng() % (n + 1);
    for (std::size_t i = 0; i < extra; ++i) {
        const auto u = static_cast<Vertex>(rng() % n), v = static_cast<Vertex>(rng() % n);
        if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
    }
    const std::vector<Edge> list(edges.begin(), edges.end());
    return Graph(n, list);
}

Configuration random_configuration(std::mt19937_64& rng, std::size_t n, Count t) {
    Configuration c(n);
    for (Count i = 0; i < t; ++i) c.add(static_cast<Vertex>(rng() % n));
    return c;
}

double weight(const Graph& g, const Configuration& c, Vertex target) {
    const auto dist = distances(g, target);
    double w = 0;
    for (Vertex v = 0; v < g.size(); ++v) w += static_cast<double>(c[v]) * std::ldexp(1.0, -static_cast<int>(dist[v]));
    return w;
}

}  // namespace

TEST(Properties, AddingAPebbleKeepsSolvable) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1500; ++i) {
        const Graph g = random_graph(rng, 2 + rng() % 5);
        Configuration c = random_configuration(rng, g.size(), rng() % 9);
        const bool before = is_solvable(g, c);
        c.add(static_cast<Vertex>(rng() % g.size()));
        if (before) EXPECT_TRUE(is_solvable(g, c));
    }
}

TEST(Properties, ReachableImpliesWeightAtLeastOne) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1500; ++i) {
        const Graph g = random_graph(rng, 2 + rng() % 6);
        const Configuration c = random_configuration(rng, g.size(), rng() % 10);
        const auto target = static_cast<Vertex>(rng() % g.size());
        if (is_reachable(g, c, target).solvable) EXPECT_GE(weight(g, c, target), 1.0);
    }
}

TEST(Properties, GenericSolverMatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 600; ++i) {
        const Graph g = random_graph(rng, 2 + rng() % 4);
        const Configuration c = random_configuration(rng, g.size(), rng() % 8);
        const oracle::State s(c.counts().begin(), c.counts().end());
        for (Vertex v = 0; v < g.size(); ++v) EXPECT_EQ(is_reachable(g, c, v).solvable, oracle::reachable(g, s, v));
    }
}

TEST(Properties, WitnessesReplay) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 500; ++i) {
        const Graph g = random_graph(rng, 2 + rng() % 6);
        const Configuration c = random_configuration(rng, g.size(), rng() % 12);
        const auto target = static_cast<Vertex>(rng() % g.size());
        const SolveVerdict v = is_reachable(g, c, target, {.record_witness = true});
        if (!v.solvable) continue;
        ASSERT_TRUE(v.witness.has_value());
        EXPECT_GE(replay(g, c, *v.witness)[target], 1u);
    }
}

TEST(Properties, StructuralMatchesGenericOnRandomFamilyConfigurations) {
    std::mt19937_64 rng(5);
    const std::vector<Graph> graphs{
        make_lollipop({.family = Family::lollipop, .n = 12}),
        make_double_lollipop({.family = Family::double_lollipop, .n = 14, .path_len_override = 2}),
        make_clique_chain({.family = Family::clique_chain, .n = 16, .epsilon = {1, 2}, .path_len_override = 2}),
    };
    for (const Graph& g : graphs)
        for (int i = 0; i < 300; ++i) {
            const Configuration c = random_configuration(rng, g.size(), rng() % 24);
            const auto target = static_cast<Vertex>(rng() % g.size());
            EXPECT_EQ(structural_reachable(g, c, target), is_reachable(g, c, target).solvable);
        }
}

TEST(Properties, SolvabilityInvariantUnderOrbitPermutations) {
    std::mt19937_64 rng(6);
    for (const Graph& g : {make_lollipop({.family = Family::lollipop, .n = 9}),
                           make_double_lollipop({.family = Family::double_lollipop, .n = 9, .path_len_override = 1})}) {
        const OrbitSpec orbits = OrbitSpec::from_graph(g);
        for (int i = 0; i < 300; ++i) {
            const Configuration c = random_configuration(rng, g.size(), rng() % 20);
            std::vector<Count> permuted(c.counts().begin(), c.counts().end());
            for (const auto& cls : orbits.classes()) {
                std::vector<Vertex> shuffled = cls;
                std::shuffle(shuffled.begin(), shuffled.end(), rng);
                for (std::size_t k = 0; k < cls.size(); ++k) permuted[shuffled[k]] = c[cls[k]];
            }
            const Configuration p(permuted);
            EXPECT_EQ(is_solvable(g, c), is_solvable(g, p));
            EXPECT_EQ(canonicalize(c, orbits), canonicalize(p, orbits));
        }
    }
}

TEST(Properties, SamplerDeterministicPerStream) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SeededStream s{seed, seed * 3};
        EXPECT_EQ(sample_configuration(20, 30, s), sample_configuration(20, 30, s));
    }
}
