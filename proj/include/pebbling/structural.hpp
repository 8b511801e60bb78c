#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"

namespace pebbling {

/// Pebbles that reach the last entry of `far_to_near` when every vertex
/// forwards as many pebbles as it can toward it.
inline Count deliver_along(std::span<const Count> far_to_near) {
    if (far_to_near.empty()) return 0;
    Count carry = 0;
    for (std::size_t i = 0; i + 1 < far_to_near.size(); ++i) carry = (carry + far_to_near[i]) / 2;
    return carry + far_to_near.back();
}

/// Maximum number of pebbles placeable on path endpoint `target`.
inline Count path_deliverable(const Graph& g, const Configuration& conf, Vertex target) {
    if (conf.size() != g.size()) throw InvalidParameter("configuration size does not match graph");
    if (!g.contains(target)) throw InvalidParameter("target vertex out of range");
    const std::size_t n = g.size();
    bool is_path = g.edge_count() + 1 == n && is_connected(g);
    for (Vertex v = 0; v < n && is_path; ++v) is_path = g.degree(v) <= 2;
    if (!is_path) throw UnsupportedStructure("path_deliverable needs a path graph");
    if (g.degree(target) > 1) throw InvalidParameter("target must be a path endpoint");

    const auto dist = distances(g, target);
    std::vector<Count> far_to_near(n);
    for (Vertex v = 0; v < n; ++v) far_to_near[n - 1 - dist[v]] = conf[v];
    return deliver_along(far_to_near);
}

/// Maximum number of pebbles placeable on `sink` using only the clique
/// `members`: direct one-hop transfers from every other member.
inline Count clique_deliverable(const Graph& g, const Configuration& conf, std::span<const Vertex> members,
                                Vertex sink) {
    if (conf.size() != g.size()) throw InvalidParameter("configuration size does not match graph");
    if (std::find(members.begin(), members.end(), sink) == members.end())
        throw InvalidParameter("sink " + std::to_string(sink) + " is not in the clique");
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!g.adjacent(members[i], members[j])) throw InvalidParameter("vertex set is not a clique");
    Count total = conf[sink];
    for (Vertex u : members)
        if (u != sink) total += conf[u] / 2;
    return total;
}

/// Overload for a graph that is itself complete.
inline Count clique_deliverable(const Graph& g, const Configuration& conf, Vertex sink) {
    std::vector<Vertex> all(g.size());
    for (Vertex v = 0; v < g.size(); ++v) all[v] = v;
    return clique_deliverable(g, conf, all, sink);
}

/// Exact solver for graphs whose blocks are all cliques (every generated
/// family: path edges are two-vertex blocks, cliques are single blocks).
///
/// Every vertex funnels pebbles toward a target through the cut vertex of its
/// block, so the best a subtree can do is to push as much as possible to that
/// cut vertex; inside a clique this is the one-hop transfer sum of
/// clique_deliverable, along a path it is deliver_along. The solver evaluates
/// this recursion for all targets at once by rerooting the block-cut tree.
class StructuralSolver {
public:
    explicit StructuralSolver(const Graph& g) : n_(g.size()) {
        const auto& blocks = g.labels().blocks;
        if (blocks.empty() && n_ > 1)
            throw UnsupportedStructure("graph carries no block labels; use the generic solver");
        validate_blocks(g, blocks);
        build_tree(blocks);
    }

    std::size_t size() const noexcept { return n_; }

    /// Maximum number of pebbles placeable on each vertex.
    std::vector<Count> deliverable_all(const Configuration& conf) const {
        if (conf.size() != n_) throw InvalidParameter("configuration size does not match graph");
        std::vector<Count> down(n_), full(n_);
        std::vector<Count> block_sum(blocks_.size(), 0);
        for (std::size_t i = order_.size(); i-- > 0;) {
            const Vertex v = order_[i];
            Count d = conf[v];
            for (std::uint32_t b : child_blocks_[v]) d += block_sum[b];
            down[v] = d;
            if (parent_block_[v] != kNone) block_sum[parent_block_[v]] += d / 2;
        }
        for (const Vertex v : order_) {
            const std::uint32_t b = parent_block_[v];
            if (b == kNone) {
                full[v] = down[v];
                continue;
            }
            const Vertex top = block_top_[b];
            const Count excl = full[top] - block_sum[b];
            full[v] = down[v] + excl / 2 + (block_sum[b] - down[v] / 2);
        }
        return full;
    }

    Count deliverable(const Configuration& conf, Vertex target) const { return deliverable_all(conf).at(target); }

    bool reachable(const Configuration& conf, Vertex target) const {
        if (conf.size() != n_) throw InvalidParameter("configuration size does not match graph");
        if (target >= n_) throw InvalidParameter("target vertex out of range");
        return conf[target] >= 1 || deliverable(conf, target) >= 1;
    }

    bool solvable(const Configuration& conf) const {
        const auto full = deliverable_all(conf);
        return std::all_of(full.begin(), full.end(), [](Count c) { return c >= 1; });
    }

private:
    static constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

    // Every block must be a clique and the block sizes must account for every
    // edge; build_tree then rejects blocks sharing two vertices.
    static void validate_blocks(const Graph& g, const std::vector<std::vector<Vertex>>& blocks) {
        std::vector<std::uint32_t> mark(g.size(), 0);
        std::uint32_t stamp = 0;
        std::size_t block_edges = 0;
        for (const auto& b : blocks) {
            if (b.size() < 2) throw UnsupportedStructure("block with fewer than two vertices");
            ++stamp;
            for (Vertex v : b) {
                if (!g.contains(v)) throw UnsupportedStructure("block vertex out of range");
                if (mark[v] == stamp) throw UnsupportedStructure("repeated vertex in block");
                mark[v] = stamp;
            }
            for (Vertex v : b) {
                std::size_t inside = 0;
                for (Vertex w : g.neighbors(v)) inside += mark[w] == stamp;
                if (inside != b.size() - 1) throw UnsupportedStructure("block is not a clique");
            }
            block_edges += b.size() * (b.size() - 1) / 2;
        }
        if (block_edges != g.edge_count()) throw UnsupportedStructure("blocks do not cover every edge exactly once");
    }

    void build_tree(const std::vector<std::vector<Vertex>>& blocks) {
        blocks_ = blocks;
        std::vector<std::vector<std::uint32_t>> incident(n_);
        for (std::uint32_t b = 0; b < blocks_.size(); ++b)
            for (Vertex v : blocks_[b]) incident[v].push_back(b);

        parent_block_.assign(n_, kNone);
        child_blocks_.assign(n_, {});
        block_top_.assign(blocks_.size(), kNone);
        std::vector<bool> seen(n_, false);
        if (n_ == 0) return;
        std::deque<Vertex> queue{0};
        seen[0] = true;
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            order_.push_back(v);
            for (std::uint32_t b : incident[v]) {
                if (b == parent_block_[v]) continue;
                if (block_top_[b] != kNone) throw UnsupportedStructure("blocks form a cycle");
                block_top_[b] = v;
                child_blocks_[v].push_back(b);
                for (Vertex w : blocks_[b]) {
                    if (w == v) continue;
                    if (seen[w]) throw UnsupportedStructure("blocks form a cycle");
                    seen[w] = true;
                    parent_block_[w] = b;
                    queue.push_back(w);
                }
            }
        }
        if (order_.size() != n_) throw UnsupportedStructure("graph is disconnected");
    }

    std::size_t n_;
    std::vector<std::vector<Vertex>> blocks_;
    std::vector<Vertex> order_;
    std::vector<std::uint32_t> parent_block_;
    std::vector<std::vector<std::uint32_t>> child_blocks_;
    std::vector<Vertex> block_top_;
};

/// Exact reachability from the block structure, without state-space search.
inline bool structural_reachable(const Graph& g, const Configuration& conf, Vertex target) {
    return StructuralSolver(g).reachable(conf, target);
}

inline bool structural_solvable(const Graph& g, const Configuration& conf) {
    return StructuralSolver(g).solvable(conf);
}

}  // namespace pebbling
