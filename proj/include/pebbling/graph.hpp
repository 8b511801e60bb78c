#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pebbling/error.hpp"
#include "pebbling/numeric.hpp"

namespace pebbling {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

enum class Family { custom, path, complete, lollipop, double_lollipop, clique_chain };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::custom: return "custom";
        case Family::path: return "path";
        case Family::complete: return "complete";
        case Family::lollipop: return "lollipop";
        case Family::double_lollipop: return "double_lollipop";
        case Family::clique_chain: return "clique_chain";
    }
    return "custom";
}

inline Family family_from_string(std::string_view s) {
    if (s == "path") return Family::path;
    if (s == "complete") return Family::complete;
    if (s == "lollipop") return Family::lollipop;
    if (s == "double_lollipop") return Family::double_lollipop;
    if (s == "clique_chain") return Family::clique_chain;
    if (s == "custom") return Family::custom;
    throw InvalidParameter("unknown graph family '" + std::string(s) + "'");
}

/// How the path-extension parameter m of the double lollipop is chosen.
enum class MMode { fixed, loglog };

struct FamilyParams {
    Family family = Family::path;
    std::uint64_t n = 0;
    std::int64_t m = 0;
    MMode m_mode = MMode::fixed;
    Ratio epsilon{1, 2};
    std::optional<std::uint64_t> path_len_override;

    /// m actually used for this n: either the fixed value or floor(log2 log2 n).
    std::int64_t effective_m() const {
        if (m_mode == MMode::fixed) return m;
        if (n < 4) return 0;
        return static_cast<std::int64_t>(floor_log2(floor_log2(n)));
    }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

enum class Role : std::uint8_t { path, clique, gateway };

inline std::string_view to_string(Role r) {
    switch (r) {
        case Role::path: return "path";
        case Role::clique: return "clique";
        case Role::gateway: return "gateway";
    }
    return "path";
}

/// Structural annotations attached by the generators.
///
/// `blocks` lists the biconnected components of the graph, each of which is a
/// clique (path edges are two-vertex blocks). When present, the structural
/// solver runs on them. `orbit_classes` lists sets of vertices that may be
/// permuted freely without changing the graph.
struct Labels {
    std::vector<Role> roles;
    std::vector<std::int64_t> path_index;  // position along its path segment, -1 off-path
    std::vector<Vertex> gateways;
    std::vector<Vertex> far_endpoints;
    std::vector<std::vector<Vertex>> blocks;
    std::vector<std::vector<Vertex>> orbit_classes;

    bool empty() const {
        return roles.empty() && gateways.empty() && far_endpoints.empty() && blocks.empty() &&
               orbit_classes.empty();
    }
    friend bool operator==(const Labels&, const Labels&) = default;
};

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

namespace detail {
class GraphBuilder;
}

/// Immutable undirected simple graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;

    Graph(std::size_t n, std::span<const Edge> edges, Labels labels = {}, FamilyParams family = {})
        : adjacency_(n), labels_(std::move(labels)), family_(family) {
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw InvalidParameter("edge endpoint out of range");
            if (u == v) throw InvalidParameter("self-loop on vertex " + std::to_string(u));
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& nb : adjacency_) {
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                throw InvalidParameter("duplicate edge");
        }
        if (!labels_.roles.empty() && labels_.roles.size() != n)
            throw InvalidParameter("role labels do not cover every vertex");
    }

    std::size_t size() const noexcept { return adjacency_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }

    std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& nb = adjacency_.at(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& nb : adjacency_) twice += nb.size();
        return twice / 2;
    }

    /// Edges with u < v, sorted lexicographically.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (Vertex u = 0; u < adjacency_.size(); ++u)
            for (Vertex v : adjacency_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    const Labels& labels() const noexcept { return labels_; }
    const FamilyParams& family() const noexcept { return family_; }

    bool contains(Vertex v) const noexcept { return v < adjacency_.size(); }

private:
    friend class detail::GraphBuilder;

    // Adjacency assembled by the generators: symmetric and loop-free by construction.
    Graph(std::vector<std::vector<Vertex>> adjacency, Labels labels, FamilyParams family)
        : adjacency_(std::move(adjacency)), labels_(std::move(labels)), family_(family) {
        for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    }

    std::vector<std::vector<Vertex>> adjacency_;
    Labels labels_;
    FamilyParams family_;
};

/// BFS hop distances from `source`; unreachable vertices get kUnreachable.
inline std::vector<std::uint32_t> distances(const Graph& g, Vertex source) {
    if (!g.contains(source)) throw InvalidParameter("source vertex out of range");
    std::vector<std::uint32_t> dist(g.size(), kUnreachable);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : g.neighbors(u)) {
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

inline bool is_connected(const Graph& g) {
    if (g.size() == 0) return true;
    const auto d = distances(g, 0);
    return std::none_of(d.begin(), d.end(), [](auto x) { return x == kUnreachable; });
}

namespace detail {

// Incrementally assembles a generated graph: appends path runs and cliques
// and keeps labels and block lists in sync.
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t n) : adjacency_(n) {
        labels_.roles.assign(n, Role::path);
        labels_.path_index.assign(n, -1);
    }

    /// Appends a path of `len` vertices; returns its first vertex id. Path
    /// indices count from the far end, which is the last vertex if `reversed`.
    Vertex add_path(std::size_t len, bool reversed = false) {
        const Vertex first = next_;
        for (std::size_t i = 0; i < len; ++i) {
            const Vertex v = next_++;
            labels_.roles.at(v) = Role::path;
            labels_.path_index.at(v) = static_cast<std::int64_t>(reversed ? len - 1 - i : i);
            if (i > 0) link(v - 1, v);
        }
        return first;
    }

    /// Appends a clique of `size` vertices; returns its first vertex id.
    Vertex add_clique(std::size_t size) {
        const Vertex first = next_;
        std::vector<Vertex> block;
        for (std::size_t i = 0; i < size; ++i) {
            const Vertex v = next_++;
            labels_.roles.at(v) = Role::clique;
            block.push_back(v);
        }
        for (Vertex v : block) {
            auto& nb = adjacency_.at(v);
            nb.reserve(nb.size() + size - 1);
            for (Vertex w : block)
                if (w != v) nb.push_back(w);
        }
        if (size >= 2) labels_.blocks.push_back(std::move(block));
        return first;
    }

    /// Joins two vertices by a single bridge edge.
    void link(Vertex u, Vertex v) {
        adjacency_.at(u).push_back(v);
        adjacency_.at(v).push_back(u);
        labels_.blocks.push_back({std::min(u, v), std::max(u, v)});
    }

    void mark_gateway(Vertex v) {
        labels_.roles.at(v) = Role::gateway;
        if (std::find(labels_.gateways.begin(), labels_.gateways.end(), v) == labels_.gateways.end())
            labels_.gateways.push_back(v);
    }

    void mark_far_endpoint(Vertex v) { labels_.far_endpoints.push_back(v); }

    /// Records the non-gateway members of a clique [first, first+size) as one orbit class.
    void add_orbit(Vertex first, std::size_t size) {
        std::vector<Vertex> cls;
        for (Vertex v = first; v < first + size; ++v)
            if (labels_.roles[v] != Role::gateway) cls.push_back(v);
        if (cls.size() >= 2) labels_.orbit_classes.push_back(std::move(cls));
    }

    Graph finish(FamilyParams params) {
        if (next_ != labels_.roles.size()) throw InvalidParameter("generated part sizes do not sum to n");
        std::sort(labels_.blocks.begin(), labels_.blocks.end());
        return Graph(std::move(adjacency_), std::move(labels_), params);
    }

private:
    Vertex next_ = 0;
    std::vector<std::vector<Vertex>> adjacency_;
    Labels labels_;
};

}  // namespace detail

inline Graph make_path(std::uint64_t k) {
    if (k == 0) throw InvalidParameter("path needs at least one vertex");
    detail::GraphBuilder b(k);
    b.add_path(k);
    b.mark_far_endpoint(0);
    if (k > 1) b.mark_far_endpoint(static_cast<Vertex>(k - 1));
    return b.finish({.family = Family::path, .n = k});
}

inline Graph make_complete(std::uint64_t k) {
    if (k == 0) throw InvalidParameter("complete graph needs at least one vertex");
    detail::GraphBuilder b(k);
    b.add_orbit(b.add_clique(k), k);
    return b.finish({.family = Family::complete, .n = k});
}

/// Path of L = floor(log2 n) vertices whose inner end hangs off one gateway
/// vertex of K_{n-L}. Vertex 0 is the far path endpoint, vertex L the gateway.
inline Graph make_lollipop(const FamilyParams& p) {
    if (p.n < 2) throw InvalidParameter("lollipop needs n >= 2");
    const std::uint64_t len = p.path_len_override.value_or(floor_log2(p.n));
    if (len < 1 || len > p.n - 1)
        throw InvalidParameter("lollipop path length " + std::to_string(len) + " leaves no clique");
    const std::uint64_t clique = p.n - len;

    detail::GraphBuilder b(p.n);
    const Vertex path = b.add_path(len);
    const Vertex gate = b.add_clique(clique);
    b.link(static_cast<Vertex>(path + len - 1), gate);
    b.mark_gateway(gate);
    b.mark_far_endpoint(path);
    b.add_orbit(gate, clique);

    FamilyParams rec = p;
    rec.family = Family::lollipop;
    return b.finish(rec);
}

/// Path length used by the double lollipop for these parameters.
inline std::uint64_t double_lollipop_path_len(const FamilyParams& p) {
    if (p.path_len_override) return *p.path_len_override;
    if (p.n < 1) throw InvalidParameter("double lollipop needs n >= 1");
    // floor(log2(n)/2 + m) == floor(floor(log2 n)/2) + m for integral m.
    const std::int64_t len = static_cast<std::int64_t>(floor_log2(p.n) / 2) + p.effective_m();
    if (len < 1) throw InvalidParameter("double lollipop path length must be positive");
    return static_cast<std::uint64_t>(len);
}

/// Two paths of L' = floor(log2(n)/2 + m) vertices hanging off two distinct
/// gateways of K_{n-2L'}. Vertices 0 and n-1 are the far endpoints.
inline Graph make_double_lollipop(const FamilyParams& p) {
    const std::uint64_t len = double_lollipop_path_len(p);
    if (len < 1) throw InvalidParameter("double lollipop path length must be positive");
    if (p.n < 2 * len + 2)
        throw InvalidParameter("double lollipop clique would have fewer than 2 vertices");
    const std::uint64_t clique = p.n - 2 * len;

    detail::GraphBuilder b(p.n);
    const Vertex left = b.add_path(len);
    const Vertex gate_left = b.add_clique(clique);
    const auto gate_right = static_cast<Vertex>(gate_left + clique - 1);
    const Vertex right_inner = b.add_path(len, /*reversed=*/true);
    b.link(static_cast<Vertex>(left + len - 1), gate_left);
    b.link(gate_right, right_inner);
    b.mark_gateway(gate_left);
    b.mark_gateway(gate_right);
    b.mark_far_endpoint(left);
    b.mark_far_endpoint(static_cast<Vertex>(p.n - 1));
    b.add_orbit(gate_left, clique);

    FamilyParams rec = p;
    rec.family = Family::double_lollipop;
    return b.finish(rec);
}

/// Part sizes of a clique chain: path segment length and the clique sizes in order.
struct CliqueChainLayout {
    std::uint64_t path_len = 0;
    std::vector<std::uint64_t> cliques;
};

inline CliqueChainLayout clique_chain_layout(const FamilyParams& p) {
    const auto [num, den] = p.epsilon;
    if (num <= 0 || den <= 0 || num > den) throw InvalidParameter("epsilon must lie in (0, 1]");
    if (p.n < 2) throw InvalidParameter("clique chain needs n >= 2");
    CliqueChainLayout out;
    if (p.path_len_override) {
        out.path_len = *p.path_len_override;
    } else {
        const long double lg = std::log2(static_cast<long double>(p.n));
        out.path_len = static_cast<std::uint64_t>(std::max<std::int64_t>(
            0, snapped_floor(p.epsilon.value_ld() * lg + std::sqrt(lg))));
    }
    const std::uint64_t eps_n = p.n * static_cast<std::uint64_t>(num) / static_cast<std::uint64_t>(den);
    if (out.path_len < 1) throw InvalidParameter("clique chain path segment would be empty");
    if (eps_n <= out.path_len) throw InvalidParameter("clique chain clique would be empty");
    const std::uint64_t clique = eps_n - out.path_len;

    // k cliques joined by k-1 paths fit while k*clique + (k-1)*path <= n.
    const std::uint64_t k = (p.n + out.path_len) / (clique + out.path_len);
    if (k <= 1) {
        // A single unit: one clique carrying one pendant path.
        if (p.n <= out.path_len) throw InvalidParameter("clique chain clique would be empty");
        out.cliques = {p.n - out.path_len};
        return out;
    }
    out.cliques.assign(k, clique);
    out.cliques.back() += p.n - k * clique - (k - 1) * out.path_len;
    return out;
}

/// Alternating clique-path-clique-... chain; the last clique absorbs the
/// remainder. With a single clique the path hangs off it as in a lollipop.
inline Graph make_clique_chain(const FamilyParams& p) {
    const CliqueChainLayout layout = clique_chain_layout(p);
    FamilyParams rec = p;
    rec.family = Family::clique_chain;
    detail::GraphBuilder b(p.n);

    if (layout.cliques.size() == 1) {
        const Vertex path = b.add_path(layout.path_len);
        const Vertex gate = b.add_clique(layout.cliques[0]);
        b.link(static_cast<Vertex>(path + layout.path_len - 1), gate);
        b.mark_gateway(gate);
        b.mark_far_endpoint(path);
        b.add_orbit(gate, layout.cliques[0]);
        return b.finish(rec);
    }

    std::vector<std::pair<Vertex, std::uint64_t>> cliques;
    Vertex prev_right = 0;
    for (std::size_t i = 0; i < layout.cliques.size(); ++i) {
        const std::uint64_t size = layout.cliques[i];
        const Vertex first = b.add_clique(size);
        const auto last = static_cast<Vertex>(first + size - 1);
        if (i > 0) {
            b.link(prev_right, first);  // previous path's last vertex -> left gateway
            b.mark_gateway(first);
        }
        if (i + 1 < layout.cliques.size()) {
            b.mark_gateway(last);
            const Vertex path = b.add_path(layout.path_len);
            b.link(last, path);
            prev_right = static_cast<Vertex>(path + layout.path_len - 1);
        }
        cliques.emplace_back(first, size);
    }
    for (auto [first, size] : cliques) b.add_orbit(first, size);
    return b.finish(rec);
}

/// Builds the graph described by `p`.
inline Graph generate(const FamilyParams& p) {
    switch (p.family) {
        case Family::path: return make_path(p.n);
        case Family::complete: return make_complete(p.n);
        case Family::lollipop: return make_lollipop(p);
        case Family::double_lollipop: return make_double_lollipop(p);
        case Family::clique_chain: return make_clique_chain(p);
        case Family::custom: break;
    }
    throw InvalidParameter("custom graphs cannot be generated");
}

}  // namespace pebbling
