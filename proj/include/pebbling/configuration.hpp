#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"

namespace pebbling {

using Count = std::uint64_t;

/// Pebble counts per vertex with a cached total.
class Configuration {
public:
    Configuration() = default;

    explicit Configuration(std::size_t n) : counts_(n, 0) {}

    explicit Configuration(std::vector<Count> counts)
        : counts_(std::move(counts)), total_(std::accumulate(counts_.begin(), counts_.end(), Count{0})) {}

    Configuration(std::initializer_list<Count> counts) : Configuration(std::vector<Count>(counts)) {}

    std::size_t size() const noexcept { return counts_.size(); }
    Count total() const noexcept { return total_; }

    Count operator[](Vertex v) const { return counts_.at(v); }

    std::span<const Count> counts() const noexcept { return counts_; }

    void set(Vertex v, Count c) {
        total_ = total_ - counts_.at(v) + c;
        counts_[v] = c;
    }

    void add(Vertex v, Count k = 1) {
        counts_.at(v) += k;
        total_ += k;
    }

    void remove(Vertex v, Count k = 1) {
        if (counts_.at(v) < k) throw InvalidParameter("cannot remove more pebbles than present");
        counts_[v] -= k;
        total_ -= k;
    }

    /// Number of vertices holding at least one pebble.
    std::size_t occupied() const {
        std::size_t k = 0;
        for (Count c : counts_) k += c > 0 ? 1 : 0;
        return k;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) { return a.counts_ == b.counts_; }
    friend auto operator<=>(const Configuration& a, const Configuration& b) { return a.counts_ <=> b.counts_; }

private:
    std::vector<Count> counts_;
    Count total_ = 0;
};

/// A single pebbling move: two pebbles leave `from`, one arrives at `to`.
struct Move {
    Vertex from = 0;
    Vertex to = 0;
    friend bool operator==(const Move&, const Move&) = default;
};

inline Configuration apply_move(const Graph& g, const Configuration& conf, Vertex u, Vertex v) {
    if (conf.size() != g.size()) throw InvalidParameter("configuration size does not match graph");
    if (!g.contains(u) || !g.contains(v) || !g.adjacent(u, v))
        throw IllegalMove("vertices " + std::to_string(u) + " and " + std::to_string(v) + " are not adjacent");
    if (conf[u] < 2) throw IllegalMove("vertex " + std::to_string(u) + " holds fewer than two pebbles");
    Configuration next = conf;
    next.remove(u, 2);
    next.add(v, 1);
    return next;
}

inline Configuration apply_move(const Graph& g, const Configuration& conf, Move m) {
    return apply_move(g, conf, m.from, m.to);
}

/// Replays `moves` from `conf`; throws IllegalMove on the first illegal step.
inline Configuration replay(const Graph& g, Configuration conf, std::span<const Move> moves) {
    for (const Move& m : moves) conf = apply_move(g, conf, m);
    return conf;
}

/// Birthdays B(C): pebbles left after removing one from every occupied vertex.
inline Count birthdays(const Configuration& conf) { return conf.total() - conf.occupied(); }

}  // namespace pebbling
