#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"

namespace pebbling {

struct SolverOptions {
    bool record_witness = false;
    /// Also skip states pointwise dominated by a known failure (linear scan).
    bool dominance_pruning = false;
    /// Maximum number of states expanded per query; 0 means unlimited.
    std::uint64_t node_budget = 0;
};

struct SolveVerdict {
    bool solvable = false;
    std::optional<std::vector<Move>> witness;
    std::uint64_t nodes_explored = 0;
    /// Set when the node budget ran out; `solvable` is then meaningless.
    bool budget_exhausted = false;
};

/// Exact single-target reachability by depth-first search over configurations.
///
/// The search keeps one mutable state and undoes moves on backtrack. A state
/// is pruned when its weight sum_u c(u) 2^-d(u,target) drops below 1; moves
/// never increase the weight, so this is sound. States proven to fail (or to
/// succeed) are remembered for the lifetime of the solver, so many queries
/// against the same (graph, target) pair share work.
class ReachabilitySolver {
public:
    ReachabilitySolver(const Graph& g, Vertex target, SolverOptions opts = {})
        : g_(&g), target_(target), opts_(opts) {
        if (!g.contains(target)) throw InvalidParameter("target vertex out of range");
        const auto dist = distances(g, target);
        std::uint32_t ecc = 0;
        for (auto d : dist)
            if (d != kUnreachable) ecc = std::max(ecc, d);
        scale_ = std::min<std::uint32_t>(ecc, kMaxScale);
        weight_.resize(g.size(), 0);
        for (Vertex v = 0; v < g.size(); ++v) {
            if (dist[v] == kUnreachable) continue;
            // Rounded up beyond kMaxScale, which keeps the bound sound.
            weight_[v] = dist[v] >= scale_ ? 1 : (Wide{1} << (scale_ - dist[v]));
        }
        threshold_ = Wide{1} << scale_;

        // Try moves toward the target first.
        order_.resize(g.size());
        for (Vertex v = 0; v < g.size(); ++v) {
            auto nb = g.neighbors(v);
            order_[v].assign(nb.begin(), nb.end());
            std::stable_sort(order_[v].begin(), order_[v].end(),
                             [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });
        }
        sources_.resize(g.size());
        for (Vertex v = 0; v < g.size(); ++v) sources_[v] = v;
        std::stable_sort(sources_.begin(), sources_.end(),
                         [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });
    }

    Vertex target() const noexcept { return target_; }

    SolveVerdict solve(const Configuration& conf) {
        if (conf.size() != g_->size()) throw InvalidParameter("configuration size does not match graph");
        SolveVerdict out;
        if (conf[target_] >= 1) {
            out.solvable = true;
            if (opts_.record_witness) out.witness.emplace();
            return out;
        }
        state_.assign(conf.counts().begin(), conf.counts().end());
        Wide weight = current_weight();
        if (weight < threshold_) return out;
        std::string key = encode();
        if (failed_.contains(key) || dominated()) return out;
        // A remembered success carries no move list, so witness runs search anyway.
        if (!opts_.record_witness && succeeded_.contains(key)) {
            out.solvable = true;
            return out;
        }
        return search(std::move(key), weight, out);
    }

    bool reachable(const Configuration& conf) {
        const SolveVerdict v = solve(conf);
        if (v.budget_exhausted) throw ResourceExhausted("reachability search exceeded node budget", 0, 1);
        return v.solvable;
    }

    std::size_t memo_size() const noexcept { return failed_.size() + succeeded_.size(); }

private:
    using Wide = unsigned __int128;
    static constexpr std::uint32_t kMaxScale = 60;

    struct Frame {
        std::size_t source_idx = 0;  // cursor into sources_
        std::size_t nb_idx = 0;      // cursor into order_[source]
        Move applied{};              // move that produced this frame's state
        Wide weight = 0;
    };

    Wide current_weight() const {
        Wide w = 0;
        for (std::size_t v = 0; v < state_.size(); ++v) w += static_cast<Wide>(state_[v]) * weight_[v];
        return w;
    }

    std::string encode() const {
        std::string key;
        key.reserve(state_.size() * 2);
        for (Count c : state_) {
            // Variable-length little-endian groups of 7 bits.
            Count x = c;
            do {
                unsigned char byte = x & 0x7f;
                x >>= 7;
                if (x != 0) byte |= 0x80;
                key.push_back(static_cast<char>(byte));
            } while (x != 0);
        }
        return key;
    }

    bool dominated() const {
        if (!opts_.dominance_pruning) return false;
        for (const auto& f : failed_list_) {
            bool le = true;
            for (std::size_t v = 0; v < state_.size() && le; ++v) le = state_[v] <= f[v];
            if (le) return true;
        }
        return false;
    }

    void remember_failure(std::string key) {
        if (opts_.dominance_pruning) failed_list_.push_back(state_);
        failed_.insert(std::move(key));
    }

    SolveVerdict search(std::string root_key, Wide root_weight, SolveVerdict& out) {
        std::vector<Frame> stack;
        std::vector<std::string> keys;
        stack.push_back({.weight = root_weight});
        keys.push_back(std::move(root_key));

        auto undo = [&](const Move& m) {
            state_[m.from] += 2;
            state_[m.to] -= 1;
        };

        while (!stack.empty()) {
            Frame& top = stack.back();
            bool advanced = false;
            while (top.source_idx < sources_.size()) {
                const Vertex u = sources_[top.source_idx];
                if (state_[u] < 2 || top.nb_idx >= order_[u].size()) {
                    ++top.source_idx;
                    top.nb_idx = 0;
                    continue;
                }
                const Vertex v = order_[u][top.nb_idx++];
                const Wide child_weight = top.weight - 2 * weight_[u] + weight_[v];
                if (child_weight < threshold_) continue;

                state_[u] -= 2;
                state_[v] += 1;
                ++out.nodes_explored;
                const Move m{u, v};
                if (v == target_) {
                    finish_success(stack, keys, m, out);
                    return out;
                }
                std::string key = encode();
                if (failed_.contains(key) || dominated()) {
                    undo(m);
                    continue;
                }
                if (!opts_.record_witness && succeeded_.contains(key)) {
                    finish_success(stack, keys, m, out);
                    return out;
                }
                if (opts_.node_budget != 0 && out.nodes_explored > opts_.node_budget) {
                    undo(m);
                    out.budget_exhausted = true;
                    return out;
                }
                stack.push_back({.applied = m, .weight = child_weight});
                keys.push_back(std::move(key));
                advanced = true;
                break;
            }
            if (advanced) continue;

            remember_failure(std::move(keys.back()));
            const Move applied = stack.back().applied;
            const bool is_root = stack.size() == 1;
            stack.pop_back();
            keys.pop_back();
            if (!is_root) undo(applied);
        }
        return out;
    }

    void finish_success(const std::vector<Frame>& stack, const std::vector<std::string>& keys, const Move& last,
                        SolveVerdict& out) {
        out.solvable = true;
        for (const auto& k : keys) succeeded_.insert(k);
        if (opts_.record_witness) {
            std::vector<Move> moves;
            for (std::size_t i = 1; i < stack.size(); ++i) moves.push_back(stack[i].applied);
            moves.push_back(last);
            out.witness = std::move(moves);
        }
    }

    const Graph* g_;
    Vertex target_;
    SolverOptions opts_;
    std::uint32_t scale_ = 0;
    Wide threshold_ = 1;
    std::vector<Wide> weight_;
    std::vector<std::vector<Vertex>> order_;
    std::vector<Vertex> sources_;
    std::vector<Count> state_;
    std::unordered_set<std::string> failed_;
    std::unordered_set<std::string> succeeded_;
    std::vector<std::vector<Count>> failed_list_;
};

/// Exact decision: can some legal move sequence put a pebble on `target`?
inline SolveVerdict is_reachable(const Graph& g, const Configuration& conf, Vertex target, SolverOptions opts = {}) {
    ReachabilitySolver solver(g, target, opts);
    return solver.solve(conf);
}

/// True iff every vertex is reachable (generic exact solver).
inline bool is_solvable(const Graph& g, const Configuration& conf, SolverOptions opts = {}) {
    if (conf.size() != g.size()) throw InvalidParameter("configuration size does not match graph");
    for (Vertex v = 0; v < g.size(); ++v) {
        if (conf[v] >= 1) continue;
        ReachabilitySolver solver(g, v, opts);
        const SolveVerdict verdict = solver.solve(conf);
        if (verdict.budget_exhausted) throw ResourceExhausted("solvability search exceeded node budget", 0, 1);
        if (!verdict.solvable) return false;
    }
    return true;
}

}  // namespace pebbling
