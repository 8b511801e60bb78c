#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pebbling/configuration.hpp"
#include "pebbling/error.hpp"
#include "pebbling/graph.hpp"
#include "pebbling/orbits.hpp"
#include "pebbling/reachability.hpp"
#include "pebbling/structural.hpp"

namespace pebbling {

struct PiOptions {
    /// Maximum number of single-target solver calls.
    std::uint64_t budget = 10'000'000;
    /// Use the block-structure solver instead of the generic search.
    bool use_structural = false;
    SolverOptions solver{};
};

struct UnsolvableResult {
    Count size = 0;
    Configuration witness;
    Vertex target = 0;  // a vertex the witness cannot reach
    std::uint64_t configs_examined = 0;
};

struct PiResult {
    Count pi = 0;
    Configuration max_unsolvable_witness;
    std::uint64_t configs_examined = 0;
    std::uint64_t budget_used = 0;
};

/// Pigeonhole bound: with (n-1)(2^D - 1) + 1 pebbles and the target empty,
/// some other vertex holds at least 2^D pebbles. Saturates at 2^62.
inline Count pebbling_upper_bound(const Graph& g) {
    if (g.size() == 0) throw InvalidParameter("empty graph");
    std::uint32_t diam = 0;
    for (Vertex v = 0; v < g.size(); ++v)
        for (auto d : distances(g, v)) {
            if (d == kUnreachable) throw InvalidParameter("pebbling number is infinite on a disconnected graph");
            diam = std::max(diam, d);
        }
    if (diam >= 62) return Count{1} << 62;
    const Count per_vertex = (Count{1} << diam) - 1;
    const Count n1 = g.size() - 1;
    if (n1 != 0 && per_vertex > ((Count{1} << 62) - 1) / n1) return Count{1} << 62;
    return n1 * per_vertex + 1;
}

namespace detail {

// Enumerates the configurations that cannot reach `target`, exploiting that
// this family is closed under removing pebbles: counts are assigned slot by
// slot and a slot's count stops growing as soon as the target becomes
// reachable, since every extension of a reachable configuration is reachable.
class UnsolvableSearch {
public:
    UnsolvableSearch(const Graph& g, const OrbitSpec& orbits, Vertex target, Count t_cap, const PiOptions& opts,
                     std::uint64_t& calls)
        : target_(target), t_cap_(t_cap), opts_(opts), calls_(calls), conf_(g.size()) {
        if (opts.use_structural)
            structural_.emplace(g);
        else
            generic_.emplace(g, target, opts.solver);
        const OrbitSpec fixed = orbits.fixing(target);
        for (const auto& c : fixed.classes()) {
            if (c.size() == 1 && c[0] == target) continue;
            for (std::size_t i = 0; i < c.size(); ++i) {
                slots_.push_back(c[i]);
                continues_class_.push_back(i > 0);
            }
        }
    }

    /// Largest unreachable configuration found (ties broken by first found).
    void run(UnsolvableResult& best, bool& have_best) {
        best_ = &best;
        have_best_ = &have_best;
        consider();
        descend(0);
    }

private:
    bool reachable() {
        if (++calls_ > opts_.budget) throw BudgetHit{};
        if (structural_) return structural_->reachable(conf_, target_);
        const SolveVerdict v = generic_->solve(conf_);
        if (v.budget_exhausted) throw ResourceExhausted("solver node budget exhausted inside pi search", 0, 0);
        return v.solvable;
    }

    void consider() {
        if (!*have_best_ || conf_.total() > best_->size) {
            *have_best_ = true;
            best_->size = conf_.total();
            best_->witness = conf_;
            best_->target = target_;
        }
    }

    void descend(std::size_t start) {
        for (std::size_t p = start; p < slots_.size(); ++p) {
            const Vertex v = slots_[p];
            if (continues_class_[p] && conf_[slots_[p - 1]] == 0) break;
            Count cap = t_cap_ - conf_.total();
            if (continues_class_[p]) cap = std::min(cap, conf_[slots_[p - 1]]);
            for (Count x = 1; x <= cap; ++x) {
                conf_.set(v, x);
                if (reachable()) break;
                consider();
                descend(p + 1);
            }
            conf_.set(v, 0);
        }
    }

public:
    struct BudgetHit {};

private:
    Vertex target_;
    Count t_cap_;
    const PiOptions& opts_;
    std::uint64_t& calls_;
    Configuration conf_;
    std::optional<ReachabilitySolver> generic_;
    std::optional<StructuralSolver> structural_;
    std::vector<Vertex> slots_;
    std::vector<bool> continues_class_;
    UnsolvableResult* best_ = nullptr;
    bool* have_best_ = nullptr;
};

}  // namespace detail

/// Largest t <= t_cap admitting an unsolvable configuration, with a witness.
/// Throws CapExceeded when an unsolvable configuration of size t_cap exists,
/// since larger ones were not searched.
inline UnsolvableResult max_unsolvable(const Graph& g, const OrbitSpec& orbits, Count t_cap, const PiOptions& opts = {}) {
    if (g.size() == 0) throw InvalidParameter("empty graph");
    if (orbits.size() != g.size()) throw InvalidParameter("orbit spec size does not match graph");
    orbits.validate(g);

    // One target per orbit class: automorphisms carry the others onto it.
    std::vector<Vertex> targets;
    for (const auto& c : orbits.classes()) targets.push_back(c.front());

    UnsolvableResult best;
    bool have_best = false;
    std::uint64_t calls = 0;
    try {
        for (Vertex r : targets) {
            detail::UnsolvableSearch search(g, orbits, r, t_cap, opts, calls);
            search.run(best, have_best);
        }
    } catch (const detail::UnsolvableSearch::BudgetHit&) {
        throw ResourceExhausted("pi search budget of " + std::to_string(opts.budget) + " solver calls exhausted",
                                static_cast<std::int64_t>(have_best ? best.size + 1 : 1),
                                static_cast<std::int64_t>(t_cap + 1));
    }
    best.configs_examined = calls;
    if (best.size >= t_cap)
        throw CapExceeded("an unsolvable configuration of size " + std::to_string(t_cap) +
                          " exists; the cap is too small");
    return best;
}

/// Exact pebbling number pi(G) = (largest unsolvable size) + 1.
inline PiResult pebbling_number_exact(const Graph& g, const OrbitSpec& orbits, const PiOptions& opts = {}) {
    const Count cap = pebbling_upper_bound(g);
    // The bound is itself a valid pi, so no unsolvable configuration has size >= cap.
    const UnsolvableResult r = max_unsolvable(g, orbits, cap, opts);
    return {.pi = r.size + 1,
            .max_unsolvable_witness = r.witness,
            .configs_examined = r.configs_examined,
            .budget_used = r.configs_examined};
}

}  // namespace pebbling
